"""Witnesses for the skew-matrix Pfaffian system and the bordered-determinant expansions.

The solver looks for a rational skew matrix of size 2d+3 whose Pfaffian
minor dropping the second-to-last index vanishes while the last-index
minor and an associated symmetric 2d x 2d determinant stay nonzero.
Every Pfaffian entry appears at most once per matching, so the target
minor is affine in the (1,2) entry, which the solver eliminates exactly;
all remaining entries are random integers.
"""

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .identities import SuiteReport, _coeff_text
from .multipoly import MultiPoly, PolyRing
from .rings import QQ
from .skewlin import RingMat
from .tseries import TSeries, even_weight_indices, mono_of, series_matrix


class AttemptsExhaustedError(RuntimeError):
    pass


def pf_minor(t_mat, deleted, oracle=False):
    """Pfaffian of the minor deleting the given 0-based rows and columns."""
    sub = t_mat.minor_delete(deleted)
    return sub.pf_matchings() if oracle else sub.pf_cayley()


@dataclass
class PfaffianSystemWitness:
    d: int
    t_matrix: RingMat
    h_second_last: object
    h_last: object
    a_matrix: RingMat
    det_a: object
    seed: int
    attempts: int

    @property
    def size(self):
        return 2 * self.d + 3


def build_a_matrix(t_mat, d, oracle=False):
    """The symmetric 2d x 2d matrix of squared Pfaffian minors.

    Entry (i, j), 1-based, is h_{i,j,2d+2}^2 + h_{i,2d+1,2d+2}^2 +
    h_{j,2d+1,2d+2}^2; on the diagonal the first term is the Pfaffian of an
    odd-size minor, which is zero by convention.
    """
    pen = 2 * d + 1  # 0-based index of row 2d+2
    pre = 2 * d  # 0-based index of row 2d+1
    side = {}
    for i in range(2 * d):
        side[i] = pf_minor(t_mat, {i, pre, pen}, oracle)
    rows = []
    for i in range(2 * d):
        row = []
        for j in range(2 * d):
            hij = pf_minor(t_mat, {i, j, pen}, oracle)
            row.append(hij * hij + side[i] * side[i] + side[j] * side[j])
        rows.append(row)
    return RingMat(t_mat.ring, rows, check=False)


def _vanishing_minor_candidates(d, seed, attempts, bound):
    rng = random.Random(seed)
    size = 2 * d + 3
    pen = 2 * d + 1
    for attempt in range(1, attempts + 1):
        upper = {}
        for i in range(size):
            for j in range(i + 1, size):
                upper[(i, j)] = mpq(rng.randint(-bound, bound))
        upper[(0, 1)] = mpq(0)
        t0 = RingMat.from_upper(QQ, size, upper)
        slope = pf_minor(t0, {0, 1, pen})
        if not slope:
            continue
        offset = pf_minor(t0, {pen})
        upper[(0, 1)] = -offset / slope
        t_mat = RingMat.from_upper(QQ, size, upper)
        if pf_minor(t_mat, {pen}):
            raise AssertionError("affine elimination failed to zero the minor")
        yield attempt, t_mat


def solve_pfaffian_system(d, seed, attempts=100, bound=20):
    """Search for a witness: random integer entries, with the (1,2) entry solved
    exactly from the affine dependence of the target Pfaffian minor on it.

    For d >= 2 the nondegeneracy requirement det A != 0 is unsatisfiable: on
    the vanishing locus the matrix of squared minors has rank at most 3, so
    every attempt is rejected and the budget runs out.  See
    solve_vanishing_minor_point for the constraints that are satisfiable.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    for attempt, t_mat in _vanishing_minor_candidates(d, seed, attempts, bound):
        h_last = pf_minor(t_mat, {2 * d + 2})
        if not h_last:
            continue
        a_mat = build_a_matrix(t_mat, d)
        det_a = a_mat.det()
        if not det_a:
            continue
        return PfaffianSystemWitness(
            d, t_mat, mpq(0), h_last, a_mat, det_a, seed, attempt
        )
    raise AttemptsExhaustedError(
        f"no witness for d={d} within {attempts} attempts at seed {seed}"
    )


def solve_vanishing_minor_point(d, seed, attempts=100, bound=20):
    """A rational point with the second-to-last Pfaffian minor zero and the
    last one nonzero, with no condition on det A (attainable for every d).
    The bordered-determinant expansion checks only need these constraints."""
    if d < 1:
        raise ValueError("d must be at least 1")
    for attempt, t_mat in _vanishing_minor_candidates(d, seed, attempts, bound):
        h_last = pf_minor(t_mat, {2 * d + 2})
        if not h_last:
            continue
        a_mat = build_a_matrix(t_mat, d)
        return PfaffianSystemWitness(
            d, t_mat, mpq(0), h_last, a_mat, a_mat.det(), seed, attempt
        )
    raise AttemptsExhaustedError(
        f"no vanishing-minor point for d={d} within {attempts} attempts at seed {seed}"
    )


def verify_witness(w):
    """Recompute every witness quantity with the matchings-oracle Pfaffian."""
    if pf_minor(w.t_matrix, {2 * w.d + 1}, oracle=True):
        return False
    if pf_minor(w.t_matrix, {2 * w.d + 2}, oracle=True) != w.h_last:
        return False
    a_mat = build_a_matrix(w.t_matrix, w.d, oracle=True)
    if a_mat != w.a_matrix:
        return False
    if a_mat.det_cofactor() != w.det_a:
        return False
    return True


def bordered_ring(d):
    return PolyRing(QQ, ["y", "x0"] + [f"x{i}" for i in range(1, 2 * d + 1)])


def build_bordered_matrix(w):
    """The (2d+4) x (2d+4) matrix: the witness plus y-scaled diagonal
    coordinates, bordered by the row (0, ..., 0, 1, y*x0).

    Not skew: the diagonal carries the y-scaled coordinates.  Only the
    matrix-substituted version (skew blocks on the diagonal) is skew.
    """
    d = w.d
    ring = bordered_ring(d)
    y = ring.var("y")
    size = w.size
    rows = [
        [ring.from_scalar(w.t_matrix.rows[i][j]) for j in range(size)]
        for i in range(size)
    ]
    total = ring.zero
    for i in range(1, 2 * d + 1):
        xi = ring.var(f"x{i}")
        rows[i - 1][i - 1] = rows[i - 1][i - 1] + y * xi
        total = total + y * xi
    rows[2 * d][2 * d] = rows[2 * d][2 * d] + total
    v = [ring.zero] * size
    v[2 * d + 1] = ring.one
    v[2 * d + 2] = y * ring.var("x0")
    for i in range(size):
        rows[i].append(v[i])
    rows.append([-x for x in v] + [ring.zero])
    return RingMat(ring, rows)


def check_bordered_det_expansion(w, params=None):
    """The determinant of the bordered matrix starts at y^2 with the squared
    last minor on x0^2 plus half the symmetric-matrix quadratic form, and all
    higher y-orders lie in the ideal of the non-border coordinates."""
    d = w.d
    report = SuiteReport(
        "bordered-expansion", dict(params or {}, d=d, seed=w.seed), cases=1
    )
    m_mat = build_bordered_matrix(w)
    det = m_mat.det_bareiss()
    failures = {}
    ring = det.ring
    slices = det.split_by_var("y")
    low = [k for k in slices if k < 2]
    if low:
        failures["low_y_orders"] = {
            str(k): ring.format(slices[k]) for k in sorted(low)
        }
    expected = ring.var("x0") ** 2 * (w.h_last * w.h_last)
    half = mpq(1, 2)
    for i in range(1, 2 * d + 1):
        for j in range(1, 2 * d + 1):
            aij = w.a_matrix.rows[i - 1][j - 1]
            if aij:
                expected = expected + (
                    ring.var(f"x{i}") * ring.var(f"x{j}")
                ).scale(aij * half)
    if slices.get(2, ring.zero) != expected:
        failures["y2_part"] = {
            "observed": ring.format(slices.get(2, ring.zero)),
            "expected": ring.format(expected),
        }
    x_idx = [ring.index(f"x{i}") for i in range(1, 2 * d + 1)]
    for k, part in slices.items():
        if k < 3:
            continue
        for e in part.terms:
            if not any(e[i] for i in x_idx):
                failures.setdefault("higher_y_outside_ideal", []).append(
                    {"y_order": k, "term": ring.format(MultiPoly(ring, {e: part.terms[e]}))}
                )
    if failures:
        report.counterexample = failures
    return report


def random_zero_pattern_skew(n, rng, bound=9):
    """A random integer skew matrix of size 2n whose last column vanishes above
    the final three rows."""
    size = 2 * n
    upper = {}
    for i in range(size):
        for j in range(i + 1, size):
            if j == size - 1 and i < size - 3:
                continue
            upper[(i, j)] = mpq(rng.randint(-bound, bound))
    return RingMat.from_upper(QQ, size, upper)


def check_diag_perturbation_expansion(t_mat, params=None):
    """Expansion of det(T + diag(x_1..x_{2n-3}, 0, 0, 0)) for skew T of size 2n
    with the zero pattern in the last column: even x-degrees only, and the
    degree-0/degree-2 parts are squares of last-column Pfaffian combinations."""
    size = t_mat.n
    if size % 2:
        raise ValueError("the matrix size must be even")
    n = size // 2
    for i in range(size - 3):
        if t_mat.rows[i][size - 1]:
            raise ValueError(f"entry ({i + 1},{size}) must vanish")
    report = SuiteReport(
        "diag-expansion", dict(params or {}, n=n), cases=1
    )
    nx = size - 3
    ring = PolyRing(QQ, [f"x{i}" for i in range(1, nx + 1)])
    rows = [
        [ring.from_scalar(t_mat.rows[i][j]) for j in range(size)]
        for i in range(size)
    ]
    for i in range(nx):
        rows[i][i] = rows[i][i] + ring.var(f"x{i + 1}")
    det = RingMat(ring, rows).det_bareiss()
    failures = {}
    t_a = t_mat.rows[size - 3][size - 1]  # entry (2n-2, 2n)
    t_b = t_mat.rows[size - 2][size - 1]  # entry (2n-1, 2n)
    h_a = pf_minor(t_mat, {size - 3, size - 1}, oracle=True)
    h_b = pf_minor(t_mat, {size - 2, size - 1}, oracle=True)
    c0 = h_a * t_a - h_b * t_b
    if det.coeff_of({f"x{i}": 0 for i in range(1, nx + 1)}) != ring.from_scalar(c0 * c0):
        failures["constant_term"] = {
            "observed": ring.format(det.coeff_of({f"x{i}": 0 for i in range(1, nx + 1)})),
            "expected": _coeff_text(c0 * c0),
        }
    odd = {}
    for e, c in det.terms.items():
        if sum(e) % 2:
            odd[e] = c
    if odd:
        failures["odd_degrees"] = ring.format(MultiPoly(ring, odd))
    for i in range(1, nx + 1):
        ei = [0] * nx
        ei[i - 1] = 2
        sq = {e: c for e, c in det.terms.items() if e == tuple(ei)}
        if sq:
            failures.setdefault("square_terms", []).append(f"x{i}^2")
    for i in range(1, nx + 1):
        for j in range(i + 1, nx + 1):
            pattern = {f"x{k}": (1 if k in (i, j) else 0) for k in range(1, nx + 1)}
            observed = det.coeff_of(pattern)
            ha = pf_minor(t_mat, {i - 1, j - 1, size - 3, size - 1}, oracle=True)
            hb = pf_minor(t_mat, {i - 1, j - 1, size - 2, size - 1}, oracle=True)
            cij = ha * t_a - hb * t_b
            if observed != ring.from_scalar(cij * cij):
                failures.setdefault("quadratic_terms", []).append(
                    {
                        "pair": [i, j],
                        "observed": ring.format(observed),
                        "expected": _coeff_text(cij * cij),
                    }
                )
    if failures:
        report.counterexample = failures
    return report


def first_factor_series(mats, cap, trunc, coeff_ring):
    """Split the weighted sum into sum_j X_j * F_j: F_j collects the even-weight
    indices whose first nonzero slot is j, with one power of X_j removed."""
    d = len(mats)
    n = mats[0].n
    factors = []
    for j in range(d):
        entry_terms = [[{} for _ in range(n)] for _ in range(n)]
        for idx in even_weight_indices(d, cap):
            first = next(k for k, e in enumerate(idx) if e)
            if first != j:
                continue
            prod = RingMat.identity(mats[0].ring, n)
            reduced = list(idx)
            reduced[j] -= 1
            for k, e in enumerate(reduced):
                if e:
                    prod = prod * mats[k] ** e
            key = mono_of(idx)
            for a in range(n):
                for b in range(n):
                    v = prod.rows[a][b]
                    if v:
                        entry_terms[a][b][key] = coeff_ring.from_scalar(v)
        factors.append(
            [
                [TSeries(coeff_ring, trunc, entry_terms[a][b]) for b in range(n)]
                for a in range(n)
            ]
        )
    return factors


def bordered_series_matrix(w, x_grids, n, coeff_ring, trunc):
    """Substitute matrices into the bordered construction: the witness entries
    become scalar blocks, the diagonal y-perturbations become y times the given
    n x n series grids, and the border becomes (0, .., I, y*T0*I)."""
    d = w.d
    size = w.size
    y = coeff_ring.var("y")
    t0v = coeff_ring.var("T0")
    zero = TSeries.zero(coeff_ring, trunc)
    one = TSeries.one(coeff_ring, trunc)

    def scal(c):
        return TSeries.from_coeff(coeff_ring, trunc, coeff_ring.from_scalar(c))

    big = [[zero] * ((size + 1) * n) for _ in range((size + 1) * n)]

    def put_block(bi, bj, grid):
        for a in range(n):
            for b in range(n):
                big[bi * n + a][bj * n + b] = grid[a][b]

    def const_block(c):
        s = scal(c)
        return [[s if a == b else zero for b in range(n)] for a in range(n)]

    def scale_grid(grid, c):
        return [[e.scale(c) for e in row] for row in grid]

    def add_grids(g1, g2):
        return [[e1 + e2 for e1, e2 in zip(r1, r2)] for r1, r2 in zip(g1, g2)]

    for i in range(size):
        for j in range(size):
            val = w.t_matrix.rows[i][j]
            block = const_block(val)
            if i == j:
                if i < 2 * d:
                    block = add_grids(block, scale_grid(x_grids[i], y))
                elif i == 2 * d:
                    acc = block
                    for g in x_grids:
                        acc = add_grids(acc, scale_grid(g, y))
                    block = acc
            put_block(i, j, block)
    ident = [[one if a == b else zero for b in range(n)] for a in range(n)]
    yt0 = [[one.scale(y * t0v) if a == b else zero for b in range(n)] for a in range(n)]
    put_block(2 * d + 1, size, ident)
    put_block(2 * d + 2, size, yt0)
    put_block(size, 2 * d + 1, scale_grid(ident, -coeff_ring.one))
    put_block(size, 2 * d + 2, scale_grid(yt0, -coeff_ring.one))
    return series_matrix(big, coeff_ring, trunc, skew=True)


def homogenized_det_series(mats, cap, trunc, poly_ring):
    """det(T0^2 I + weighted sum) with coefficients in a ring containing T0,
    computed by the division-free cofactor expansion."""
    from .cartan import weighted_sum_matrix

    n = mats[0].n
    entries = weighted_sum_matrix(mats, even_weight_indices(len(mats), cap), mats[0].ring, trunc)
    lifted = []
    t0sq = poly_ring.var("T0") ** 2
    for i in range(n):
        row = []
        for j in range(n):
            terms = {
                m: poly_ring.from_scalar(c) for m, c in entries[i][j].terms.items()
            }
            if i == j:
                terms[()] = terms.get((), poly_ring.zero) + t0sq
                if not terms[()]:
                    del terms[()]
            row.append(TSeries(poly_ring, trunc, terms))
        lifted.append(row)
    return series_matrix(lifted, poly_ring, trunc).det_cofactor()


def check_homogenized_sqrt(tup, cap, trunc, params=None):
    """The homogenized determinant is weighted homogeneous of degree 2n when T0
    has weight 1 and every T-variable weight 2; its value at T=0 is T0^{2n},
    its specialization at T0=1 is the plain determinant series, and the square
    root of that series respects the degree bound."""
    from .identities import f_series_at

    n = tup.n
    bound = n // 2
    report = SuiteReport(
        "homogenized-sqrt",
        dict(params or {}, n=n, d=tup.d, wmax=cap, trunc=trunc,
             provenance=tup.provenance),
        cases=1,
    )
    field = tup.ring
    poly_ring = PolyRing(field, ["T0", "lam"])
    det = homogenized_det_series(tup.mats, cap, trunc, poly_ring)
    failures = {}
    t0 = poly_ring.var("T0")
    lam = poly_ring.var("lam")
    if det.constant_coeff() != t0 ** (2 * n):
        failures["value_at_zero"] = {
            "observed": poly_ring.format(det.constant_coeff()),
            "expected": poly_ring.format(t0 ** (2 * n)),
        }
    lam2n = lam ** (2 * n)
    for mono, coeff in det.terms.items():
        k = sum(mult for _, mult in mono)
        scaled = coeff.substitute({"T0": lam * t0}) * lam ** (2 * k)
        if scaled != lam2n * coeff:
            failures.setdefault("homogeneity", []).append(
                {
                    "monomial": str(mono),
                    "observed": poly_ring.format(scaled),
                    "expected": poly_ring.format(lam2n * coeff),
                }
            )
    f = f_series_at(tup.mats, cap, trunc)
    at_one = {}
    point = {"T0": field.one, "lam": field.one}
    for mono, coeff in det.terms.items():
        v = coeff.eval_point(point)
        if v:
            at_one[mono] = v
    if at_one != f.terms:
        failures["value_at_one"] = "setting the homogenizing variable to 1 differs from the plain series"
    s = f.sqrt()
    if s.degree() > bound:
        failures["sqrt_degree"] = s.degree()
    if failures:
        report.counterexample = failures
    return report
