"""Cartan embeddings, signed-permutation combinatorics, and the invariant orbit bases.

The coordinate identification works with m = floor(n/2) slots.  Generic
coordinates are named x{k}{j} where k is the slot (1..m) and j the matrix
index (1..d); row k, column j of an exponent matrix pairs with x{k}{j}.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations, product

from .multipoly import MultiPoly, PolyRing
from .skewlin import RingMat
from .tseries import (
    TSeries,
    det_one_plus,
    even_weight_indices,
    mono_of,
    mono_mul,
    mono_text,
    odd_weight_indices,
    series_matrix,
)


class InternalInconsistencyError(AssertionError):
    """Two constructions that must agree disagreed; an implementation bug."""


VALID_KINDS = ("o", "so-odd", "sp", "so-even")


@dataclass(frozen=True)
class GroupKind:
    tag: str
    n: int

    def __post_init__(self):
        if self.tag not in VALID_KINDS:
            raise ValueError(f"kind must be one of {VALID_KINDS}, got {self.tag!r}")
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if self.tag in ("sp", "so-even") and self.n % 2:
            raise ValueError(f"kind {self.tag} needs even n, got {self.n}")
        if self.tag == "so-odd" and self.n % 2 == 0:
            raise ValueError(f"kind so-odd needs odd n, got {self.n}")

    @property
    def m(self):
        return self.n // 2

    @property
    def is_orthogonal(self):
        return self.tag != "sp"


def coordinate_ring(field, m, d):
    if m > 9 or d > 9:
        raise ValueError("coordinate naming supports at most 9 slots and matrices")
    names = [f"x{k}{j}" for k in range(1, m + 1) for j in range(1, d + 1)]
    return PolyRing(field, names)


class LambdaMatrix:
    """A nonzero m x d matrix of non-negative integers with uniform row parity."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not any(any(r) for r in rows):
            raise ValueError("exponent matrix must be nonzero")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError("rows must share one width")
        if any(x < 0 for r in rows for x in r):
            raise ValueError("entries must be non-negative")
        self.rows = rows

    @property
    def m(self):
        return len(self.rows)

    @property
    def d(self):
        return len(self.rows[0])

    def parity_class(self):
        sums = {sum(r) % 2 for r in self.rows}
        if sums == {0}:
            return "even"
        if sums == {1}:
            return "odd"
        return "mixed"

    def is_normal_form(self):
        return all(self.rows[i] >= self.rows[i + 1] for i in range(self.m - 1))

    def normalize(self):
        return LambdaMatrix(sorted(self.rows, reverse=True))

    def orbit(self):
        """The set of distinct row permutations."""
        return {LambdaMatrix(p) for p in set(permutations(self.rows))}

    def t_monomial(self):
        """The monomial key: one T-factor per nonzero row (zero rows drop out)."""
        mono = ()
        for r in self.rows:
            if any(r):
                mono = mono_mul(mono, mono_of(r))
        return mono

    def __eq__(self, other):
        return isinstance(other, LambdaMatrix) and other.rows == self.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"LambdaMatrix({[list(r) for r in self.rows]})"

    def text(self):
        return ";".join(",".join(str(x) for x in r) for r in self.rows)


def weyl_orbit(lam):
    return lam.orbit()


def enumerate_lambda_plus(m, d, parity, cap):
    """All normal forms with the given row parity and row weights at most cap."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be even or odd, got {parity!r}")
    rem = 0 if parity == "even" else 1
    rows = [
        r
        for r in product(range(cap + 1), repeat=d)
        if sum(r) <= cap and sum(r) % 2 == rem
    ]
    rows.sort(reverse=True)
    out = []
    for combo in combinations_with_replacement(rows, m):
        if any(any(r) for r in combo):
            out.append(LambdaMatrix(combo))
    return out


def orbit_sum(lam, ring):
    """a_lambda: the sum of x^mu over the row-permutation orbit of lambda."""
    if not lam.is_normal_form():
        raise ValueError("orbit_sum expects the normal form of the orbit")
    m, d = lam.m, lam.d
    if ring.nvars != m * d:
        raise ValueError(f"ring has {ring.nvars} variables, expected {m}x{d}")
    terms = {}
    for mu in set(permutations(lam.rows)):
        e = tuple(x for row in mu for x in row)
        terms[e] = ring.field.one
    return MultiPoly(ring, terms)


def permute_slots(p, perm):
    """Apply a slot permutation to the coordinate blocks of a polynomial."""
    ring = p.ring
    m = len(perm)
    d = ring.nvars // m
    out = {}
    for e, c in p.terms.items():
        blocks = [e[k * d : (k + 1) * d] for k in range(m)]
        moved = [None] * m
        for k in range(m):
            moved[perm[k]] = blocks[k]
        out[tuple(x for b in moved for x in b)] = c
    return MultiPoly(ring, out)


def flip_slot(p, k, m):
    """Apply the sign change on slot k (0-based): x_{k j} -> -x_{k j}."""
    ring = p.ring
    d = ring.nvars // m
    out = {}
    for e, c in p.terms.items():
        w = sum(e[k * d : (k + 1) * d])
        out[e] = -c if w % 2 else c
    return MultiPoly(ring, out)


def cartan_embed(kind, xs, ring):
    """The n x n Cartan element at coordinates xs over the given polynomial ring.

    Orthogonal kinds produce the paired-block skew form with entries
    +/- i * x_p and need sqrt(-1) in the coefficient field; the symplectic
    kind produces diag(x_1..x_m, -x_1..-x_m).  Odd n pads with a zero row
    and column.
    """
    m = kind.m
    if len(xs) != m:
        raise ValueError(f"need {m} coordinates, got {len(xs)}")
    n = kind.n
    z = ring.zero
    rows = [[z] * n for _ in range(n)]
    if kind.is_orthogonal:
        if not ring.field.has_sqrt_minus_one:
            raise ValueError(f"field {ring.field!r} lacks sqrt(-1)")
        i = ring.field.i
        for p in range(m):
            rows[2 * p][2 * p + 1] = xs[p] * i
            rows[2 * p + 1][2 * p] = -(xs[p] * i)
        return RingMat(ring, rows, skew=True)
    for p in range(m):
        rows[p][p] = xs[p]
        rows[m + p][m + p] = -xs[p]
    return RingMat(ring, rows)


def generic_cartan_matrices(kind, d, field):
    """The d generic Cartan elements Y(1..d) over the coordinate ring."""
    ring = coordinate_ring(field, kind.m, d)
    mats = []
    for j in range(1, d + 1):
        xs = [ring.var(f"x{k}{j}") for k in range(1, kind.m + 1)]
        mats.append(cartan_embed(kind, xs, ring))
    return ring, mats


def _monomial_matrix(mats, idx, pow_cache):
    prod = None
    for k, e in enumerate(idx):
        if e == 0:
            continue
        key = (k, e)
        p = pow_cache.get(key)
        if p is None:
            p = mats[k] ** e
            pow_cache[key] = p
        prod = p if prod is None else prod * p
    return prod


def weighted_sum_matrix(mats, indices, coeff_ring, trunc):
    """The matrix sum over indices of (product of matrix powers) * T_index, as series entries."""
    n = mats[0].n
    pow_cache = {}
    entry_terms = [[{} for _ in range(n)] for _ in range(n)]
    for idx in indices:
        mw = _monomial_matrix(mats, idx, pow_cache)
        key = mono_of(idx)
        for i in range(n):
            for j in range(n):
                v = mw.rows[i][j]
                if v:
                    entry_terms[i][j][key] = v
    entries = [
        [TSeries(coeff_ring, trunc, entry_terms[i][j]) for j in range(n)]
        for i in range(n)
    ]
    return entries


@lru_cache(maxsize=128)
def n_t_series(kind, d, cap, trunc, field):
    """The product-form square root series, cross-checked against its orbit-sum form."""
    if trunc < 1:
        raise ValueError("truncation must be at least 1")
    m = kind.m
    ring = coordinate_ring(field, m, d)
    indices = even_weight_indices(d, cap)
    prod = TSeries.one(ring, trunc)
    for k in range(1, m + 1):
        terms = {(): ring.one}
        for idx in indices:
            e = [0] * ring.nvars
            for j, ij in enumerate(idx, start=1):
                e[ring.index(f"x{k}{j}")] = ij
            terms[mono_of(idx)] = MultiPoly(ring, {tuple(e): field.one})
        prod = prod * TSeries(ring, trunc, terms)
    orbit_form = TSeries.one(ring, trunc)
    for lam in enumerate_lambda_plus(m, d, "even", cap):
        mono = lam.t_monomial()
        if sum(mult for _, mult in mono) > trunc:
            continue
        orbit_form = orbit_form + TSeries(ring, trunc, {mono: orbit_sum(lam, ring)})
    if prod != orbit_form:
        raise InternalInconsistencyError(
            "product form and orbit-sum form disagree"
        )
    return prod


@lru_cache(maxsize=128)
def f_t_series(kind, d, cap, trunc, field):
    """det(I + sum of generic Cartan monomials * T), asserted equal to the square
    of the product-form series."""
    ring, mats = generic_cartan_matrices(kind, d, field)
    indices = even_weight_indices(d, cap)
    entries = weighted_sum_matrix(mats, indices, ring, trunc)
    L = series_matrix(entries, ring, trunc)
    if field.char == 0 or field.char > min(kind.n, trunc):
        f = det_one_plus(L)
    else:
        ident = RingMat.identity(L.ring, kind.n)
        f = (ident + L).det_cofactor()
    nt = n_t_series(kind, d, cap, trunc, field)
    if f != nt * nt:
        raise InternalInconsistencyError("determinant series is not the square of the product form")
    return f


@lru_cache(maxsize=128)
def h_t_series(n, d, cap, trunc, field):
    """The Pfaffian series over the odd alphabet, asserted equal to the closed
    orbit-sum form with the i^m prefactor."""
    if n % 2:
        raise ValueError("the Pfaffian series needs even n")
    if not field.has_sqrt_minus_one:
        raise ValueError("the Pfaffian series needs sqrt(-1) in the field")
    kind = GroupKind("so-even", n)
    m = kind.m
    ring, mats = generic_cartan_matrices(kind, d, field)
    indices = odd_weight_indices(d, cap)
    entries = weighted_sum_matrix(mats, indices, ring, trunc)
    M = series_matrix(entries, ring, trunc, skew=True)
    h = M.pf_matchings()
    scale = field.i
    prefactor = ring.field.one
    for _ in range(m):
        prefactor = prefactor * scale
    closed = TSeries.zero(ring, trunc)
    if m <= trunc:
        for lam in enumerate_lambda_plus(m, d, "odd", cap):
            mono = lam.t_monomial()
            closed = closed + TSeries(
                ring, trunc, {mono: orbit_sum(lam, ring).scale(prefactor)}
            )
    if h != closed:
        raise InternalInconsistencyError("Pfaffian series disagrees with its closed form")
    return h


@dataclass
class BasisRow:
    lam: LambdaMatrix
    mono: tuple
    coeff: MultiPoly
    matches_orbit_sum: bool
    invariant: bool


def invariant_basis_check(kind, d, cap, trunc, field):
    """Match square-root coefficients with orbit sums and test Weyl invariance.

    Returns (rows, failures): one row per normal form visible at this
    truncation; failures collects human-readable defect strings (empty on
    success).  For the even type-D kind the Pfaffian series coefficients are
    checked to flip sign under one sign change and survive two.
    """
    m = kind.m
    failures = []
    rows = []
    if kind.tag == "so-even":
        h = h_t_series(kind.n, d, cap, trunc, field)
        table = {}
        for lam in enumerate_lambda_plus(m, d, "odd", cap):
            if m <= trunc:
                table[lam.t_monomial()] = lam
        seen = set()
        prefactor = field.one
        for _ in range(m):
            prefactor = prefactor * field.i
        for mono, coeff in sorted(h.terms.items()):
            lam = table.get(mono)
            if lam is None:
                failures.append(f"unexpected monomial {mono_text(mono)} in Pfaffian series")
                continue
            seen.add(mono)
            expected = orbit_sum(lam, coeff.ring).scale(prefactor)
            ok = coeff == expected
            if not ok:
                failures.append(f"coefficient of {mono_text(mono)} differs from its orbit sum")
            inv = _check_type_d_action(coeff, m, failures, mono)
            rows.append(BasisRow(lam, mono, coeff, ok, inv))
        for mono, lam in table.items():
            if mono not in seen:
                failures.append(f"missing monomial {mono_text(mono)} in Pfaffian series")
        _check_disjoint_supports(rows, failures)
        return rows, failures

    f = f_t_series(kind, d, cap, trunc, field)
    s = f.sqrt()
    table = {}
    for lam in enumerate_lambda_plus(m, d, "even", cap):
        mono = lam.t_monomial()
        if sum(mult for _, mult in mono) <= trunc:
            table[mono] = lam
    seen = set()
    for mono, coeff in sorted(s.terms.items()):
        if not mono:
            continue
        lam = table.get(mono)
        if lam is None:
            failures.append(f"unexpected monomial {mono_text(mono)} in the square root")
            continue
        seen.add(mono)
        expected = orbit_sum(lam, coeff.ring)
        ok = coeff == expected
        if not ok:
            failures.append(f"coefficient of {mono_text(mono)} differs from its orbit sum")
        inv = _check_type_b_action(coeff, m, failures, mono)
        rows.append(BasisRow(lam, mono, coeff, ok, inv))
    for mono, lam in table.items():
        if mono not in seen:
            failures.append(f"missing monomial {mono_text(mono)} in the square root")
    _check_disjoint_supports(rows, failures)
    return rows, failures


def _check_type_b_action(coeff, m, failures, mono):
    ok = True
    for k in range(m - 1):
        perm = list(range(m))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        if permute_slots(coeff, perm) != coeff:
            failures.append(f"coefficient of {mono_text(mono)} moves under a slot swap")
            ok = False
    for k in range(m):
        if flip_slot(coeff, k, m) != coeff:
            failures.append(f"coefficient of {mono_text(mono)} moves under a sign flip")
            ok = False
    return ok


def _check_type_d_action(coeff, m, failures, mono):
    ok = True
    for k in range(m - 1):
        perm = list(range(m))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        if permute_slots(coeff, perm) != coeff:
            failures.append(f"coefficient of {mono_text(mono)} moves under a slot swap")
            ok = False
    if flip_slot(coeff, 0, m) != -coeff:
        failures.append(
            f"coefficient of {mono_text(mono)} fails to change sign under one flip"
        )
        ok = False
    if m >= 2:
        if flip_slot(flip_slot(coeff, 0, m), 1, m) != coeff:
            failures.append(
                f"coefficient of {mono_text(mono)} moves under a double flip"
            )
            ok = False
    return ok


def _check_disjoint_supports(rows, failures):
    seen = {}
    for row in rows:
        for e in row.coeff.terms:
            if e in seen and seen[e] != row.mono:
                failures.append(
                    f"supports of {mono_text(row.mono)} and {mono_text(seen[e])} overlap"
                )
            seen[e] = row.mono
