"""The full verification grid: one runner per acceptance criterion.

Each runner takes the master seed and returns a list of SuiteReports; the
CLI `all` command and the acceptance test module both drive this table.
Per-case RNGs are derived from the master seed with a stable hash, so a
given (seed, cell) pair always sees the same inputs, in any process.
"""

import hashlib
import random

from .cartan import GroupKind, f_t_series, h_t_series, invariant_basis_check
from .commfam import (
    random_cartan_tuple,
    random_dual_cartan_tuple,
    random_nilpotent_tuple,
)
from .identities import (
    SuiteReport,
    check_conjugation_invariance,
    check_det_vanishing_odd,
    check_pf_multiplicative,
    check_sqrt_degree_bound,
    check_trace_identity,
)
from .multipoly import PolyRing
from .rings import GF, QI, QQ
from .skewlin import DualRing, RingMat
from .witness import (
    AttemptsExhaustedError,
    check_bordered_det_expansion,
    check_diag_perturbation_expansion,
    check_homogenized_sqrt,
    random_zero_pattern_skew,
    solve_pfaffian_system,
    solve_vanishing_minor_point,
    verify_witness,
)


def rng_for(seed, *cell):
    """A Random instance tied to the master seed and a cell label."""
    text = ":".join([str(seed)] + [str(c) for c in cell])
    digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    return random.Random(int(digest, 16))


def random_skew(field, n, rng, bound=9):
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            upper[(i, j)] = field.rand(rng, bound)
    return RingMat.from_upper(field, n, upper)


def suite_pf_soundness(seed, sizes=(2, 4, 6, 8, 10), count=200):
    """Pf(M)^2 = det(M) over Q and F_101; the two Pfaffian routes agree for n <= 8."""
    reports = []
    for field_name, field in (("q", QQ), ("fp:101", GF(101))):
        for n in sizes:
            rng = rng_for(seed, "pf-soundness", field_name, n)
            report = SuiteReport(
                "pf-soundness", {"n": n, "field": field_name, "count": count},
                cases=count, seed=seed,
            )
            for k in range(count):
                m = random_skew(field, n, rng)
                pf = m.pf_cayley()
                if pf * pf != m.det():
                    report.counterexample = {"case": k, "claim": "Pf^2 = det"}
                    break
                if n <= 8 and m.pf_matchings() != pf:
                    report.counterexample = {"case": k, "claim": "matchings = last-column recursion"}
                    break
            reports.append(report)
    return reports


def _square_grid():
    cells = []
    for tag, ns in (("o", (2, 3, 4, 5, 6)), ("so-odd", (3, 5)), ("sp", (2, 4, 6))):
        for n in ns:
            for d in (1, 2):
                cells.append((tag, n, d))
    return cells


def suite_ft_square(seed, cap=4, trunc=3):
    """The determinant series equals the square of the product-form series."""
    reports = []
    for tag, n, d in _square_grid():
        field = QI if tag != "sp" else QQ
        report = SuiteReport(
            "ft-square", {"kind": tag, "n": n, "d": d, "wmax": cap, "trunc": trunc},
            cases=1, seed=seed,
        )
        try:
            f_t_series(GroupKind(tag, n), d, cap, trunc, field)
        except AssertionError as exc:
            report.counterexample = {"claim": "F = N^2", "detail": str(exc)}
        reports.append(report)
    return reports


def suite_basis_correspondence(seed, cap=4, trunc=3):
    """Square-root coefficients match orbit sums; supports are disjoint;
    coefficients are invariant under the signed-permutation generators."""
    reports = []
    for tag, n, d in _square_grid():
        field = QI if tag != "sp" else QQ
        report = SuiteReport(
            "basis-correspondence",
            {"kind": tag, "n": n, "d": d, "wmax": cap, "trunc": trunc},
            seed=seed,
        )
        rows, failures = invariant_basis_check(GroupKind(tag, n), d, cap, trunc, field)
        report.cases = len(rows)
        if failures:
            report.counterexample = {"failures": failures}
        reports.append(report)
    return reports


def suite_type_d(seed, cap=3, trunc=3):
    """The Pfaffian series closed form and its sign behaviour for even n."""
    reports = []
    for n in (2, 4, 6):
        for d in (1, 2):
            report = SuiteReport(
                "type-d-closed-form",
                {"kind": "so-even", "n": n, "d": d, "wmax": cap, "trunc": trunc},
                seed=seed,
            )
            try:
                h_t_series(n, d, cap, trunc, QI)
                rows, failures = invariant_basis_check(
                    GroupKind("so-even", n), d, cap, trunc, QI
                )
                report.cases = len(rows)
                if failures:
                    report.counterexample = {"failures": failures}
            except AssertionError as exc:
                report.counterexample = {"claim": "closed form", "detail": str(exc)}
            reports.append(report)
    return reports


def degree_bound_cells():
    return [(n, d) for n in range(2, 8) for d in (1, 2)]


def tuples_for_cell(seed, label, n, d, cartan_count=10, nilpotent_count=5, bound=5):
    """The deterministic tuple sample for a (n, d) cell: conjugated Cartans over Q
    plus, for even n >= 4, isotropic nilpotents over Q(i)."""
    tuples = []
    for i in range(cartan_count):
        rng = rng_for(seed, label, n, d, "cartan", i)
        tuples.append(random_cartan_tuple(QQ, n, d, rng, bound))
    if n % 2 == 0 and n >= 4:
        for i in range(nilpotent_count):
            rng = rng_for(seed, label, n, d, "nilpotent", i)
            tuples.append(random_nilpotent_tuple(n, d, rng, bound))
    return tuples


def suite_degree_bound(seed, cap=4):
    reports = []
    for n, d in degree_bound_cells():
        trunc = n // 2 + 2
        for tup in tuples_for_cell(seed, "degree-bound", n, d):
            rep = check_sqrt_degree_bound(tup, cap, trunc)
            rep.seed = seed
            reports.append(rep)
    return reports


def _random_zero_constant_poly(d, rng, max_terms=4, max_deg=3, bound=6):
    ring = PolyRing(QQ, [f"z{i}" for i in range(1, d + 1)])
    poly = ring.zero
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * d
        for _ in range(rng.randint(1, max_deg)):
            exps[rng.randrange(d)] += 1
        term = ring.from_int(rng.randint(-bound, bound))
        for i, e in enumerate(exps):
            if e:
                term = term * ring.var(f"z{i + 1}") ** e
        poly = poly + term
    return poly


def suite_det_vanishing_odd(seed, count=50):
    reports = []
    for n in (3, 5):
        for k in range(count):
            rng = rng_for(seed, "det-vanishing", n, k)
            d = rng.choice((1, 2, 3))
            if n == 5 and k % 5 == 4:
                tup = random_nilpotent_tuple(n, d, rng)
            else:
                tup = random_cartan_tuple(QQ, n, d, rng, 6)
            poly = _random_zero_constant_poly(d, rng)
            if not poly:
                poly = PolyRing(QQ, [f"z{i}" for i in range(1, d + 1)]).var("z1")
            rep = check_det_vanishing_odd(tup, poly, {"case": k})
            rep.seed = seed
            reports.append(rep)
    return reports


def suite_pf_multiplicative(seed, count=50):
    reports = []
    for ring_name in ("q", "fp:101", "dual"):
        for n in (2, 4, 6):
            for k in range(count):
                rng = rng_for(seed, "pf-mult", ring_name, n, k)
                if ring_name == "q":
                    tup = random_cartan_tuple(QQ, n, 3, rng, 6)
                elif ring_name == "dual":
                    tup = random_dual_cartan_tuple(DualRing(QQ), n, 3, rng, 6)
                else:
                    tup = random_cartan_tuple(GF(101), n, 3, rng)
                rep = check_pf_multiplicative(
                    *tup.mats, params={"ring": ring_name, "case": k}
                )
                rep.seed = seed
                reports.append(rep)
    return reports


def suite_trace_identity(seed, count=25, field=QQ):
    reports = []
    for n in (2, 3, 4, 5):
        m = n // 2 + 1
        for k in range(count):
            rng = rng_for(seed, "trace-identity", n, k)
            d = rng.choice((1, 2, 3))
            tup = random_cartan_tuple(field, n, d, rng, 6)
            exps = _random_even_columns(d, m, rng)
            rep = check_trace_identity(tup, exps, {"case": k})
            rep.seed = seed
            reports.append(rep)
    # the displayed n=4 instance with Y_i = X_i^2
    rng = rng_for(seed, "trace-identity", "displayed")
    tup = random_cartan_tuple(field, 4, 3, rng, 6)
    rep = check_trace_identity(
        tup, [[2, 0, 0], [0, 2, 0], [0, 0, 2]], {"case": "squares-instance"}
    )
    rep.seed = seed
    reports.append(rep)
    return reports


def _random_even_columns(d, m, rng, cap=3):
    exps = [[0] * m for _ in range(d)]
    for j in range(m):
        while True:
            col = [rng.randint(0, cap) for _ in range(d)]
            s = sum(col)
            if s > 0 and s % 2 == 0:
                break
        for i in range(d):
            exps[i][j] = col[i]
    return exps


def suite_conjugation(seed, count=5, cap=3, trunc=2):
    from .commfam import cayley_orthogonal, swap_reflection

    reports = []
    for n in (2, 3, 4):
        for k in range(count):
            rng = rng_for(seed, "conjugation", n, k)
            d = rng.choice((1, 2))
            tup = random_cartan_tuple(QQ, n, d, rng, 5)
            q = cayley_orthogonal(random_skew(QQ, n, rng, 5))
            rep = check_conjugation_invariance(tup, q, cap, trunc, {"case": k, "det_q": "+1"})
            rep.seed = seed
            reports.append(rep)
            if n % 2 == 0:
                refl = swap_reflection(QQ, n)
                rep2 = check_conjugation_invariance(
                    tup, q * refl, cap, trunc, {"case": k, "det_q": "-1"}
                )
                rep2.seed = seed
                reports.append(rep2)
    return reports


def suite_witness_system(seed=0, attempts=100):
    """The witness search as specified: succeed for d in {1,2,3}.

    For d >= 2 the nondegeneracy half of the system is identically zero on
    the vanishing locus (det A = h * q exactly), so those runs exhaust the
    attempt budget; the reports record that analysis rather than hiding it.
    """
    reports = []
    for d in (1, 2, 3):
        report = SuiteReport(
            "witness-system", {"d": d, "attempts": attempts}, cases=1, seed=seed
        )
        try:
            w = solve_pfaffian_system(d, seed, attempts=attempts)
            report.params["attempts_used"] = w.attempts
            if not verify_witness(w):
                report.counterexample = {"claim": "oracle re-verification"}
            if d == 1:
                t = lambda i, j: w.t_matrix.rows[i - 1][j - 1]
                h4 = t(1, 2) * t(3, 5) - t(1, 3) * t(2, 5) + t(1, 5) * t(2, 3)
                det_a_closed = -(
                    (t(3, 5) ** 2 + (t(2, 5) + t(1, 5)) ** 2)
                    * (t(3, 5) ** 2 + (t(2, 5) - t(1, 5)) ** 2)
                )
                if h4 != 0 or w.det_a != det_a_closed:
                    report.counterexample = {
                        "claim": "closed forms for the d=1 minors",
                        "h4": str(h4),
                        "det_a": str(w.det_a),
                        "det_a_closed": str(det_a_closed),
                    }
        except AttemptsExhaustedError as exc:
            report.counterexample = {
                "claim": "witness system has a solution",
                "error": str(exc),
                "analysis": (
                    "unsolvable for d >= 2: det A lies in the ideal of the "
                    "vanishing minor (rank of A is at most 3 on the locus), "
                    "so h_last * det A = 0 at every point with the minor zero"
                ),
            }
        reports.append(report)
    for d in (1, 2):
        point = (
            solve_pfaffian_system(d, seed)
            if d == 1
            else solve_vanishing_minor_point(d, seed)
        )
        rep = check_bordered_det_expansion(point)
        rep.seed = seed
        reports.append(rep)
    return reports


def suite_diag_expansion(seed, count=20):
    reports = []
    for n in (2, 3):
        for k in range(count):
            rng = rng_for(seed, "diag-expansion", n, k)
            t_mat = random_zero_pattern_skew(n, rng)
            rep = check_diag_perturbation_expansion(t_mat, {"case": k})
            rep.seed = seed
            reports.append(rep)
    return reports


def suite_homogenized_sqrt(seed, cap=4):
    reports = []
    for n, d in degree_bound_cells():
        trunc = n // 2 + 2
        # same label on purpose: this suite re-checks the degree-bound cells
        for tup in tuples_for_cell(seed, "degree-bound", n, d):
            rep = check_homogenized_sqrt(tup, cap, trunc)
            rep.seed = seed
            reports.append(rep)
    return reports


CRITERIA = [
    ("pfaffian-soundness", suite_pf_soundness),
    ("ft-square", suite_ft_square),
    ("basis-correspondence", suite_basis_correspondence),
    ("type-d-closed-form", suite_type_d),
    ("degree-bound", suite_degree_bound),
    ("det-vanishing-odd", suite_det_vanishing_odd),
    ("pf-multiplicative", suite_pf_multiplicative),
    ("trace-identity", suite_trace_identity),
    ("witness-system", suite_witness_system),
    ("diag-expansion", suite_diag_expansion),
    ("homogenized-sqrt", suite_homogenized_sqrt),
]


def run_criterion(name, seed):
    for crit_name, runner in CRITERIA:
        if crit_name == name:
            return runner(seed)
    raise KeyError(name)
