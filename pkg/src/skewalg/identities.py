"""Verification suites for the determinant, Pfaffian, and trace identities
satisfied by commuting skew-symmetric matrices.

Every check returns a SuiteReport; a failed identity is recorded as a
counterexample with both sides in exact text form, never as an exception.
"""

from dataclasses import dataclass

from .cartan import weighted_sum_matrix
from .multipoly import MultiPoly
from .rings import format_scalar
from .skewlin import RingMat, commute
from .tseries import (
    det_one_plus,
    even_weight_indices,
    mono_text,
    odd_weight_indices,
    series_matrix,
)


@dataclass
class SuiteReport:
    suite: str
    params: dict
    cases: int = 0
    counterexample: dict | None = None
    skipped: bool = False
    reason: str = ""
    seed: int | None = None

    @property
    def passed(self):
        return self.counterexample is None

    def to_json(self):
        doc = {
            "suite": self.suite,
            "params": self.params,
            "cases": self.cases,
            "pass": self.passed,
            "counterexample": self.counterexample,
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        if self.skipped:
            doc["skipped"] = True
            doc["reason"] = self.reason
        return doc


class SetPartition:
    """A partition of {1, ..., m} into disjoint nonempty blocks."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        blocks = tuple(sorted(tuple(sorted(b)) for b in blocks))
        ground = [x for b in blocks for x in b]
        m = len(ground)
        if not blocks or sorted(ground) != list(range(1, m + 1)):
            raise ValueError("blocks must partition {1..m}")
        self.blocks = blocks

    @property
    def h(self):
        return len(self.blocks)

    @property
    def m(self):
        return sum(len(b) for b in self.blocks)

    def __eq__(self, other):
        return isinstance(other, SetPartition) and other.blocks == self.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return "|".join("".join(str(x) for x in b) for b in self.blocks)


def enumerate_set_partitions(m):
    """All partitions of {1..m} in canonical order; the count is Bell(m)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    partitions = [[[1]]]
    for x in range(2, m + 1):
        nxt = []
        for p in partitions:
            for i in range(len(p)):
                grown = [list(b) for b in p]
                grown[i].append(x)
                nxt.append(grown)
            nxt.append([list(b) for b in p] + [[x]])
        partitions = nxt
    out = [SetPartition(p) for p in partitions]
    out.sort(key=lambda sp: sp.blocks)
    return out


def matrix_pow_cache(mats, cap):
    cache = {}
    for k, mat in enumerate(mats):
        p = RingMat.identity(mat.ring, mat.n)
        cache[(k, 0)] = p
        for e in range(1, cap + 1):
            p = p * mat
            cache[(k, e)] = p
    return cache


def monomial_of_matrices(mats, exps, cache=None):
    """The product of the matrix powers X_1^{e_1} ... X_d^{e_d}."""
    prod = RingMat.identity(mats[0].ring, mats[0].n)
    for k, e in enumerate(exps):
        if e:
            p = cache.get((k, e)) if cache else None
            prod = prod * (p if p is not None else mats[k] ** e)
    return prod


def matrix_substitute(poly, mats):
    """Evaluate a polynomial at a tuple of commuting matrices."""
    ring = mats[0].ring
    n = mats[0].n
    if poly.ring.nvars != len(mats):
        raise ValueError("variable count does not match the tuple length")
    out = RingMat(ring, [[ring.zero] * n for _ in range(n)], check=False)
    ident = RingMat.identity(ring, n)
    for e, c in poly.terms.items():
        term = ident.scale(c)
        for k, exp in enumerate(e):
            if exp:
                term = term * mats[k] ** exp
        out = out + term
    return out


def f_series_at(mats, cap, trunc):
    """det(I + sum of monomial matrices * T) at a concrete commuting tuple."""
    ring = mats[0].ring
    n = mats[0].n
    indices = even_weight_indices(len(mats), cap)
    entries = weighted_sum_matrix(mats, indices, ring, trunc)
    L = series_matrix(entries, ring, trunc)
    if ring.char == 0 or ring.char > min(n, trunc):
        return det_one_plus(L)
    ident = RingMat.identity(L.ring, n)
    return (ident + L).det_cofactor()


def h_series_at(mats, cap, trunc):
    """Pf(sum of odd monomial matrices * T) at a concrete commuting tuple (even n)."""
    ring = mats[0].ring
    n = mats[0].n
    if n % 2:
        raise ValueError("the Pfaffian series needs even n")
    indices = odd_weight_indices(len(mats), cap)
    entries = weighted_sum_matrix(mats, indices, ring, trunc)
    M = series_matrix(entries, ring, trunc, skew=True)
    return M.pf_matchings()


def _series_text(series):
    bits = []
    for m in sorted(series.terms, key=lambda m: (sum(x for _, x in m), m)):
        bits.append(f"({_coeff_text(series.terms[m])})*{mono_text(m)}")
    return " + ".join(bits) if bits else "0"


def _coeff_text(c):
    if isinstance(c, MultiPoly):
        return c.ring.format(c)
    try:
        return format_scalar(c)
    except TypeError:
        return repr(c)


def check_sqrt_degree_bound(tup, cap, trunc, params=None):
    """All square-root coefficients above degree floor(n/2) must vanish."""
    n = tup.n
    bound = n // 2
    if trunc < bound + 1:
        raise ValueError("truncation must exceed the claimed bound")
    report = SuiteReport(
        "degree-bound",
        dict(params or {}, n=n, d=tup.d, wmax=cap, trunc=trunc,
             provenance=tup.provenance),
    )
    f = f_series_at(tup.mats, cap, trunc)
    s = f.sqrt()
    report.cases = 1
    observed = s.degree()
    report.params["observed_degree"] = observed
    if observed > bound:
        offending = {
            mono_text(m): _coeff_text(c)
            for m, c in s.terms.items()
            if sum(x for _, x in m) > bound
        }
        report.counterexample = {
            "claim": f"deg sqrt(F) <= {bound}",
            "observed_degree": observed,
            "coefficients": offending,
        }
    return report


def check_det_vanishing_odd(tup, poly, params=None):
    """det f(X_1..X_d) = 0 for odd n and f with zero constant term."""
    n = tup.n
    if n % 2 == 0:
        raise ValueError("this check needs odd n")
    const = poly.terms.get((0,) * poly.ring.nvars)
    if const:
        raise ValueError("f must have zero constant term")
    report = SuiteReport(
        "det-vanishing-odd",
        dict(params or {}, n=n, d=tup.d, f=poly.ring.format(poly),
             provenance=tup.provenance),
        cases=1,
    )
    value = matrix_substitute(poly, tup.mats)
    det = value.det()
    if det:
        report.counterexample = {
            "claim": "det f(X) = 0",
            "det": _coeff_text(det),
        }
    return report


def check_pf_multiplicative(x1, x2, x3, params=None):
    """Pf(X1 X2 X3) = (-1)^{n/2} Pf(X1) Pf(X2) Pf(X3) for commuting skew factors."""
    n = x1.n
    if n % 2:
        raise ValueError("this check needs even n")
    for a, b in ((x1, x2), (x1, x3), (x2, x3)):
        if not commute(a, b):
            raise ValueError("the three factors must commute pairwise")
    report = SuiteReport("pf-multiplicative", dict(params or {}, n=n), cases=1)
    prod = (x1 * x2 * x3).mark_skew()
    lhs = prod.pf_matchings()
    rhs = x1.pf_matchings() * x2.pf_matchings() * x3.pf_matchings()
    if (n // 2) % 2:
        rhs = -rhs
    if lhs != rhs:
        report.counterexample = {
            "claim": "Pf(X1 X2 X3) = (-1)^{n/2} Pf(X1)Pf(X2)Pf(X3)",
            "lhs": _coeff_text(lhs),
            "rhs": _coeff_text(rhs),
        }
    return report


def check_trace_identity(tup, exps, params=None):
    """The alternating trace identity over set partitions of {1..m}, m = floor(n/2)+1.

    exps is a d x m exponent array; Y_j is the matrix monomial with the
    j-th exponent column, whose column sum must be positive and even.
    """
    n = tup.n
    d = tup.d
    m = n // 2 + 1
    ring = tup.ring
    if len(exps) != d or any(len(col) != m for col in exps):
        raise ValueError(f"exponent array must be {d} x {m}")
    for j in range(m):
        s = sum(exps[i][j] for i in range(d))
        if s <= 0 or s % 2:
            raise ValueError(f"column {j + 1} sum must be positive and even")
    report = SuiteReport(
        "trace-identity",
        dict(params or {}, n=n, d=d, m=m, exps=[list(c) for c in exps],
             provenance=tup.provenance),
        cases=1,
    )
    if ring.char and ring.char <= m:
        report.skipped = True
        report.reason = f"p <= m: factorials vanish in F_{ring.char}"
        report.cases = 0
        return report
    cache = matrix_pow_cache(tup.mats, max(max(c) for c in exps))
    ys = [
        monomial_of_matrices(tup.mats, [exps[i][j] for i in range(d)], cache)
        for j in range(m)
    ]
    minus_half = ring.div_int(ring.from_int(-1), 2)
    total = ring.zero
    for part in enumerate_set_partitions(m):
        coeff = ring.one
        for _ in range(part.h):
            coeff = coeff * minus_half
        term = coeff
        for block in part.blocks:
            fact = 1
            for t in range(2, len(block)):
                fact *= t
            prod = None
            for s in block:
                prod = ys[s - 1] if prod is None else prod * ys[s - 1]
            term = term * (ring.from_int(fact) * prod.trace())
        total = total + term
    if total:
        report.counterexample = {
            "claim": "alternating trace sum over set partitions vanishes",
            "value": _coeff_text(total),
        }
    return report


def check_conjugation_invariance(tup, q, cap, trunc, params=None):
    """F is unchanged by an exact orthogonal conjugation; H picks up det(Q)."""
    ring = tup.ring
    n = tup.n
    if q * q.transpose() != RingMat.identity(ring, n):
        raise ValueError("Q must be exactly orthogonal")
    report = SuiteReport(
        "conjugation-invariance",
        dict(params or {}, n=n, d=tup.d, wmax=cap, trunc=trunc),
        cases=1,
    )
    qt = q.transpose()
    conj = [(q * x * qt).mark_skew() for x in tup.mats]
    f0 = f_series_at(tup.mats, cap, trunc)
    f1 = f_series_at(conj, cap, trunc)
    if f0 != f1:
        report.counterexample = {
            "claim": "F is conjugation invariant",
            "lhs": _series_text(f0),
            "rhs": _series_text(f1),
        }
        return report
    if n % 2 == 0:
        detq = q.det()
        h0 = h_series_at(tup.mats, cap, trunc)
        h1 = h_series_at(conj, cap, trunc)
        if h1 != h0.scale(detq):
            report.counterexample = {
                "claim": "H scales by det(Q) under conjugation",
                "det_q": _coeff_text(detq),
                "lhs": _series_text(h1),
                "rhs": _series_text(h0.scale(detq)),
            }
    return report
