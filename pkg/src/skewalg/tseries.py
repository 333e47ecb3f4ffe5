"""Truncated formal power series in a family of T-variables indexed by weight vectors.

A weight index is a nonzero tuple (i_1, ..., i_d) of non-negative integers;
its parity is the parity of i_1 + ... + i_d (even indices form one
alphabet, odd indices the other).  A monomial is a multiset of weight
indices, stored as a sorted tuple of (index, multiplicity) pairs; () is
the unit monomial.  A TSeries keeps a dict from monomials of degree at
most the truncation bound to nonzero coefficients in either a field or a
polynomial ring.

The square root uses the degree-by-degree recursion
b_w = (a_w - sum b_{v1} b_{v2}) / 2 over ordered factorizations v1 v2 = w
into monomials of lower degree, which is the unique square root with
constant coefficient 1.
"""

from itertools import product

from .rings import ExactDivisionError
from .skewlin import RingMat


class RingMismatchError(TypeError):
    """Raised when two series over different coefficient rings meet."""


class DivisibilityError(ArithmeticError):
    """Raised when a coefficient fails a required divisibility."""


def weight_parity(idx):
    return "even" if sum(idx) % 2 == 0 else "odd"


def check_weight_index(idx):
    if not idx or not any(idx) or any(i < 0 for i in idx):
        raise ValueError(f"weight index must be nonzero non-negative, got {idx}")
    return tuple(idx)


def even_weight_indices(d, cap):
    """All indices of even weight between 2 and cap, in (weight, lex) order."""
    out = [
        idx
        for idx in product(range(cap + 1), repeat=d)
        if any(idx) and sum(idx) % 2 == 0 and sum(idx) <= cap
    ]
    return sorted(out, key=lambda i: (sum(i), i))


def odd_weight_indices(d, cap):
    """All indices of odd weight at most cap, in (weight, lex) order."""
    out = [
        idx
        for idx in product(range(cap + 1), repeat=d)
        if sum(idx) % 2 == 1 and sum(idx) <= cap
    ]
    return sorted(out, key=lambda i: (sum(i), i))


ONE_MONO = ()


def mono_degree(mono):
    return sum(m for _, m in mono)


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for idx, m in b:
        acc[idx] = acc.get(idx, 0) + m
    return tuple(sorted(acc.items()))


def mono_of(idx, mult=1):
    return ((check_weight_index(idx), mult),)


def mono_text(mono):
    if not mono:
        return "1"
    parts = []
    for idx, m in mono:
        t = "T" + ",".join(str(i) for i in idx)
        parts.append(t if m == 1 else f"{t}^{m}")
    return "*".join(parts)


class SeriesRing:
    """Descriptor of the truncated series ring; not an integral domain."""

    is_domain = False

    def __init__(self, coeff_ring, trunc):
        self.coeff_ring = coeff_ring
        self.trunc = trunc

    @property
    def zero(self):
        return TSeries(self.coeff_ring, self.trunc, {})

    @property
    def one(self):
        return TSeries(self.coeff_ring, self.trunc, {ONE_MONO: self.coeff_ring.one})

    def from_int(self, k):
        c = self.coeff_ring.from_int(k)
        return TSeries(self.coeff_ring, self.trunc, {ONE_MONO: c} if c else {})

    def div_int(self, s, k):
        return s.div_int(k)

    def __eq__(self, other):
        return (
            isinstance(other, SeriesRing)
            and other.coeff_ring == self.coeff_ring
            and other.trunc == self.trunc
        )

    def __hash__(self):
        return hash(("series", self.coeff_ring, self.trunc))

    def __repr__(self):
        return f"SeriesRing({self.coeff_ring!r}, trunc={self.trunc})"


class TSeries:
    __slots__ = ("coeff_ring", "trunc", "terms")

    def __init__(self, coeff_ring, trunc, terms):
        self.coeff_ring = coeff_ring
        self.trunc = trunc
        self.terms = terms

    @classmethod
    def one(cls, coeff_ring, trunc):
        return cls(coeff_ring, trunc, {ONE_MONO: coeff_ring.one})

    @classmethod
    def zero(cls, coeff_ring, trunc):
        return cls(coeff_ring, trunc, {})

    @classmethod
    def var(cls, coeff_ring, trunc, idx):
        return cls(coeff_ring, trunc, {mono_of(idx): coeff_ring.one})

    @classmethod
    def from_coeff(cls, coeff_ring, trunc, c):
        return cls(coeff_ring, trunc, {ONE_MONO: c} if c else {})

    @property
    def ring(self):
        return SeriesRing(self.coeff_ring, self.trunc)

    @property
    def parity(self):
        kinds = {weight_parity(idx) for m in self.terms for idx, _ in m}
        if not kinds:
            return "even"
        if len(kinds) == 2:
            return "mixed"
        return kinds.pop()

    def _coerce(self, other):
        if isinstance(other, TSeries):
            if other.coeff_ring != self.coeff_ring:
                raise RingMismatchError(
                    f"{self.coeff_ring!r} vs {other.coeff_ring!r}"
                )
            return other
        if isinstance(other, int):
            other = self.coeff_ring.from_int(other)
        return TSeries.from_coeff(self.coeff_ring, self.trunc, other)

    def __add__(self, other):
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        out = {m: c for m, c in self.terms.items() if mono_degree(m) <= trunc}
        for m, c in other.terms.items():
            if mono_degree(m) > trunc:
                continue
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return TSeries(self.coeff_ring, trunc, out)

    __radd__ = __add__

    def __neg__(self):
        return TSeries(
            self.coeff_ring, self.trunc, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        bdeg = [(m, mono_degree(m), c) for m, c in b.items()]
        for m1, c1 in a.items():
            d1 = mono_degree(m1)
            for m2, d2, c2 in bdeg:
                if d1 + d2 > trunc:
                    continue
                m = mono_mul(m1, m2)
                if m in out:
                    s = out[m] + c1 * c2
                    if s:
                        out[m] = s
                    else:
                        del out[m]
                else:
                    out[m] = c1 * c2
        return TSeries(self.coeff_ring, trunc, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = TSeries.one(self.coeff_ring, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self.coeff_ring == other.coeff_ring
            and self.trunc == other.trunc
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "<0 (trunc %d)>" % self.trunc
        bits = []
        for m in sorted(self.terms, key=lambda m: (mono_degree(m), m)):
            bits.append(f"({self.terms[m]!r})*{mono_text(m)}")
        return "<" + " + ".join(bits) + f" (trunc {self.trunc})>"

    def scale(self, c):
        if not c:
            return TSeries(self.coeff_ring, self.trunc, {})
        return TSeries(
            self.coeff_ring, self.trunc, {m: v * c for m, v in self.terms.items()}
        )

    def div_int(self, k):
        R = self.coeff_ring
        return TSeries(
            self.coeff_ring,
            self.trunc,
            {m: R.div_int(c, k) for m, c in self.terms.items()},
        )

    def map_coeffs(self, f):
        out = {}
        for m, c in self.terms.items():
            v = f(c)
            if v:
                out[m] = v
        return TSeries(self.coeff_ring, self.trunc, out)

    def with_coeff_ring(self, ring, f):
        """Push coefficients through f into another coefficient ring."""
        out = {}
        for m, c in self.terms.items():
            v = f(c)
            if v:
                out[m] = v
        return TSeries(ring, self.trunc, out)

    def constant_coeff(self):
        return self.terms.get(ONE_MONO, self.coeff_ring.zero)

    def degree(self):
        """Largest degree with a nonzero coefficient; 0 for constants."""
        if not self.terms:
            return 0
        return max(mono_degree(m) for m in self.terms)

    def slice(self, k):
        return {m: c for m, c in self.terms.items() if mono_degree(m) == k}

    def sqrt(self):
        """The unique square root with constant coefficient 1, up to truncation."""
        R = self.coeff_ring
        if self.constant_coeff() != R.one:
            raise ValueError("series square root needs constant coefficient 1")
        D = self.trunc
        slices = {0: {ONE_MONO: R.one}}
        for k in range(1, D + 1):
            conv = {}
            for i in range(1, k):
                si = slices.get(i)
                sj = slices.get(k - i)
                if not si or not sj:
                    continue
                for m1, c1 in si.items():
                    for m2, c2 in sj.items():
                        m = mono_mul(m1, m2)
                        if m in conv:
                            s = conv[m] + c1 * c2
                            if s:
                                conv[m] = s
                            else:
                                del conv[m]
                        else:
                            conv[m] = c1 * c2
            wanted = set(conv)
            wanted.update(m for m in self.slice(k))
            sk = {}
            for m in wanted:
                num = self.terms.get(m, R.zero) - conv.get(m, R.zero)
                if num:
                    sk[m] = R.div_int(num, 2)
            if sk:
                slices[k] = sk
        out = {}
        for sk in slices.values():
            out.update(sk)
        return TSeries(R, D, out)

    def eval(self, point):
        """Evaluate at a finitely-supported point {weight index: scalar}.

        Indices missing from the point are zero, so a monomial touching one
        contributes nothing.  Returns a coefficient-ring element.
        """
        total = self.coeff_ring.zero
        for m, c in self.terms.items():
            val = None
            dead = False
            for idx, mult in m:
                s = point.get(idx)
                if s is None or not s:
                    dead = True
                    break
                f = s
                for _ in range(mult - 1):
                    f = f * s
                val = f if val is None else val * f
            if dead:
                continue
            total = total + (c if val is None else c * val)
        return total

    def extract_power(self, n, var="y"):
        """Divide every coefficient by var**n; error names the offending monomial."""
        out = {}
        for m, c in self.terms.items():
            try:
                out[m] = c.shift_down(var, n)
            except (AttributeError, ExactDivisionError) as exc:
                raise DivisibilityError(
                    f"coefficient of {mono_text(m)} is not divisible by {var}^{n}"
                ) from exc
        return TSeries(self.coeff_ring, self.trunc, out)

    def to_json(self, coeff_format):
        terms = []
        for m in sorted(self.terms, key=lambda m: (mono_degree(m), m)):
            terms.append(
                {
                    "monomial": [[list(idx), mult] for idx, mult in m],
                    "coeff": coeff_format(self.terms[m]),
                }
            )
        return {"trunc": self.trunc, "parity": self.parity, "terms": terms}

    @classmethod
    def from_json(cls, doc, coeff_ring, coeff_parse):
        terms = {}
        for t in doc["terms"]:
            m = tuple(sorted((tuple(idx), mult) for idx, mult in t["monomial"]))
            terms[m] = coeff_parse(t["coeff"])
        return cls(coeff_ring, doc["trunc"], terms)


def series_matrix(entries, coeff_ring, trunc, skew=False):
    return RingMat(SeriesRing(coeff_ring, trunc), entries, skew=skew)


def det_one_plus(L):
    """det(I + L) for a series matrix L with zero constant coefficients.

    Goes through traces of matrix powers and the elementary-symmetric
    recurrence, so it only divides by integers up to min(n, truncation);
    the coefficient ring must allow those divisions.  Cross-checked against
    the cofactor determinant in the test suite.
    """
    n = L.n
    sring = L.ring
    one = sring.one
    kmax = min(n, sring.trunc)
    if kmax == 0 or n == 0:
        return one
    for row in L.rows:
        for e in row:
            if e.constant_coeff():
                raise ValueError("entries of L must have zero constant coefficient")
    psums = []
    power = L
    for k in range(1, kmax + 1):
        if k > 1:
            power = power * L
        psums.append(power.trace())
    es = [one]
    for k in range(1, kmax + 1):
        acc = sring.zero
        for i in range(1, k + 1):
            term = es[k - i] * psums[i - 1]
            acc = acc + term if i % 2 == 1 else acc - term
        es.append(acc.div_int(k))
    total = sring.zero
    for e in es:
        total = total + e
    return total
