"""Sparse multivariate polynomials over an exact field.

A PolyRing fixes the coefficient field and an ordered variable table; a
MultiPoly is a dict from exponent vectors (one entry per variable) to
nonzero coefficients.  Terms are ordered graded-lexicographically with
respect to the fixed variable order, which makes printing canonical.
"""

from .rings import ExactDivisionError

NEG_INF = float("-inf")


class TableMismatchError(TypeError):
    """Raised when two polynomials over different rings meet."""


class PolyRing:
    """Coefficient field plus an ordered tuple of distinct variable names."""

    is_domain = True

    def __init__(self, field, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.field = field
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.field == self.field
            and other.names == self.names
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"PolyRing({self.field!r}, {list(self.names)})"

    def index(self, name):
        if name not in self._index:
            raise TableMismatchError(f"unknown variable {name!r} in {self!r}")
        return self._index[name]

    @property
    def nvars(self):
        return len(self.names)

    @property
    def char(self):
        return self.field.char

    @property
    def zero(self):
        return MultiPoly(self, {})

    @property
    def one(self):
        return self.from_scalar(self.field.one)

    def var(self, name):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def gens(self):
        return [self.var(n) for n in self.names]

    def from_scalar(self, c):
        if isinstance(c, int):
            c = self.field.from_int(c)
        if not c:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def from_int(self, k):
        return self.from_scalar(self.field.from_int(k))

    def div_int(self, p, k):
        return p.scale(self.field.inv(self.field.from_int(k)))

    def exact_div(self, a, b):
        return a.exact_div(b)

    def format(self, p):
        return format_poly(p)

    def parse(self, text):
        return parse_poly(text, self)


def _order_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise TableMismatchError(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.from_scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(map(int.__add__, e1, e2))
                if e in out:
                    s = out[e] + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
                else:
                    out[e] = c1 * c2
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self._coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"<{format_poly(self)}>"

    def scale(self, c):
        """Multiply by a field scalar."""
        if isinstance(c, int):
            c = self.ring.field.from_int(c)
        if not c:
            return self.ring.zero
        return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, names):
        """Max total exponent over the given variables; -inf for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        idx = [self.ring.index(n) for n in names]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def coeff_of(self, pattern):
        """Coefficient of an exact exponent pattern {name: exp} in the other variables."""
        idx = {self.ring.index(n): k for n, k in pattern.items()}
        out = {}
        for e, c in self.terms.items():
            if all(e[i] == k for i, k in idx.items()):
                reduced = tuple(0 if i in idx else x for i, x in enumerate(e))
                out[reduced] = out.get(reduced, self.ring.field.zero) + c
        return MultiPoly(self.ring, {e: c for e, c in out.items() if c})

    def split_by_var(self, name):
        """Decompose p = sum_k c_k * v^k into {k: c_k} with v absent from each c_k."""
        i = self.ring.index(name)
        slices = {}
        for e, c in self.terms.items():
            k = e[i]
            reduced = e[:i] + (0,) + e[i + 1 :]
            part = slices.setdefault(k, {})
            part[reduced] = part.get(reduced, self.ring.field.zero) + c
        return {
            k: MultiPoly(self.ring, {e: c for e, c in part.items() if c})
            for k, part in slices.items()
            if any(part.values())
        }

    def shift_down(self, name, n):
        """Divide exactly by v^n; raises ExactDivisionError on a short exponent."""
        i = self.ring.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] < n:
                raise ExactDivisionError(
                    f"term with {name}^{e[i]} is not divisible by {name}^{n}"
                )
            out[e[:i] + (e[i] - n,) + e[i + 1 :]] = c
        return MultiPoly(self.ring, out)

    def substitute(self, bindings, ring=None):
        """Substitute variables by polynomials or scalars.

        Unbound variables pass through, which requires them to exist in the
        target ring.  The target defaults to the ring of the first MultiPoly
        binding, else to the source ring.
        """
        if ring is None:
            ring = self.ring
            for v in bindings.values():
                if isinstance(v, MultiPoly):
                    ring = v.ring
                    break
        images = []
        for name in self.ring.names:
            if name in bindings:
                v = bindings[name]
                if not isinstance(v, MultiPoly):
                    v = ring.from_scalar(v)
                elif v.ring != ring:
                    raise TableMismatchError(f"binding for {name} lives in {v.ring!r}")
                images.append(v)
            else:
                images.append(ring.var(name))
        out = ring.zero
        for e, c in self.terms.items():
            term = ring.from_scalar(c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def eval_point(self, values):
        """Evaluate at a full point {name: scalar}; returns a field element."""
        const = self.substitute(values)
        return const.constant_value()

    def constant_value(self):
        if not self.terms:
            return self.ring.field.zero
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        raise ValueError(f"{self!r} is not constant")

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def leading(self):
        e = max(self.terms, key=_order_key)
        return e, self.terms[e]

    def exact_div(self, other):
        """Quotient self/other when the division is exact; error otherwise."""
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if not self:
            return self.ring.zero
        field = self.ring.field
        de, dc = other.leading()
        dc_inv = field.inv(dc)
        rem = dict(self.terms)
        quo = {}
        while rem:
            re = max(rem, key=_order_key)
            qe = tuple(map(int.__sub__, re, de))
            if any(x < 0 for x in qe):
                raise ExactDivisionError("division is not exact")
            qc = rem[re] * dc_inv
            quo[qe] = qc
            for e, c in other.terms.items():
                t = tuple(map(int.__add__, qe, e))
                s = rem.get(t, field.zero) - qc * c
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MultiPoly(self.ring, quo)


def format_poly(p):
    """Canonical text: graded-lex descending, e.g. "1/2*x1^2*x2 - 3*x2"."""
    if not p.terms:
        return "0"
    field = p.ring.field
    names = p.ring.names
    parts = []
    for e in sorted(p.terms, key=_order_key, reverse=True):
        c = p.terms[e]
        factors = [
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        ]
        ctext = field.format(c)
        neg = ctext.startswith("-") and "i" not in ctext
        if neg:
            ctext = ctext[1:]
        if " " in ctext or ("i" in ctext and factors):
            ctext = f"({ctext})"
        if factors and ctext == "1":
            body = "*".join(factors)
        else:
            body = "*".join([ctext] + factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def parse_poly(text, ring):
    """Parse the canonical text form back into a MultiPoly over the given ring."""
    text = text.strip()
    if text == "0":
        return ring.zero
    field = ring.field
    out = ring.zero
    # cut on top-level " + " / " - " separators (never inside parentheses)
    chunks = []
    sign = 1
    depth = 0
    cur = ""
    i = 0
    while i < len(text):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
        if depth == 0 and text[i : i + 3] in (" + ", " - "):
            chunks.append((sign, cur))
            sign = 1 if text[i + 1] == "+" else -1
            cur = ""
            i += 3
            continue
        cur += text[i]
        i += 1
    chunks.append((sign, cur))
    for sign, chunk in chunks:
        chunk = chunk.strip()
        neg = sign < 0
        if chunk.startswith("-"):
            neg = not neg
            chunk = chunk[1:]
        exps = [0] * ring.nvars
        coeff = field.one
        for factor in chunk.split("*"):
            factor = factor.strip()
            if factor.startswith("(") and factor.endswith(")"):
                coeff = coeff * field.parse(factor[1:-1])
            elif factor.split("^")[0] in ring._index:
                name, _, k = factor.partition("^")
                exps[ring.index(name)] += int(k) if k else 1
            else:
                coeff = coeff * field.parse(factor)
        if neg:
            coeff = -coeff
        out = out + MultiPoly(ring, {tuple(exps): coeff} if coeff else {})
    return out
