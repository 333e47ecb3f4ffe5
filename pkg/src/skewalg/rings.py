"""Exact coefficient arithmetic: rationals, Gaussian rationals, odd prime fields.

All three fields share the same element protocol: +, -, *, unary -, ==,
and truthiness (an element is falsy iff it is zero).  Field descriptors
(QQ, QI, GF(p)) carry the structural data (zero, one, inversion, text
encoding) so that generic code never has to inspect element types.
"""

from gmpy2 import mpq


class FieldMismatchError(TypeError):
    """Raised when two elements of different fields meet in one operation."""


class ExactDivisionError(ArithmeticError):
    """Raised when a division that must be exact is not."""


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Gaussian:
    """A Gaussian rational a + b*i with i**2 = -1, parts stored as mpq."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    def __add__(self, other):
        other = _as_gaussian(other)
        return Gaussian(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gaussian(other)
        return Gaussian(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _as_gaussian(other) - self

    def __mul__(self, other):
        other = _as_gaussian(other)
        return Gaussian(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, type(mpq(0)))):
            other = Gaussian(other)
        if not isinstance(other, Gaussian):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def inv(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return Gaussian(self.re / n, -self.im / n)

    def conj(self):
        return Gaussian(self.re, -self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


def _as_gaussian(x):
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, (int, type(mpq(0)))):
        return Gaussian(x)
    raise FieldMismatchError(f"cannot mix Gaussian rational with {type(x).__name__}")


class Fp:
    """An element of the prime field F_p, reduced to [0, p)."""

    __slots__ = ("val", "p")

    def __init__(self, val, p):
        self.val = val % p
        self.p = p

    def _check(self, other):
        if isinstance(other, int):
            return Fp(other, self.p)
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
            return other
        raise FieldMismatchError(f"cannot mix F_{self.p} with {type(other).__name__}")

    def __add__(self, other):
        other = self._check(other)
        return Fp(self.val + other.val, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Fp(self.val - other.val, self.p)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return Fp(self.val * other.val, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.val, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.val == other % self.p
        if not isinstance(other, Fp):
            return NotImplemented
        if other.p != self.p:
            raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
        return self.val == other.val

    def __hash__(self):
        return hash((self.val, self.p))

    def __bool__(self):
        return self.val != 0

    def inv(self):
        if self.val == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return Fp(pow(self.val, self.p - 2, self.p), self.p)

    def __repr__(self):
        return f"Fp({self.val}, {self.p})"

    def __str__(self):
        return format_scalar(self)


class RationalField:
    """Descriptor of Q; elements are gmpy2.mpq values."""

    name = "q"
    char = 0
    has_sqrt_minus_one = False
    is_domain = True

    def exact_div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero rational")
        return mpq(a) / b

    @property
    def zero(self):
        return mpq(0)

    @property
    def one(self):
        return mpq(1)

    def from_int(self, k):
        return mpq(k)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero rational")
        return 1 / mpq(a)

    def div_int(self, a, k):
        if k == 0:
            raise ZeroDivisionError("division by zero")
        return mpq(a) / k

    def parse(self, text):
        return mpq(text.strip())

    def format(self, a):
        return str(a)

    def rand(self, rng, bound=20):
        return mpq(rng.randint(-bound, bound))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("q")

    def __repr__(self):
        return "QQ"


class GaussianField:
    """Descriptor of Q(i); elements are Gaussian instances."""

    name = "qi"
    char = 0
    has_sqrt_minus_one = True
    is_domain = True

    def exact_div(self, a, b):
        return _as_gaussian(a) * _as_gaussian(b).inv()

    @property
    def zero(self):
        return Gaussian(0)

    @property
    def one(self):
        return Gaussian(1)

    @property
    def i(self):
        return Gaussian(0, 1)

    def from_int(self, k):
        return Gaussian(k)

    def inv(self, a):
        return _as_gaussian(a).inv()

    def div_int(self, a, k):
        if k == 0:
            raise ZeroDivisionError("division by zero")
        a = _as_gaussian(a)
        return Gaussian(a.re / k, a.im / k)

    def parse(self, text):
        # format: "a/b+c/d i", either part optional
        text = text.strip()
        if text.endswith("i"):
            body = text[:-1].strip()
            # split at the last +/- that is not inside the leading term sign
            k = max(body.rfind("+", 1), body.rfind("-", 1))
            if k == -1:
                im = body if body not in ("", "+", "-") else body + "1"
                return Gaussian(0, mpq(im.lstrip("+")))
            re, im = body[:k], body[k:]
            if im in ("+", "-"):
                im += "1"
            return Gaussian(mpq(re), mpq(im.lstrip("+")))
        return Gaussian(mpq(text))

    def format(self, a):
        return format_scalar(_as_gaussian(a))

    def rand(self, rng, bound=20):
        return Gaussian(rng.randint(-bound, bound), rng.randint(-bound, bound))

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("qi")

    def __repr__(self):
        return "QI"


class PrimeField:
    """Descriptor of F_p for an odd prime p; elements are Fp instances."""

    has_sqrt_minus_one = False
    is_domain = True

    def exact_div(self, a, b):
        if isinstance(a, int):
            a = Fp(a, self.p)
        return a * self.inv(b)

    def __init__(self, p):
        if p == 2 or not _is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.name = f"fp:{p}"
        self.char = p

    @property
    def zero(self):
        return Fp(0, self.p)

    @property
    def one(self):
        return Fp(1, self.p)

    def from_int(self, k):
        return Fp(k, self.p)

    def inv(self, a):
        if isinstance(a, int):
            a = Fp(a, self.p)
        return a.inv()

    def div_int(self, a, k):
        return a * Fp(k, self.p).inv()

    def parse(self, text):
        r, _, p = text.partition("mod")
        if int(p) != self.p:
            raise FieldMismatchError(f"expected modulus {self.p}, got {p.strip()}")
        return Fp(int(r), self.p)

    def format(self, a):
        return f"{a.val} mod {a.p}"

    def rand(self, rng, bound=None):
        return Fp(rng.randrange(self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()
QI = GaussianField()

_gf_cache = {}


def GF(p):
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_by_name(name):
    """Resolve a field selector string: q | qi | fp:<p>."""
    if name == "q":
        return QQ
    if name == "qi":
        return QI
    if name.startswith("fp:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field selector {name!r}")


def field_of(x):
    """The field descriptor an element belongs to."""
    if isinstance(x, (int, type(mpq(0)))):
        return QQ
    if isinstance(x, Gaussian):
        return QI
    if isinstance(x, Fp):
        return GF(x.p)
    raise TypeError(f"not a field element: {x!r}")


def _check_same_field(a, b):
    fa, fb = field_of(a), field_of(b)
    # plain ints coerce into any field
    if isinstance(a, int):
        return fb
    if isinstance(b, int):
        return fa
    if fa != fb:
        raise FieldMismatchError(f"{fa!r} vs {fb!r}")
    return fa


def scalar_add(a, b):
    _check_same_field(a, b)
    return a + b


def scalar_mul(a, b):
    _check_same_field(a, b)
    return a * b


def scalar_neg(a):
    return -a


def scalar_inv(a):
    f = field_of(a)
    return f.inv(a)


def scalar_is_zero(a):
    return not a


def format_scalar(a):
    """Canonical text encoding: "a/b", "a/b+c/d i", or "r mod p"."""
    if isinstance(a, Fp):
        return f"{a.val} mod {a.p}"
    if isinstance(a, Gaussian):
        if not a.im:
            return str(a.re)
        if not a.re:
            return f"{a.im} i"
        sign = "" if a.im < 0 else "+"
        return f"{a.re}{sign}{a.im} i"
    return str(mpq(a))


def parse_scalar(text, field):
    return field.parse(text)
