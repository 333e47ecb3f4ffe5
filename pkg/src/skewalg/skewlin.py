"""Exact matrices over a commutative coefficient ring.

Determinants come in two independent flavours: fraction-free Bareiss
elimination (integral domains, using the ring's exact division) and
memoized cofactor expansion (any commutative ring, e.g. dual numbers or
truncated series).  Pfaffians likewise: a signed sum over perfect
matchings and a last-column recursion memoized on index subsets.  The
two routes are kept separate so each can serve as the other's oracle.
"""

from .rings import field_by_name, parse_scalar, format_scalar


class SkewFlagError(ValueError):
    """Raised when a skew-symmetry precondition fails."""


class SingularMatrixError(ZeroDivisionError):
    pass


class DimensionMismatchError(ValueError):
    pass


class CommutationError(ValueError):
    """Raised when allegedly commuting inputs do not commute."""


class DualNumber:
    """a + b*eps with eps**2 = 0, over an exact field; a minimal non-domain ring."""

    __slots__ = ("ring", "a", "b")

    def __init__(self, ring, a, b=None):
        self.ring = ring
        self.a = a
        self.b = b if b is not None else ring.field.zero

    def _coerce(self, other):
        if isinstance(other, DualNumber):
            if other.ring != self.ring:
                raise TypeError("dual numbers over different base fields")
            return other
        if isinstance(other, int):
            return DualNumber(self.ring, self.ring.field.from_int(other))
        return DualNumber(self.ring, other)

    def __add__(self, other):
        other = self._coerce(other)
        return DualNumber(self.ring, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return DualNumber(self.ring, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return DualNumber(
            self.ring, self.a * other.a, self.a * other.b + self.b * other.a
        )

    __rmul__ = __mul__

    def __neg__(self):
        return DualNumber(self.ring, -self.a, -self.b)

    def __eq__(self, other):
        if not isinstance(other, DualNumber):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.ring == other.ring and self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def inv(self):
        ai = self.ring.field.inv(self.a)
        return DualNumber(self.ring, ai, -(self.b * ai * ai))

    def __repr__(self):
        return f"({format_scalar(self.a)} + {format_scalar(self.b)}*eps)"


class DualRing:
    """Descriptor of the dual numbers over a field; not an integral domain."""

    is_domain = False

    def __init__(self, field):
        self.field = field

    @property
    def char(self):
        return self.field.char

    @property
    def zero(self):
        return DualNumber(self, self.field.zero)

    @property
    def one(self):
        return DualNumber(self, self.field.one)

    @property
    def eps(self):
        return DualNumber(self, self.field.zero, self.field.one)

    def from_int(self, k):
        return DualNumber(self, self.field.from_int(k))

    def div_int(self, a, k):
        c = self.field.inv(self.field.from_int(k))
        return DualNumber(self, a.a * c, a.b * c)

    def __eq__(self, other):
        return isinstance(other, DualRing) and other.field == self.field

    def __hash__(self):
        return hash(("dual", self.field))

    def __repr__(self):
        return f"DualRing({self.field!r})"


class RingMat:
    """Square matrix with entries in a commutative ring, with optional checked skew flag."""

    __slots__ = ("ring", "n", "rows", "skew")

    def __init__(self, ring, rows, skew=False, check=True):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatchError("matrix must be square")
        self.ring = ring
        self.n = n
        self.rows = rows
        self.skew = skew
        if skew and check:
            for i in range(n):
                if rows[i][i]:
                    raise SkewFlagError(f"nonzero diagonal entry at {i}")
                for j in range(i + 1, n):
                    if rows[i][j] != -rows[j][i]:
                        raise SkewFlagError(f"entry ({i},{j}) is not skew")

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, n):
        z = ring.zero
        return cls(ring, [[z] * n for _ in range(n)], skew=True, check=False)

    @classmethod
    def from_upper(cls, ring, n, upper):
        """Build a skew matrix from {(i, j): value} with i < j, zero elsewhere."""
        z = ring.zero
        rows = [[z] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not i < j:
                raise SkewFlagError(f"upper entries need i < j, got ({i},{j})")
            rows[i][j] = v
            rows[j][i] = -v
        return cls(ring, rows, skew=True, check=False)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, RingMat):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __add__(self, other):
        self._same_shape(other)
        return RingMat(
            self.ring,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            skew=self.skew and other.skew,
            check=False,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return RingMat(
            self.ring,
            [[-a for a in r] for r in self.rows],
            skew=self.skew,
            check=False,
        )

    def __mul__(self, other):
        if not isinstance(other, RingMat):
            return self.scale(other)
        self._same_shape(other)
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = self.ring.zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMat(self.ring, out, check=False)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("matrix power needs a non-negative integer")
        result = RingMat.identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return RingMat(
            self.ring, [[a * c for a in r] for r in self.rows],
            skew=self.skew, check=False,
        )

    def transpose(self):
        return RingMat(
            self.ring, [list(r) for r in zip(*self.rows)],
            skew=self.skew, check=False,
        )

    def trace(self):
        acc = self.ring.zero
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_skew(self):
        return all(
            not self.rows[i][i] for i in range(self.n)
        ) and all(
            self.rows[i][j] == -self.rows[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def mark_skew(self):
        """Return the same matrix with the skew flag set (and checked)."""
        return RingMat(self.ring, self.rows, skew=True)

    def minor_delete(self, indices):
        """Delete the given rows and columns (0-based); the skew flag survives."""
        drop = set(indices)
        if any(i < 0 or i >= self.n for i in drop):
            raise IndexError(f"indices {sorted(drop)} out of range for n={self.n}")
        keep = [i for i in range(self.n) if i not in drop]
        rows = [[self.rows[i][j] for j in keep] for i in keep]
        return RingMat(self.ring, rows, skew=self.skew, check=False)

    def _same_shape(self, other):
        if self.n != other.n:
            raise DimensionMismatchError(f"{self.n} vs {other.n}")
        if self.ring != other.ring:
            raise DimensionMismatchError("matrices over different rings")

    def inverse(self):
        """Inverse by Gauss-Jordan elimination; the ring must be a field."""
        n = self.n
        ring = self.ring
        a = [list(r) + [ring.one if i == j else ring.zero for j in range(n)]
             for i, r in enumerate(self.rows)]
        for k in range(n):
            pivot_row = next((i for i in range(k, n) if a[i][k]), None)
            if pivot_row is None:
                raise SingularMatrixError("matrix is singular")
            a[k], a[pivot_row] = a[pivot_row], a[k]
            inv = ring.inv(a[k][k])
            a[k] = [x * inv for x in a[k]]
            for i in range(n):
                if i != k and a[i][k]:
                    c = a[i][k]
                    a[i] = [x - c * y for x, y in zip(a[i], a[k])]
        return RingMat(ring, [row[n:] for row in a], check=False)

    # --- determinants -------------------------------------------------

    def det(self):
        if self.ring.is_domain:
            return self.det_bareiss()
        return self.det_cofactor()

    def det_bareiss(self):
        """Fraction-free elimination; every division is exact over a domain."""
        n = self.n
        if n == 0:
            return self.ring.one
        a = [list(r) for r in self.rows]
        ring = self.ring
        sign = 1
        prev = ring.one
        for k in range(n - 1):
            if not a[k][k]:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return ring.zero
            pivot = a[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[i][j] * pivot - a[i][k] * a[k][j]
                    a[i][j] = ring.exact_div(num, prev) if num else ring.zero
                a[i][k] = ring.zero
            prev = pivot
        d = a[n - 1][n - 1]
        return d if sign > 0 else -d

    def det_cofactor(self):
        """Division-free expansion with minors memoized on column subsets."""
        n = self.n
        ring = self.ring
        rows = self.rows
        memo = {}

        def rec(row, mask):
            if row == n:
                return ring.one
            val = memo.get(mask)
            if val is not None:
                return val
            acc = ring.zero
            pos = 0
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    a = rows[row][j]
                    if a:
                        sub = rec(row + 1, mask ^ bit)
                        term = a * sub
                        acc = acc + term if pos % 2 == 0 else acc - term
                    pos += 1
            memo[mask] = acc
            return acc

        return rec(0, (1 << n) - 1)

    # --- Pfaffians ------------------------------------------------------

    def _require_skew(self):
        if not self.skew:
            raise SkewFlagError("Pfaffian needs the skew flag set")

    def pf(self):
        self._require_skew()
        if self.n % 2 == 1:
            return self.ring.zero
        return self.pf_cayley()

    def pf_matchings(self):
        """Oracle Pfaffian: signed sum over perfect matchings."""
        self._require_skew()
        if self.n % 2 == 1:
            return self.ring.zero
        rows = self.rows
        ring = self.ring

        def rec(idx):
            if not idx:
                return ring.one
            i0 = idx[0]
            rest = idx[1:]
            acc = ring.zero
            for k, j in enumerate(rest):
                a = rows[i0][j]
                if a:
                    term = a * rec(rest[:k] + rest[k + 1 :])
                    acc = acc + term if k % 2 == 0 else acc - term
            return acc

        return rec(tuple(range(self.n)))

    def pf_cayley(self):
        """Pfaffian by last-column expansion, memoized on index subsets."""
        self._require_skew()
        if self.n % 2 == 1:
            return self.ring.zero
        rows = self.rows
        ring = self.ring
        memo = {}

        def rec(idx):
            if not idx:
                return ring.one
            val = memo.get(idx)
            if val is not None:
                return val
            last = idx[-1]
            acc = ring.zero
            for pos in range(len(idx) - 1):
                a = rows[idx[pos]][last]
                if a:
                    term = a * rec(idx[:pos] + idx[pos + 1 : -1])
                    acc = acc + term if pos % 2 == 0 else acc - term
            memo[idx] = acc
            return acc

        return rec(tuple(range(self.n)))


def commute(a, b):
    return a * b == b * a


def block_det_commuting(blocks, check=False):
    """det of a k x k block matrix with pairwise commuting l x l blocks.

    Computes det(sum over permutations of sgn * X_{1,s(1)} ... X_{k,s(k)}),
    which equals the determinant of the assembled matrix.
    """
    from itertools import permutations

    k = len(blocks)
    if any(len(row) != k for row in blocks):
        raise DimensionMismatchError("block grid must be square")
    flat = [b for row in blocks for b in row]
    l = flat[0].n
    ring = flat[0].ring
    if any(b.n != l for b in flat):
        raise DimensionMismatchError("all blocks must share one size")
    if check:
        for x in range(len(flat)):
            for y in range(x + 1, len(flat)):
                if not commute(flat[x], flat[y]):
                    raise CommutationError(
                        f"blocks {divmod(x, k)} and {divmod(y, k)} do not commute"
                    )
    total = None
    for perm in permutations(range(k)):
        inversions = sum(
            1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j]
        )
        prod = blocks[0][perm[0]]
        for i in range(1, k):
            prod = prod * blocks[i][perm[i]]
        prod = prod if inversions % 2 == 0 else -prod
        total = prod if total is None else total + prod
    return total.det()


def assemble_blocks(blocks):
    """Flatten a k x k grid of l x l matrices into one kl x kl matrix."""
    k = len(blocks)
    l = blocks[0][0].n
    ring = blocks[0][0].ring
    rows = []
    for bi in range(k):
        for r in range(l):
            rows.append(
                [blocks[bi][bj].rows[r][c] for bj in range(k) for c in range(l)]
            )
    return RingMat(ring, rows, check=False)


def mat_to_json(m, ring_name):
    """Matrix file form: entries in the scalar text encoding."""
    return {
        "n": m.n,
        "ring": ring_name,
        "rows": [[format_scalar(e) for e in row] for row in m.rows],
        "skew": m.skew,
    }


def mat_from_json(doc):
    field = field_by_name(doc["ring"])
    rows = [[parse_scalar(e, field) for e in row] for row in doc["rows"]]
    return RingMat(field, rows, skew=doc.get("skew", False))
