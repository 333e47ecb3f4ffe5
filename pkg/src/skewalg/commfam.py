"""Constructors for concrete tuples of pairwise-commuting skew-symmetric matrices.

Two families: simultaneously conjugated paired-block Cartan elements
(semisimple points, over any exact field via a Cayley-transform
conjugator), and rank-two nilpotents built from mutually isotropic
vectors over Q(i) (non-semisimple points).  Commutation is re-checked
exactly on construction in both cases.
"""

from dataclasses import dataclass

from .rings import QI, Gaussian
from .skewlin import (
    CommutationError,
    DualNumber,
    RingMat,
    SingularMatrixError,
    commute,
)


class IsotropyError(ValueError):
    """Raised when the vectors feeding the nilpotent construction are not isotropic."""


@dataclass
class CommutingTuple:
    mats: tuple
    provenance: str
    conjugator: RingMat | None = None

    def __post_init__(self):
        self.mats = tuple(self.mats)
        for x in self.mats:
            if not x.skew:
                raise ValueError("tuple members must carry the skew flag")
        for i in range(len(self.mats)):
            for j in range(i + 1, len(self.mats)):
                if not commute(self.mats[i], self.mats[j]):
                    raise CommutationError(f"members {i} and {j} do not commute")

    @property
    def n(self):
        return self.mats[0].n

    @property
    def d(self):
        return len(self.mats)

    @property
    def ring(self):
        return self.mats[0].ring


def verify_commuting(mats):
    """True iff all pairwise commutators vanish exactly."""
    return all(
        commute(mats[i], mats[j])
        for i in range(len(mats))
        for j in range(i + 1, len(mats))
    )


def cartan_block_matrix(ring, n, params):
    """Block-diagonal skew matrix of 2x2 blocks [[0, a], [-a, 0]], zero-padded for odd n."""
    m = n // 2
    if len(params) != m:
        raise ValueError(f"need {m} block parameters, got {len(params)}")
    z = ring.zero
    rows = [[z] * n for _ in range(n)]
    for p, a in enumerate(params):
        rows[2 * p][2 * p + 1] = a
        rows[2 * p + 1][2 * p] = -a
    return RingMat(ring, rows, skew=True, check=False)


def cayley_orthogonal(a):
    """Q = (I - A)(I + A)^{-1} for skew A; exactly orthogonal with det +1."""
    if not a.skew:
        raise ValueError("the Cayley seed must be skew")
    ident = RingMat.identity(a.ring, a.n)
    return (ident - a) * (ident + a).inverse()


def swap_reflection(ring, n, i=0, j=1):
    """The coordinate swap of axes i and j; orthogonal with det -1."""
    q = RingMat.identity(ring, n)
    q.rows[i][i] = ring.zero
    q.rows[j][j] = ring.zero
    q.rows[i][j] = ring.one
    q.rows[j][i] = ring.one
    return q


def conjugated_cartan_tuple(n, d, params, skew_seed):
    """(Q D_1 Q^t, ..., Q D_d Q^t) for block-Cartan D_k and the Cayley Q of the seed."""
    ring = skew_seed.ring
    q = cayley_orthogonal(skew_seed)
    qt = q.transpose()
    mats = []
    for k in range(d):
        dk = cartan_block_matrix(ring, n, params[k])
        mats.append((q * dk * qt).mark_skew())
    return CommutingTuple(mats, "conjugated-cartan", conjugator=q)


def random_cartan_tuple(field, n, d, rng, bound=9):
    """Random conjugated Cartan tuple over a field; retries singular Cayley seeds."""
    m = n // 2
    while True:
        params = [
            [field.rand(rng, bound) for _ in range(m)] for _ in range(d)
        ]
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                upper[(i, j)] = field.rand(rng, bound)
        seed = RingMat.from_upper(field, n, upper)
        try:
            return conjugated_cartan_tuple(n, d, params, seed)
        except SingularMatrixError:
            continue


def random_dual_cartan_tuple(dring, n, d, rng, bound=9):
    """Cartan tuple with dual-number block parameters, conjugated by a lifted
    rational Cayley transform (inversion stays in the base field)."""
    base = dring.field
    m = n // 2
    while True:
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                upper[(i, j)] = base.rand(rng, bound)
        seed = RingMat.from_upper(base, n, upper)
        try:
            q0 = cayley_orthogonal(seed)
        except SingularMatrixError:
            continue
        break
    q = RingMat(dring, [[DualNumber(dring, e) for e in row] for row in q0.rows])
    qt = q.transpose()
    mats = []
    for _ in range(d):
        params = [
            DualNumber(dring, base.rand(rng, bound), base.rand(rng, bound))
            for _ in range(m)
        ]
        dk = cartan_block_matrix(dring, n, params)
        mats.append((q * dk * qt).mark_skew())
    return CommutingTuple(mats, "conjugated-cartan", conjugator=q)


def _bilinear(u, v):
    acc = None
    for a, b in zip(u, v):
        t = a * b
        acc = t if acc is None else acc + t
    return acc


def nilpotent_isotropic_tuple(n, d, u, vs):
    """X_j = u v_j^t - v_j u^t from mutually isotropic vectors; each X_j is a
    skew nilpotent and all pairwise products vanish."""
    vecs = [("u", u)] + [(f"v{j + 1}", v) for j, v in enumerate(vs)]
    for a in range(len(vecs)):
        for b in range(a, len(vecs)):
            na, va = vecs[a]
            nb, vb = vecs[b]
            if _bilinear(va, vb):
                raise IsotropyError(f"{na}^t {nb} is nonzero")
    mats = []
    for v in vs:
        rows = [
            [u[i] * v[j] - v[i] * u[j] for j in range(n)] for i in range(n)
        ]
        mats.append(RingMat(QI, rows, skew=True))
    for i in range(len(mats)):
        for j in range(len(mats)):
            prod = mats[i] * mats[j]
            if any(any(e for e in row) for row in prod.rows):
                raise CommutationError(f"product of members {i} and {j} is nonzero")
    return CommutingTuple(mats, "nilpotent-isotropic")


def random_nilpotent_tuple(n, d, rng, bound=9):
    """Random isotropic-vector tuple over Q(i): u spans the first paired plane,
    the v_j live in the remaining paired planes."""
    if n < 4:
        raise ValueError("the nilpotent construction needs n >= 4")
    pairs = [(2 * p, 2 * p + 1) for p in range(1, n // 2)]
    zero = QI.zero
    one = QI.one
    i = QI.i
    u = [zero] * n
    u[0] = one
    u[1] = i
    vs = []
    for _ in range(d):
        v = [zero] * n
        while all(not x for x in v):
            v = [zero] * n
            for (p, q) in pairs:
                a = Gaussian(rng.randint(-bound, bound))
                b = Gaussian(rng.randint(-bound, bound))
                # a*(e_p + i e_q) + b*(i e_p - e_q): isotropic plane combinations
                v[p] = v[p] + a + b * i
                v[q] = v[q] + a * i - b
        vs.append(v)
    return nilpotent_isotropic_tuple(n, d, u, vs)
