import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from skewalg.rings import QQ
from skewalg.multipoly import PolyRing
from skewalg.skewlin import RingMat
from skewalg.tseries import (
    DivisibilityError,
    RingMismatchError,
    TSeries,
    det_one_plus,
    even_weight_indices,
    mono_of,
    odd_weight_indices,
    series_matrix,
    weight_parity,
)


def ser(trunc, terms):
    return TSeries(QQ, trunc, {m: mpq(c) for m, c in terms.items() if c})


TA = mono_of((2,))
TB = mono_of((4,))


def test_weight_index_alphabets():
    assert even_weight_indices(1, 4) == [(2,), (4,)]
    assert odd_weight_indices(1, 3) == [(1,), (3,)]
    assert even_weight_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert weight_parity((1, 2)) == "odd"


def test_mul_difference_of_squares():
    one = TSeries.one(QQ, 2)
    ta = TSeries.var(QQ, 2, (2,))
    prod = (one + ta) * (one - ta)
    assert prod == ser(2, {(): 1, (((2,), 2),): -1})


def test_mul_truncation_drops_cross_term():
    one = TSeries.one(QQ, 1)
    ta = TSeries.var(QQ, 1, (2,))
    tb = TSeries.var(QQ, 1, (4,))
    assert (one + ta) * (one + tb) == ser(1, {(): 1, TA: 1, TB: 1})


def test_square_of_single_factor_series():
    # direct square oracle for a one-slot product series
    ring = PolyRing(QQ, ["x"])
    x = ring.var("x")
    n = TSeries(ring, 2, {(): ring.one, TA: x**2})
    sq = n * n
    assert sq == TSeries(ring, 2, {(): ring.one, TA: 2 * x**2, (((2,), 2),): x**4})


def test_ring_mismatch_raises():
    with pytest.raises(RingMismatchError):
        TSeries.one(QQ, 2) + TSeries.one(PolyRing(QQ, ["x"]), 2)


def test_sqrt_of_one_is_one():
    assert TSeries.one(QQ, 3).sqrt() == TSeries.one(QQ, 3)


def test_sqrt_of_square_is_unique_normalized_root():
    one = TSeries.one(QQ, 3)
    ta = TSeries.var(QQ, 3, (2,))
    assert ((one + ta) * (one + ta)).sqrt() == one + ta


def test_sqrt_frozen_binomial_coefficients():
    g = TSeries.one(QQ, 3) + TSeries.var(QQ, 3, (2,))
    f = g.sqrt()
    assert f == ser(3, {(): 1, (((2,), 1),): mpq(1, 2),
                        (((2,), 2),): mpq(-1, 8), (((2,), 3),): mpq(1, 16)})


def test_sqrt_requires_unit_constant():
    with pytest.raises(ValueError):
        TSeries.var(QQ, 2, (2,)).sqrt()
    with pytest.raises(ValueError):
        (TSeries.one(QQ, 2).scale(mpq(4))).sqrt()


random_series = st.builds(
    lambda terms: TSeries.one(QQ, 3) + TSeries(
        QQ, 3,
        {m: mpq(c) for m, c in terms.items() if c},
    ),
    st.dictionaries(
        st.sampled_from([
            mono_of((2,)), mono_of((4,)), mono_of((2,), 2),
            (((2,), 1), ((4,), 1)), mono_of((2,), 3),
        ]),
        st.integers(-9, 9),
        max_size=4,
    ),
)


@given(random_series)
def test_sqrt_squares_back(g):
    f = g.sqrt()
    assert f * f == g
    assert f.constant_coeff() == QQ.one


@given(random_series)
def test_sqrt_uniqueness_under_normalization(g):
    # two normalized roots of the same square agree up to truncation
    assert (g * g).sqrt() == g


def test_degree():
    assert TSeries.one(QQ, 3).degree() == 0
    assert TSeries.zero(QQ, 3).degree() == 0
    f = ser(3, {(((2,), 1), ((4,), 1)): 5})
    assert f.degree() == 2


def test_eval_full_point():
    f = TSeries.one(QQ, 2) + ser(2, {(((2,), 1), ((4,), 1)): 1})
    assert f.eval({(2,): mpq(2), (4,): mpq(3)}) == 7


def test_eval_at_zero_point_is_constant_coeff():
    f = ser(3, {(): 7, TA: 5, TB: -2})
    assert f.eval({}) == 7


def test_eval_is_ring_homomorphism():
    rng = random.Random(0)
    for _ in range(20):
        f = ser(3, {(): rng.randint(-4, 4), TA: rng.randint(-4, 4), TB: rng.randint(-4, 4)})
        g = ser(3, {(): rng.randint(-4, 4), TA: rng.randint(-4, 4),
                    mono_of((2,), 2): rng.randint(-4, 4)})
        pt = {(2,): mpq(rng.randint(-3, 3)), (4,): mpq(rng.randint(-3, 3))}
        assert (f * g).eval(pt) == f.eval(pt) * g.eval(pt)


def test_extract_power():
    ring = PolyRing(QQ, ["y"])
    y = ring.var("y")
    f = TSeries(ring, 2, {(): y**2, TA: y**2})
    assert f.extract_power(2, "y") == TSeries(ring, 2, {(): ring.one, TA: ring.one})


def test_extract_power_reports_offending_monomial():
    ring = PolyRing(QQ, ["y"])
    y = ring.var("y")
    f = TSeries(ring, 2, {(): y, TA: ring.one})
    with pytest.raises(DivisibilityError, match="T2"):
        f.extract_power(1, "y")


def test_square_root_of_pure_power_is_signed_power():
    # if f^2 = y^(2n) then f = +/- y^n: both signs square back, and any
    # normalized root of 1 is 1, so no third solution exists
    ring = PolyRing(QQ, ["y"])
    y = ring.var("y")
    n = 2
    for sign in (1, -1):
        f = TSeries(ring, 2, {(): (y**n).scale(mpq(sign))})
        sq = f * f
        assert sq == TSeries(ring, 2, {(): y ** (2 * n)})
        g = f.extract_power(n, "y")
        assert g == TSeries(ring, 2, {(): ring.from_int(sign)})
        assert g * g == TSeries.one(ring, 2)
    assert TSeries.one(ring, 2).sqrt() == TSeries.one(ring, 2)


def test_det_one_plus_matches_cofactor():
    rng = random.Random(1)
    idxs = even_weight_indices(2, 2)
    for n in (2, 3, 4):
        for _ in range(3):
            entries = []
            for i in range(n):
                row = []
                for j in range(n):
                    terms = {}
                    for idx in idxs:
                        c = mpq(rng.randint(-3, 3))
                        if c:
                            terms[mono_of(idx)] = c
                    row.append(TSeries(QQ, 3, terms))
                entries.append(row)
            L = series_matrix(entries, QQ, 3)
            ident = RingMat.identity(L.ring, n)
            assert det_one_plus(L) == (ident + L).det_cofactor()


def test_json_roundtrip():
    ring = PolyRing(QQ, ["x"])
    x = ring.var("x")
    f = TSeries(ring, 3, {(): ring.one, TA: x**2, (((2,), 1), ((4,), 1)): -x})
    doc = f.to_json(ring.format)
    assert doc["trunc"] == 3
    assert doc["parity"] == "even"
    back = TSeries.from_json(doc, ring, ring.parse)
    assert back == f


def test_parity_classes():
    assert TSeries.var(QQ, 2, (2,)).parity == "even"
    assert TSeries.var(QQ, 2, (1,)).parity == "odd"
    mixed = TSeries.var(QQ, 2, (2,)) + TSeries.var(QQ, 2, (1,))
    assert mixed.parity == "mixed"
