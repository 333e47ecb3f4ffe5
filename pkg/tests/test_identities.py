import random

import pytest
from gmpy2 import mpq

from skewalg.rings import GF, QI, QQ
from skewalg.multipoly import PolyRing
from skewalg.skewlin import DualNumber, DualRing, RingMat
from skewalg.commfam import (
    cayley_orthogonal,
    random_cartan_tuple,
    random_dual_cartan_tuple,
    random_nilpotent_tuple,
    swap_reflection,
)
from skewalg.identities import (
    SetPartition,
    SuiteReport,
    check_conjugation_invariance,
    check_det_vanishing_odd,
    check_pf_multiplicative,
    check_sqrt_degree_bound,
    check_trace_identity,
    enumerate_set_partitions,
    f_series_at,
    h_series_at,
    matrix_substitute,
)


def bell_oracle(m):
    # Bell numbers by the triangle recurrence; B(m) ends the m-th row
    row = [1]
    for _ in range(m - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def test_partitions_of_three():
    parts = enumerate_set_partitions(3)
    assert len(parts) == 5
    expected = {
        ((1, 2, 3),), ((1, 2), (3,)), ((1, 3), (2,)), ((1,), (2, 3)),
        ((1,), (2,), (3,)),
    }
    assert {p.blocks for p in parts} == expected


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_partition_count_is_bell(m):
    assert len(enumerate_set_partitions(m)) == bell_oracle(m)


def test_partition_canonical_form():
    p = SetPartition([[3, 1], [2]])
    assert p.blocks == ((1, 3), (2,))
    assert p.h == 2
    with pytest.raises(ValueError):
        SetPartition([[1], [1, 2]])


def test_suite_report_pass_iff_no_counterexample():
    rep = SuiteReport("demo", {})
    assert rep.passed
    rep.counterexample = {"claim": "x"}
    assert not rep.passed
    doc = rep.to_json()
    assert doc["pass"] is False


def test_degree_bound_small_cartan():
    rng = random.Random(0)
    tup = random_cartan_tuple(QQ, 2, 1, rng)
    rep = check_sqrt_degree_bound(tup, 4, 3)
    assert rep.passed
    assert rep.params["observed_degree"] <= 1


def test_degree_bound_nilpotent():
    rng = random.Random(1)
    tup = random_nilpotent_tuple(4, 2, rng)
    rep = check_sqrt_degree_bound(tup, 4, 4)
    assert rep.passed
    assert rep.params["observed_degree"] <= 2


def test_degree_bound_needs_headroom():
    rng = random.Random(2)
    tup = random_cartan_tuple(QQ, 4, 1, rng)
    with pytest.raises(ValueError):
        check_sqrt_degree_bound(tup, 4, 2)


def test_det_vanishing_single_variable():
    rng = random.Random(3)
    tup = random_cartan_tuple(QQ, 3, 1, rng)
    ring = PolyRing(QQ, ["z1"])
    rep = check_det_vanishing_odd(tup, ring.var("z1"))
    assert rep.passed


def test_det_vanishing_two_variables():
    rng = random.Random(4)
    tup = random_cartan_tuple(QQ, 3, 2, rng)
    ring = PolyRing(QQ, ["z1", "z2"])
    f = ring.var("z1") * ring.var("z2") + ring.var("z2") ** 3
    assert check_det_vanishing_odd(tup, f).passed


def test_det_vanishing_nilpotent_n5():
    rng = random.Random(5)
    tup = random_nilpotent_tuple(5, 2, rng)
    ring = PolyRing(QQ, ["z1", "z2"])
    f = ring.var("z1") + ring.var("z2")
    assert check_det_vanishing_odd(tup, f).passed


def test_det_vanishing_rejects_constant_term():
    rng = random.Random(6)
    tup = random_cartan_tuple(QQ, 3, 1, rng)
    ring = PolyRing(QQ, ["z1"])
    with pytest.raises(ValueError):
        check_det_vanishing_odd(tup, ring.var("z1") + 1)


def test_matrix_substitute_matches_hand_expansion():
    rng = random.Random(7)
    tup = random_cartan_tuple(QQ, 4, 2, rng)
    x1, x2 = tup.mats
    ring = PolyRing(QQ, ["z1", "z2"])
    f = ring.var("z1") ** 2 * ring.var("z2") - 3 * ring.var("z2")
    assert matrix_substitute(f, tup.mats) == x1 * x1 * x2 - x2.scale(mpq(3))


def test_pf_multiplicative_symbolic_2x2():
    ring = PolyRing(QQ, ["a1", "a2", "a3"])
    xs = [RingMat.from_upper(ring, 2, {(0, 1): ring.var(f"a{i}")}) for i in (1, 2, 3)]
    prod = (xs[0] * xs[1] * xs[2]).mark_skew()
    lhs = prod.pf_matchings()
    assert lhs == -(ring.var("a1") * ring.var("a2") * ring.var("a3"))
    assert check_pf_multiplicative(*xs).passed


def test_pf_multiplicative_with_zero_factor():
    rng = random.Random(8)
    tup = random_cartan_tuple(QQ, 4, 2, rng)
    zero = RingMat.zeros(QQ, 4)
    assert check_pf_multiplicative(tup.mats[0], tup.mats[1], zero).passed


def test_pf_multiplicative_dual_numbers():
    rng = random.Random(9)
    tup = random_dual_cartan_tuple(DualRing(QQ), 4, 3, rng)
    assert check_pf_multiplicative(*tup.mats).passed


def test_pf_multiplicative_prime_field():
    rng = random.Random(10)
    tup = random_cartan_tuple(GF(101), 6, 3, rng)
    assert check_pf_multiplicative(*tup.mats).passed


def test_trace_identity_displayed_rearrangement():
    # 2tr(Y1)tr(Y2Y3) + 2tr(Y2)tr(Y1Y3) + 2tr(Y3)tr(Y1Y2)
    #   = 8tr(Y1Y2Y3) + tr(Y1)tr(Y2)tr(Y3) with Y_i = X_i^2, n = 4
    rng = random.Random(11)
    tup = random_cartan_tuple(QQ, 4, 3, rng)
    y = [x * x for x in tup.mats]
    t = lambda m: m.trace()
    lhs = 2 * t(y[0]) * t(y[1] * y[2]) + 2 * t(y[1]) * t(y[0] * y[2]) + \
        2 * t(y[2]) * t(y[0] * y[1])
    rhs = 8 * t(y[0] * y[1] * y[2]) + t(y[0]) * t(y[1]) * t(y[2])
    assert lhs == rhs
    rep = check_trace_identity(tup, [[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert rep.passed


def test_trace_identity_n2_quarter_half():
    # m = 2: (1/4) tr(Y1) tr(Y2) = (1/2) tr(Y1 Y2) on commuting even monomials
    rng = random.Random(12)
    tup = random_cartan_tuple(QQ, 2, 1, rng)
    x = tup.mats[0]
    y1, y2 = x * x, x * x * x * x
    assert y1.trace() * y2.trace() * mpq(1, 4) == (y1 * y2).trace() * mpq(1, 2)
    assert check_trace_identity(tup, [[2, 4]]).passed


def test_trace_identity_zero_member():
    params = [[mpq(0), mpq(0)], [mpq(1), mpq(2)], [mpq(3), mpq(1)]]
    from skewalg.commfam import conjugated_cartan_tuple

    tup = conjugated_cartan_tuple(4, 3, params, RingMat.zeros(QQ, 4))
    rep = check_trace_identity(tup, [[2, 2, 2], [0, 2, 0], [0, 0, 2]])
    assert rep.passed


def test_trace_identity_validates_columns():
    rng = random.Random(13)
    tup = random_cartan_tuple(QQ, 4, 2, rng)
    with pytest.raises(ValueError):
        check_trace_identity(tup, [[1, 0, 0], [0, 2, 0]])
    with pytest.raises(ValueError):
        check_trace_identity(tup, [[2, 0], [0, 2]])


def test_trace_identity_skips_small_prime():
    rng = random.Random(14)
    tup = random_cartan_tuple(GF(3), 6, 1, rng)
    rep = check_trace_identity(tup, [[2, 2, 2, 2]])
    assert rep.skipped and "p <= m" in rep.reason
    assert rep.passed


def test_conjugation_identity_matrix():
    rng = random.Random(15)
    tup = random_cartan_tuple(QQ, 2, 1, rng)
    assert check_conjugation_invariance(tup, RingMat.identity(QQ, 2), 3, 2).passed


def test_conjugation_cayley():
    rng = random.Random(16)
    tup = random_cartan_tuple(QQ, 4, 2, rng)
    upper = {(i, j): QQ.rand(rng, 5) for i in range(4) for j in range(i + 1, 4)}
    q = cayley_orthogonal(RingMat.from_upper(QQ, 4, upper))
    assert check_conjugation_invariance(tup, q, 3, 2).passed


def test_conjugation_swap_negates_pfaffian_series():
    rng = random.Random(17)
    tup = random_cartan_tuple(QQ, 2, 1, rng)
    q = swap_reflection(QQ, 2)
    rep = check_conjugation_invariance(tup, q, 3, 2)
    assert rep.passed
    h = h_series_at(tup.mats, 3, 2)
    conj = [(q * x * q.transpose()).mark_skew() for x in tup.mats]
    assert h_series_at(conj, 3, 2) == h.scale(mpq(-1))


def test_conjugation_rejects_non_orthogonal():
    rng = random.Random(18)
    tup = random_cartan_tuple(QQ, 2, 1, rng)
    with pytest.raises(ValueError):
        check_conjugation_invariance(tup, RingMat(QQ, [[mpq(2), mpq(0)], [mpq(0), mpq(1)]]), 3, 2)


def test_specialized_series_constant_coeff():
    rng = random.Random(19)
    tup = random_cartan_tuple(QQ, 3, 2, rng)
    f = f_series_at(tup.mats, 4, 3)
    assert f.constant_coeff() == QQ.one


def test_specialized_pfaffian_series_is_homogeneous():
    rng = random.Random(20)
    tup = random_cartan_tuple(QQ, 4, 1, rng)
    h = h_series_at(tup.mats, 3, 3)
    assert all(sum(mult for _, mult in m) == 2 for m in h.terms)
