import random

import pytest
from gmpy2 import mpq

from skewalg.rings import QQ
from skewalg.multipoly import MultiPoly, PolyRing
from skewalg.skewlin import RingMat
from skewalg.tseries import TSeries, mono_of, series_matrix
from skewalg.commfam import random_cartan_tuple, random_nilpotent_tuple
from skewalg.witness import (
    AttemptsExhaustedError,
    PfaffianSystemWitness,
    bordered_ring,
    bordered_series_matrix,
    build_a_matrix,
    build_bordered_matrix,
    check_bordered_det_expansion,
    check_diag_perturbation_expansion,
    check_homogenized_sqrt,
    first_factor_series,
    homogenized_det_series,
    pf_minor,
    random_zero_pattern_skew,
    solve_pfaffian_system,
    solve_vanishing_minor_point,
    verify_witness,
)


def t_entry(w, i, j):
    return w.t_matrix.rows[i - 1][j - 1]


def test_solver_d1_succeeds_and_verifies():
    w = solve_pfaffian_system(1, 0)
    assert w.h_second_last == 0
    assert w.h_last and w.det_a
    assert verify_witness(w)


def test_solver_d1_closed_forms():
    # the 4-index minor and det A have known closed forms in the entries
    w = solve_pfaffian_system(1, 0)
    t = lambda i, j: t_entry(w, i, j)
    assert t(1, 2) * t(3, 5) - t(1, 3) * t(2, 5) + t(1, 5) * t(2, 3) == 0
    closed = -(
        (t(3, 5) ** 2 + (t(2, 5) + t(1, 5)) ** 2)
        * (t(3, 5) ** 2 + (t(2, 5) - t(1, 5)) ** 2)
    )
    assert w.det_a == closed


def test_solver_deterministic_per_seed():
    w1 = solve_pfaffian_system(1, 3)
    w2 = solve_pfaffian_system(1, 3)
    assert w1.t_matrix == w2.t_matrix and w1.attempts == w2.attempts


def test_solver_unsatisfiable_nondegeneracy_for_d2():
    # on the vanishing locus the quadratic-form matrix drops rank (at most 3),
    # so the nondegeneracy half of the system rejects every candidate
    with pytest.raises(AttemptsExhaustedError):
        solve_pfaffian_system(2, 0, attempts=8)


def test_vanishing_minor_point_d2():
    p = solve_vanishing_minor_point(2, 0)
    assert pf_minor(p.t_matrix, {5}, oracle=True) == 0
    assert pf_minor(p.t_matrix, {6}, oracle=True) == p.h_last
    assert p.h_last
    assert p.det_a == 0  # the structural rank drop
    assert p.a_matrix == build_a_matrix(p.t_matrix, 2, oracle=True)


def test_a_matrix_is_symmetric():
    w = solve_pfaffian_system(1, 1)
    a = w.a_matrix
    assert a == a.transpose()


def test_bordered_matrix_shape_and_diagonal():
    w = solve_pfaffian_system(1, 0)
    m = build_bordered_matrix(w)
    assert m.n == 6
    perturbed = [i for i in range(6) if m.rows[i][i]]
    assert perturbed == [0, 1, 2]  # 2d + 1 = 3 perturbed rows
    ring = m.ring
    y, x1, x2 = ring.var("y"), ring.var("x1"), ring.var("x2")
    assert m.rows[0][0] == y * x1
    assert m.rows[2][2] == y * (x1 + x2)


def test_bordered_matrix_at_zero_coordinates_is_bordered_witness():
    w = solve_pfaffian_system(1, 0)
    m = build_bordered_matrix(w)
    ring = m.ring
    zeros = {"y": mpq(0), "x0": mpq(0)}
    size = w.size
    for i in range(size):
        for j in range(size):
            val = m.rows[i][j].substitute(zeros)
            assert val == ring.from_scalar(w.t_matrix.rows[i][j])
    border = [m.rows[i][size].substitute(zeros) for i in range(size + 1)]
    expected = [ring.zero] * size + [ring.zero]
    expected[2 * w.d + 1] = ring.one
    assert border == expected


def test_bordered_det_expansion_d1():
    w = solve_pfaffian_system(1, 0)
    rep = check_bordered_det_expansion(w)
    assert rep.passed, rep.counterexample


def test_bordered_det_expansion_d2_at_vanishing_point():
    p = solve_vanishing_minor_point(2, 0)
    rep = check_bordered_det_expansion(p)
    assert rep.passed, rep.counterexample


def test_bordered_det_y2_coefficient_of_x0sq_is_squared_minor():
    w = solve_pfaffian_system(1, 2)
    m = build_bordered_matrix(w)
    det = m.det_bareiss()
    ring = det.ring
    c = det.coeff_of({"y": 2, "x0": 2, "x1": 0, "x2": 0})
    assert c == ring.from_scalar(w.h_last * w.h_last)


def test_diag_expansion_4x4_explicit():
    # size 4: only x1 survives and the expansion has constant and x-degree-2 parts
    rng = random.Random(5)
    t = random_zero_pattern_skew(2, rng)
    rep = check_diag_perturbation_expansion(t)
    assert rep.passed, rep.counterexample


@pytest.mark.parametrize("n,seed", [(2, 0), (2, 1), (3, 0), (3, 1)])
def test_diag_expansion_random(n, seed):
    rng = random.Random(seed)
    t = random_zero_pattern_skew(n, rng)
    rep = check_diag_perturbation_expansion(t)
    assert rep.passed, rep.counterexample


def test_diag_expansion_rejects_bad_pattern():
    rng = random.Random(2)
    upper = {(i, j): mpq(rng.randint(-5, 5)) for i in range(6) for j in range(i + 1, 6)}
    t = RingMat.from_upper(QQ, 6, upper)
    if not t.rows[0][5]:
        t.rows[0][5] = mpq(1)
        t.rows[5][0] = mpq(-1)
    with pytest.raises(ValueError):
        check_diag_perturbation_expansion(t)


def test_homogenized_det_frozen_2x2():
    from skewalg.commfam import conjugated_cartan_tuple

    tup = conjugated_cartan_tuple(2, 1, [[mpq(3)]], RingMat.zeros(QQ, 2))
    ring = PolyRing(QQ, ["T0", "lam"])
    det = homogenized_det_series(tup.mats, 2, 2, ring)
    t0 = ring.var("T0")
    expected = {
        (): t0**4,
        mono_of((2,)): (t0**2).scale(mpq(-18)),
        mono_of((2,), 2): ring.from_int(81),
    }
    assert det == TSeries(ring, 2, expected)


def test_homogenized_sqrt_check_cartan():
    rng = random.Random(6)
    tup = random_cartan_tuple(QQ, 3, 1, rng)
    rep = check_homogenized_sqrt(tup, 4, 3)
    assert rep.passed, rep.counterexample


def test_homogenized_sqrt_check_nilpotent():
    rng = random.Random(7)
    tup = random_nilpotent_tuple(4, 2, rng)
    rep = check_homogenized_sqrt(tup, 2, 4)
    assert rep.passed, rep.counterexample


def handcrafted_witness_with_rational_splitting():
    """A d=1 witness whose quadratic form splits rationally: with the (2,5)
    entry zero, the form matrix is [[0, s], [s, 2*t15^2]] = u v^t + v u^t for
    u = (0, 1), v = (s, t15^2), s = t35^2 + t15^2."""
    vals = {
        (1, 2): mpq(-6), (1, 3): mpq(1), (1, 4): mpq(4), (1, 5): mpq(2),
        (2, 3): mpq(3), (2, 4): mpq(5), (2, 5): mpq(0),
        (3, 4): mpq(7), (3, 5): mpq(1), (4, 5): mpq(2),
    }
    upper = {(i - 1, j - 1): v for (i, j), v in vals.items()}
    t_mat = RingMat.from_upper(QQ, 5, upper)
    assert pf_minor(t_mat, {3}, oracle=True) == 0  # the 4-index minor vanishes
    h_last = pf_minor(t_mat, {4}, oracle=True)
    a_mat = build_a_matrix(t_mat, 1)
    return PfaffianSystemWitness(1, t_mat, mpq(0), h_last, a_mat, a_mat.det(), 0, 1)


def test_handcrafted_witness_splits():
    w = handcrafted_witness_with_rational_splitting()
    assert w.a_matrix == RingMat(QQ, [[mpq(0), mpq(5)], [mpq(5), mpq(8)]])
    # symbolic check: substituting x1 = (y2 - 4 y1)/5, x2 = y1 into the half
    # quadratic form gives exactly y1*y2
    ring = PolyRing(QQ, ["y1", "y2"])
    y1, y2 = ring.gens()
    x1 = (y2 - y1.scale(mpq(4))).scale(mpq(1, 5))
    x2 = y1
    form = (x1 * x2).scale(mpq(5)) + (x2 * x2).scale(mpq(4))
    assert form == y1 * y2


def test_matrix_substituted_bordered_pfaffian_extraction():
    """End to end: substitute commuting matrices into the bordered construction,
    check the Pfaffian is divisible by y^n, and that the extracted series
    squares to the homogenized determinant at y = 0."""
    w = handcrafted_witness_with_rational_splitting()
    n, cap, trunc = 2, 2, 2
    coeff_ring = PolyRing(QQ, ["y", "T0"])
    a = mpq(3)
    x_mat = RingMat.from_upper(QQ, n, {(0, 1): a})
    factors = first_factor_series([x_mat], cap, trunc, coeff_ring)
    f_grid = factors[0]
    x_grid = [[TSeries.from_coeff(coeff_ring, trunc, coeff_ring.from_scalar(e))
               for e in row] for row in x_mat.rows]

    def lin_comb(g1, c1, g2, c2):
        return [[e1.scale(coeff_ring.from_scalar(c1)) + e2.scale(coeff_ring.from_scalar(c2))
                 for e1, e2 in zip(r1, r2)] for r1, r2 in zip(g1, g2)]

    # x1 -> (F - 4 X)/5, x2 -> X, matching the rational splitting above
    x1_grid = lin_comb(f_grid, mpq(1, 5), x_grid, mpq(-4, 5))
    x2_grid = [[e.scale(coeff_ring.one) for e in row] for row in x_grid]
    big = bordered_series_matrix(w, [x1_grid, x2_grid], n, coeff_ring, trunc)
    assert big.n == 12 and big.skew

    pfaffian = big.pf_cayley()
    extracted = pfaffian.extract_power(n, "y")
    det_big = big.det_cofactor()
    y = coeff_ring.var("y")
    assert extracted * extracted * TSeries.from_coeff(coeff_ring, trunc, y ** (2 * n)) == det_big

    at_y0 = extracted.map_coeffs(lambda c: c.substitute({"y": mpq(0)}))
    # the witness is unnormalized, so the square carries the last minor:
    # the extracted value squares to the homogenized determinant with the
    # homogenizing variable rescaled by h_last
    d_series = homogenized_det_series([x_mat], cap, trunc,
                                      PolyRing(QQ, ["T0", "lam"]))
    scale = w.h_last
    d_lifted = d_series.with_coeff_ring(
        coeff_ring, lambda c: _move_t0(c, coeff_ring, scale)
    )
    assert at_y0 * at_y0 == d_lifted
    # the value at T = 0 is a signed scaled power of the homogenizing variable
    t0 = coeff_ring.var("T0")
    top = (t0**n).scale(scale**n)
    assert at_y0.constant_coeff() in (top, -top)


def _move_t0(poly, target_ring, scale):
    image = target_ring.var("T0").scale(scale)
    return poly.substitute({"T0": image, "lam": mpq(0)}, ring=target_ring)


def test_first_factor_series_recomposes_weighted_sum():
    # sum_j X_j * F_j equals the full weighted sum of monomial matrices
    from skewalg.cartan import weighted_sum_matrix
    from skewalg.tseries import even_weight_indices

    rng = random.Random(8)
    tup = random_cartan_tuple(QQ, 4, 2, rng)
    cap, trunc = 3, 2
    coeff_ring = PolyRing(QQ, ["y", "T0"])
    factors = first_factor_series(tup.mats, cap, trunc, coeff_ring)
    n = 4
    total = [[TSeries.zero(coeff_ring, trunc) for _ in range(n)] for _ in range(n)]
    for j, grid in enumerate(factors):
        xj = tup.mats[j]
        for i in range(n):
            for k in range(n):
                acc = total[i][k]
                for l in range(n):
                    if xj.rows[i][l]:
                        acc = acc + grid[l][k].scale(coeff_ring.from_scalar(xj.rows[i][l]))
                total[i][k] = acc
    direct = weighted_sum_matrix(tup.mats, even_weight_indices(2, cap), tup.ring, trunc)
    lifted = [[TSeries(coeff_ring, trunc,
                       {m: coeff_ring.from_scalar(c) for m, c in direct[i][k].terms.items()})
               for k in range(n)] for i in range(n)]
    for i in range(n):
        for k in range(n):
            assert total[i][k] == lifted[i][k]
