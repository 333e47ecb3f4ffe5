import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from skewalg.rings import (
    GF,
    QI,
    QQ,
    FieldMismatchError,
    Fp,
    Gaussian,
    field_by_name,
    format_scalar,
    parse_scalar,
    scalar_add,
    scalar_inv,
    scalar_is_zero,
    scalar_mul,
)

rationals = st.builds(mpq, st.integers(-50, 50), st.integers(1, 30))
gaussians = st.builds(Gaussian, rationals, rationals)
fp101 = st.builds(lambda v: Fp(v, 101), st.integers(0, 100))


def test_rational_add():
    assert scalar_add(mpq(1, 2), mpq(1, 3)) == mpq(5, 6)


def test_sqrt_minus_one_squares_to_minus_one():
    assert scalar_mul(QI.i, QI.i) == Gaussian(-1)


def test_prime_field_mul():
    assert scalar_mul(GF(5).from_int(3), GF(5).from_int(4)) == GF(5).from_int(2)


def test_is_zero():
    assert scalar_is_zero(mpq(0))
    assert not scalar_is_zero(mpq(2, 4))
    assert scalar_is_zero(Fp(14, 7))


def test_rational_normalization_is_canonical():
    assert mpq(2, 4) == mpq(1, 2)
    assert str(mpq(2, 4)) == "1/2"
    assert str(mpq(3, -6)) == "-1/2"


def test_mixed_field_operations_raise():
    with pytest.raises(FieldMismatchError):
        scalar_add(mpq(1, 2), Fp(1, 5))
    with pytest.raises(FieldMismatchError):
        scalar_mul(Gaussian(1), Fp(1, 5))
    with pytest.raises(FieldMismatchError):
        Fp(1, 5) + Fp(1, 7)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        scalar_inv(mpq(0))
    with pytest.raises(ZeroDivisionError):
        scalar_inv(Gaussian(0))
    with pytest.raises(ZeroDivisionError):
        Fp(0, 7).inv()


def test_modulus_must_be_odd_prime():
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(2)


@pytest.mark.parametrize("name", ["q", "qi", "fp:101"])
def test_field_by_name(name):
    assert field_by_name(name).name == name


@pytest.mark.parametrize(
    "strategy,field",
    [(rationals, QQ), (gaussians, QI), (fp101, GF(101))],
    ids=["q", "qi", "fp101"],
)
def test_field_axioms(strategy, field):
    @given(strategy, strategy, strategy)
    def axioms(a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + field.zero == a
        assert a * field.one == a
        assert a + (-a) == field.zero
        if a:
            assert a * field.inv(a) == field.one

    axioms()


@given(rationals)
def test_rational_text_roundtrip(a):
    assert parse_scalar(format_scalar(a), QQ) == a


@given(gaussians)
def test_gaussian_text_roundtrip(a):
    assert parse_scalar(format_scalar(a), QI) == a


@given(fp101)
def test_fp_text_roundtrip(a):
    assert parse_scalar(format_scalar(a), GF(101)) == a


def test_scalar_text_examples():
    assert format_scalar(mpq(5, 6)) == "5/6"
    assert format_scalar(mpq(5)) == "5"
    assert format_scalar(Gaussian(mpq(1, 2), mpq(3, 4))) == "1/2+3/4 i"
    assert format_scalar(Fp(3, 7)) == "3 mod 7"
    assert parse_scalar("i", QI) == QI.i
