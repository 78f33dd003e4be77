import math
from fractions import Fraction

import pytest
from gmpy2 import mpc, mpq
from hypothesis import given
from hypothesis import strategies as st

from askey_wilson.errors import (
    BackendUnsupported,
    DivergentProduct,
    InvalidParameter,
)
from askey_wilson.params import (
    EXACT,
    FLOAT,
    ParameterSet,
    check_genericity,
    dual_params,
    eps,
    fixture_f1,
    gamma,
    inverse_params,
    make_params,
    qpoch,
    qpoch_many,
    scalar_from_json,
    scalar_to_json,
    shifted_params,
    spectral_point,
    to_float,
    to_float_params,
    xval,
)

nonzero_q = st.fractions(min_value=-3, max_value=3, max_denominator=12).filter(lambda v: v != 0)


def test_f1_derived_values(t):
    assert (t.q, t.a, t.b, t.c, t.d) == (mpq(1, 4), mpq(1, 2), mpq(-8, 9), mpq(3, 14), mpq(-21, 50))


def test_unit_multiplicities():
    t = make_params("1/3", 1, 1, 1, 1)
    assert t.abcd == (1, -1, mpq(1, 3), mpq(-1, 3))


def test_zero_parameter_rejected():
    with pytest.raises(InvalidParameter):
        make_params("1/2", "3/5", 0, "5/7", "3/4")


def test_q_equal_one_rejected():
    with pytest.raises(InvalidParameter):
        make_params(-1, 2, 3, 5, 7)


def test_float_backend_needs_53_bits():
    with pytest.raises(InvalidParameter):
        make_params(0.5, 0.6, 0.7, 0.8, 0.9, backend=FLOAT, bits=40)


def test_unknown_backend():
    with pytest.raises(BackendUnsupported):
        make_params(1, 2, 3, 4, 5, backend="interval")


def test_dual_of_f1(t):
    td = dual_params(t)
    assert td.values == (mpq(1, 2), mpq(3, 4), mpq(2, 3), mpq(5, 7), mpq(3, 5))
    assert td.a == mpq(2, 5)


def test_dual_fixed_point():
    t = make_params("1/3", "2/5", "7/4", "3/2", "2/5")
    assert dual_params(t) == t


def test_inverse_of_f1(t):
    assert inverse_params(t).values == (2, mpq(5, 3), mpq(3, 2), mpq(7, 5), mpq(4, 3))
    assert inverse_params(t).q == 4


def test_shifted_params(t):
    ts = shifted_params(t)
    assert ts.values == (t.p, t.k0, t.q * t.k1, t.u0, t.u1)


def test_spectral_points(t):
    assert gamma(t, 0) == mpq(2, 5) and xval(t, 0) == mpq(1, 2)
    assert gamma(t, -1) == 10
    assert xval(t, 2) == mpq(1, 32)
    sp = spectral_point(t, -3)
    assert sp.eps == -1 and sp.gamma == gamma(t, -3)


def test_eps():
    assert [eps(m) for m in (-2, -1, 0, 1)] == [-1, -1, 1, 1]


def test_f1_is_generic(t):
    # independent Fraction scan over |j| <= 50: only a*a = q^1 occurs
    assert check_genericity(t, 50) == []
    assert check_genericity(t, 50, include_squares=True) == ["a·a = q¹"]


def test_genericity_violations():
    assert "k1² = q¹" in check_genericity(make_params("1/2", "3/5", "1/2", "5/7", "3/4"))
    assert "a·a = q⁰" in check_genericity(make_params("1/2", 1, 1, 1, 1))


def test_genericity_float_backend(tf):
    assert check_genericity(tf, 20) == []


def test_qpoch_finite():
    assert qpoch(mpq(7, 3), mpq(1, 5), 0) == 1
    assert qpoch(mpq(1, 4), mpq(1, 4), 2) == mpq(45, 64)
    assert qpoch_many([mpq(1, 2), mpq(1, 3)], mpq(1, 2), 1) == mpq(1, 3)


def test_qpoch_infinite_truncation():
    z, q = to_float(0.5), to_float(0.25)
    full = qpoch(z, q, None, 1e-30)
    doubled = qpoch(z, q, None, 1e-60)
    assert abs(full - doubled) <= 1e-30
    assert qpoch(z, q, math.inf, 1e-30) == full


def test_qpoch_errors():
    with pytest.raises(BackendUnsupported):
        qpoch(mpq(1, 2), mpq(1, 4), None)
    with pytest.raises(DivergentProduct):
        qpoch(to_float(0.5), to_float(2), None)


def test_scalar_json_round_trip():
    assert scalar_from_json(scalar_to_json(mpq(-7, 9))) == mpq(-7, 9)
    z = to_float(mpq(1, 3), 256)
    back = scalar_from_json(scalar_to_json(z))
    assert back == z and isinstance(back, type(mpc(1)))


def test_params_json_round_trip(t, tf):
    assert ParameterSet.from_json(t.to_json()) == t
    back = ParameterSet.from_json(tf.to_json())
    assert back.backend == FLOAT and back.values == tf.values


def test_float_params_agree(t, tf):
    assert tf.backend == FLOAT and t.backend == EXACT
    for e, f in zip(t.abcd, tf.abcd):
        assert abs(to_float(e) - f) < 1e-70


@given(nonzero_q, nonzero_q, nonzero_q, nonzero_q, nonzero_q)
def test_dual_and_inverse_are_involutions(p, k0, k1, u0, u1):
    if p * p == 1:
        return
    t = make_params(*(mpq(v.numerator, v.denominator) for v in (p, k0, k1, u0, u1)))
    assert dual_params(dual_params(t)) == t
    assert inverse_params(inverse_params(t)) == t
    assert t.a * t.b == -t.k1 ** 2
    assert t.c * t.d == -t.q * t.k0 ** 2


@given(st.integers(-12, 12))
def test_gamma_reflections(m):
    t = fixture_f1()
    # s1 gamma_m = gamma_{-m} is the inverse for m != 0
    if m != 0:
        assert gamma(t, m) * gamma(t, -m) == 1
    if m != -1:
        assert gamma(t, m + 1) == gamma(t, m) * t.q


@given(st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=50),
       st.integers(0, 6), st.integers(0, 6))
def test_qpoch_splits(z, n1, n2):
    z, q = mpq(z.numerator, z.denominator), mpq(1, 3)
    assert qpoch(z, q, n1 + n2) == qpoch(z, q, n1) * qpoch(z * q ** n1, q, n2)


def test_float_conversion(t):
    tf = to_float_params(t, 128)
    assert tf.bits == 128
