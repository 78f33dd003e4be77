import pytest
from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from askey_wilson.errors import (
    AskeyWilsonError,
    DegenerateSpectrum,
    EmptyIsotype,
)
from askey_wilson.laurent import LaurentPoly, leading_term, weyl_denominator
from askey_wilson.operators import apply_expr, named_expr
from askey_wilson.params import check_genericity, gamma, make_params, shifted_params, xval
from askey_wilson.polys import (
    antisym_series,
    dual_value,
    ev_closed,
    ev_value,
    nonsym,
    renormalize,
    sym_series,
    sym_series_abcd,
    symmetrize,
    t1_action_constants,
)

# Coefficients obtained by solving Y f = gamma_m f for a monic ansatz in sympy.
ORACLE = {
    -1: {-1: 1, 0: mpq(1513, 3024)},
    1: {-1: mpq(23, 132), 0: mpq(16861, 49896), 1: 1},
    -2: {-2: 1, -1: mpq(36749, 50274), 0: mpq(11009963, 14252679), 1: mpq(10376, 25137)},
    2: {-2: mpq(87, 2132), -1: mpq(373265, 4466007), 0: mpq(9771931153, 40515615504),
        1: mpq(313325, 805896), 2: 1},
    -3: {-3: 1, -2: mpq(209071, 268758), -1: mpq(12531868291, 13536937323),
         0: mpq(56644485065624, 78525690804981), 1: mpq(29529501104, 40610811969),
         2: mpq(159104, 403137)},
}
ORACLE_SYM2 = {2: 1, 1: mpq(157805, 201096), 0: mpq(223972403, 228042864),
               -1: mpq(157805, 201096), -2: 1}


@pytest.mark.parametrize("m", sorted(ORACLE))
@pytest.mark.parametrize("method", ["triangular", "rodrigues", "series"])
def test_frozen_nonsymmetric(t, m, method):
    assert nonsym(t, m, method).poly == LaurentPoly(ORACLE[m])


def test_frozen_symmetric(t):
    assert symmetrize(t, 2).poly == LaurentPoly(ORACLE_SYM2)
    assert sym_series(t, 2).poly == LaurentPoly(ORACLE_SYM2)


def test_degree_zero(t):
    one = LaurentPoly.constant(1)
    assert nonsym(t, 0).poly == one
    assert nonsym(t, 0, "series").poly == one
    assert symmetrize(t, 0).poly == one
    assert sym_series(t, 0).poly == one


@pytest.mark.parametrize("m", range(-5, 6))
def test_eigen_and_monic(t, m):
    P = nonsym(t, m).poly
    assert apply_expr("Y", P, t) == P.scale(gamma(t, m))
    assert leading_term(P) == (m, 1)


def test_isotypes(t):
    Cp = named_expr("Cplus", t)
    for m in range(1, 5):
        assert symmetrize(t, m).poly.is_symmetric()
        assert apply_expr(Cp, symmetrize(t, m, "-").poly, t).is_zero()
        assert antisym_series(t, m).poly == symmetrize(t, m, "-").poly
    with pytest.raises(EmptyIsotype):
        symmetrize(t, 0, "-")
    with pytest.raises(EmptyIsotype):
        antisym_series(t, 0)


def test_weyl_character(t):
    ts = shifted_params(t)
    for m in range(1, 5):
        assert symmetrize(t, m, "-").poly == weyl_denominator(t) * symmetrize(ts, m - 1).poly


def test_t1_action(t):
    for m in (-3, -1, 2, 4):
        alpha, beta = t1_action_constants(t, m)
        lhs = apply_expr("T1", nonsym(t, m).poly, t)
        assert lhs == nonsym(t, m).poly.scale(alpha) + nonsym(t, -m).poly.scale(beta)


def test_evaluation(t):
    # direct evaluation of the oracle coefficients at x = 2
    assert ev_value(LaurentPoly(ORACLE[2]), t) == mpq(25680631625, 5064451938)
    assert ev_closed(t, 2) == mpq(25680631625, 5064451938)
    assert ev_closed(t, -1) == mpq(3025, 3024)
    for m in range(-6, 7):
        assert ev_value(nonsym(t, m), t) == ev_closed(t, m)
    for m in range(7):
        assert ev_closed(t, m, "sym") == symmetrize(t, m)(t.a)


def test_renormalized(t):
    for m in range(-4, 5):
        E = renormalize(t, m)
        assert E(1 / t.a) == 1
    for m in range(4):
        assert renormalize(t, m, True)(t.a) == 1
        assert renormalize(t, -m, True).poly == renormalize(t, m, True).poly


def test_duality_samples(t):
    lhs, rhs = dual_value(t, 2, -3)
    assert lhs == rhs == mpq(1127677227619753, 8415029370880)
    lhs, rhs = dual_value(t, 3, 1, symmetric=True)
    assert lhs == rhs


def test_degenerate_spectrum():
    # k0 k1 = 1/q makes gamma_1 = gamma_-1
    t = make_params("1/2", 2, 2, "5/7", "3/4")
    with pytest.raises(DegenerateSpectrum):
        nonsym(t, 1)


def test_unknown_method(t):
    with pytest.raises(ValueError):
        nonsym(t, 1, "guess")


@pytest.mark.parametrize("perm", [(1, 0, 2, 3), (2, 3, 0, 1), (3, 1, 2, 0)])
def test_series_symmetric_in_abcd(t, perm):
    abcd = t.abcd
    for m in range(1, 4):
        shuffled = [abcd[i] for i in perm]
        assert sym_series_abcd(*shuffled, t.q, m) == symmetrize(t, m).poly


rationals = st.fractions(min_value=mpq(-5, 2), max_value=mpq(5, 2), max_denominator=7).filter(
    lambda v: v != 0)


@given(rationals, rationals, rationals, rationals, st.integers(-2, 2))
def test_routes_agree_for_random_parameters(k0, k1, u0, u1, m):
    t = make_params("1/3", *(mpq(v.numerator, v.denominator) for v in (k0, k1, u0, u1)))
    assume(not check_genericity(t, 12))
    try:
        ref = nonsym(t, m).poly
        assert nonsym(t, m, "series").poly == ref
        assert nonsym(t, m, "rodrigues").poly == ref
    except AskeyWilsonError:
        assume(False)


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_duality_property(m, n):
    from askey_wilson.params import fixture_f1
    lhs, rhs = dual_value(fixture_f1(), m, n)
    assert lhs == rhs


def test_dual_spectrum_points(t):
    assert xval(t, 0) == t.a
