import pytest
from gmpy2 import mpfr
from hypothesis import given
from hypothesis import strategies as st

from askey_wilson.errors import (
    ContourUnsupported,
    PoleEvaluation,
    QuadratureNotConverged,
)
from askey_wilson.forms import (
    QuadratureSettings,
    constant_term_closed,
    diagonal_closed,
    pair,
    relative_gap,
    residue_contour,
    residue_weight,
    weight,
)
from askey_wilson.laurent import LaurentPoly
from askey_wilson.params import dual_params, fixture_f1, make_params, precision
from askey_wilson.polys import nonsym, symmetrize

one = LaurentPoly.constant(1)

# mpmath values at 40 digits: closed product and adaptive quadrature agree.
CONSTANT_TERM_F1 = mpfr("1.89039220369988847071435575788653057985493628", 256)
CONSTANT_TERM_NEAR_SPECIAL = mpfr("1.0102623838195113957551030415333640456354941503", 256)

# mpmath quadrature of x^j against Delta over the unit circle at F1.
ANGLE_MOMENTS_F1 = {
    -2: "-0.414026626254923903866699596177",
    -1: "-0.683093111672786344989724121874",
    0: "1.36528325822769722884925693625",
    1: "-0.342336650314534200983779454998",
    2: "-0.122206878027862725365318550847",
}

# mpmath limit (y - y0) Delta+(y; dual F1) / y at y0 = 1/gamma_m, m >= 0.
RESIDUES_F1 = {
    0: "-0.17405928129638559547065489762475663",
    1: "-1.7636625478848486971083788953354464",
    2: "-8.5455977307138185693545309009547661",
    3: "-35.797590479274444148256520613355204",
}


def test_constant_term_closed_matches_oracle(t):
    assert relative_gap(constant_term_closed(t), CONSTANT_TERM_F1) < 1e-40


def test_constant_term_quadrature(t):
    v = pair(one, one, t, "round")
    assert relative_gap(v.value, CONSTANT_TERM_F1) < 1e-40
    assert v.estimated_error <= 1e-30 * v.scale


def test_constant_term_near_special_point():
    t = make_params("1/2", "99/100", "99/100", 1, 1)
    assert relative_gap(constant_term_closed(t), CONSTANT_TERM_NEAR_SPECIAL) < 1e-40
    assert relative_gap(pair(one, one, t, "round").value, CONSTANT_TERM_NEAR_SPECIAL) < 1e-40


@pytest.mark.parametrize("j", sorted(ANGLE_MOMENTS_F1))
def test_angle_moments(t, j):
    v = pair(LaurentPoly.monomial(j), one, t, "angle").value
    assert relative_gap(v, mpfr(ANGLE_MOMENTS_F1[j], 256)) < 1e-28


@pytest.mark.parametrize("m", sorted(RESIDUES_F1))
def test_residue_weights_match_limit(t, m):
    w = residue_weight(dual_params(t), m, "w_plus")
    assert relative_gap(w, mpfr(RESIDUES_F1[m], 256)) < 1e-30


def test_residue_weights_are_reflection_invariant(t):
    td = dual_params(t)
    for m in range(1, 4):
        assert relative_gap(residue_weight(td, m, "w_plus"), residue_weight(td, -m, "w_plus")) < 1e-60


def test_residue_contour_oracle(t):
    td = dual_params(t)
    for m in (-2, 0, 3):
        assert relative_gap(residue_weight(td, m, "w_plus"), residue_contour(td, m)) < 1e-8


def test_weight_poles_and_regime(t):
    with pytest.raises(PoleEvaluation):
        weight(t, 1, "delta")
    with pytest.raises(PoleEvaluation):
        weight(t, -1, "alpha")
    with pytest.raises(PoleEvaluation):
        weight(t, 2, "delta_plus")  # x = 1/a
    big = make_params(2, "3/5", "2/3", "5/7", "3/4")
    with pytest.raises(ContourUnsupported):
        pair(one, one, big)
    with pytest.raises(ContourUnsupported):
        weight(big, "1/3")


def test_weight_symmetries(t):
    with precision(256):
        x0 = mpfr("0.3", 256)
        assert relative_gap(weight(t, x0), weight(t, 1 / x0)) < 1e-70


def test_not_converged(t):
    s = QuadratureSettings(n0=16, tol=1e-70, max_doublings=1)
    with pytest.raises(QuadratureNotConverged):
        pair(LaurentPoly.monomial(3), one, t, "round", s)


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(n0=48)
    with pytest.raises(ValueError):
        QuadratureSettings(tol=0)


def test_biorthogonality_small(t, ti):
    diag = max(abs(pair(nonsym(t, m), nonsym(ti, m), t).value) for m in range(-2, 3))
    for m in range(-2, 3):
        for n in range(-2, 3):
            if m != n:
                assert abs(pair(nonsym(t, m), nonsym(ti, n), t).value) <= 1e-20 * diag


def test_diagonal_closed_forms(t, ti):
    assert diagonal_closed(t, 0, "sym") == constant_term_closed(t)
    for m in range(1, 3):
        P = symmetrize(t, m).poly
        assert relative_gap(pair(P, P, t, "round").value, diagonal_closed(t, m, "sym")) < 1e-50
        v = pair(nonsym(t, -m), nonsym(ti, -m), t).value
        assert relative_gap(v, diagonal_closed(t, m, "nonsym_neg")) < 1e-50


def test_53_bit_constant_term(t):
    s = QuadratureSettings(bits=53, tol=1e-13, product_tol=2.0 ** -50)
    v = pair(one, one, t, "round", s)
    assert relative_gap(v.value, CONSTANT_TERM_F1) < 1e-10


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_round_form_is_symmetric(fc, gc):
    t = fixture_f1()
    f = LaurentPoly({e - 1: c for e, c in enumerate(fc)})
    g = LaurentPoly({e - 1: c for e, c in enumerate(gc)})
    fg, gf = pair(f, g, t, "round").value, pair(g, f, t, "round").value
    assert abs(fg - gf) <= 1e-50 * max(1, abs(fg))


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_restriction_to_symmetric(coeffs):
    t = fixture_f1()
    f = LaurentPoly({e: c for e, c in enumerate(coeffs)})
    f = f + f.s1()
    angle = pair(f, one, t, "angle").value
    rnd = pair(f, one, t, "round").value
    with precision(256):
        assert abs(angle - (1 - t.a * t.b) / 2 * rnd) <= 1e-50 * max(1, abs(rnd))
