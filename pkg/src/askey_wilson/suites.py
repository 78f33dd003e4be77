"""Verification suites grouping the identity checks by module.

Each suite returns a :class:`VerificationReport`.  Algebraic suites run on
the exact backend; analytic suites use quadrature at the configured
precision and compare relative gaps against ``tol``.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass


from gmpy2 import mpfr, mpq

from .forms import (
    QuadratureSettings,
    constant_term_closed,
    diagonal_closed,
    grand_ratio_closed,
    inverse_weyl_denominator,
    norm_recursion_closed,
    pair,
    relative_gap,
    residue_contour,
    residue_weight,
    shifted_abcd_params,
    weight,
)
from .laurent import LaurentPoly, leading_term, weyl_denominator
from .operators import apply_expr, apply_L, apply_shift, h_value, verify_relations
from .params import (
    EXACT,
    ParameterSet,
    dual_params,
    gamma,
    inverse_params,
    is_exact,
    make_params,
    precision,
    shifted_params,
    to_exact,
    to_float,
)
from .polys import (
    antisym_series,
    dual_value,
    ev_closed,
    ev_value,
    nonsym,
    renormalize,
    sym_series,
    symmetrize,
    t1_action_constants,
    t1_on_E,
    t1v_on_E,
)
from .report import EXACT_RESIDUAL, VerificationReport
from .transform import (
    forward,
    forward_sym,
    inverse,
    inverse_sym,
    inversion_constant,
    spectral_T0,
    spectral_T1,
    spectral_z,
)

SUITES = ("hecke", "polys", "forms", "transform")


@dataclass(frozen=True)
class SuiteConfig:
    """Inputs shared by every suite."""

    params: ParameterSet
    max_degree: int = 6
    tol: float = 1e-10
    bits: int = 256

    @property
    def exact(self) -> ParameterSet:
        t = self.params
        return t if t.backend == EXACT else make_params(*map(_to_q, t.values))

    @property
    def quadrature(self) -> QuadratureSettings:
        return QuadratureSettings(tol=max(1e-30, 2.0 ** -(self.bits - 12)), bits=self.bits)


def _to_q(v):
    """Exact rational equal to a real float parameter (or the rational itself)."""
    if is_exact(v):
        return to_exact(v)
    return mpq(*mpfr(v.real).as_integer_ratio())


def _exact_all(pairs):
    """Verdict for a list of ``(label, lhs, rhs)`` exact comparisons."""
    bad, worst = [], 0.0
    for label, lhs, rhs in pairs:
        if lhs != rhs:
            bad.append(label)
            diff = lhs - rhs
            worst = max(worst, float(abs(diff)) if not isinstance(diff, LaurentPoly)
                        else float(diff.norm_inf()))
    return (not bad, EXACT_RESIDUAL if not bad else worst,
            f"failed at {bad}" if bad else "")


def _rel_all(pairs, tol):
    worst = 0.0
    bad = []
    for label, lhs, rhs in pairs:
        g = relative_gap(lhs, rhs)
        worst = max(worst, g)
        if not g <= tol:
            bad.append(label)
    return (not bad, worst, f"failed at {bad}" if bad else "")


def _at_precision(fn):
    # scalar arithmetic inside the checks runs in the ambient gmpy2 context
    @functools.wraps(fn)
    def wrapped(cfg: SuiteConfig) -> VerificationReport:
        with precision(cfg.bits):
            return fn(cfg)
    return wrapped


# ---------------------------------------------------------------------------

@_at_precision
def hecke_suite(cfg: SuiteConfig) -> VerificationReport:
    return verify_relations(cfg.exact, max(1, cfg.max_degree))


@_at_precision
def polys_suite(cfg: SuiteConfig) -> VerificationReport:
    t = cfg.exact
    M = cfg.max_degree
    ts = shifted_params(t)
    g = lambda m: gamma(t, m)  # noqa: E731
    rep = VerificationReport()
    rng = range(-M, M + 1)
    pos = range(1, M + 1)

    rep.run("polys.eigen", "Y P_m = gamma_m P_m", lambda: _exact_all(
        (m, apply_expr("Y", nonsym(t, m).poly, t), nonsym(t, m).poly.scale(g(m))) for m in rng))
    rep.run("polys.monic", "leading term of P_m is x^m", lambda: _exact_all(
        (m, leading_term(nonsym(t, m).poly), (m, 1)) for m in rng))
    for method in ("rodrigues", "series"):
        rep.run(f"polys.agree.{method}", f"triangular and {method} constructions agree",
                lambda method=method: _exact_all(
                    (m, nonsym(t, m, method).poly, nonsym(t, m).poly) for m in rng))
    rep.run("polys.agree.sym_series", "symmetrization agrees with the 4phi3 series",
            lambda: _exact_all((m, sym_series(t, m).poly, symmetrize(t, m).poly)
                               for m in range(M + 1)))
    rep.run("polys.agree.antisym_series", "anti-symmetric series agrees with symmetrization",
            lambda: _exact_all((m, antisym_series(t, m).poly, symmetrize(t, m, "-").poly)
                               for m in pos))

    def t1_action():
        out = []
        for m in rng:
            if m == 0:
                continue
            a, b = t1_action_constants(t, m)
            out.append((m, apply_expr("T1", nonsym(t, m).poly, t),
                        nonsym(t, m).poly.scale(a) + nonsym(t, -m).poly.scale(b)))
        return _exact_all(out)

    rep.run("polys.t1_action", "T1 P_m = alpha_m P_m + beta_m P_-m", t1_action)

    def s1_action():
        out = []
        for m in rng:
            if m == 0:
                continue
            b = t1_action_constants(t, m)[1]
            out.append((m, apply_expr("S1", nonsym(t, m).poly, t),
                        nonsym(t, -m).poly.scale((g(m) - g(-m)) * b)))
        return _exact_all(out)

    rep.run("polys.s1_action", "S1 P_m = (gamma_m - gamma_-m) beta_m P_-m", s1_action)
    rep.run("polys.s0_action", "S0 P_m = (gamma_-m-1 - gamma_m) P_-m-1 / k1", lambda: _exact_all(
        (m, apply_expr("S0", nonsym(t, m).poly, t),
         nonsym(t, -m - 1).poly.scale((g(-m - 1) - g(m)) / t.k1)) for m in range(M)))

    def lemma_54():
        out = []
        for m in pos:
            pp = symmetrize(t, m).poly
            ypp = apply_expr("Y", pp, t)
            out.append((m, nonsym(t, m).poly, (ypp - pp.scale(g(-m))).scale(1 / (g(m) - g(-m)))))
            c = g(m) / ((1 + t.k0 / t.k1 * g(m)) * (1 - g(m) / (t.k0 * t.k1)))
            out.append((-m, nonsym(t, -m).poly, (ypp - pp.scale(g(m))).scale(c)))
        return _exact_all(out)

    rep.run("polys.from_symmetric", "P_m and P_-m from P_m^+ via Y", lemma_54)
    rep.run("polys.sym_t1_invariant", "T1 P_m^+ = k1 P_m^+", lambda: _exact_all(
        (m, apply_expr("T1", symmetrize(t, m).poly, t), symmetrize(t, m).poly.scale(t.k1))
        for m in range(M + 1)))
    rep.run("polys.antisym_isotype", "C+ P_m^- = 0", lambda: _exact_all(
        (m, apply_expr("Cplus", symmetrize(t, m, "-").poly, t), LaurentPoly.zero()) for m in pos))
    rep.run("polys.L_eigen", "L P_m^+ = (gamma_m + 1/gamma_m) P_m^+", lambda: _exact_all(
        (m, apply_L(symmetrize(t, m).poly, t), symmetrize(t, m).poly.scale(g(m) + 1 / g(m)))
        for m in range(M + 1)))
    rep.run("polys.weyl_character", "P_m^- = delta P_m-1^+(shifted)", lambda: _exact_all(
        (m, symmetrize(t, m, "-").poly, weyl_denominator(t) * symmetrize(ts, m - 1).poly)
        for m in pos))
    rep.run("polys.shift_plus", "G+ P_m^+ = h+(gamma_m) P_m-1^+(shifted)", lambda: _exact_all(
        (m, apply_shift("plus", symmetrize(t, m).poly, t),
         symmetrize(ts, m - 1).poly.scale(h_value(t, g(m), "+"))) for m in pos))
    rep.run("polys.shift_minus", "G- P_m-1^+(shifted) = h-(gamma_m) P_m^+", lambda: _exact_all(
        (m, apply_shift("minus", symmetrize(ts, m - 1).poly, t),
         symmetrize(t, m).poly.scale(h_value(t, g(m), "-"))) for m in pos))
    rep.run("polys.ev_nonsym", "P_m(1/a) closed form", lambda: _exact_all(
        (m, ev_value(nonsym(t, m), t), ev_closed(t, m, "nonsym")) for m in rng))
    rep.run("polys.ev_sym", "P_m^+(a) closed form", lambda: _exact_all(
        (m, symmetrize(t, m)(t.a), ev_closed(t, m, "sym")) for m in range(M + 1)))
    rep.run("polys.renorm_projection", "C+ E_m = E+_m", lambda: _exact_all(
        (m, apply_expr("Cplus", renormalize(t, m).poly, t), renormalize(t, m, True).poly)
        for m in rng))
    rep.run("polys.duality", "E_m(1/x_n; t) = E_n(1/gamma_m; dual t)", lambda: _exact_all(
        ((m, n), *dual_value(t, m, n)) for m in rng for n in rng))
    rep.run("polys.duality_sym", "E+_m(x_n; t) = E+_n(gamma_m; dual t)", lambda: _exact_all(
        ((m, n), *dual_value(t, m, n, True)) for m in rng for n in rng))
    rep.run("polys.t1_on_E", "explicit T1 action on E_gamma", lambda: _exact_all(
        (m, apply_expr("T1", renormalize(t, m).poly, t), t1_on_E(t, m)) for m in rng))
    rep.run("polys.t1v_on_E", "explicit T1v action on E_gamma", lambda: _exact_all(
        (m, apply_expr("T1v", renormalize(t, m).poly, t), t1v_on_E(t, m)) for m in rng))
    return rep


@_at_precision
def forms_suite(cfg: SuiteConfig) -> VerificationReport:
    t = cfg.exact
    s = cfg.quadrature
    tol = cfg.tol
    M = min(cfg.max_degree, 6)
    ti = inverse_params(t)
    td = dual_params(t)
    one = LaurentPoly.constant(1)
    rep = VerificationReport()

    def pr(f, g, variant="angle", params=t):
        return pair(f, g, params, variant, s)

    rep.run("forms.constant_term", "quadrature (1,1) against the closed constant term",
            lambda: _rel_all([("(1,1)", pr(one, one, "round").value, constant_term_closed(t, s.bits))], tol))

    def weights():
        out = []
        with precision(s.bits):
            for j in range(1, 6):
                x = to_float(complex(math.cos(j), math.sin(j)), s.bits)
                dp = weight(t, x, "delta_plus", bits=s.bits)
                out.append((f"sym{j}", dp, weight(t, 1 / x, "delta_plus", bits=s.bits)))
                al = weight(t, x, "alpha", bits=s.bits)
                out.append((f"alpha{j}", al + weight(t, 1 / x, "alpha", bits=s.bits),
                            1 - to_float(t.a * t.b, s.bits)))
                out.append((f"delta{j}", weight(t, x, "delta", bits=s.bits), al * dp))
        return _rel_all(out, tol)

    rep.run("forms.weights", "weight symmetries and factorisation", weights)

    def biorth():
        diag = {m: pr(nonsym(t, m).poly, nonsym(ti, m).poly).value for m in range(-M, M + 1)}
        big = max(abs(v) for v in diag.values())
        worst = 0.0
        for m in range(-M, M + 1):
            for n in range(-M, M + 1):
                if m != n:
                    v = abs(pr(nonsym(t, m).poly, nonsym(ti, n).poly).value) / big
                    worst = max(worst, float(v))
        return worst <= 1e-20, worst

    rep.run("forms.biorthogonality", "<P_m, P'_n> = 0 for m != n", biorth)
    rep.run("forms.diagonal.nonsym_pos", "<P_m, P'_m> closed form", lambda: _rel_all([
        (m, pr(nonsym(t, m).poly, nonsym(ti, m).poly).value, diagonal_closed(t, m, "nonsym_pos", s.bits))
        for m in range(M + 1)], tol))
    rep.run("forms.diagonal.nonsym_neg", "<P_-m, P'_-m> closed form", lambda: _rel_all([
        (m, pr(nonsym(t, -m).poly, nonsym(ti, -m).poly).value, diagonal_closed(t, m, "nonsym_neg", s.bits))
        for m in range(1, M + 1)], tol))
    rep.run("forms.diagonal.sym", "(P_m^+, P_m^+) closed form", lambda: _rel_all([
        (m, pr(symmetrize(t, m).poly, symmetrize(t, m).poly, "round").value,
         diagonal_closed(t, m, "sym", s.bits)) for m in range(M + 1)], tol))
    rep.run("forms.diagonal.antisym", "<P_m^-, P_m^-'> closed form", lambda: _rel_all([
        (m, pr(symmetrize(t, m, "-").poly, symmetrize(ti, m, "-").poly).value,
         diagonal_closed(t, m, "antisym", s.bits)) for m in range(1, M + 1)], tol))

    def sym_biorth():
        big = max(abs(pr(symmetrize(t, m).poly, symmetrize(t, m).poly, "round").value)
                  for m in range(M + 1))
        worst = max(float(abs(pr(symmetrize(t, m).poly, symmetrize(t, n).poly, "round").value) / big)
                    for m in range(M + 1) for n in range(M + 1) if m != n)
        return worst <= 1e-20, worst

    rep.run("forms.sym_orthogonality", "(P_m^+, P_n^+) = 0 for m != n", sym_biorth)

    def restriction():
        x = LaurentPoly.x()
        fs = [one, x + x ** -1, x ** 2 + x ** -2 + 3]
        with precision(s.bits):
            half = (1 - to_float(t.a * t.b, s.bits)) / 2
        return _rel_all([((i, j), pr(f, g).value, half * pr(f, g, "round").value)
                         for i, f in enumerate(fs) for j, g in enumerate(fs)], tol)

    rep.run("forms.restriction", "<f, g> = (1 - ab)/2 (f, g) on symmetric input", restriction)

    def weyl_forms():
        ts = shifted_params(t)
        d, dp = weyl_denominator(t), inverse_weyl_denominator(t)
        fs = [symmetrize(t, m).poly for m in range(3)] + [LaurentPoly({4: 1, -4: 1})]
        with precision(s.bits):
            half = (1 + 1 / to_float(t.k1 * t.k1, s.bits)) / 2
        return _rel_all([((i, j), pr(d * f, dp * g).value, half * pr(f, g, "round", ts).value)
                         for i, f in enumerate(fs) for j, g in enumerate(fs)], tol)

    rep.run("forms.weyl_denominator_form", "<delta f, delta' g> = (1 + k1^-2)/2 (f, g)_shifted",
            weyl_forms)

    def adjoint():
        worst = 0.0
        ok = True
        for tok, inv in (("T0", "T0inv"), ("T1", "T1inv")):
            for m in range(-5, 6):
                for n in range(-5, 6):
                    f, g = LaurentPoly.monomial(m, 1), LaurentPoly.monomial(n, 1)
                    lhs = pr(apply_expr(tok, f, t), g)
                    rhs = pr(f, apply_expr(inv, g, ti))
                    scale = max(lhs.scale, rhs.scale)
                    r = float(abs(lhs.value - rhs.value) / scale)
                    worst = max(worst, r)
                    ok &= r <= 1e-15
        return ok, worst

    rep.run("forms.adjointness", "<T_i f, g> = <f, (T_i')^-1 g>", adjoint)
    rep.run("forms.residue_contour", "residue weights against contour integrals", lambda: _rel_all([
        (m, residue_weight(td, m, "w_plus", s.bits), residue_contour(td, m, bits=s.bits))
        for m in range(-5, 6)], 1e-8))

    def norm_ratio():
        base = pr(one, one).value
        w0 = residue_weight(td, 0, "w", s.bits)
        return _rel_all([(m, pr(renormalize(t, m).poly, renormalize(ti, m).poly).value / base,
                         w0 / residue_weight(td, m, "w", s.bits)) for m in range(-5, 6)], 1e-8)

    rep.run("forms.norm_ratio", "<E, E'>/<1,1> = w(1/gamma_0)/w(1/gamma)", norm_ratio)

    def norm_ratio_sym():
        base = pr(one, one, "round").value
        w0 = residue_weight(td, 0, "w_plus", s.bits)
        return _rel_all([(m, pr(renormalize(t, m, True).poly, renormalize(t, m, True).poly, "round").value / base,
                         w0 / residue_weight(td, m, "w_plus", s.bits)) for m in range(0, 6)], 1e-8)

    rep.run("forms.norm_ratio_sym", "(E+, E+)/(1,1) = w+(1/gamma_0)/w+(1/gamma)", norm_ratio_sym)

    def recursion():
        ts = shifted_params(t)
        out = []
        for m in range(1, M + 1):
            P, Q = symmetrize(t, m).poly, symmetrize(ts, m - 1).poly
            out.append((m, pr(P, P, "round").value / pr(Q, Q, "round", ts).value,
                        norm_recursion_closed(t, m, s.bits)))
        return _rel_all(out, 1e-8)

    rep.run("forms.norm_recursion", "nu(P_m^+)/nu_shifted(P_m-1^+) closed ratio", recursion)

    def grand():
        out = []
        for k in range(4):
            for l in range(4 - k):
                for m in range(4 - k - l):
                    for n in range(4 - k - l - m):
                        tt = k + l + m + n
                        P = symmetrize(t, tt).poly
                        sh = shifted_abcd_params(t, k, l, m, n)
                        out.append(((k, l, m, n), pr(P, P, "round").value / pr(one, one, "round", sh).value,
                                    grand_ratio_closed(t, k, l, m, n, s.bits)))
        return _rel_all(out, 1e-8)

    rep.run("forms.norm_grand_ratio", "nu(P_t^+)/nu_shifted(1) closed ratio", grand)
    return rep


def _random_poly(rng: random.Random, deg: int) -> LaurentPoly:
    return LaurentPoly({e: rng.randint(-9, 9) for e in range(-deg, deg + 1)})


@_at_precision
def transform_suite(cfg: SuiteConfig) -> VerificationReport:
    t = cfg.exact
    s = cfg.quadrature
    M = min(cfg.max_degree, 6)
    rep = VerificationReport()
    c = inversion_constant(t, s)

    rep.run("transform.inversion_constant", "c from w and from w+ agree", lambda: _rel_all(
        [("c", c, inversion_constant(t, s, "w_plus"))], 1e-8))

    def round_trip():
        rng = random.Random(20240601)
        worst = 0.0
        for _ in range(5):
            f = _random_poly(rng, min(5, M))
            g = inverse(forward(f, t, M, s), t, s)
            r = float((g - f.to_float(s.bits).scale(c)).norm_inf() / (abs(c) * f.norm_inf()))
            worst = max(worst, r)
        return worst <= 1e-8, worst

    rep.run("transform.round_trip", "G(F(f)) = c f", round_trip)

    def support():
        bad = []
        for m in range(-min(M, 5), min(M, 5) + 1):
            if forward(nonsym(t, m).poly, t, M, s).support() != [m]:
                bad.append(m)
        return not bad, EXACT_RESIDUAL if not bad else float(len(bad)), f"failed at {bad}" if bad else ""

    rep.run("transform.support", "F(P_m) is supported at m", support)

    def intertwining():
        worst = 0.0
        for e in range(-4, 5):
            f = LaurentPoly.monomial(e, 1)
            F = forward(f, t, M, s)
            for tok, op in (("T1", spectral_T1), ("T1v", spectral_T0), ("Y", lambda g: spectral_z(g, -1))):
                lhs, rhs = forward(apply_expr(tok, f, t), t, M, s), op(F)
                for m in range(-M, M + 1):
                    if rhs.get(m) is None:
                        continue
                    worst = max(worst, relative_gap(lhs.get(m), rhs.get(m))
                                if abs(rhs.get(m)) > 1e-40 else float(abs(lhs.get(m))))
        return worst <= 1e-8, worst

    rep.run("transform.intertwining", "F(X f) = X~ F(f) for X = T1, T1v, Y", intertwining)

    def round_trip_sym():
        x = LaurentPoly.x()
        f = x ** 2 + x ** -2 + 3
        g = inverse_sym(forward_sym(f, t, M, s), t, s)
        r = float((g - f.to_float(s.bits).scale(c)).norm_inf() / (abs(c) * f.norm_inf()))
        return r <= 1e-8, r

    rep.run("transform.round_trip_sym", "G+(F+(f)) = c f", round_trip_sym)

    def reverse_trip():
        from .transform import SpectralFunction
        rng = random.Random(7)
        vals = {m: to_float(rng.randint(1, 9), s.bits) for m in range(-4, 5)}
        g = SpectralFunction(vals, t, M)
        back = forward(inverse(g, t, s), t, M, s)
        worst = max(relative_gap(back.get(m), c * v) for m, v in vals.items())
        return worst <= 1e-8, worst

    rep.run("transform.reverse_round_trip", "F(G(g)) = c g", reverse_trip)
    return rep


def run_suite(name: str, cfg: SuiteConfig) -> VerificationReport:
    """Run one suite or ``all``."""
    fns = {"hecke": hecke_suite, "polys": polys_suite, "forms": forms_suite,
           "transform": transform_suite}
    if name == "all":
        rep = VerificationReport()
        for n in SUITES:
            rep.merge(fns[n](cfg))
        return rep
    if name not in fns:
        raise ValueError(f"unknown suite {name!r}")
    return fns[name](cfg)
