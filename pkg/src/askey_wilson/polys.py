"""Non-symmetric, symmetric and anti-symmetric Askey-Wilson polynomials.

Three independent routes produce the monic non-symmetric polynomials
``P_m``:

* ``triangular``: back substitution against the triangular matrix of ``Y``
  on the ordered monomial basis (the default);
* ``rodrigues``: iterated intertwiners applied to ``1``;
* ``series``: terminating balanced 4phi3 expansions.

Symmetric (``P_m^+``) and anti-symmetric (``P_m^-``) polynomials are linear
combinations of ``P_m`` and ``P_{-m}``.  Renormalized polynomials take the
value one at ``x = 1/a`` (non-symmetric) or ``x = a`` (symmetric).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DegenerateParameters,
    DegenerateSpectrum,
    EmptyIsotype,
    NormalizationFailure,
)
from .laurent import LaurentPoly, evaluate, rank, unrank
from .operators import _as_backend, apply_expr, apply_word, named_expr
from .params import (
    ParameterSet,
    dual_params,
    gamma,
    is_exact,
    precision,
    qpoch,
    qpoch_many,
    xval,
)

KINDS = ("nonsym", "sym", "antisym", "renorm_nonsym", "renorm_sym")
METHODS = ("triangular", "rodrigues", "series", "symmetrized")


@dataclass(frozen=True)
class AWPolynomial:
    """A constructed polynomial together with its provenance.

    Attributes
    ----------
    poly : LaurentPoly
    kind : str
        One of ``nonsym``, ``sym``, ``antisym``, ``renorm_nonsym``,
        ``renorm_sym``.
    m : int
    params : ParameterSet
    method : str
        ``triangular``, ``rodrigues``, ``series`` or ``symmetrized``.
    """

    poly: LaurentPoly
    kind: str
    m: int
    params: ParameterSet
    method: str

    def __call__(self, x0):
        return evaluate(self.poly, x0)

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out.update({"kind": self.kind, "m": self.m, "method": self.method})
        return out


def _nz(v, what: str):
    if v == 0:
        raise DegenerateParameters(f"{what} vanishes")
    return v


# ---------------------------------------------------------------------------
# triangular route
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _Y_on_monomial(t: ParameterSet, e: int) -> LaurentPoly:
    return apply_word(("T1", "T0"), LaurentPoly.monomial(e, t.scalar(1)), t)


@lru_cache(maxsize=1024)
def nonsym_triangular(t: ParameterSet, m: int) -> AWPolynomial:
    """Monic eigenfunction of ``Y`` with eigenvalue ``gamma_m``.

    Raises
    ------
    DegenerateSpectrum
        If a lower diagonal entry of ``Y`` coincides with ``gamma_m``.
    """
    m = int(m)
    R = rank(m)
    g = gamma(t, m)
    cols = [_Y_on_monomial(t, unrank(j)) for j in range(R + 1)]
    v = [None] * (R + 1)
    v[R] = t.scalar(1)

    def solve():
        for i in range(R - 1, -1, -1):
            e = unrank(i)
            diag = cols[i].coeff(e) - g
            if diag == 0:
                raise DegenerateSpectrum(f"gamma_{m} repeats on the diagonal at rank {i}")
            acc = sum((cols[j].coeff(e) * v[j] for j in range(i + 1, R + 1)), t.scalar(0))
            v[i] = -acc / diag

    t._derive(solve)
    poly = LaurentPoly({unrank(i): v[i] for i in range(R + 1)})
    return AWPolynomial(_as_backend(poly, t), "nonsym", m, t, "triangular")


# ---------------------------------------------------------------------------
# Rodrigues route
# ---------------------------------------------------------------------------

def rodrigues_dm(t: ParameterSet, m: int):
    """Constant ``d_m`` with ``(S1 S0)^m (1) = d_m P_m`` (and its odd analogue)."""
    m = int(m)

    def run():
        k0, k1, q = t.k0, t.k1, t.q
        z = q * k0 * k0 * k1 * k1
        if m >= 0:
            return q ** (-(m + 1) * m) * (k0 * k1) ** (-2 * m) * qpoch(z, q, 2 * m)
        n = -m
        return q ** (-n * n) * k0 ** (1 - 2 * n) * k1 ** (-2 * n) * qpoch(z, q, 2 * n - 1)

    return t._derive(run)


def rodrigues_raw(t: ParameterSet, m: int) -> LaurentPoly:
    """``(S1 S0)^m (1)`` for ``m >= 0`` and ``S0 (S1 S0)^(|m|-1) (1)`` for ``m < 0``."""
    S0, S1 = named_expr("S0", t), named_expr("S1", t)
    f = LaurentPoly.constant(t.scalar(1))
    n = m if m >= 0 else -m - 1
    for _ in range(n):
        f = apply_expr(S1, apply_expr(S0, f, t), t)
    if m < 0:
        f = apply_expr(S0, f, t)
    return f


@lru_cache(maxsize=256)
def nonsym_rodrigues(t: ParameterSet, m: int) -> AWPolynomial:
    """``P_m`` from the Rodrigues formula.

    Raises
    ------
    DegenerateParameters
        If ``d_m`` vanishes.
    """
    d = rodrigues_dm(t, m)
    if d == 0:
        raise DegenerateParameters(f"d_{m} vanishes")
    poly = rodrigues_raw(t, m).scale(t._derive(lambda: 1 / d))
    return AWPolynomial(poly, "nonsym", int(m), t, "rodrigues")


# ---------------------------------------------------------------------------
# series route
# ---------------------------------------------------------------------------

def sym_series_abcd(a, b, c, d, q, m: int) -> LaurentPoly:
    """Monic symmetric polynomial of degree ``m`` from the balanced 4phi3.

    Works for any scalars ``a, b, c, d, q`` of a single backend.
    """
    m = int(m)
    exact = all(is_exact(v) for v in (a, b, c, d, q))
    one = LaurentPoly.constant(1)
    if m == 0:
        return one

    def run():
        abcd = a * b * c * d
        norm_den = _nz(a ** m * qpoch(abcd * q ** (m - 1), q, m), "(abcd q^(m-1); q)_m")
        pref = qpoch_many((a * b, a * c, a * d), q, m) / norm_den
        x = LaurentPoly.monomial(1, 1 if exact else a / a)
        xi = x ** -1
        total = LaurentPoly.zero()
        prod = one if exact else one.to_float(_bits(a, b, c, d, q))
        for k in range(m + 1):
            if k > 0:
                aq = a * q ** (k - 1)
                prod = prod * (one - x.scale(aq)) * (one - xi.scale(aq))
            den = _nz(qpoch_many((a * b, a * c, a * d, q), q, k), "series denominator")
            coef = qpoch_many((q ** -m, q ** (m - 1) * abcd), q, k) * q ** k / den
            total = total + prod.scale(coef)
        return total.scale(pref)

    if exact:
        return run()
    with precision(_bits(a, b, c, d, q)):
        return run()


def _bits(*vals) -> int:
    from .params import float_bits, is_float
    return max([float_bits(v) for v in vals if is_float(v)] or [53])


@lru_cache(maxsize=512)
def sym_series(t: ParameterSet, m: int) -> AWPolynomial:
    """Symmetric polynomial ``P_m^+`` from the series expansion."""
    poly = sym_series_abcd(t.a, t.b, t.c, t.d, t.q, m)
    return AWPolynomial(_as_backend(poly, t), "sym", int(m), t, "series")


def _shifted_term(t: ParameterSet, m: int) -> LaurentPoly:
    """``p^(m-1) (x - (c+d) + cd/x) P_{m-1}^+(x/p; pa, pb, pc, pd)``."""
    p = t.p

    def run():
        inner = sym_series_abcd(p * t.a, p * t.b, p * t.c, p * t.d, t.q, m - 1)
        inner = _as_backend(inner, t).dilate(1 / p)
        lin = LaurentPoly({1: t.scalar(1), 0: -(t.c + t.d), -1: t.c * t.d})
        return (lin * inner).scale(p ** (m - 1))

    return t._derive(run)


@lru_cache(maxsize=512)
def nonsym_series(t: ParameterSet, m: int) -> AWPolynomial:
    """``P_m`` as a combination of two symmetric series."""
    m = int(m)
    if m == 0:
        return AWPolynomial(LaurentPoly.constant(t.scalar(1)), "nonsym", 0, t, "series")
    n = abs(m)
    plus = sym_series(t, n).poly
    second = _shifted_term(t, n)

    def run():
        abcd = t.a * t.b * t.c * t.d
        q = t.q
        if m > 0:
            den = _nz(1 - abcd * q ** (2 * m - 1), "1 - abcd q^(2m-1)")
            return (plus.scale(q ** m * (1 - abcd * q ** (m - 1)) / den)
                    + second.scale((1 - q ** m) / den))
        den = _nz(1 - t.c * t.d * q ** (n - 1), "1 - cd q^(m-1)")
        return plus.scale(1 / den) - second.scale(1 / den)

    return AWPolynomial(t._derive(run), "nonsym", m, t, "series")


def antisym_series(t: ParameterSet, m: int) -> AWPolynomial:
    """``P_m^-`` (``m >= 1``) as a combination of two symmetric series."""
    m = int(m)
    if m < 1:
        raise EmptyIsotype("the anti-symmetric isotype starts at m = 1")
    plus = sym_series(t, m).poly
    second = _shifted_term(t, m)

    def run():
        ab, q = t.a * t.b, t.q
        den = _nz(ab * (1 - t.c * t.d * q ** (m - 1)), "ab (1 - cd q^(m-1))")
        return (plus.scale((1 - ab * t.c * t.d * q ** (m - 1)) / den)
                + second.scale((ab - 1) / den))

    return AWPolynomial(t._derive(run), "antisym", m, t, "series")


# ---------------------------------------------------------------------------
# dispatch, symmetrization
# ---------------------------------------------------------------------------

def nonsym(t: ParameterSet, m: int, method: str = "triangular") -> AWPolynomial:
    """``P_m`` by the chosen construction route."""
    if method == "triangular":
        return nonsym_triangular(t, int(m))
    if method == "rodrigues":
        return nonsym_rodrigues(t, int(m))
    if method == "series":
        return nonsym_series(t, int(m))
    raise ValueError(f"unknown method {method!r}")


def symmetrize_coeff(t: ParameterSet, m: int, sign: str):
    """Coefficient of ``P_{-m}`` in ``P_m^+`` (``sign='+'``) or ``P_m^-``."""
    k0, k1 = t.k0, t.k1
    g = gamma(t, m)

    def run():
        if sign == "+":
            return (1 + k0 / k1 * g) * (1 - g / (k0 * k1)) / _nz(1 - g * g, "1 - gamma_m^2")
        gi = 1 / g
        return -(1 + k0 / k1 * gi) * (1 - gi / (k0 * k1)) / _nz(1 - gi * gi, "1 - gamma_m^-2")

    return t._derive(run)


@lru_cache(maxsize=512)
def symmetrize(t: ParameterSet, m: int, sign: str = "+",
               method: str = "triangular") -> AWPolynomial:
    """``P_m^+`` or ``P_m^-`` from ``P_m`` and ``P_{-m}``.

    Raises
    ------
    EmptyIsotype
        For ``sign='-'`` and ``m = 0``.
    """
    m = int(m)
    if m < 0:
        raise ValueError("symmetrization needs m >= 0")
    if sign not in ("+", "-"):
        raise ValueError(f"unknown sign {sign!r}")
    if m == 0:
        if sign == "-":
            raise EmptyIsotype("the anti-symmetric isotype of degree 0 is zero")
        return AWPolynomial(LaurentPoly.constant(t.scalar(1)), "sym", 0, t, "symmetrized")
    pm, pneg = nonsym(t, m, method).poly, nonsym(t, -m, method).poly
    poly = pm + pneg.scale(symmetrize_coeff(t, m, sign))
    return AWPolynomial(poly, "sym" if sign == "+" else "antisym", m, t, "symmetrized")


def t1_action_constants(t: ParameterSet, m: int):
    """``(alpha_m, beta_m)`` with ``T1 P_m = alpha_m P_m + beta_m P_{-m}``."""
    m = int(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    k0, k1 = t.k0, t.k1
    g = gamma(t, m)

    def run():
        den = _nz(1 - g * g, "1 - gamma_m^2")
        alpha = ((1 / k1 - k1) * g * g + (1 / k0 - k0) * g) / den
        if m < 0:
            return alpha, k1
        beta = k1
        for xi in (1, -1):
            gx = g ** xi
            beta *= (1 + k0 / k1 * gx) * (1 - gx / (k0 * k1)) / _nz(1 - gx * gx, "1 - gamma^(2 xi)")
        return alpha, beta

    return t._derive(run)


# ---------------------------------------------------------------------------
# evaluation and renormalization
# ---------------------------------------------------------------------------

def ev_value(f, t: ParameterSet):
    """Value of ``f`` at ``x = 1/a``."""
    poly = f.poly if isinstance(f, AWPolynomial) else f
    return evaluate(poly, t._derive(lambda: 1 / t.a))


def ev_closed(t: ParameterSet, m: int, kind: str = "nonsym"):
    """Closed product form of ``P_m(1/a)`` (``nonsym``) or ``P_m^+(a)`` (``sym``)."""
    m = int(m)
    a, b, c, d, q = t.a, t.b, t.c, t.d, t.q

    def run():
        abcd = a * b * c * d
        if kind == "sym":
            if m < 0:
                raise ValueError("symmetric index must be nonnegative")
            den = _nz(qpoch(q ** (m - 1) * abcd, q, m), "(q^(m-1) abcd; q)_m")
            return a ** (-m) * qpoch_many((a * b, a * c, a * d), q, m) / den
        if kind != "nonsym":
            raise ValueError(f"unknown kind {kind!r}")
        if m >= 0:
            den = _nz(qpoch(q ** m * abcd, q, m), "(q^m abcd; q)_m")
            return a ** (-m) * qpoch_many((q * a * b, a * c, a * d), q, m) / den
        n = -m
        den = _nz(qpoch(q ** (n - 1) * abcd, q, n), "(q^(m-1) abcd; q)_m")
        pre = _nz(1 - 1 / (a * b), "1 - 1/(ab)")
        return a ** (-n) / pre * qpoch_many((a * b, a * c, a * d), q, n) / den

    return t._derive(run)


@lru_cache(maxsize=1024)
def renormalize(t: ParameterSet, m: int, symmetric: bool = False) -> AWPolynomial:
    """Renormalized ``E_{gamma_m}`` or ``E^+_{s(gamma_m)}``.

    The symmetric version depends only on ``|m|``.

    Raises
    ------
    NormalizationFailure
        If the underlying monic polynomial vanishes at the normalization
        point.
    """
    m = int(m)
    if symmetric:
        base = symmetrize(t, abs(m), "+").poly
        v = evaluate(base, t.a)
        kind = "renorm_sym"
    else:
        base = nonsym(t, m).poly
        v = ev_value(base, t)
        kind = "renorm_nonsym"
    if v == 0:
        raise NormalizationFailure(f"normalization value of index {m} vanishes")
    return AWPolynomial(base.scale(t._derive(lambda: 1 / v)), kind, m, t, "triangular")


def dual_value(t: ParameterSet, m: int, n: int, symmetric: bool = False):
    """Both sides of the duality identity at ``(m, n)``.

    Returns
    -------
    tuple
        ``(E_m(1/x_n; t), E_n(1/gamma_m; dual t))`` for the non-symmetric
        case and ``(E+_m(x_n; t), E+_n(gamma_m; dual t))`` otherwise.
    """
    td = dual_params(t)
    if symmetric:
        lhs = renormalize(t, m, True)(xval(t, n))
        rhs = renormalize(td, n, True)(gamma(t, m))
        return lhs, rhs
    lhs = renormalize(t, m)(t._derive(lambda: 1 / xval(t, n)))
    rhs = renormalize(td, n)(t._derive(lambda: 1 / gamma(t, m)))
    return lhs, rhs


def spectral_reflection(m: int, which: str) -> int:
    """Index of ``s1 gamma_m = gamma_{-m}`` or ``s0 gamma_m = gamma_{-m-1}``."""
    if which == "s1":
        return -m
    if which == "s0":
        return -m - 1
    raise ValueError(which)


def t1_on_E(t: ParameterSet, m: int) -> LaurentPoly:
    """Right-hand side of the explicit ``T1 E_gamma`` expansion."""
    E, Es = renormalize(t, m).poly, renormalize(t, -m).poly
    g = gamma(t, m)

    def run():
        gi = 1 / g
        c = (1 - t.k0 * t.k1 * gi) * (1 + t.k1 / t.k0 * gi) / (t.k1 * (1 - gi * gi))
        return E.scale(t.k1) + (Es - E).scale(c)

    return t._derive(run)


def t1v_on_E(t: ParameterSet, m: int) -> LaurentPoly:
    """Right-hand side of the explicit ``T1v E_gamma`` expansion."""
    E, Es = renormalize(t, m).poly, renormalize(t, -m - 1).poly
    g = gamma(t, m)

    def run():
        u0, u1, p = t.u0, t.u1, t.p
        c = (1 - u0 * u1 * p * g) * (1 + u1 / u0 * p * g) / (u1 * (1 - t.q * g * g))
        return E.scale(u1) + (Es - E).scale(c)

    return t._derive(run)
