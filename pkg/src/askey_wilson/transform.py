"""Non-symmetric and symmetric Askey-Wilson transforms.

A spectral function is a finitely supported function on the dual spectrum
``{1/gamma_m}``, indexed by ``m``.  The forward transform pairs a Laurent
polynomial with the renormalized polynomials at inverse parameters; the
inverse transform resums with residue weights of the dual weight function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpc, mpfr

from .errors import NotSymmetric
from .forms import QuadratureSettings, pair, residue_weight, _float_params
from .laurent import LaurentPoly
from .params import (
    ParameterSet,
    dual_params,
    gamma,
    inverse_params,
    precision,
    scalar_from_json,
    scalar_to_json,
)
from .polys import renormalize


@dataclass(frozen=True)
class SpectralFunction:
    """Finitely supported function on the dual spectrum.

    Attributes
    ----------
    values : dict
        ``m -> value`` for the stored (nonzero) entries.
    params : ParameterSet
    window : int or None
        When set, indices with ``|m| <= window`` that are not stored are
        known to vanish; indices outside are unknown.
    inapplicable : frozenset
        Indices inside the window whose value could not be determined.
    """

    values: dict
    params: ParameterSet
    window: int | None = None
    inapplicable: frozenset = field(default_factory=frozenset)

    def get(self, m: int):
        """Value at ``m``; ``None`` when the value is unknown."""
        if m in self.inapplicable:
            return None
        if m in self.values:
            return self.values[m]
        if self.window is None or abs(m) <= self.window:
            return 0
        return None

    def support(self) -> list[int]:
        return sorted(self.values)

    def is_w_invariant(self) -> bool:
        return all(self.get(-m) is not None and _close(self.get(-m), v)
                   for m, v in self.values.items())

    def to_json(self) -> dict:
        return {"params": self.params.to_json(),
                "values": [{"m": m, "v": scalar_to_json(self.values[m])}
                           for m in self.support()]}

    @classmethod
    def from_json(cls, obj: dict, params: ParameterSet | None = None,
                  window: int | None = None) -> "SpectralFunction":
        if params is None:
            params = ParameterSet.from_json(obj["params"])
        vals = {int(e["m"]): scalar_from_json(e["v"]) for e in obj["values"]}
        return cls(vals, params, window)


def _close(x, y) -> bool:
    m = max(abs(x), abs(y))
    return m == 0 or abs(x - y) <= mpfr(2) ** -150 * m


def _keep(v, fv, s: QuadratureSettings) -> bool:
    return abs(v) > 16 * max(fv.estimated_error, s.tol * fv.scale)


def forward(f, t: ParameterSet, M: int, settings: QuadratureSettings | None = None
            ) -> SpectralFunction:
    """``F(f)(m) = <f, E'_m>`` for ``|m| <= M``, pruned below the error level."""
    s = settings or QuadratureSettings()
    f = getattr(f, "poly", f)
    ti = inverse_params(t)
    vals = {}
    for m in range(-M, M + 1):
        fv = pair(f, renormalize(ti, m).poly, t, "angle", s)
        if _keep(fv.value, fv, s):
            vals[m] = fv.value
    return SpectralFunction(vals, t, M)


def inverse(g: SpectralFunction, t: ParameterSet,
            settings: QuadratureSettings | None = None) -> LaurentPoly:
    """``G(g) = sum_m g(m) E_m w(1/gamma_m; dual t)``."""
    s = settings or QuadratureSettings()
    td = dual_params(t)
    out = LaurentPoly.zero()
    with precision(s.bits):
        for m in g.support():
            w = residue_weight(td, m, "w", s.bits, s.product_tol)
            out = out + renormalize(t, m).poly.to_float(s.bits).scale(g.values[m] * w)
    return out


def inversion_constant(t: ParameterSet, settings: QuadratureSettings | None = None,
                       formula: str = "w"):
    """Constant ``c`` with ``G(F(f)) = c f``.

    ``formula='w'`` uses ``w(1/gamma_0) <1, 1>``; ``formula='w_plus'`` uses
    ``(1 + k1^2)^2 w_+(1/gamma_0) (1, 1) / 2``.
    """
    s = settings or QuadratureSettings()
    one = LaurentPoly.constant(1)
    td = dual_params(t)
    tf = _float_params(t, s.bits)
    with precision(s.bits):
        if formula == "w":
            return residue_weight(td, 0, "w", s.bits, s.product_tol) * pair(one, one, t, "angle", s).value
        if formula == "w_plus":
            k1sq = tf.k1 * tf.k1
            return ((1 + k1sq) ** 2 / 2 * residue_weight(td, 0, "w_plus", s.bits, s.product_tol)
                    * pair(one, one, t, "round", s).value)
    raise ValueError(f"unknown formula {formula!r}")


def forward_sym(f, t: ParameterSet, M: int, settings: QuadratureSettings | None = None
                ) -> SpectralFunction:
    """Symmetric transform ``(1 + k1^2)/2 (f, E+_m)``, stored at ``+-m``."""
    s = settings or QuadratureSettings()
    f = getattr(f, "poly", f)
    if not f.is_symmetric():
        raise NotSymmetric("the symmetric transform needs a symmetric input")
    tf = _float_params(t, s.bits)
    vals = {}
    with precision(s.bits):
        half = (1 + tf.k1 * tf.k1) / 2
        for m in range(M + 1):
            fv = pair(f, renormalize(t, m, True).poly, t, "round", s)
            if _keep(fv.value, fv, s):
                vals[m] = vals[-m] = half * fv.value
    return SpectralFunction(vals, t, M)


def inverse_sym(g: SpectralFunction, t: ParameterSet,
                settings: QuadratureSettings | None = None) -> LaurentPoly:
    """``(1 + k1^2) sum_{m >= 0} g(m) E+_m w_+(1/gamma_m; dual t)``.

    Raises
    ------
    NotSymmetric
        If ``g`` is not invariant under ``m -> -m``.
    """
    s = settings or QuadratureSettings()
    if not g.is_w_invariant():
        raise NotSymmetric("the symmetric inverse transform needs a W-invariant input")
    td = dual_params(t)
    tf = _float_params(t, s.bits)
    out = LaurentPoly.zero()
    with precision(s.bits):
        pre = 1 + tf.k1 * tf.k1
        for m in g.support():
            if m < 0:
                continue
            w = residue_weight(td, m, "w_plus", s.bits, s.product_tol)
            out = out + renormalize(t, m, True).poly.to_float(s.bits).scale(pre * g.values[m] * w)
    return out


# ---------------------------------------------------------------------------
# spectral side operators
# ---------------------------------------------------------------------------

def _spectral_op(g: SpectralFunction, partner, coeff, diag) -> SpectralFunction:
    t = g.params
    bits = t.bits if t.backend == "float" else 256
    lo = -(g.window or 0) if g.window is not None else min(g.values, default=0) - 1
    hi = (g.window or 0) if g.window is not None else max(g.values, default=0) + 1
    vals, bad = {}, set()
    with precision(bits):
        for m in range(lo, hi + 1):
            a, b = g.get(m), g.get(partner(m))
            if a is None or b is None:
                bad.add(m)
                continue
            gp = 1 / mpc(gamma(t, m))
            v = diag * a + coeff(gp) * (b - a)
            if v != 0:
                vals[m] = v
    return SpectralFunction(vals, t, g.window, frozenset(bad))


def spectral_T1(g: SpectralFunction) -> SpectralFunction:
    """Spectral image of ``T1``: ``k1 g + c(gamma') (g(-m) - g(m))``."""
    t = _float_params(g.params, g.params.bits)
    with precision(t.bits):
        k0, k1 = t.k0, t.k1

        def coeff(u):
            return (1 - k0 * k1 * u) * (1 + k1 / k0 * u) / (k1 * (1 - u * u))

        return _spectral_op(g, lambda m: -m, coeff, k1)


def spectral_T0(g: SpectralFunction) -> SpectralFunction:
    """Spectral image of ``T1v``: ``u1 g + c(gamma') (g(-m-1) - g(m))``."""
    t = _float_params(g.params, g.params.bits)
    with precision(t.bits):
        u0, u1, p, q = t.u0, t.u1, t.p, t.q

        def coeff(u):
            return (1 - u0 * u1 * p / u) * (1 + u1 / u0 * p / u) / (u1 * (1 - q / (u * u)))

        return _spectral_op(g, lambda m: -m - 1, coeff, u1)


def spectral_z(g: SpectralFunction, power: int = 1) -> SpectralFunction:
    """Multiplication by ``gamma'_m ** power``."""
    t = g.params
    with precision(t.bits):
        vals = {m: v * (1 / mpc(gamma(t, m))) ** power for m, v in g.values.items()}
    return SpectralFunction(vals, t, g.window, g.inapplicable)
