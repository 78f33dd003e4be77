"""Weight functions, bilinear forms, residue weights and closed norm formulas.

The two bilinear forms are unit circle integrals

    <f, g>  = (1/2pi) int f(x) g(1/x) Delta(x)  dtheta,   x = exp(i theta),
    (f, g)  = (1/2pi) int f(x) g(1/x) Delta+(x) dtheta,

valid when ``0 < q < 1`` and ``max(|a|, |b|, |c|, |d|) < 1``.  Both weights
factor as a Laurent polynomial times the even kernel

    K(theta) = (q x^2, q x^-2; q)_inf / prod_e (e x, e/x; q)_inf,

so the trapezoid rule reduces to Fourier moments ``nu_e`` of ``K``, shared
by every pairing at the same parameters and node count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import (
    ContourUnsupported,
    DegenerateParameters,
    PoleEvaluation,
    PoleIdentificationFailure,
    QuadratureNotConverged,
)
from .laurent import LaurentPoly
from .params import (
    DEFAULT_BITS,
    DEFAULT_PRODUCT_TOL,
    FLOAT,
    ParameterSet,
    dual_params,
    eps,
    gamma,
    is_exact,
    make_params,
    precision,
    qpoch,
    qpoch_many,
    scalar_to_json,
    to_float,
)

VARIANTS = ("angle", "round")


@dataclass(frozen=True)
class QuadratureSettings:
    """Controls for the unit circle trapezoid rule.

    Attributes
    ----------
    n0 : int
        Initial node count, a power of two no smaller than 16.
    tol : float
        Relative stopping tolerance: the difference between consecutive
        levels must not exceed ``tol * scale`` where ``scale`` is the sum of
        absolute contributions.
    max_doublings : int
    product_tol : float
        Truncation threshold for the infinite products.
    bits : int
        Working precision.
    """

    n0: int = 64
    tol: float = 1e-30
    max_doublings: int = 10
    product_tol: float = DEFAULT_PRODUCT_TOL
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if self.n0 < 16 or self.n0 & (self.n0 - 1):
            raise ValueError("n0 must be a power of two, at least 16")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be at least 1")


@dataclass(frozen=True)
class FormValue:
    """Quadrature result.

    ``estimated_error`` is the difference between the last two levels and
    ``scale`` the sum of absolute contributions used for relative tests.
    """

    value: mpc
    estimated_error: float
    nodes_used: int
    scale: float = 0.0

    def to_json(self) -> dict:
        return {"value": scalar_to_json(self.value), "err": float(self.estimated_error),
                "nodes": self.nodes_used}


def _float_params(t: ParameterSet, bits: int) -> ParameterSet:
    if t.backend == FLOAT and t.bits == bits:
        return t
    return make_params(*t.values, backend=FLOAT, bits=bits)


def _real_part_if_real(z):
    return z.real if z.imag == 0 else z


# ---------------------------------------------------------------------------
# pointwise weights
# ---------------------------------------------------------------------------

def _alpha(a, b, x):
    den = 1 - 1 / (x * x)
    if den == 0:
        raise PoleEvaluation("alpha has poles at x = +-1")
    return (1 - a / x) * (1 - b / x) / den


def weight(t: ParameterSet, x, variant: str = "delta_plus",
           tol=DEFAULT_PRODUCT_TOL, bits: int | None = None):
    """Evaluate ``Delta+``, ``Delta`` or ``alpha`` at the nonzero point ``x``.

    Raises
    ------
    PoleEvaluation
        At ``x = +-1`` for ``alpha`` and ``delta``, and at poles of
        ``Delta+``.
    """
    bits = bits or (t.bits if t.backend == FLOAT else DEFAULT_BITS)
    tf = _float_params(t, bits)
    with precision(bits):
        x = to_float(x, bits)
        if x == 0:
            raise PoleEvaluation("weights are singular at x = 0")
        if variant == "alpha":
            return _alpha(tf.a, tf.b, x)
        if variant not in ("delta_plus", "delta"):
            raise ValueError(f"unknown weight variant {variant!r}")
        if abs(tf.q) >= 1:
            raise ContourUnsupported("weights need |q| < 1")
        if variant == "delta" and x * x == 1:
            raise PoleEvaluation("Delta has poles at x = +-1")
        args = [e * x for e in tf.abcd] + [e / x for e in tf.abcd]
        den = qpoch_many(args, tf.q, None, tol)
        if den == 0:
            raise PoleEvaluation(f"Delta+ has a pole at {x}")
        val = qpoch_many((x * x, 1 / (x * x)), tf.q, None, tol) / den
        if variant == "delta":
            val *= _alpha(tf.a, tf.b, x)
        return val


# ---------------------------------------------------------------------------
# quadrature kernel
# ---------------------------------------------------------------------------

def _check_regime(t: ParameterSet):
    q = t.q
    if is_exact(q):
        ok_q = 0 < q < 1
    else:
        ok_q = q.imag == 0 and 0 < q.real < 1
    if not ok_q:
        raise ContourUnsupported("the unit circle contour needs 0 < q < 1")
    if max(abs(e) for e in t.abcd) >= 1:
        raise ContourUnsupported("the unit circle contour needs max(|a|,|b|,|c|,|d|) < 1")


def _kernel_key(t: ParameterSet, s: QuadratureSettings):
    tf = _float_params(t, s.bits)
    abcd = tuple(_real_part_if_real(e) for e in tf.abcd)
    return abcd, tf.q.real, s.bits, float(s.product_tol)


@lru_cache(maxsize=64)
def _kernel_factors(key):
    """Precomputed ``(A_k, B_k)`` with factor ``A_k - B_k cos(theta)``."""
    abcd, q, bits, ptol = key
    with precision(bits):
        den = []
        for e in abcd:
            ek = e
            while abs(ek) >= ptol:
                den.append((1 + ek * ek, 2 * ek))
                ek *= q
        num = []
        qk = q
        while qk >= ptol:
            num.append((1 + qk * qk, 2 * qk))
            qk *= q
        return tuple(den), tuple(num)


def _kernel_at(cos_t, factors):
    den_f, num_f = factors
    cos2 = 2 * cos_t * cos_t - 1
    num = mpfr(1)
    for A, B in num_f:
        num *= A - B * cos2
    den = 1
    for A, B in den_f:
        den *= A - B * cos_t
    return num / den


@lru_cache(maxsize=128)
def _kernel_half(key, N: int) -> tuple:
    """``K`` at ``theta_j = 2 pi j / N`` for ``j = 0..N/2`` (``K`` is even)."""
    bits = key[2]
    factors = _kernel_factors(key)
    with precision(bits):
        if N <= 16:
            return tuple(_kernel_at(gmpy2.cos(2 * gmpy2.const_pi() * j / N), factors)
                         for j in range(N // 2 + 1))
        coarse = _kernel_half(key, N // 2)
        out = [None] * (N // 2 + 1)
        out[::2] = coarse
        two_pi = 2 * gmpy2.const_pi()
        for j in range(1, N // 2, 2):
            out[j] = _kernel_at(gmpy2.cos(two_pi * j / N), factors)
        return tuple(out)


@lru_cache(maxsize=128)
def _cos_table(N: int, bits: int) -> tuple:
    with precision(bits):
        two_pi = 2 * gmpy2.const_pi()
        return tuple(gmpy2.cos(two_pi * k / N) for k in range(N))


_NU_CACHE: dict = {}


def _nu(key, N: int, e: int):
    """Trapezoid Fourier moment ``(1/N) sum_j x_j^e K(x_j)`` (even in ``e``)."""
    e = abs(e) % N
    ck = (key, N, e)
    hit = _NU_CACHE.get(ck)
    if hit is not None:
        return hit
    bits = key[2]
    K = _kernel_half(key, N)
    cos = _cos_table(N, bits)
    half = N // 2
    with precision(bits):
        acc = K[0] + (K[half] if e % 2 == 0 else -K[half])
        s = 0
        for j in range(1, half):
            s += cos[(j * e) % N] * K[j]
        val = (acc + 2 * s) / N
    if len(_NU_CACHE) > 200000:
        _NU_CACHE.clear()
    _NU_CACHE[ck] = val
    return val


def _weight_poly(tf: ParameterSet, variant: str) -> dict:
    """Laurent factor ``W`` with ``weight = W(x) K(theta)`` on the circle."""
    if variant == "round":
        return {0: mpfr(2), 2: mpfr(-1), -2: mpfr(-1)}
    if variant == "angle":
        a, b = tf.a, tf.b
        return {0: 1 - a * b, -1: -(a + b), -2: a * b, 2: mpfr(-1), 1: a + b}
    raise ValueError(f"unknown form variant {variant!r}")


def _moment(key, wpoly: dict, N: int, e: int):
    return sum(c * _nu(key, N, e + k) for k, c in wpoly.items())


def pair(f, g, t: ParameterSet, variant: str = "angle",
         settings: QuadratureSettings | None = None) -> FormValue:
    """Bilinear form ``<f, g>`` (``angle``) or ``(f, g)`` (``round``).

    Parameters
    ----------
    f, g : LaurentPoly or AWPolynomial
    t : ParameterSet
        Exact parameter sets are converted to ``settings.bits``.
    variant : {"angle", "round"}
    settings : QuadratureSettings, optional

    Returns
    -------
    FormValue

    Raises
    ------
    ContourUnsupported
        Outside ``0 < q < 1``, ``max(|a|,|b|,|c|,|d|) < 1``.
    QuadratureNotConverged
        If ``max_doublings`` doublings do not reach the tolerance.
    """
    s = settings or QuadratureSettings()
    f = getattr(f, "poly", f)
    g = getattr(g, "poly", g)
    tf = _float_params(t, s.bits)
    _check_regime(tf)
    key = _kernel_key(tf, s)
    with precision(s.bits):
        wpoly = _weight_poly(tf, variant)
        h = _to_float(f, s.bits) * _to_float(g, s.bits).s1()
        terms = h.items()
        maxdeg = max((abs(e) for e, _ in terms), default=0) + 2
        half = max(s.n0 // 2, 2 * maxdeg + 16)
        N = 1 << max(4, (2 * half - 1).bit_length())

        def integrate(n):
            val, scale = mpc(0), mpfr(0)
            for e, c in terms:
                mu = _moment(key, wpoly, n, e)
                val += c * mu
                scale += abs(c) * abs(mu)
            return val, scale

        prev, _ = integrate(N // 2)
        for _ in range(s.max_doublings):
            cur, scale = integrate(N)
            err = abs(cur - prev)
            if err <= s.tol * scale:
                return FormValue(cur, float(err), N, float(scale))
            prev = cur
            N *= 2
        raise QuadratureNotConverged(
            f"error estimate {float(err):.3e} above {s.tol:.1e} x scale after "
            f"{s.max_doublings} doublings")


def _to_float(f: LaurentPoly, bits: int) -> LaurentPoly:
    if f.backend == FLOAT and f.bits == bits:
        return f
    return f.to_float(bits)


def relative_gap(x, y) -> float:
    """``|x - y| / max(|x|, |y|)`` as a float (0 when both vanish)."""
    m = max(abs(x), abs(y))
    return 0.0 if m == 0 else float(abs(x - y) / m)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _inf_den(z, q, tol):
    """``(z; q)_inf`` for a denominator, rejecting ``z q^k = 1``."""
    slack = mpfr(2) ** (-(gmpy2.get_context().precision - 16))
    zk = z
    while abs(zk) >= mpfr(1) / 2:
        if abs(1 - zk) <= slack:
            raise DegenerateParameters(f"denominator factor vanishes at {z}")
        zk *= q
    return qpoch(z, q, None, tol)


def _ratio(num_args, den_args, q, tol):
    num = qpoch_many(num_args, q, None, tol)
    den = mpc(1)
    for z in den_args:
        den *= _inf_den(z, q, tol)
    return num / den


def constant_term_closed(t: ParameterSet, bits: int = DEFAULT_BITS,
                         tol=DEFAULT_PRODUCT_TOL):
    """``(1, 1) = 2 (abcd; q)_inf / (q, ab, ac, ad, bc, bd, cd; q)_inf``."""
    tf = _float_params(t, bits)
    with precision(bits):
        a, b, c, d, q = *tf.abcd, tf.q
        return 2 * _ratio((a * b * c * d,),
                          (q, a * b, a * c, a * d, b * c, b * d, c * d), q, tol)


def diagonal_closed(t: ParameterSet, m: int, kind: str = "sym",
                    bits: int = DEFAULT_BITS, tol=DEFAULT_PRODUCT_TOL):
    """Closed forms of the four diagonal terms.

    ``kind`` selects ``(P_m^+, P_m^+)`` (``sym``), ``<P_m, P_m'>``
    (``nonsym_pos``), ``<P_{-m}, P_{-m}'>`` (``nonsym_neg``) or
    ``<P_m^-, P_m^-'>`` (``antisym``).
    """
    m = int(m)
    if kind in ("sym", "nonsym_pos") and m < 0:
        raise ValueError("m must be nonnegative")
    if kind in ("nonsym_neg", "antisym") and m < 1:
        raise ValueError("m must be positive")
    tf = _float_params(t, bits)
    with precision(bits):
        a, b, c, d, q = *tf.abcd, tf.q
        abcd = a * b * c * d
        qm = q ** m
        mixed = [qm * a * c, qm * a * d, qm * b * c, qm * b * d]
        if kind == "sym":
            return 2 * _ratio((q ** (2 * m - 1) * abcd, q ** (2 * m) * abcd),
                              [q * qm, qm * a * b] + mixed + [qm * c * d, qm / q * abcd],
                              q, tol)
        if kind == "nonsym_pos":
            z = q ** (2 * m) * abcd
            return _ratio((z, z), [q * qm, q * qm * a * b] + mixed + [qm * c * d, qm * abcd],
                          q, tol)
        if kind == "nonsym_neg":
            z = q ** (2 * m - 1) * abcd
            return _ratio((z, z), [qm, qm * a * b] + mixed + [qm / q * c * d, qm / q * abcd],
                          q, tol)
        if kind == "antisym":
            ab = a * b
            return (ab - 1) / ab * _ratio(
                (q ** (2 * m - 1) * abcd, q ** (2 * m) * abcd),
                [qm, q * qm * ab] + mixed + [qm / q * c * d, qm * abcd], q, tol)
    raise ValueError(f"unknown kind {kind!r}")


def norm_recursion_closed(t: ParameterSet, m: int, bits: int = DEFAULT_BITS):
    """Ratio ``nu_{a,b,c,d}(P_m^+) / nu_{qa,qb,c,d}(P_{m-1}^+)``."""
    tf = _float_params(t, bits)
    with precision(bits):
        a, b, c, d, q = *tf.abcd, tf.q
        return ((1 - q ** m) * (1 - q ** (m - 1) * c * d)
                / ((1 - q ** m * a * b) * (1 - q ** (m - 1) * a * b * c * d)))


def shifted_abcd_params(t: ParameterSet, k: int, l: int, m: int, n: int) -> ParameterSet:
    """Parameter set with ``(a, b, c, d)`` replaced by ``(q^2k a, q^2l b, q^2m c, q^2n d)``."""
    q = t.q

    def run():
        return (t.k0 * q ** (m + n), t.k1 * q ** (k + l),
                t.u0 * q ** (m - n), t.u1 * q ** (k - l))

    k0, k1, u0, u1 = t._derive(run)
    return make_params(t.p, k0, k1, u0, u1, backend=t.backend, bits=t.bits)


def grand_ratio_closed(t: ParameterSet, k: int, l: int, m: int, n: int,
                       bits: int = DEFAULT_BITS, tol=DEFAULT_PRODUCT_TOL):
    """Closed form of ``nu(P_s^+) / nu_shifted(1)`` with ``s = k + l + m + n``."""
    tf = _float_params(t, bits)
    s = k + l + m + n
    with precision(bits):
        a, b, c, d, q = *tf.abcd, tf.q
        abcd = a * b * c * d
        num = (q, q ** (2 * s - 1) * abcd, q ** (2 * k + 2 * l) * a * b,
               q ** (2 * k + 2 * m) * a * c, q ** (2 * k + 2 * n) * a * d,
               q ** (2 * l + 2 * m) * b * c, q ** (2 * l + 2 * n) * b * d,
               q ** (2 * m + 2 * n) * c * d)
        qs = q ** s
        den = (q * qs, qs / q * abcd, qs * a * b, qs * a * c, qs * a * d,
               qs * b * c, qs * b * d, qs * c * d)
        return _ratio(num, den, q, tol)


# ---------------------------------------------------------------------------
# residue weights
# ---------------------------------------------------------------------------

def _families(td: ParameterSet):
    return [(e, s) for e in td.abcd for s in (1, -1)]


def _identify_pole(td: ParameterSet, m: int):
    """Locate the unique vanishing denominator factor at ``y0 = 1/gamma_m``.

    Returns ``(y0, e, s, k)`` with ``1 - e q^k y0^s = 0``.
    """
    y0 = td._derive(lambda: 1 / gamma(dual_params(td), m))
    hits = []
    slack = None if td.is_exact else mpfr(2) ** (-(td.bits - 16))

    def scan():
        for e, s in _families(td):
            z = e * y0 ** s
            k = 0
            while abs(z) >= 0.5 and k < 10000:
                if (z == 1) if slack is None else (abs(1 - z) <= slack):
                    hits.append((e, s, k))
                z *= td.q
                k += 1

    td._derive(scan)
    if len(hits) != 1:
        raise PoleIdentificationFailure(
            f"expected one vanishing factor at index {m}, found {len(hits)}")
    return (y0, *hits[0])


def residue_weight(td: ParameterSet, m: int, variant: str = "w",
                   bits: int = DEFAULT_BITS, tol=DEFAULT_PRODUCT_TOL):
    """Residue weight ``w_+`` or ``w`` of ``Delta+(.; td)`` at ``1/gamma_m``.

    ``td`` is the dual parameter set whose weight carries the pole and
    ``gamma_m`` is the spectral value of ``t = dual(td)``.  The
    vanishing factor is removed and the reduced product evaluated; with the
    sign ``eps(m)`` this gives ``w_+ = -R(y0)`` for every ``m``.

    Raises
    ------
    PoleIdentificationFailure
        If no or several denominator factors vanish at the pole.
    """
    if variant not in ("w", "w_plus"):
        raise ValueError(f"unknown residue variant {variant!r}")
    y0, e0, s0, k0 = _identify_pole(td, m)
    tf = _float_params(td, bits)
    with precision(bits):
        q = tf.q
        y = to_float(y0, bits)
        num = qpoch_many((y * y, 1 / (y * y)), q, None, tol)
        den = mpc(1)
        for e, s in _families(tf):
            z = e * y ** s
            if (s == s0) and _same(e, to_float(e0, bits)):
                den *= qpoch(z, q, k0) * qpoch(z * q ** (k0 + 1), q, None, tol)
            else:
                den *= qpoch(z, q, None, tol)
        w_plus = -num / den
        if variant == "w_plus":
            return w_plus
        return _alpha(tf.a, tf.b, y) * w_plus


def _same(x, y) -> bool:
    return abs(x - y) <= mpfr(2) ** (-(gmpy2.get_context().precision - 16)) * max(abs(x), 1)


def residue_contour(td: ParameterSet, m: int, nodes: int = 128,
                    bits: int = DEFAULT_BITS, tol=DEFAULT_PRODUCT_TOL):
    """Independent numeric value of ``w_+`` from a small circle integral.

    The circle is centred at ``y0 = 1/gamma_m(dual(td))`` with radius half the
    distance to the nearest other pole of ``Delta+(y)/y`` (including 0).
    """
    tf = _float_params(td, bits)
    with precision(bits):
        y0 = to_float(1 / gamma(dual_params(tf), m), bits)
        q = tf.q
        others = [mpc(0)]
        for e in tf.abcd:
            ek = e
            while abs(ek) >= tol:
                for pole in (ek, 1 / ek):
                    if abs(pole - y0) > mpfr(2) ** (-(bits // 2)) * abs(y0):
                        others.append(pole)
                ek *= q
        r = min(abs(pole - y0) for pole in others) / 2
        two_pi = 2 * gmpy2.const_pi()
        acc = mpc(0)
        for j in range(nodes):
            u = mpc(gmpy2.cos(two_pi * j / nodes), gmpy2.sin(two_pi * j / nodes))
            y = y0 + r * u
            acc += weight(tf, y, "delta_plus", tol, bits) / y * r * u
        return eps(m) * acc / nodes


def inverse_weyl_denominator(t: ParameterSet) -> LaurentPoly:
    """``delta'``: the Weyl denominator at the inverse parameters."""
    from .laurent import weyl_denominator
    from .params import inverse_params

    return weyl_denominator(inverse_params(t))
