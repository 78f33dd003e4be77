"""Scalar backends, multiplicity parameters and q-shifted factorials.

Two scalar backends are supported.  The exact backend stores rationals as
``gmpy2.mpq``.  The float backend stores complex numbers as ``gmpy2.mpc``
with a configurable binary precision.  All parameter sets are built from
``p`` (a square root of ``q``) so that every derived constant is rational
whenever the inputs are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Integral
from typing import Iterable, Union

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from .errors import (
    BackendMismatch,
    BackendUnsupported,
    DivergentProduct,
    InvalidParameter,
)

Scalar = Union[mpq, mpc]

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

DEFAULT_BITS = 256
MIN_BITS = 53
DEFAULT_PRODUCT_TOL = 2.0 ** -200
DEFAULT_WINDOW = 100

_MPQ_TYPE = type(mpq(0))
_MPC_TYPE = type(mpc(0))
_MPFR_TYPE = type(mpfr(0))
_MPZ_TYPE = type(gmpy2.mpz(0))


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------

def precision(bits: int):
    """Return a context manager that sets the working binary precision."""
    return gmpy2.context(gmpy2.get_context(), precision=int(bits))


def is_exact(x) -> bool:
    """True for integers and rationals, False for floating point values."""
    if isinstance(x, bool):
        return True
    return isinstance(x, (Integral, Fraction, _MPQ_TYPE, _MPZ_TYPE))


def is_float(x) -> bool:
    return isinstance(x, (float, complex, _MPFR_TYPE, _MPC_TYPE))


def backend_of(x) -> str:
    if is_exact(x):
        return EXACT
    if is_float(x):
        return FLOAT
    raise BackendMismatch(f"unsupported scalar type {type(x).__name__}")


def float_bits(x) -> int:
    """Binary precision carried by a float scalar (53 for Python floats)."""
    if isinstance(x, _MPC_TYPE):
        return max(x.precision)
    if isinstance(x, _MPFR_TYPE):
        return x.precision
    return 53


def parse_rational(text: str) -> mpq:
    """Parse ``"n/d"``, an integer or a terminating decimal into an exact rational."""
    text = str(text).strip().replace("−", "-")
    try:
        return mpq(text)
    except (ValueError, TypeError) as exc:
        raise InvalidParameter(f"cannot parse rational {text!r}") from exc


def to_exact(x) -> mpq:
    """Convert an exact scalar (int, Fraction, mpq, string) to ``mpq``."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if is_exact(x):
        return mpq(x)
    raise BackendMismatch(f"{x!r} is not an exact scalar")


def to_float(x, bits: int = DEFAULT_BITS) -> mpc:
    """Convert any scalar to an ``mpc`` carrying ``bits`` of precision."""
    with precision(bits):
        if isinstance(x, str):
            return mpc(parse_rational(x))
        if isinstance(x, Fraction):
            return mpc(mpq(x.numerator, x.denominator))
        return mpc(x)


def coerce(x, backend: str, bits: int = DEFAULT_BITS) -> Scalar:
    """Convert ``x`` into the requested backend."""
    if backend == EXACT:
        return to_exact(x)
    if backend == FLOAT:
        return to_float(x, bits)
    raise BackendUnsupported(f"unknown backend {backend!r}")


def is_zero(x) -> bool:
    return x == 0


def magnitude(x) -> float:
    """Absolute value as a Python float (for reporting and tolerance tests)."""
    if is_exact(x):
        return float(abs(to_exact(x)))
    return float(abs(x))


def scalar_to_json(x):
    """Serialise a scalar.

    Rationals become ``"n/d"`` strings and floats become
    ``{"re": str, "im": str, "bits": int}``.
    """
    if is_exact(x):
        r = to_exact(x)
        return f"{r.numerator}/{r.denominator}"
    bits = float_bits(x)
    with precision(bits):
        z = mpc(x)
        return {
            "re": str(z.real),
            "im": str(z.imag),
            "bits": bits,
        }


def scalar_from_json(obj) -> Scalar:
    """Inverse of :func:`scalar_to_json`."""
    if isinstance(obj, dict):
        bits = int(obj.get("bits", DEFAULT_BITS))
        with precision(bits):
            return mpc(mpfr(obj["re"]), mpfr(obj.get("im", "0")))
    if isinstance(obj, (int, str)):
        return to_exact(obj)
    raise ValueError(f"cannot decode scalar from {obj!r}")


def format_scalar(x) -> str:
    """Human readable form used by the text polynomial format."""
    if is_exact(x):
        return str(to_exact(x))
    z = mpc(x)
    if z.imag == 0:
        return format(z.real, ".17g")
    return f"({format(z.real, '.17g')}{format(z.imag, '+.17g')}j)"


# ---------------------------------------------------------------------------
# parameter sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParameterSet:
    """Multiplicity data ``(p, k0, k1, u0, u1)`` with ``q = p**2``.

    Attributes
    ----------
    p, k0, k1, u0, u1 : Scalar
        Base and multiplicity values, all nonzero.
    backend : {"exact", "float"}
        Scalar backend shared by every field.
    bits : int
        Working precision of the float backend (ignored when exact).

    Notes
    -----
    The derived Askey-Wilson parameters are ``a = k1*u1``, ``b = -k1/u1``,
    ``c = p*k0*u0`` and ``d = -p*k0/u0``.
    """

    p: Scalar
    k0: Scalar
    k1: Scalar
    u0: Scalar
    u1: Scalar
    backend: str = EXACT
    bits: int = DEFAULT_BITS

    def _derive(self, fn):
        if self.backend == FLOAT:
            with precision(self.bits):
                return fn()
        return fn()

    @cached_property
    def q(self) -> Scalar:
        return self._derive(lambda: self.p * self.p)

    @cached_property
    def a(self) -> Scalar:
        return self._derive(lambda: self.k1 * self.u1)

    @cached_property
    def b(self) -> Scalar:
        return self._derive(lambda: -self.k1 / self.u1)

    @cached_property
    def c(self) -> Scalar:
        return self._derive(lambda: self.p * self.k0 * self.u0)

    @cached_property
    def d(self) -> Scalar:
        return self._derive(lambda: -self.p * self.k0 / self.u0)

    @property
    def abcd(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    @property
    def values(self) -> tuple:
        return (self.p, self.k0, self.k1, self.u0, self.u1)

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    def scalar(self, x) -> Scalar:
        """Coerce ``x`` into this parameter set's backend."""
        return coerce(x, self.backend, self.bits)

    def to_json(self) -> dict:
        names = ("p", "k0", "k1", "u0", "u1")
        return {n: scalar_to_json(v) for n, v in zip(names, self.values)}

    @classmethod
    def from_json(cls, obj: dict, backend: str | None = None,
                  bits: int = DEFAULT_BITS) -> "ParameterSet":
        vals = [scalar_from_json(obj[n]) for n in ("p", "k0", "k1", "u0", "u1")]
        if backend is None:
            backend = EXACT if all(is_exact(v) for v in vals) else FLOAT
        return make_params(*vals, backend=backend, bits=bits)

    def with_values(self, p=None, k0=None, k1=None, u0=None, u1=None) -> "ParameterSet":
        """Return a copy with selected entries replaced."""
        return make_params(
            self.p if p is None else p,
            self.k0 if k0 is None else k0,
            self.k1 if k1 is None else k1,
            self.u0 if u0 is None else u0,
            self.u1 if u1 is None else u1,
            backend=self.backend,
            bits=self.bits,
        )

    def __repr__(self) -> str:
        vals = ", ".join(format_scalar(v) for v in self.values)
        return f"ParameterSet(({vals}), backend={self.backend!r})"


def make_params(p, k0, k1, u0, u1, backend: str = EXACT,
                bits: int = DEFAULT_BITS) -> ParameterSet:
    """Build a validated :class:`ParameterSet`.

    Parameters
    ----------
    p, k0, k1, u0, u1 : scalar-like
        Integers, rationals, ``"n/d"`` strings, or floats (float backend).
    backend : {"exact", "float"}
    bits : int
        Precision of the float backend; at least 53.

    Raises
    ------
    InvalidParameter
        If any entry is zero, if ``q == 1`` or if ``bits < 53``.
    """
    if backend not in BACKENDS:
        raise BackendUnsupported(f"unknown backend {backend!r}")
    if backend == FLOAT and int(bits) < MIN_BITS:
        raise InvalidParameter(f"float precision must be at least {MIN_BITS} bits")
    vals = []
    for name, v in zip(("p", "k0", "k1", "u0", "u1"), (p, k0, k1, u0, u1)):
        try:
            s = coerce(v, backend, bits)
        except BackendMismatch as exc:
            raise InvalidParameter(f"{name}={v!r} is not valid for backend {backend}") from exc
        if s == 0:
            raise InvalidParameter(f"{name} must be nonzero")
        vals.append(s)
    t = ParameterSet(*vals, backend=backend, bits=int(bits))
    if t.q == 1:
        raise InvalidParameter("q = p^2 must differ from 1")
    return t


#: The canonical generic fixture used throughout the tests and the CLI.
F1_VALUES = ("1/2", "3/5", "2/3", "5/7", "3/4")


def fixture_f1(backend: str = EXACT, bits: int = DEFAULT_BITS) -> ParameterSet:
    return make_params(*F1_VALUES, backend=backend, bits=bits)


def dual_params(t: ParameterSet) -> ParameterSet:
    """Swap ``k0`` and ``u1``; the result is again a parameter set."""
    return ParameterSet(t.p, t.u1, t.k1, t.u0, t.k0, backend=t.backend, bits=t.bits)


def inverse_params(t: ParameterSet) -> ParameterSet:
    """Replace every entry by its reciprocal (so ``q -> 1/q``)."""
    if t.backend == FLOAT:
        with precision(t.bits):
            vals = [1 / v for v in t.values]
    else:
        vals = [1 / v for v in t.values]
    return ParameterSet(*vals, backend=t.backend, bits=t.bits)


def shifted_params(t: ParameterSet) -> ParameterSet:
    """Return ``(p, k0, q*k1, u0, u1)``, the target of the shift operators."""
    return ParameterSet(t.p, t.k0, t._derive(lambda: t.q * t.k1), t.u0, t.u1,
                        backend=t.backend, bits=t.bits)


def to_float_params(t: ParameterSet, bits: int = DEFAULT_BITS) -> ParameterSet:
    """Convert ``t`` to the float backend at ``bits`` of precision."""
    return make_params(*t.values, backend=FLOAT, bits=bits)


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def eps(m: int) -> int:
    """Sign function with ``eps(0) = 1``."""
    return 1 if m >= 0 else -1


@dataclass(frozen=True)
class SpectralPoint:
    """Eigenvalue ``gamma`` of ``Y`` and dual eigenvalue ``xval`` at index ``m``."""

    m: int
    gamma: Scalar
    xval: Scalar
    eps: int


def gamma(t: ParameterSet, m: int) -> Scalar:
    """Eigenvalue ``(k0*k1)**eps(m) * q**m`` of ``Y`` on ``P_m``."""
    return t._derive(lambda: (t.k0 * t.k1) ** eps(m) * t.q ** m)


def xval(t: ParameterSet, m: int) -> Scalar:
    """Dual spectral value ``(k1*u1)**eps(m) * q**m``."""
    return t._derive(lambda: (t.k1 * t.u1) ** eps(m) * t.q ** m)


def spectral_point(t: ParameterSet, m: int) -> SpectralPoint:
    m = int(m)
    return SpectralPoint(m, gamma(t, m), xval(t, m), eps(m))


# ---------------------------------------------------------------------------
# genericity
# ---------------------------------------------------------------------------

_SUP = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sup(j: int) -> str:
    return str(j).translate(_SUP)


def _power_lookup(t: ParameterSet, n: int):
    """Return a function mapping a scalar to the ``j`` with value ``q**j`` (|j| <= n)."""
    if t.is_exact:
        table = {}
        for j in range(-n, n + 1):
            table.setdefault(t.q ** j, j)
        return table.get

    slack = mpfr(2) ** (-(t.bits - 16))

    def find(v):
        with precision(t.bits):
            for j in range(-n, n + 1):
                qj = t.q ** j
                if abs(v - qj) <= slack * abs(qj):
                    return j
        return None

    return find


def check_genericity(t: ParameterSet, n: int = DEFAULT_WINDOW,
                     include_squares: bool = False) -> list[str]:
    """List violated genericity conditions within the window ``|j| <= n``.

    Parameters
    ----------
    t : ParameterSet
    n : int
        Scan window for the integer powers of ``q``.
    include_squares : bool
        Test the squares ``e*e`` for ``e`` in ``(a, b, c, d)`` against every
        power in the window.  By default only ``e*e = q**j`` with ``j <= 0``
        is flagged: a square equal to a positive power does not obstruct the
        unit circle contour or any construction in this package.

    Returns
    -------
    list of str
        Human readable violations such as ``"k1² = q¹"``; empty when generic.
    """
    if n < 1:
        raise ValueError("window must be at least 1")
    out: list[str] = []
    with precision(t.bits):
        if t.is_exact:
            if abs(t.q) == 1:
                out.append("|q| = 1")
        elif abs(abs(t.q) - 1) <= mpfr(2) ** (-(t.bits - 16)):
            out.append("|q| = 1")
        find = _power_lookup(t, n)
        for name, v in (("k0", t.k0), ("k1", t.k1), ("u1", t.u1)):
            sq = v * v
            j = find(sq)
            if j is not None:
                out.append(f"{name}² = q{_sup(j)}")
            j = find(-sq)
            if j is not None:
                out.append(f"{name}² = -q{_sup(j)}")
        names = ("a", "b", "c", "d")
        vals = t.abcd
        for i in range(4):
            for k in range(4):
                j = find(vals[i] * vals[k])
                if i == k and j is not None and j > 0 and not include_squares:
                    continue
                if j is not None:
                    out.append(f"{names[i]}·{names[k]} = q{_sup(j)}")
    return out


# ---------------------------------------------------------------------------
# q-shifted factorials
# ---------------------------------------------------------------------------

def _is_infinite(n) -> bool:
    return n is None or (isinstance(n, float) and math.isinf(n))


def qpoch(z, q, n=None, tol=DEFAULT_PRODUCT_TOL) -> Scalar:
    """q-shifted factorial ``(z; q)_n``.

    Parameters
    ----------
    z, q : Scalar
    n : int, None or math.inf
        Finite length, or ``None``/``math.inf`` for the infinite product.
    tol : float
        Truncation threshold for the infinite product: the first ``J`` with
        ``|z| |q|**J < tol`` ends the product.

    Returns
    -------
    Scalar
        Exact when ``z`` and ``q`` are exact and ``n`` is finite.

    Raises
    ------
    BackendUnsupported
        Infinite product requested on exact inputs.
    DivergentProduct
        Infinite product requested with ``|q| >= 1``.
    """
    if not _is_infinite(n):
        n = int(n)
        if n < 0:
            raise ValueError("finite length must be nonnegative")
        if is_exact(z) and is_exact(q):
            z, q = to_exact(z), to_exact(q)
            out = mpq(1)
            zq = z
            for _ in range(n):
                out *= 1 - zq
                zq *= q
            return out
        bits = max(float_bits(z) if is_float(z) else 0, float_bits(q) if is_float(q) else 0)
        with precision(bits):
            out = mpc(1)
            zq = mpc(z)
            for _ in range(n):
                out *= 1 - zq
                zq *= q
            return out
    if is_exact(z) and is_exact(q):
        raise BackendUnsupported("infinite q-shifted factorials need the float backend")
    if tol <= 0:
        raise ValueError("tol must be positive")
    bits = max(float_bits(z) if is_float(z) else 0, float_bits(q) if is_float(q) else 0)
    with precision(bits):
        qq = mpc(q)
        aq = abs(qq)
        if aq >= 1:
            raise DivergentProduct("infinite product needs |q| < 1")
        zq = mpc(z)
        out = mpc(1)
        while abs(zq) >= tol:
            out *= 1 - zq
            zq *= qq
        return out


def qpoch_many(zs: Iterable, q, n=None, tol=DEFAULT_PRODUCT_TOL) -> Scalar:
    """Product ``(z1, z2, ...; q)_n`` of several q-shifted factorials."""
    zs = list(zs)
    vals = [qpoch(z, q, n, tol) for z in zs]
    if all(is_exact(v) for v in vals):
        out = mpq(1)
        for v in vals:
            out *= v
        return out
    bits = max(float_bits(v) for v in vals if is_float(v))
    with precision(bits):
        out = mpc(1)
        for v in vals:
            out *= v
        return out
