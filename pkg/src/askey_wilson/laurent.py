"""Laurent polynomials in one variable with the affine Weyl group action.

Polynomials are stored sparsely as ``{exponent: coefficient}`` with no zero
entries, so the zero polynomial is the empty mapping.  Coefficients share a
single scalar backend (see :mod:`askey_wilson.params`).

The total order used for leading terms ranks monomials as
``1 < x^-1 < x < x^-2 < x^2 < ...``; :func:`rank` realises it as a bijection
from the integers onto the nonnegative integers.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from gmpy2 import mpc, mpfr, mpq

from .errors import BackendMismatch, EmptyPolynomial, NotDivisible, PoleAtZero
from .params import (
    DEFAULT_BITS,
    EXACT,
    FLOAT,
    ParameterSet,
    float_bits,
    format_scalar,
    is_exact,
    is_float,
    precision,
    scalar_from_json,
    scalar_to_json,
    to_exact,
    to_float,
)

#: Absolute and relative slack for float-backend equality and remainders.
FLOAT_ATOL = mpfr(2) ** -180
FLOAT_RTOL = mpfr(2) ** -160


def float_tols(bits: int):
    """``(atol, rtol)`` for comparisons at ``bits`` of working precision."""
    # leave a quarter of the mantissa for accumulated round-off
    keep = bits - bits // 4
    return (max(FLOAT_ATOL, mpfr(2) ** -(keep + 8)), max(FLOAT_RTOL, mpfr(2) ** -keep))


def rank(m: int) -> int:
    """Position of ``x**m`` in the total order (``0, -1, 1, -2, 2, ...``)."""
    m = int(m)
    if m > 0:
        return 2 * m
    return -2 * m - 1 if m < 0 else 0


def unrank(r: int) -> int:
    """Inverse of :func:`rank`."""
    r = int(r)
    if r < 0:
        raise ValueError("rank must be nonnegative")
    return r // 2 if r % 2 == 0 else -(r + 1) // 2


def _scalar_backend(c) -> str | None:
    """Backend of a coefficient; plain Python ints are neutral."""
    if isinstance(c, int):
        return None
    if is_exact(c):
        return EXACT
    if is_float(c):
        return FLOAT
    raise BackendMismatch(f"unsupported coefficient type {type(c).__name__}")


def _merge_backend(b1: str | None, b2: str | None) -> str | None:
    if b1 is None:
        return b2
    if b2 is None or b1 == b2:
        return b1
    raise BackendMismatch(f"cannot combine {b1} and {b2} coefficients")


class LaurentPoly:
    """Immutable sparse Laurent polynomial.

    Parameters
    ----------
    terms : mapping of int to Scalar, optional
        Exponent to coefficient.  Zero coefficients are dropped.
    bits : int, optional
        Precision used for float arithmetic; inferred from the coefficients
        when omitted.

    Examples
    --------
    >>> x = LaurentPoly.x()
    >>> (x + x**-1) ** 2 == x**2 + 2 + x**-2
    True
    """

    __slots__ = ("_terms", "_backend", "_bits", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None, bits: int | None = None):
        clean: dict[int, object] = {}
        backend = None
        inferred_bits = 0
        for e, c in (terms or {}).items():
            b = _scalar_backend(c)
            backend = _merge_backend(backend, b)
            if b == FLOAT:
                inferred_bits = max(inferred_bits, float_bits(c))
            if c != 0:
                clean[int(e)] = c
        if backend == FLOAT:
            bits = bits or inferred_bits or DEFAULT_BITS
            with precision(bits):
                clean = {e: mpc(c) for e, c in clean.items()}
        else:
            clean = {e: mpq(c) for e, c in clean.items()}
            backend = EXACT if clean else None
        self._terms = clean
        self._backend = backend
        self._bits = bits if backend == FLOAT else None
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, backend: str | None, bits: int | None) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._backend = backend if terms or backend == FLOAT else None
        obj._bits = bits if backend == FLOAT else None
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({}, None, None)

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls({int(e): c})

    @classmethod
    def x(cls) -> "LaurentPoly":
        return cls({1: 1})

    # -- basic queries ----------------------------------------------------

    @property
    def backend(self) -> str | None:
        """``"exact"``, ``"float"`` or ``None`` for the backend-neutral zero."""
        return self._backend

    @property
    def bits(self) -> int | None:
        return self._bits

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms sorted by ascending exponent."""
        return sorted(self._terms.items())

    def coeff(self, e: int):
        return self._terms.get(int(e), 0)

    def support(self) -> list[int]:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def min_exp(self) -> int:
        if not self._terms:
            raise EmptyPolynomial("zero polynomial has no exponents")
        return min(self._terms)

    def max_exp(self) -> int:
        if not self._terms:
            raise EmptyPolynomial("zero polynomial has no exponents")
        return max(self._terms)

    def degree(self) -> int:
        """Largest absolute exponent (0 for the zero polynomial)."""
        return max((abs(e) for e in self._terms), default=0)

    def norm_inf(self):
        """Largest coefficient modulus."""
        if not self._terms:
            return 0
        if self._backend == FLOAT:
            with precision(self._bits):
                return max(abs(c) for c in self._terms.values())
        return max(abs(c) for c in self._terms.values())

    # -- backend handling ---------------------------------------------------

    def _ctx_bits(self, other: "LaurentPoly | None" = None) -> int | None:
        bits = self._bits
        if other is not None and other._bits:
            bits = max(bits or 0, other._bits)
        return bits

    def to_float(self, bits: int = DEFAULT_BITS) -> "LaurentPoly":
        with precision(bits):
            return LaurentPoly._raw({e: mpc(c) for e, c in self._terms.items()}, FLOAT, bits)

    def to_exact(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: to_exact(c) for e, c in self._terms.items()}, EXACT, None)

    def _coerce_scalar(self, c):
        """Bring a scalar into this polynomial's backend."""
        b = _scalar_backend(c)
        if self._backend == EXACT and b == FLOAT:
            raise BackendMismatch("float scalar applied to an exact polynomial")
        if self._backend == FLOAT:
            return mpc(c)
        if b == FLOAT:
            return mpc(c)
        return mpq(c)

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            _merge_backend(self._backend, other._backend)
            return other
        if self._backend == FLOAT:
            with precision(self._bits):
                return LaurentPoly._raw({0: mpc(other)} if other != 0 else {}, FLOAT, self._bits)
        return LaurentPoly.constant(other)

    # -- ring operations ----------------------------------------------------

    def _with_ctx(self, other, fn):
        bits = self._ctx_bits(other if isinstance(other, LaurentPoly) else None)
        if bits:
            with precision(bits):
                return fn(bits)
        return fn(None)

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        backend = _merge_backend(self._backend, other._backend)

        def run(bits):
            out = dict(self._terms)
            for e, c in other._terms.items():
                v = out.get(e, 0) + c
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
            if backend == FLOAT:
                out = {e: mpc(c) for e, c in out.items()}
            return LaurentPoly._raw(out, backend, bits)

        return self._with_ctx(other, run)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def scale(self, c) -> "LaurentPoly":
        """Multiply every coefficient by the scalar ``c``."""
        if isinstance(c, LaurentPoly):
            return self * c
        b = _scalar_backend(c)
        backend = self._backend or b
        if self._backend == EXACT and b == FLOAT:
            raise BackendMismatch("float scalar applied to an exact polynomial")
        bits = self._bits or (float_bits(c) if b == FLOAT else None)
        if backend == FLOAT:
            with precision(bits):
                cc = mpc(c)
                if cc == 0:
                    return LaurentPoly._raw({}, FLOAT, bits)
                return LaurentPoly._raw({e: v * cc for e, v in self._terms.items()}, FLOAT, bits)
        cc = mpq(c)
        if cc == 0:
            return LaurentPoly.zero()
        return LaurentPoly._raw({e: v * cc for e, v in self._terms.items()}, backend, None)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        backend = _merge_backend(self._backend, other._backend)

        def run(bits):
            out: dict[int, object] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = e1 + e2
                    out[e] = out.get(e, 0) + c1 * c2
            out = {e: c for e, c in out.items() if c != 0}
            return LaurentPoly._raw(out, backend, bits)

        return self._with_ctx(other, run)

    def __rmul__(self, other) -> "LaurentPoly":
        return self.scale(other)

    def __truediv__(self, c) -> "LaurentPoly":
        if isinstance(c, LaurentPoly):
            return exact_div(self, c)
        if self._backend == FLOAT or _scalar_backend(c) == FLOAT:
            bits = self._bits or float_bits(c)
            with precision(bits):
                return self.scale(1 / mpc(c))
        return self.scale(1 / mpq(c))

    def __pow__(self, n: int) -> "LaurentPoly":
        n = int(n)
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers exist only for monomials")
            (e, c), = self._terms.items()
            if self._backend == FLOAT:
                with precision(self._bits):
                    inv = (1 / c) ** (-n)
            else:
                inv = (1 / c) ** (-n)
            return LaurentPoly._raw({e * n: inv}, self._backend, self._bits)
        out = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``x**k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()},
                                self._backend, self._bits)

    # -- equality -----------------------------------------------------------

    def isclose(self, other, atol=None, rtol=None) -> bool:
        """Coefficientwise comparison within ``max(atol, rtol * norm)``."""
        other = self._lift(other)
        if self._backend != FLOAT and other._backend != FLOAT:
            return self._terms == other._terms
        bits = self._ctx_bits(other) or DEFAULT_BITS
        with precision(bits):
            datol, drtol = float_tols(self._ctx_bits(other))
            atol = datol if atol is None else mpfr(atol)
            rtol = drtol if rtol is None else mpfr(rtol)
            scale = max(mpfr(abs(c)) for c in list(self._terms.values()) + list(other._terms.values()) + [0])
            slack = max(atol, rtol * scale)
            for e in set(self._terms) | set(other._terms):
                if abs(self._terms.get(e, 0) - other._terms.get(e, 0)) > slack:
                    return False
            return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.constant(other)
            except BackendMismatch:
                return NotImplemented
        try:
            return self.isclose(other)
        except BackendMismatch:
            return False

    def __hash__(self):
        if self._backend == FLOAT:
            raise TypeError("float-backend polynomials are unhashable")
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- Weyl group action ----------------------------------------------------

    def s1(self) -> "LaurentPoly":
        """Reflection ``x -> 1/x``."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()}, self._backend, self._bits)

    def s0(self, q) -> "LaurentPoly":
        """Affine reflection ``x**m -> q**m x**-m``."""
        return self._exp_scaled(q, negate=True)

    def tau(self, mu: int, q) -> "LaurentPoly":
        """Translation ``x**m -> q**(mu*m) x**m``, i.e. ``f(q**mu x)``."""
        return self._exp_scaled(q ** int(mu) if _scalar_backend(q) != FLOAT else None,
                                negate=False, q=q, mu=int(mu))

    def dilate(self, lam) -> "LaurentPoly":
        """Return ``f(lam * x)``."""
        return self._exp_scaled(lam, negate=False)

    def _exp_scaled(self, lam, negate: bool, q=None, mu: int = 1) -> "LaurentPoly":
        if not self._terms:
            return self
        b = _scalar_backend(lam if lam is not None else q)
        backend = _merge_backend(self._backend, b)
        bits = self._bits or (float_bits(lam if lam is not None else q) if b == FLOAT else None)

        def run():
            base = lam if lam is not None else q ** mu
            if backend == FLOAT:
                base = mpc(base)
            else:
                base = mpq(base)
            sign = -1 if negate else 1
            return LaurentPoly._raw({sign * e: c * base ** e for e, c in self._terms.items()},
                                    backend, bits)

        if backend == FLOAT:
            with precision(bits):
                return run()
        return run()

    def is_symmetric(self) -> bool:
        return self.s1() == self

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x0):
        return evaluate(self, x0)

    # -- serialisation ----------------------------------------------------------

    def to_text(self) -> str:
        """Render as ``"c*x^e + ..."`` in ascending exponent order."""
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(c)}*x^{e}" for e, c in self.items())

    def to_json(self) -> dict:
        return {"terms": [{"e": e, "c": scalar_to_json(c)} for e, c in self.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        return cls({int(t["e"]): scalar_from_json(t["c"]) for t in obj.get("terms", [])})

    _TERM = re.compile(r"^\s*(?P<c>[^*]+?)\s*\*\s*x\^(?P<e>[+-]?\d+)\s*$")

    @classmethod
    def from_text(cls, text: str) -> "LaurentPoly":
        """Parse the text format produced by :meth:`to_text`.

        Only rational coefficients are accepted.
        """
        text = text.strip().replace("−", "-")
        if text == "0":
            return cls.zero()
        terms: dict[int, mpq] = {}
        for chunk in text.split(" + "):
            m = cls._TERM.match(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r}")
            e = int(m.group("e"))
            terms[e] = terms.get(e, mpq(0)) + to_exact(m.group("c"))
        return cls(terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()})"


# ---------------------------------------------------------------------------
# module level operations
# ---------------------------------------------------------------------------

def laurent(terms: Mapping[int, object] | Iterable | None = None) -> LaurentPoly:
    """Convenience constructor accepting a mapping or ``(e, c)`` pairs."""
    if terms is None:
        return LaurentPoly.zero()
    if not isinstance(terms, Mapping):
        acc: dict[int, object] = {}
        for e, c in terms:
            acc[e] = acc.get(e, 0) + c
        terms = acc
    return LaurentPoly(terms)


def act_weyl(w, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Apply ``s0``, ``s1`` or ``tau(mu)`` to ``f``.

    Parameters
    ----------
    w : str or tuple
        ``"s0"``, ``"s1"``, ``"tau(mu)"`` or ``("tau", mu)``.
    f : LaurentPoly
    t : ParameterSet
        Supplies ``q``.
    """
    if isinstance(w, tuple) and len(w) == 2 and w[0] == "tau":
        return f.tau(int(w[1]), t.q)
    if w == "s1":
        return f.s1()
    if w == "s0":
        return f.s0(t.q)
    if isinstance(w, str):
        m = re.fullmatch(r"tau\(\s*([+-]?\d+)\s*\)", w.strip())
        if m:
            return f.tau(int(m.group(1)), t.q)
    raise ValueError(f"unknown Weyl group element {w!r}")


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Divide ``f`` by ``g`` in the Laurent ring.

    Raises
    ------
    ZeroDivisionError
        If ``g`` is zero.
    NotDivisible
        If the division leaves a remainder (beyond float slack).
    """
    if not isinstance(g, LaurentPoly):
        g = LaurentPoly.constant(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    backend = _merge_backend(f.backend, g.backend)
    bits = f._ctx_bits(g)
    fmin, fmax = f.min_exp(), f.max_exp()
    gmin, gmax = g.min_exp(), g.max_exp()
    df, dg = fmax - fmin, gmax - gmin
    if df < dg:
        raise NotDivisible("dividend has smaller span than divisor")

    def run():
        conv = mpc if backend == FLOAT else mpq
        rem = [conv(f.coeff(fmin + i)) for i in range(df + 1)]
        den = [conv(g.coeff(gmin + i)) for i in range(dg + 1)]
        lead = den[-1]
        quo = [conv(0)] * (df - dg + 1)
        for i in range(df - dg, -1, -1):
            c = rem[i + dg] / lead
            if c != 0:
                quo[i] = c
                for j in range(dg + 1):
                    rem[i + j] -= c * den[j]
            rem[i + dg] = conv(0)
        leftover = rem[:dg]
        if backend == FLOAT:
            scale = max(max(abs(v) for v in f._terms.values()),
                        max(abs(v) for v in quo) * max(abs(v) for v in den))
            atol, rtol = float_tols(bits)
            slack = max(atol, rtol * scale)
            bad = any(abs(v) > slack for v in leftover)
        else:
            bad = any(v != 0 for v in leftover)
        if bad:
            raise NotDivisible("nonzero remainder in Laurent division")
        shift = fmin - gmin
        terms = {shift + i: c for i, c in enumerate(quo) if c != 0}
        return LaurentPoly._raw(terms, backend, bits)

    if backend == FLOAT:
        with precision(bits):
            return run()
    return run()


def leading_term(f: LaurentPoly) -> tuple[int, object]:
    """Term of maximal rank: returns ``(exponent, coefficient)``."""
    if f.is_zero():
        raise EmptyPolynomial("zero polynomial has no leading term")
    e = max(f.support(), key=rank)
    return e, f.coeff(e)


def evaluate(f: LaurentPoly, x0):
    """Evaluate ``f`` at the nonzero point ``x0``."""
    if f.is_zero():
        return mpq(0) if is_exact(x0) else to_float(0, float_bits(x0))
    if x0 == 0:
        if f.min_exp() < 0:
            raise PoleAtZero("negative exponents at x = 0")
        return f.coeff(0) if 0 in f.support() else mpq(0)
    if f.backend == EXACT and is_exact(x0):
        x0 = mpq(x0)
        return sum((c * x0 ** e for e, c in f.items()), mpq(0))
    bits = max(f.bits or 0, float_bits(x0) if is_float(x0) else 0) or DEFAULT_BITS
    with precision(bits):
        z = mpc(x0)
        return sum((mpc(c) * z ** e for e, c in f.items()), mpc(0))


def weyl_denominator(t: ParameterSet) -> LaurentPoly:
    """Generalised Weyl denominator ``x - (1/a + 1/b) + 1/(a*b) x**-1``."""
    def build():
        ia, ib = 1 / t.a, 1 / t.b
        return LaurentPoly({1: t.scalar(1), 0: -(ia + ib), -1: ia * ib})

    return t._derive(build)
