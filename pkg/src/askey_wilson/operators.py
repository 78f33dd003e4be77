"""Difference-reflection operators of the rank-one double affine Hecke algebra.

The algebra acts on Laurent polynomials through the tokens

* ``T0``, ``T1``: difference-reflection operators with multiplicities
  ``k0``, ``k1``;
* ``T0v``, ``T1v``: the dual generators, built from ``T0``, ``T1`` and
  multiplication by ``x``;
* the inverses ``T0inv``, ``T1inv``, ``T0vinv``, ``T1vinv``;
* ``Z(k)``: multiplication by ``x**k``.

Words are tuples of tokens applied right to left, and an
:class:`OperatorExpr` is a finite linear combination of words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotSymmetric, UnknownOperator
from .laurent import LaurentPoly, exact_div, rank, weyl_denominator
from .params import (
    EXACT,
    FLOAT,
    ParameterSet,
    float_bits,
    gamma,
    is_float,
    precision,
    scalar_from_json,
    scalar_to_json,
)
from .report import EXACT_RESIDUAL, VerificationReport

BASE_TOKENS = ("T0", "T1", "T0v", "T1v", "T0inv", "T1inv", "T0vinv", "T1vinv")
_Z_TOKEN = re.compile(r"^Z\((-?\d+)\)$")
NAMED = ("Y", "Yinv", "S0", "S1", "Cplus", "Cminus", "hplus", "hminus")


def _check_token(tok: str) -> str:
    if tok in BASE_TOKENS or _Z_TOKEN.match(tok):
        return tok
    raise UnknownOperator(tok)


def Z(k: int) -> str:
    """Token for multiplication by ``x**k``."""
    return f"Z({int(k)})"


# ---------------------------------------------------------------------------
# formal expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorExpr:
    """Linear combination ``sum_i coeff_i * word_i``.

    Parameters
    ----------
    terms : tuple of (Scalar, tuple of str)
        Coefficient and token word; the rightmost token acts first.

    Examples
    --------
    >>> Y = OperatorExpr.word("T1", "T0")
    >>> (Y @ Y).terms[0][1]
    ('T1', 'T0', 'T1', 'T0')
    """

    terms: tuple = ()

    def __post_init__(self):
        for _, word in self.terms:
            for tok in word:
                _check_token(tok)

    @classmethod
    def word(cls, *tokens: str, coeff=1) -> "OperatorExpr":
        return cls(((coeff, tuple(tokens)),))

    @classmethod
    def identity(cls, coeff=1) -> "OperatorExpr":
        return cls(((coeff, ()),))

    def __add__(self, other) -> "OperatorExpr":
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.identity(other)
        return OperatorExpr(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "OperatorExpr":
        return self.scale(-1)

    def __sub__(self, other) -> "OperatorExpr":
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.identity(other)
        return self + (-other)

    def __rsub__(self, other) -> "OperatorExpr":
        return (-self) + other

    def scale(self, c) -> "OperatorExpr":
        return OperatorExpr(tuple((_mul(c, k), w) for k, w in self.terms))

    def __mul__(self, c) -> "OperatorExpr":
        if isinstance(c, OperatorExpr):
            return self @ c
        return self.scale(c)

    def __rmul__(self, c) -> "OperatorExpr":
        return self.scale(c)

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        """Composition: ``(A @ B)(f) = A(B(f))``."""
        return OperatorExpr(tuple((_mul(c1, c2), w1 + w2)
                                  for c1, w1 in self.terms for c2, w2 in other.terms))

    def to_json(self) -> dict:
        return {"terms": [{"coeff": scalar_to_json(c), "word": list(w)} for c, w in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "OperatorExpr":
        return cls(tuple((scalar_from_json(t["coeff"]), tuple(t["word"])) for t in obj["terms"]))


# ---------------------------------------------------------------------------
# token semantics
# ---------------------------------------------------------------------------

def _mul(x, y):
    # keep the precision of float coefficients instead of the ambient context
    if is_float(x) or is_float(y):
        with precision(max(float_bits(v) for v in (x, y) if is_float(v))):
            return x * y
    return x * y


@lru_cache(maxsize=64)
def _factors(t: ParameterSet):
    """Numerators and denominators of the rational factors of T1 and T0."""
    x = LaurentPoly.monomial(1, t.scalar(1))
    one = LaurentPoly.constant(t.scalar(1))
    num1 = (one - x.scale(t.a)) * (one - x.scale(t.b))
    den1 = one - x * x
    xi = LaurentPoly.monomial(-1, t.scalar(1))
    num0 = (one - xi.scale(t.c)) * (one - xi.scale(t.d))
    den0 = one - (xi * xi).scale(t.q)
    inv = t._derive(lambda: (1 / t.k0, 1 / t.k1, 1 / t.p))
    return num1, den1, num0, den0, inv


def _as_backend(f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    if f.backend is None or f.backend == t.backend:
        return f
    if t.backend == EXACT:
        return f.to_exact()
    return f.to_float(t.bits)


def _T1(f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    num1, den1, _, _, (_, ik1, _) = _factors(t)
    diff = f.s1() - f
    return f.scale(t.k1) + exact_div(num1 * diff, den1).scale(ik1)


def _T0(f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    _, _, num0, den0, (ik0, _, _) = _factors(t)
    diff = f.s0(t.q) - f
    return f.scale(t.k0) + exact_div(num0 * diff, den0).scale(ik0)


def _apply_token(tok: str, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    if f.is_zero():
        return f
    _, _, _, _, (ik0, ik1, ip) = _factors(t)
    if tok == "T1":
        return _T1(f, t)
    if tok == "T0":
        return _T0(f, t)
    if tok == "T1inv":
        return _T1(f, t) + f.scale(t._derive(lambda: ik1 - t.k1))
    if tok == "T0inv":
        return _T0(f, t) + f.scale(t._derive(lambda: ik0 - t.k0))
    if tok == "T1v":
        return _apply_token("T1inv", f, t).shift(-1)
    if tok == "T0v":
        return _apply_token("T0inv", f.shift(1), t).scale(ip)
    if tok == "T1vinv":
        return _T1(f.shift(1), t)
    if tok == "T0vinv":
        return _T0(f, t).shift(-1).scale(t.p)
    m = _Z_TOKEN.match(tok)
    if m:
        return f.shift(int(m.group(1)))
    raise UnknownOperator(tok)


def apply_word(word, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Apply a token word right to left."""
    for tok in reversed(tuple(word)):
        f = _apply_token(tok, f, t)
    return f


def apply_expr(expr, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Apply an operator expression (or a named expression) to ``f``.

    Parameters
    ----------
    expr : OperatorExpr, str or sequence of str
        A named expression (``"Y"``, ``"S0"``, ...), a single token word, or
        a full linear combination.
    f : LaurentPoly
    t : ParameterSet

    Returns
    -------
    LaurentPoly
    """
    if isinstance(expr, str):
        expr = named_expr(expr, t) if expr in NAMED else OperatorExpr.word(expr)
    elif not isinstance(expr, OperatorExpr):
        expr = OperatorExpr.word(*expr)
    f = _as_backend(f, t)
    # Share the evaluation of common right factors between words.
    cache: dict[tuple, LaurentPoly] = {(): f}

    def run(word: tuple) -> LaurentPoly:
        if word in cache:
            return cache[word]
        out = _apply_token(word[0], run(word[1:]), t)
        cache[word] = out
        return out

    out = LaurentPoly.zero()
    for c, word in expr.terms:
        g = run(tuple(word))
        out = out + g.scale(t.scalar(c) if not isinstance(c, int) else c)
    return _as_backend(out, t)


def named_expr(name: str, t: ParameterSet) -> OperatorExpr:
    """Named elements of the algebra as operator expressions.

    ``t`` supplies the multiplicities appearing in the scalar coefficients of
    ``Cplus``, ``Cminus``, ``hplus`` and ``hminus``.

    Raises
    ------
    UnknownOperator
        For names outside ``Y, Yinv, S0, S1, Cplus, Cminus, hplus, hminus``.
    """
    W = OperatorExpr.word
    Y = W("T1", "T0")
    Yinv = W("T0inv", "T1inv")
    if name == "Y":
        return Y
    if name == "Yinv":
        return Yinv
    if name == "S1":
        return W("T1") @ Y - Y @ W("T1")
    if name == "S0":
        return Y @ W("T1v") - W("T1v") @ Y
    k0, k1 = t.k0, t.k1
    if name == "Cplus":
        c = t._derive(lambda: 1 / (1 + k1 * k1))
        return OperatorExpr.identity(c) + W("T1", coeff=t._derive(lambda: c * k1))
    if name == "Cminus":
        c = t._derive(lambda: 1 / (1 + 1 / (k1 * k1)))
        return OperatorExpr.identity(c) + W("T1", coeff=t._derive(lambda: -c / k1))
    mid = t._derive(lambda: k1 / k0 - k0 * k1)
    k1sq = t._derive(lambda: -k1 * k1)
    if name == "hplus":
        return Y + OperatorExpr.identity(mid) + Yinv.scale(k1sq)
    if name == "hminus":
        return Yinv + OperatorExpr.identity(mid) + Y.scale(k1sq)
    raise UnknownOperator(name)


def h_value(t: ParameterSet, z, sign: str):
    """Scalar ``h_plus(z)`` or ``h_minus(z)`` (the named cubic at a point)."""
    def run():
        mid = t.k1 / t.k0 - t.k0 * t.k1
        if sign in ("+", "plus"):
            return z + mid - t.k1 * t.k1 / z
        if sign in ("-", "minus"):
            return 1 / z + mid - t.k1 * t.k1 * z
        raise ValueError(f"unknown sign {sign!r}")

    return t._derive(run)


# ---------------------------------------------------------------------------
# the Askey-Wilson operator and shift operators
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _L_parts(t: ParameterSet):
    x = LaurentPoly.monomial(1, t.scalar(1))
    one = LaurentPoly.constant(t.scalar(1))
    num = one
    for e in t.abcd:
        num = num * (one - x.scale(e))
    den = (one - x * x) * (one - (x * x).scale(t.q))
    g = t._derive(lambda: t.k0 * t.k1)
    return num, den, t._derive(lambda: 1 / g), t._derive(lambda: g + 1 / g)


def apply_L(f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Second order Askey-Wilson q-difference operator on a symmetric ``f``.

    Raises
    ------
    NotSymmetric
        If ``f`` is not invariant under ``x -> 1/x``.
    """
    f = _as_backend(f, t)
    if not f.is_symmetric():
        raise NotSymmetric("the Askey-Wilson operator acts on symmetric polynomials")
    num, den, ig, const = _L_parts(t)
    qi = t._derive(lambda: 1 / t.q)
    # A(x)(f(qx) - f) + A(1/x)(f(x/q) - f) over the common denominator D(x)D(1/x).
    top = (num * den.s1() * (f.dilate(t.q) - f)
           + num.s1() * den * (f.dilate(qi) - f))
    return exact_div(top, den * den.s1()).scale(ig) + f.scale(const)


def apply_shift(direction: str, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Shift operators between ``t`` and ``(k0, q*k1, u0, u1)``.

    ``plus`` lowers the degree: ``G+ f = h+(Y) f / delta``.  ``minus`` raises
    it: ``G- f = h-(Y)(delta f)``.  ``f`` must be symmetric.
    """
    f = _as_backend(f, t)
    if not f.is_symmetric():
        raise NotSymmetric("shift operators act on symmetric polynomials")
    delta = weyl_denominator(t)
    if direction in ("plus", "+"):
        return exact_div(apply_expr(named_expr("hplus", t), f, t), delta)
    if direction in ("minus", "-"):
        return apply_expr(named_expr("hminus", t), delta * f, t)
    raise ValueError(f"unknown direction {direction!r}")


def apply_poly_in_Y(factors, f: LaurentPoly, t: ParameterSet) -> LaurentPoly:
    """Apply ``prod (alpha + beta * Y**xi)`` for ``(alpha, beta, xi)`` in ``factors``."""
    for alpha, beta, xi in factors:
        g = apply_word(("T1", "T0") if xi == 1 else ("T0inv", "T1inv"), f, t)
        f = f.scale(alpha) + g.scale(beta)
    return f


# ---------------------------------------------------------------------------
# relation verifier
# ---------------------------------------------------------------------------

class _Scale:
    """Largest coefficient seen while building a residual (float runs)."""

    def __init__(self):
        self.value = 1.0

    def __call__(self, f: LaurentPoly) -> LaurentPoly:
        if f.backend == FLOAT and not f.is_zero():
            self.value = max(self.value, float(f.norm_inf()))
        return f


def _window_check(M: int, t: ParameterSet, fn, seen: _Scale | None = None):
    """Run ``fn(m) -> LaurentPoly`` (a residual) over ``|m| <= M``.

    Float residuals are measured relative to the largest intermediate
    coefficient recorded in ``seen``.
    """
    def check():
        worst = 0.0
        bad = []
        for m in range(-M, M + 1):
            if seen is not None:
                seen.value = 1.0
            r = fn(m)
            if not r.is_zero():
                if t.is_exact:
                    bad.append(m)
                    worst = max(worst, float(r.norm_inf()))
                else:
                    rel = float(r.norm_inf()) / (seen.value if seen is not None else 1.0)
                    worst = max(worst, rel)
        if t.is_exact:
            detail = f"nonzero at m={bad}" if bad else ""
            return (not bad, EXACT_RESIDUAL if not bad else worst, detail)
        # float round-off grows with the window; allow half the working bits
        return (worst <= 2.0 ** -(t.bits // 2), worst)
    return check


def verify_relations(t: ParameterSet, M: int = 10) -> VerificationReport:
    """Check the defining relations of the algebra on monomials ``|m| <= M``.

    Parameters
    ----------
    t : ParameterSet
        Exact backend recommended; float inputs compare within the default
        polynomial tolerance.
    M : int
        Monomial window.

    Returns
    -------
    VerificationReport
        One record per relation family.
    """
    if M < 1:
        raise ValueError("window must be at least 1")
    rep = VerificationReport(config={"window": M})
    seen = _Scale()
    xm = lambda m: LaurentPoly.monomial(m, t.scalar(1))  # noqa: E731
    ap = lambda w, f: seen(apply_word(w, f, t))  # noqa: E731
    d = t._derive
    k0, k1, u0, u1, p, q = t.k0, t.k1, t.u0, t.u1, t.p, t.q

    def quadratic(tok, k):
        def resid(m):
            f = xm(m)
            g = ap((tok,), f)
            return ap((tok,), g) + g.scale(d(lambda: 1 / k - k)) - f
        return resid

    for tok, k, lab in (("T0", k0, "k0"), ("T1", k1, "k1"), ("T0v", u0, "u0"), ("T1v", u1, "u1")):
        rep.run(f"hecke.quadratic.{tok}", f"quadratic relation with {lab}",
                _window_check(M, t, seen=seen, fn=quadratic(tok, k)))

    for tok in BASE_TOKENS[:4]:
        def inv_resid(m, tok=tok):
            f = xm(m)
            return ap((tok, tok + "inv"), f) - f, ap((tok + "inv", tok), f) - f
        rep.run(f"hecke.inverse.{tok}", "inverse generators",
                _window_check(M, t, seen=seen, fn=lambda m, r=inv_resid: r(m)[0] + r(m)[1].shift(3 * M + 7)))

    lus = d(lambda: (k1 - 1 / k1, k0 - 1 / k0))

    def lusztig_Y(m):
        f = xm(m)
        lhs = ap(("T1", "T1", "T0"), f) - ap(("T0inv", "T1inv", "T1"), f)
        rhs = ap(("T1", "T0"), f).scale(lus[0]) + f.scale(lus[1])
        return lhs - rhs

    def lusztig_Yinv(m):
        f = xm(m)
        lhs = ap(("T1", "T0inv", "T1inv"), f) - ap(("T1", "T0", "T1"), f)
        rhs = ap(("T1", "T0"), f).scale(lus[0]) + f.scale(lus[1])
        return lhs + rhs

    rep.run("hecke.lusztig.Y", "Lusztig commutation for Y",
            _window_check(M, t, seen=seen, fn=lusztig_Y))
    rep.run("hecke.lusztig.Yinv", "Lusztig commutation for Y^-1",
            _window_check(M, t, seen=seen, fn=lusztig_Yinv))

    ip = d(lambda: 1 / p)
    rep.run("hecke.compatibility", "compatibility T1v T1 T0 T0v = q^-1/2",
            _window_check(M, t, seen=seen, fn=lambda m: ap(("T1v", "T1", "T0", "T0v"), xm(m)) - xm(m).scale(ip)))

    # f T_i g - T_i((s_i f) g) = c_i(f) g with c_i(f) the displayed rational factor.
    def commutation(i):
        def resid(m):
            g = xm(m)
            out = LaurentPoly.zero()
            for s in (1, -1):
                f = xm(s)
                if i == 1:
                    sf = f.s1()
                    za, zav = xm(2), xm(1)
                    kk, uu = k1, u1
                else:
                    sf = f.s0(q)
                    za, zav = xm(-2).scale(q), xm(-1).scale(p)
                    kk, uu = k0, u0
                tok = f"T{i}"
                lhs = f * ap((tok,), g) - ap((tok,), sf * g)
                coef = zav.scale(d(lambda: uu - 1 / uu)) + d(lambda: kk - 1 / kk)
                one = LaurentPoly.constant(t.scalar(1))
                c = exact_div(coef * (f - sf), one - za)
                out = out + (lhs - c * g).shift(s * (4 * M + 9))
            return out
        return resid

    rep.run("hecke.commutation.T1", "commutation of T1 with x^(+-1)",
            _window_check(M, t, seen=seen, fn=commutation(1)))
    rep.run("hecke.commutation.T0", "commutation of T0 with x^(+-1)",
            _window_check(M, t, seen=seen, fn=commutation(0)))

    S0, S1 = named_expr("S0", t), named_expr("S1", t)
    apx = lambda e, f: seen(apply_expr(e, f, t))  # noqa: E731

    def s1_squared(m):
        f = xm(m)
        lhs = apx(S1, apx(S1, f))
        fac = []
        for xi in (1, -1):
            fac.append((1, d(lambda: -1 / (k0 * k1)), xi))
            fac.append((1, d(lambda: k0 / k1), xi))
        rhs = apply_poly_in_Y(fac, f, t).scale(d(lambda: k1 * k1))
        return lhs - rhs

    def s0_squared(m):
        f = xm(m)
        lhs = apx(S0, apx(S0, f))
        fac = []
        for xi in (1, -1):
            pxi = p if xi == 1 else ip
            fac.append((1, d(lambda: -pxi / (u0 * u1)), xi))
            fac.append((1, d(lambda: u0 * pxi / u1), xi))
        rhs = apply_poly_in_Y(fac, f, t).scale(d(lambda: u1 * u1 / q))
        return lhs - rhs

    rep.run("hecke.intertwiner.S1_squared", "squared intertwiner S1",
            _window_check(M, t, seen=seen, fn=s1_squared))
    rep.run("hecke.intertwiner.S0_squared", "squared intertwiner S0",
            _window_check(M, t, seen=seen, fn=s0_squared))

    Y, Yinv = ("T1", "T0"), ("T0inv", "T1inv")
    qi = d(lambda: 1 / q)
    laws = (
        ("S1_Y", S1, Y, Yinv, 1, "Y S1 = S1 Y^-1"),
        ("S1_Yinv", S1, Yinv, Y, 1, "Y^-1 S1 = S1 Y"),
        ("S0_Y", S0, Y, Yinv, qi, "Y S0 = q^-1 S0 Y^-1"),
        ("S0_Yinv", S0, Yinv, Y, q, "Y^-1 S0 = q S0 Y"),
    )
    for label, S, left, right, c, ref in laws:
        def resid(m, S=S, left=left, right=right, c=c):
            f = xm(m)
            return ap(left, apx(S, f)) - apx(S, ap(right, f)).scale(c)
        rep.run(f"hecke.intertwining.{label}", ref, _window_check(M, t, seen=seen, fn=resid))

    def triangular(m):
        g = ap(Y, xm(m)) - xm(m).scale(gamma(t, m))
        bad = [e for e in g.support() if rank(e) >= rank(m)]
        return LaurentPoly({e: g.coeff(e) for e in bad})

    rep.run("hecke.triangularity.Y", "Y is triangular with diagonal gamma_m",
            _window_check(M, t, seen=seen, fn=triangular))

    Cp, Cm = named_expr("Cplus", t), named_expr("Cminus", t)

    def idempotents(m):
        f = xm(m)
        pf, mf = apx(Cp, f), apx(Cm, f)
        r = (apx(Cp, pf) - pf) + (apx(Cm, mf) - mf).shift(3 * M + 7)
        r = r + apx(Cp, mf).shift(-3 * M - 7) + (pf + mf - f).shift(6 * M + 14)
        return r

    rep.run("hecke.idempotents", "C+ and C- are complementary idempotents",
            _window_check(M, t, seen=seen, fn=idempotents))

    def L_vs_Y(m):
        f = xm(m) + xm(-m)
        return seen(apply_L(f, t)) - ap(Y, f) - ap(Yinv, f)

    rep.run("hecke.L_equals_Y_plus_Yinv", "L agrees with Y + Y^-1 on symmetric input",
            _window_check(M, t, seen=seen, fn=lambda m: L_vs_Y(abs(m))))

    hp, hm = named_expr("hplus", t), named_expr("hminus", t)

    def isotypes(m):
        sym = xm(m) + xm(-m)
        anti = apx(Cm, xm(m))
        return apx(Cp, apx(hp, sym)) + apx(Cm, apx(hm, anti)).shift(4 * M + 9)

    rep.run("hecke.h_isotypes", "h+ and h- swap the isotypes",
            _window_check(M, t, seen=seen, fn=isotypes))
    return rep
