"""Exact rational functions on the spectral curve, and their expansions.

A CurveFun is (A + B*w) / Q^m in the coordinate ring of w^2 = F(z): A and
B are polynomials in x, z and the parameters, Q is the fixed polynomial of
the active construction, and w^2 is always rewritten to F.  Since {1, w}
is a free module basis over the polynomial ring, a CurveFun is zero
exactly when A = B = 0, and reduction only ever needs exact division by Q;
no polynomial gcd is required anywhere.

The module builds the coefficients u0, u1 of the second-order reduction

    psi'' = u1 * psi' + u0 * psi

satisfied by common eigenfunctions, verifies that the quartic operator
acts on such psi as multiplication by z, and expands curve functions at
the point at infinity in the local parameter k = 1/sqrt(z).
"""

from __future__ import annotations

from dataclasses import dataclass

from .curve import SpectralCurve
from .poly import Poly, Rat
from .qsolver import QPolynomial
from .series import LaurentSeries, TruncationError, series_from_poly
from .weyl import DiffOp


class ContextMismatchError(ValueError):
    """Arithmetic between curve functions over different (Q, F) contexts."""


@dataclass(frozen=True)
class CurveContext:
    q: QPolynomial
    curve: SpectralCurve

    def __post_init__(self):
        if self.q.g != self.curve.g:
            raise ContextMismatchError("genus mismatch between Q and curve")

    def matches(self, other: "CurveContext") -> bool:
        return (self.q.q == other.q.q
                and self.curve.coeffs == other.curve.coeffs)


class CurveFun:
    """(A + B*w) / Q^m, kept reduced: for m > 0, Q does not divide both A
    and B."""

    __slots__ = ("ctx", "a", "b", "m")

    def __init__(self, ctx: CurveContext, a: Poly, b: Poly, m: int):
        if m < 0:
            raise ValueError("denominator exponent must be >= 0")
        q = ctx.q.q
        while m > 0:
            qa = a.try_div(q)
            if qa is None:
                break
            qb = b.try_div(q)
            if qb is None:
                break
            a, b, m = qa, qb, m - 1
        self.ctx = ctx
        self.a = a
        self.b = b
        self.m = m

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_poly(ctx: CurveContext, p: Poly) -> "CurveFun":
        return CurveFun(ctx, p, Poly.zero(), 0)

    @staticmethod
    def w(ctx: CurveContext) -> "CurveFun":
        return CurveFun(ctx, Poly.zero(), Poly.one(), 0)

    @staticmethod
    def zero(ctx: CurveContext) -> "CurveFun":
        return CurveFun(ctx, Poly.zero(), Poly.zero(), 0)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def _require_ctx(self, other: "CurveFun") -> None:
        if not self.ctx.matches(other.ctx):
            raise ContextMismatchError(
                "curve functions live on different curves")

    def __eq__(self, other):
        if not isinstance(other, CurveFun):
            return NotImplemented
        self._require_ctx(other)
        return (self - other).is_zero()

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "CurveFun") -> "CurveFun":
        self._require_ctx(other)
        q = self.ctx.q.q
        m = max(self.m, other.m)
        fs = q ** (m - self.m)
        fo = q ** (m - other.m)
        return CurveFun(self.ctx, self.a * fs + other.a * fo,
                        self.b * fs + other.b * fo, m)

    def __neg__(self) -> "CurveFun":
        return CurveFun(self.ctx, -self.a, -self.b, self.m)

    def __sub__(self, other: "CurveFun") -> "CurveFun":
        return self + (-other)

    def __mul__(self, other: "CurveFun") -> "CurveFun":
        self._require_ctx(other)
        f = self.ctx.curve.as_poly()
        a = self.a * other.a + self.b * other.b * f
        b = self.a * other.b + self.b * other.a
        return CurveFun(self.ctx, a, b, self.m + other.m)

    def scale(self, factor) -> "CurveFun":
        p = factor if isinstance(factor, Poly) else Poly.rat(factor)
        return CurveFun(self.ctx, self.a * p, self.b * p, self.m)

    def diff_x(self) -> "CurveFun":
        """x-derivative by the quotient rule; w and z are point
        coordinates, constant in x."""
        q = self.ctx.q.q
        qx = q.diff("x")
        mm = Rat(self.m)
        a = self.a.diff("x") * q - mm * qx * self.a
        b = self.b.diff("x") * q - mm * qx * self.b
        return CurveFun(self.ctx, a, b, self.m + 1)

    def sigma(self) -> "CurveFun":
        """Pullback under the sheet involution (z, w) -> (z, -w)."""
        return CurveFun(self.ctx, self.a, -self.b, self.m)

    def __str__(self):
        num = f"({self.a})"
        if not self.b.is_zero():
            num += f" + ({self.b})*w"
        if self.m == 0:
            return num
        return f"[{num}] / Q^{self.m}"

    def __repr__(self):
        return f"CurveFun({self})"


def cf_arith(u: CurveFun, v: CurveFun, kind: str) -> CurveFun:
    if kind == "add":
        return u + v
    if kind == "mul":
        return u * v
    raise ValueError(f"unknown operation {kind!r}")


def reduction_coefficients(qp: QPolynomial,
                           curve: SpectralCurve) -> tuple[CurveFun, CurveFun]:
    """The coefficients (u0, u1) of psi'' = u1 psi' + u0 psi:

        u0 = -(1/2) Q''/Q + w/Q - V,        u1 = Q'/Q

    with Q' = dQ/dx.  u1 is invariant under the sheet involution (it has
    no w part), which encodes self-adjointness of the quartic operator.
    """
    ctx = CurveContext(q=qp, curve=curve)
    q = qp.q
    u0 = CurveFun(ctx,
                  Rat(-1, 2) * q.diff("x").diff("x") - qp.v * q,
                  Poly.one(), 1)
    u1 = CurveFun(ctx, q.diff("x"), Poly.zero(), 1)
    return u0, u1


def reduction_residuals(u0: CurveFun, u1: CurveFun,
                        l4: DiffOp) -> tuple[CurveFun, CurveFun]:
    """Act with the quartic on solutions of the second-order reduction.

    Writing L4 psi = R0 psi + R1 psi' via repeated use of
    psi'' = u1 psi' + u0 psi, the pair must satisfy R0 = z and R1 = 0.
    Returns (R0 - z, R1) as curve functions; both must be exactly zero.
    """
    if l4.order() != 4 or l4.coeff(4) != Poly.one() or not l4.coeff(3).is_zero():
        raise ValueError("expected monic quartic with zero cubic term")
    ctx = u0.ctx
    f0 = CurveFun.from_poly(ctx, l4.coeff(0))
    f1 = CurveFun.from_poly(ctx, l4.coeff(1))
    f2 = CurveFun.from_poly(ctx, l4.coeff(2))
    two = CurveFun.from_poly(ctx, Poly.rat(2))
    three = CurveFun.from_poly(ctx, Poly.rat(3))
    u0x = u0.diff_x()
    u1x = u1.diff_x()
    r0 = (f0 + f2 * u0 + u0 * u0 + u1 * u0x
          + u0 * (u1 * u1 + two * u1x) + u0x.diff_x())
    r1 = (f1 + f2 * u1 + u1 * u1 * u1 + two * u0x
          + u1 * (two * u0 + three * u1x) + u1x.diff_x())
    zfun = CurveFun.from_poly(ctx, Poly.var("z"))
    return r0 - zfun, r1


def expand_w(curve: SpectralCurve, trunc: int) -> LaurentSeries:
    """Series of w = sqrt(F(z)) at infinity in k = 1/sqrt(z), on the branch
    with leading term k^-(2g+1)."""
    d = 2 * curve.g + 1
    f_series = series_from_poly(curve.as_poly(), trunc + 2 * d)
    unit = f_series.shift(2 * d)
    return unit.sqrt().shift(-d).truncate(trunc)


def expand_at_infinity(u: CurveFun, order: int) -> LaurentSeries:
    """Laurent expansion of a curve function at infinity, O(k^order).

    Substitutes z = k^(-2) and w = k^-(2g+1) sqrt(1 + c_{2g} k^2 + ...),
    expands 1/Q^m geometrically, and multiplies out.  The working budget
    is chosen from the degrees involved so the result reaches the
    requested order; TruncationError otherwise.
    """
    if order < 1:
        raise ValueError("expansion order must be >= 1")
    g = u.ctx.curve.g
    dz = max(u.a.degree("z"), u.b.degree("z"), 0)
    budget = order + 2 * dz + (2 * g + 1) + 2 * g * u.m + 6
    a_s = series_from_poly(u.a, budget)
    out = a_s
    if not u.b.is_zero():
        w_s = expand_w(u.ctx.curve, budget)
        out = out + series_from_poly(u.b, budget) * w_s
    if u.m:
        q_s = series_from_poly(u.ctx.q.q, budget)
        out = out * q_s.inverse() ** u.m
    if out.trunc < order:
        raise TruncationError(
            f"internal budget reached only O(k^{out.trunc}), "
            f"needed O(k^{order})")
    return out.truncate(order)


def expansion_report(s0: LaurentSeries, s1: LaurentSeries,
                     qp: QPolynomial, curve: SpectralCurve) -> dict:
    """Check every identity readable from the expansions at infinity.

    s0, s1 are the expansions of u0 and u1.  Verifies that u0 starts as
    1/k, that its constant and k^1 coefficients recover the potentials
    (-V and -W/2), that the self-adjointness criterion holds (k^1
    coefficient of u1 vanishes, and in fact every odd coefficient), and
    the root-free trace relation W = 2*[z^(g-1)]Q - c_{2g}.
    """
    need = 2 * qp.g + 5
    if s1.trunc < need + 1 or s0.trunc < 2:
        raise TruncationError(
            f"expansions must reach O(k^{need+1}) for the odd-coefficient "
            "sweep")
    checks = {}
    checks["leading_term"] = (s0.val == -1
                              and s0.coeff(-1) == Poly.one())
    checks["potential_v"] = s0.coeff(0) == -qp.v
    checks["potential_w"] = s0.coeff(1) == qp.w.exact_div(Poly.rat(-2))
    checks["self_adjoint_b1"] = s1.coeff(1).is_zero()
    odd_ok = True
    for n in s1.known_range():
        if n % 2 and not s1.coeff(n).is_zero():
            odd_ok = False
            break
    checks["odd_coeffs_vanish"] = odd_ok
    sub = qp.q.coeff_in("z", qp.g - 1)
    checks["trace_identity"] = qp.w == 2 * sub - curve.coeffs[2 * qp.g]
    checks["all"] = all(checks.values())
    return checks
