"""Ordinary differential operators with polynomial coefficients.

A DiffOp is an element of the first Weyl algebra: sum_i c_i(x) D^i where
D = d/dx and each c_i is a Poly free of the spectral variable z.  The
canonical form keeps every coefficient to the left of the corresponding
power of D, so equality of operators is structural equality of their
coefficient lists.
"""

from __future__ import annotations

import os

from .poly import Poly, Rat, binomial


class TermBudgetError(RuntimeError):
    """Raised when a product exceeds the WEYL_COMMUTE_MAX_TERMS budget."""


def _check_budget(coeffs: list[Poly]) -> None:
    cap = os.environ.get("WEYL_COMMUTE_MAX_TERMS")
    if not cap:
        return
    total = sum(c.term_count() for c in coeffs)
    if total > int(cap):
        raise TermBudgetError(
            f"operator has {total} polynomial terms, over the "
            f"WEYL_COMMUTE_MAX_TERMS budget of {cap}")


class DiffOp:
    """coeffs[i] is the coefficient of D^i; trailing zeros are stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [c if isinstance(c, Poly) else Poly.rat(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        for c in coeffs:
            if c.degree("z") > 0:
                raise ValueError("operator coefficients must be z-free")
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "DiffOp":
        return DiffOp([])

    @staticmethod
    def identity() -> "DiffOp":
        return DiffOp([Poly.one()])

    @staticmethod
    def d(n: int = 1) -> "DiffOp":
        """The pure derivative D^n."""
        return DiffOp([Poly.zero()] * n + [Poly.one()])

    @staticmethod
    def from_poly(p: Poly) -> "DiffOp":
        """Multiplication operator by a z-free polynomial."""
        return DiffOp([p])

    # -- basics --------------------------------------------------------

    def order(self) -> int:
        """Order of the operator; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Poly:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Poly.zero()

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "DiffOp":
        f = factor if isinstance(factor, Poly) else Poly.rat(factor)
        return DiffOp([c * f for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, DiffOp):
            return op_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator powers must be non-negative integers")
        result = DiffOp.identity()
        for _ in range(n):
            result = op_mul(result, self)
        return result

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
            if not dpart:
                parts.append(f"({c})")
            elif c == Poly.one():
                parts.append(dpart)
            else:
                parts.append(f"({c})*{dpart}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self})"

    def to_json(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "DiffOp":
        return DiffOp([Poly.from_json(c) for c in obj["coeffs"]])


def op_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Composition a∘b, normalized to coefficients-on-the-left form.

    Uses the exchange rule D^n ∘ f = sum_k C(n,k) f^(k) D^(n-k); the order
    of a nonzero product is order(a) + order(b).
    """
    if a.is_zero() or b.is_zero():
        return DiffOp.zero()
    na, nb = a.order(), b.order()
    # derivs[j][k] = k-th x-derivative of b.coeffs[j]
    derivs: list[list[Poly]] = []
    for bj in b.coeffs:
        chain = [bj]
        for _ in range(na):
            chain.append(chain[-1].diff("x"))
        derivs.append(chain)
    out = [Poly.zero()] * (na + nb + 1)
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for k in range(i + 1):
            cik = binomial(i, k)
            for j in range(nb + 1):
                bjk = derivs[j][k]
                if bjk.is_zero():
                    continue
                term = ai * bjk
                if cik != 1:
                    term = term * Rat(cik)
                out[i + j - k] = out[i + j - k] + term
    _check_budget(out)
    return DiffOp(out)


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return op_mul(a, b) - op_mul(b, a)


def anticommutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return op_mul(a, b) + op_mul(b, a)


def adjoint(a: DiffOp) -> DiffOp:
    """Formal adjoint sum_i (-1)^i D^i ∘ c_i, expanded to canonical form."""
    if a.is_zero():
        return DiffOp.zero()
    n = a.order()
    out = [Poly.zero()] * (n + 1)
    for i, ci in enumerate(a.coeffs):
        if ci.is_zero():
            continue
        sign = -1 if i % 2 else 1
        dk = ci
        for k in range(i + 1):
            term = dk * Rat(sign * binomial(i, k))
            out[i - k] = out[i - k] + term
            dk = dk.diff("x")
    return DiffOp(out)


def is_self_adjoint(a: DiffOp) -> bool:
    return adjoint(a) == a


def poly_of_op(c: list[Poly], op: DiffOp) -> DiffOp:
    """sum_j (multiplication by c_j) ∘ op^j.

    The coefficients multiply on the left so that, applied to an
    eigenfunction with eigenvalue z, the result evaluates sum_j c_j(x) z^j.
    """
    for cj in c:
        if cj.degree("z") > 0:
            raise ValueError("coefficients must be z-free")
    result = DiffOp.zero()
    power = DiffOp.identity()
    for j, cj in enumerate(c):
        if j > 0:
            power = op_mul(power, op)
        if not cj.is_zero():
            result = result + op_mul(DiffOp.from_poly(cj), power)
    return result


def apply_to(op: DiffOp, f: Poly) -> Poly:
    """Apply the operator to a polynomial function of x (and parameters)."""
    out = Poly.zero()
    df = f
    for i, ci in enumerate(op.coeffs):
        if i > 0:
            df = df.diff("x")
        if not ci.is_zero():
            out = out + ci * df
    return out
