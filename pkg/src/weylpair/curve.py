"""Hyperelliptic spectral curves w^2 = F(z) and their nonsingularity.

F is monic of odd degree 2g+1 in z with coefficients that depend only on
the parameters a0..a3 (never on x or z), so the curve carries the sheet
involution (z, w) -> (z, -w) by construction.  Nonsingularity of the
affine model is equivalent to F being squarefree, i.e. disc_z(F) != 0;
the single point at infinity of an odd-degree hyperelliptic model is
always smooth in the standard completion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Poly, discriminant


class ParamError(ValueError):
    """Invalid parameter binding (missing value, or a3 = 0)."""


@dataclass(frozen=True)
class SpectralCurve:
    """Monic F(z) = z^(2g+1) + c_{2g} z^(2g) + ... + c_0.

    coeffs[i] = c_i as a polynomial in the parameters only.
    """

    g: int
    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.coeffs) != 2 * self.g + 1:
            raise ValueError(
                f"genus {self.g} curve needs {2*self.g+1} coefficients, "
                f"got {len(self.coeffs)}")
        for c in self.coeffs:
            if c.degree("x") > 0 or c.degree("z") > 0:
                raise ValueError(
                    "curve coefficients must depend on parameters only")

    def as_poly(self) -> Poly:
        """F as a polynomial in z (and any unbound parameters)."""
        z = Poly.var("z")
        f = z ** (2 * self.g + 1)
        for i, c in enumerate(self.coeffs):
            f = f + c * z**i
        return f

    def eval_params(self, params: dict) -> "SpectralCurve":
        return SpectralCurve(
            g=self.g, coeffs=tuple(c.eval(params) for c in self.coeffs))

    def to_json(self) -> dict:
        return {"g": self.g, "c": [c.to_json() for c in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "SpectralCurve":
        return SpectralCurve(
            g=obj["g"], coeffs=tuple(Poly.from_json(c) for c in obj["c"]))


def discriminant_curve(curve: SpectralCurve) -> Poly:
    """disc_z(F), a polynomial in the parameters; the curve at a given
    parameter point is nonsingular exactly when this is nonzero there."""
    return discriminant(curve.as_poly(), "z")


def is_nonsingular(curve: SpectralCurve, params: dict) -> bool:
    """Whether the curve is nonsingular at a full rational parameter point.

    params must bind every parameter still present in the coefficients;
    a3 = 0 is rejected because the construction requires a3 != 0.
    """
    if "a3" in params and Poly.rat(params["a3"]).is_zero():
        raise ParamError("a3 must be nonzero")
    f = curve.as_poly().eval(params)
    for name in ("a0", "a1", "a2", "a3"):
        if f.degree(name) > 0:
            raise ParamError(f"parameter {name} left unbound")
    return not discriminant(f, "z").is_zero()
