"""Ambient models of S^n x R^m and H^n x R^m.

The sphere factor is the unit sphere of R^(n+1); the hyperbolic factor is the
upper sheet of <h,h>_L = -1 with Lorentz form diag(-1, 1, ..., 1).  Tangent
vectors are pairs (h-part, v-part) of ambient arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

MODEL_TOL = 1e-12


def lorentz(a: np.ndarray, b: np.ndarray) -> float:
    return float(-a[0] * b[0] + np.dot(a[1:], b[1:]))


def factor_inner(model: str, a: np.ndarray, b: np.ndarray) -> float:
    return lorentz(a, b) if model == "hyperbolic" else float(np.dot(a, b))


def curvature_sign(model: str) -> int:
    return -1 if model == "hyperbolic" else 1


@dataclass(frozen=True)
class ProductPoint:
    h: np.ndarray
    v: np.ndarray
    model: str = "sphere"

    def __post_init__(self):
        if self.model not in ("sphere", "hyperbolic"):
            raise ParameterError(f"unknown model {self.model!r}")
        object.__setattr__(self, "h", np.asarray(self.h, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))

    def constraint_residual(self) -> float:
        if self.model == "sphere":
            return abs(float(self.h @ self.h) - 1.0)
        res = abs(lorentz(self.h, self.h) + 1.0)
        return res if self.h[0] > 0 else float("inf")

    def check(self, tol: float = MODEL_TOL) -> "ProductPoint":
        scale = max(1.0, float(np.abs(self.h).max()) ** 2)
        if self.constraint_residual() > tol * scale:
            raise ParameterError(f"point violates the {self.model} model constraint")
        return self


@dataclass(frozen=True)
class TangentVec:
    h: np.ndarray
    v: np.ndarray

    def __add__(self, other: "TangentVec") -> "TangentVec":
        return TangentVec(self.h + other.h, self.v + other.v)

    def __sub__(self, other: "TangentVec") -> "TangentVec":
        return TangentVec(self.h - other.h, self.v - other.v)

    def __mul__(self, s: float) -> "TangentVec":
        return TangentVec(self.h * s, self.v * s)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentVec(-self.h, -self.v)

    def flip_vertical(self) -> "TangentVec":
        """The product structure P: (X^h, X^v) -> (X^h, -X^v)."""
        return TangentVec(self.h, -self.v)


def inner(p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
    return factor_inner(p.model, X.h, Y.h) + float(np.dot(X.v, Y.v))


def norm(p: ProductPoint, X: TangentVec) -> float:
    return float(np.sqrt(max(inner(p, X, X), 0.0)))


def tangency_residual(p: ProductPoint, X: TangentVec) -> float:
    return abs(factor_inner(p.model, p.h, X.h))


def project_tangent(p: ProductPoint, X: TangentVec) -> TangentVec:
    """Orthogonal projection of an ambient pair onto T_p."""
    s = factor_inner(p.model, p.h, X.h)
    sign = -1.0 if p.model == "hyperbolic" else 1.0
    # <h,h> = sign, so subtract (s / sign) h
    return TangentVec(X.h - (s / sign) * p.h, X.v)


def factor_exp(p: ProductPoint, w: TangentVec, t: float, tol: float = 1e-10) -> ProductPoint:
    """Product geodesic: great circle / hyperbola in the factor, straight line in R^m."""
    scale = max(1.0, float(np.abs(p.h).max()) * float(np.abs(w.h).max(initial=0.0)))
    if tangency_residual(p, w) > tol * scale:
        raise ParameterError("vector is not tangent at the base point")
    rho = np.sqrt(max(factor_inner(p.model, w.h, w.h), 0.0))
    if rho == 0.0:
        h = p.h + t * w.h
    elif p.model == "sphere":
        h = p.h * np.cos(rho * t) + w.h * (np.sin(rho * t) / rho)
    else:
        h = p.h * np.cosh(rho * t) + w.h * (np.sinh(rho * t) / rho)
    return ProductPoint(h, p.v + t * w.v, p.model)


def _factor_frame(p: ProductPoint) -> list[np.ndarray]:
    """Orthonormal basis of the tangent space of the factor at p.h."""
    dim = p.h.shape[0]
    basis: list[np.ndarray] = []
    for i in np.argsort(-np.abs(p.h))[::-1]:
        e = np.zeros(dim)
        e[i] = 1.0
        w = project_tangent(p, TangentVec(e, np.zeros(0))).h
        for b in basis:
            w = w - factor_inner(p.model, w, b) * b
        nrm2 = factor_inner(p.model, w, w)
        if nrm2 > 1e-10:
            basis.append(w / np.sqrt(nrm2))
        if len(basis) == dim - 1:
            break
    # a second sweep tidies residual non-orthogonality
    out: list[np.ndarray] = []
    for w in basis:
        for b in out:
            w = w - factor_inner(p.model, w, b) * b
        out.append(w / np.sqrt(factor_inner(p.model, w, w)))
    return out


def tangent_frame(p: ProductPoint) -> list[TangentVec]:
    """Orthonormal frame of T_p: factor directions first, then the R^m directions."""
    m = p.v.shape[0]
    frame = [TangentVec(b, np.zeros(m)) for b in _factor_frame(p)]
    for j in range(m):
        e = np.zeros(m)
        e[j] = 1.0
        frame.append(TangentVec(np.zeros_like(p.h), e))
    return frame


def ambient_curvature(p: ProductPoint, X: TangentVec, Y: TangentVec,
                      Z: TangentVec, W: TangentVec) -> float:
    """Rm(X,Y,Z,W) = c(<Xh,Zh><Yh,Wh> - <Yh,Zh><Xh,Wh>), so Rm(X,Y,X,Y) is the sectional numerator."""
    ip = lambda a, b: factor_inner(p.model, a, b)
    c = curvature_sign(p.model)
    return c * (ip(X.h, Z.h) * ip(Y.h, W.h) - ip(Y.h, Z.h) * ip(X.h, W.h))


def hyperboloid_point(xi: np.ndarray) -> np.ndarray:
    """Point of H^n over the spatial coordinates xi."""
    xi = np.asarray(xi, dtype=float)
    return np.concatenate([[np.sqrt(1.0 + xi @ xi)], xi])


def sphere_point(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    return w / np.linalg.norm(w)
