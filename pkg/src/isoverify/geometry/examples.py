"""The two explicit isoparametric families and their first and second derivatives.

``ExampleS1`` lives on S^1 x R^m with F = sin(x - kappa <y, y0>), the circle
written as unit vectors h = (cos x, sin x).  ``ExampleHn`` lives on H^n x R^m
with F = <x, u>_L exp(a <y - y0, v0>) for a lightlike u.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from .models import (ProductPoint, TangentVec, factor_exp, hyperboloid_point, inner,
                     lorentz, norm, tangent_frame)


def _unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ParameterError(f"{name} must be a unit vector")
    return v


@dataclass(frozen=True)
class ExampleS1:
    m: int
    kappa: float
    y0: np.ndarray = field(default=None)
    n: int = 1
    model: str = "sphere"
    family: str = "s1"

    def __post_init__(self):
        if self.m < 1:
            raise ParameterError("m must be >= 1")
        y0 = np.eye(self.m)[0] if self.y0 is None else self.y0
        object.__setattr__(self, "y0", _unit(y0, "y0"))
        object.__setattr__(self, "kappa", float(self.kappa))

    def _phase(self, p: ProductPoint) -> tuple[float, float]:
        """(sin, cos) of x - kappa <y, y0>."""
        phi = self.kappa * float(p.v @ self.y0)
        s = p.h[1] * np.cos(phi) - p.h[0] * np.sin(phi)
        c = p.h[0] * np.cos(phi) + p.h[1] * np.sin(phi)
        return float(s), float(c)

    def F(self, p: ProductPoint) -> float:
        return self._phase(p)[0]

    def grad(self, p: ProductPoint) -> TangentVec:
        _, c = self._phase(p)
        Jh = np.array([-p.h[1], p.h[0]])
        return TangentVec(c * Jh, -self.kappa * c * self.y0)

    def laplacian(self, p: ProductPoint) -> float:
        return -(1.0 + self.kappa ** 2) * self.F(p)

    def grad_norm_sq_closed(self, F: float) -> float:
        return (1.0 + self.kappa ** 2) * (1.0 - F * F)

    def hessian(self, p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
        s, _ = self._phase(p)
        Jh = np.array([-p.h[1], p.h[0]])
        xi, eta = float(X.h @ Jh), float(Y.h @ Jh)
        xv, yv = float(X.v @ self.y0), float(Y.v @ self.y0)
        k = self.kappa
        return s * (-xi * eta + k * (xi * yv + eta * xv) - k * k * xv * yv)

    def angle_closed(self) -> float:
        return (1.0 - self.kappa ** 2) / (1.0 + self.kappa ** 2)

    def point(self, x: float, y) -> ProductPoint:
        return ProductPoint(np.array([np.cos(x), np.sin(x)]), np.asarray(y, dtype=float), "sphere")

    def sample_point(self, rng: np.random.Generator, spread: float = 2.0) -> ProductPoint:
        return self.point(rng.uniform(-np.pi, np.pi), rng.uniform(-spread, spread, self.m))

    def sample_level_point(self, rng: np.random.Generator, level: float, branch: int = 0,
                           spread: float = 2.0) -> ProductPoint:
        """Point with F = level on the component selected by ``branch`` (0 or 1)."""
        y = rng.uniform(-spread, spread, self.m)
        base = np.arcsin(level) if branch == 0 else np.pi - np.arcsin(level)
        return self.point(base + self.kappa * float(y @ self.y0), y)


@dataclass(frozen=True)
class ExampleHn:
    n: int
    m: int
    a: float
    u: np.ndarray = field(default=None)
    v0: np.ndarray = field(default=None)
    y0: np.ndarray = field(default=None)
    model: str = "hyperbolic"
    family: str = "hn"

    def __post_init__(self):
        if self.n < 2 or self.m < 1:
            raise ParameterError("need n >= 2 and m >= 1")
        u = np.concatenate([[1.0, 1.0], np.zeros(self.n - 1)]) if self.u is None else \
            np.asarray(self.u, dtype=float)
        if u.shape != (self.n + 1,) or abs(lorentz(u, u)) > 1e-12 * max(1.0, u[0] ** 2) or u[0] <= 0:
            raise ParameterError("u must be a future-pointing lightlike vector of L^(n+1)")
        v0 = np.eye(self.m)[0] if self.v0 is None else self.v0
        y0 = np.zeros(self.m) if self.y0 is None else np.asarray(self.y0, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v0", _unit(v0, "v0"))
        object.__setattr__(self, "y0", y0)
        object.__setattr__(self, "a", float(self.a))

    def _expo(self, p: ProductPoint) -> float:
        return float(np.exp(self.a * float((p.v - self.y0) @ self.v0)))

    def F(self, p: ProductPoint) -> float:
        return lorentz(p.h, self.u) * self._expo(p)

    def u_top(self, p: ProductPoint) -> np.ndarray:
        """Tangential projection u + <x,u>_L x of u at p.h."""
        return self.u + lorentz(p.h, self.u) * p.h

    def grad(self, p: ProductPoint) -> TangentVec:
        e = self._expo(p)
        return TangentVec(self.u_top(p) * e, self.a * self.v0 * lorentz(p.h, self.u) * e)

    def laplacian(self, p: ProductPoint) -> float:
        return (self.n + self.a ** 2) * self.F(p)

    def grad_norm_sq_closed(self, F: float) -> float:
        return (1.0 + self.a ** 2) * F * F

    def hessian(self, p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
        F = self.F(p)
        ut = self.u_top(p)
        xv, yv = float(X.v @ self.v0), float(Y.v @ self.v0)
        return (lorentz(X.h, Y.h) * F + self.a ** 2 * xv * yv * F
                + self.a * self._expo(p) * (lorentz(X.h, ut) * yv + lorentz(Y.h, ut) * xv))

    def angle_closed(self) -> float:
        return (1.0 - self.a ** 2) / (1.0 + self.a ** 2)

    def C1(self) -> float:
        return 1.0 / np.sqrt(1.0 + self.a ** 2)

    def C2(self) -> float:
        return abs(self.a) / np.sqrt(1.0 + self.a ** 2)

    def sample_point(self, rng: np.random.Generator, spread: float = 1.0) -> ProductPoint:
        return ProductPoint(hyperboloid_point(rng.uniform(-spread, spread, self.n)),
                            rng.uniform(-spread, spread, self.m), "hyperbolic")


# -- shared derived quantities ----------------------------------------------

def grad_F(example, p: ProductPoint) -> TangentVec:
    return example.grad(p)


def laplace_F(example, p: ProductPoint) -> float:
    return example.laplacian(p)


def hessian_F(example, p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
    return example.hessian(p, X, Y)


def _second_derivative(f, h: float) -> float:
    return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h)


def laplacian_fd(example, p: ProductPoint, h: float = 1e-2) -> float:
    """Sum over an orthonormal frame of (F o geodesic)''(0): 4th-order stencil, one Richardson step."""
    total = 0.0
    for e in tangent_frame(p):
        f = lambda t, e=e: example.F(factor_exp(p, e, t))
        coarse = _second_derivative(f, h)
        fine = _second_derivative(f, h / 2)
        total += (16.0 * fine - coarse) / 15.0
    return total


@dataclass
class LevelSetFrame:
    N: TangentVec
    C: float
    V: TangentVec
    grad_norm: float
    identity_residual: float


def level_set_frame(example, p: ProductPoint) -> LevelSetFrame:
    """Unit normal N = grad F/|grad F|, angle C = <PN, N>, V = PN - CN."""
    g = example.grad(p)
    gn = norm(p, g)
    if gn < 1e-12:
        raise ParameterError("critical point of F: level set is not regular here")
    N = g * (1.0 / gn)
    PN = N.flip_vertical()
    C = inner(p, PN, N)
    V = PN - N * C
    res = abs(inner(p, V, V) + C * C - 1.0)
    return LevelSetFrame(N, C, V, gn, res)


def sigma_tangent_basis(example, p: ProductPoint) -> tuple[list[TangentVec], TangentVec]:
    """Orthonormal basis of the level-set tangent space at p, and the unit normal."""
    N = level_set_frame(example, p).N
    frame = tangent_frame(p)
    coords = np.array([inner(p, N, e) for e in frame])
    # orthonormal complement of the normal's coordinate vector
    q, _ = np.linalg.qr(np.column_stack([coords, np.eye(len(frame))]))
    basis = []
    for k in range(1, len(frame)):
        col = q[:, k]
        vec = TangentVec(sum(c * e.h for c, e in zip(col, frame)),
                         sum(c * e.v for c, e in zip(col, frame)))
        basis.append(vec)
    return basis, N


def second_fundamental_form(example, p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
    """II(X, Y) = -Hess F(X, Y) / |grad F| for the normal grad F / |grad F|."""
    gn = norm(p, example.grad(p))
    return -example.hessian(p, X, Y) / gn
