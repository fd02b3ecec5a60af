"""Explicit immersions of the two homogeneous families.

Phi maps R^m into S^1 x R^m.  Psi sweeps a horosphere times an affine
hyperplane along a fixed oblique direction in H^n x R^m.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from .examples import ExampleHn, ExampleS1
from .models import ProductPoint, lorentz


def param_phi(x, x0) -> ProductPoint:
    """x -> (cos <x, x0>, sin <x, x0>, x)."""
    x, x0 = np.asarray(x, dtype=float), np.asarray(x0, dtype=float)
    if not np.any(x0):
        raise ParameterError("x0 must be nonzero")
    phase = float(x @ x0)
    return ProductPoint(np.array([np.cos(phase), np.sin(phase)]), x, "sphere")


def phi_example(x0) -> ExampleS1:
    """The ExampleS1 instance whose zero level contains the image of Phi."""
    x0 = np.asarray(x0, dtype=float)
    k = float(np.linalg.norm(x0))
    return ExampleS1(m=x0.shape[0], kappa=k, y0=x0 / k)


@dataclass(frozen=True)
class HorosphereData:
    """gamma1(x) = p0 + E x + |x|^2/2 u with <p0, u>_L = -1 and E orthonormal, orthogonal to p0 and u.

    The unit normal is N(x) = sigma (u - gamma1(x)); sigma = +1 or -1 picks the side.
    """

    n: int
    sigma: int = 1
    p0: np.ndarray = field(default=None)
    u: np.ndarray = field(default=None)
    E: np.ndarray = field(default=None)

    def __post_init__(self):
        n = self.n
        if self.sigma not in (-1, 1):
            raise ParameterError("sigma must be +1 or -1")
        p0 = np.eye(n + 1)[0] if self.p0 is None else np.asarray(self.p0, dtype=float)
        u = np.concatenate([[1.0, 1.0], np.zeros(n - 1)]) if self.u is None else \
            np.asarray(self.u, dtype=float)
        if self.E is None:
            E = np.zeros((n + 1, n - 1))
            E[2:, :] = np.eye(n - 1)
        else:
            E = np.asarray(self.E, dtype=float)
        if abs(lorentz(p0, p0) + 1) > 1e-12 or abs(lorentz(u, u)) > 1e-12 or \
                abs(lorentz(p0, u) + 1) > 1e-12:
            raise ParameterError("need <p0,p0> = -1, <u,u> = 0, <p0,u> = -1")
        for j in range(n - 1):
            if abs(lorentz(E[:, j], p0)) > 1e-12 or abs(lorentz(E[:, j], u)) > 1e-12:
                raise ParameterError("E must be orthogonal to p0 and u")
        object.__setattr__(self, "p0", p0)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "E", E)

    def gamma(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.p0 + self.E @ x + 0.5 * float(x @ x) * self.u

    def normal(self, x) -> np.ndarray:
        return self.sigma * (self.u - self.gamma(x))


@dataclass(frozen=True)
class HyperplaneData:
    """gamma2(y) = base + W y with W an orthonormal basis of normal^perp."""

    m: int
    normal: np.ndarray = field(default=None)
    base: np.ndarray = field(default=None)

    def __post_init__(self):
        nrm = np.eye(self.m)[0] if self.normal is None else np.asarray(self.normal, dtype=float)
        if abs(np.linalg.norm(nrm) - 1) > 1e-12:
            raise ParameterError("hyperplane normal must be a unit vector")
        base = np.zeros(self.m) if self.base is None else np.asarray(self.base, dtype=float)
        object.__setattr__(self, "normal", nrm)
        object.__setattr__(self, "base", base)

    @property
    def W(self) -> np.ndarray:
        q, _ = np.linalg.qr(np.column_stack([self.normal, np.eye(self.m)]))
        return q[:, 1:self.m]

    def gamma(self, y) -> np.ndarray:
        return self.base + self.W @ np.asarray(y, dtype=float)


def param_psi(t: float, x, y, eps: float, horo: HorosphereData,
              plane: HyperplaneData) -> ProductPoint:
    """(cosh(t sqrt eps) gamma1(x) + sinh(t sqrt eps) N(x), gamma2(y) + t sqrt(1-eps) N2)."""
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    se, sc = np.sqrt(eps), np.sqrt(1 - eps)
    p = np.cosh(t * se) * horo.gamma(x) + np.sinh(t * se) * horo.normal(x)
    q = plane.gamma(y) + t * sc * plane.normal
    return ProductPoint(p, q, "hyperbolic")


def psi_example(eps: float, horo: HorosphereData, plane: HyperplaneData) -> ExampleHn:
    """ExampleHn instance with the image of Psi inside its level F = -1.

    Along Psi, <p, u>_L = -exp(-sigma t sqrt eps) and <q - base, N2> = t sqrt(1-eps),
    so F is constant exactly when a = sigma sqrt(eps / (1 - eps)).
    """
    a = horo.sigma * np.sqrt(eps / (1 - eps))
    return ExampleHn(n=horo.n, m=plane.m, a=a, u=horo.u, v0=plane.normal, y0=plane.base)


def eps_from_a(a: float) -> float:
    return a * a / (1 + a * a)
