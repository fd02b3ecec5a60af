"""Explicit isometries carrying one point of a level set to another.

For ExampleS1 the element is a circle rotation paired with a translation.
For ExampleHn the Lorentz block is built from the subgroup fixing the
light ray of u: a boost along the null pair (u, u_bar) followed by a
parabolic translation.  The vertical block is a pure translation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConstructionError
from .examples import ExampleHn, ExampleS1
from .models import ProductPoint, TangentVec, lorentz

ISOMETRY_TOL = 1e-9


@dataclass(frozen=True)
class IsometryElement:
    """g(h, v) = (B h, R v + b).  ``model`` selects Euclidean or Lorentz orthogonality of B."""

    B: np.ndarray
    R: np.ndarray
    b: np.ndarray
    model: str

    @property
    def affine(self) -> np.ndarray:
        m = self.R.shape[0]
        out = np.eye(m + 1)
        out[:m, :m] = self.R
        out[:m, m] = self.b
        return out

    def apply(self, p: ProductPoint) -> ProductPoint:
        return ProductPoint(self.B @ p.h, self.R @ p.v + self.b, p.model)

    def push(self, X: TangentVec) -> TangentVec:
        return TangentVec(self.B @ X.h, self.R @ X.v)

    def orthogonality_residual(self) -> float:
        """max |B^T J B - J| and |R^T R - I| with J the factor form."""
        k = self.B.shape[0]
        J = np.diag([-1.0] + [1.0] * (k - 1)) if self.model == "hyperbolic" else np.eye(k)
        rb = np.abs(self.B.T @ J @ self.B - J).max()
        rr = np.abs(self.R.T @ self.R - np.eye(self.R.shape[0])).max() if self.R.size else 0.0
        return float(max(rb, rr))

    def is_orthochronous(self) -> bool:
        return self.model != "hyperbolic" or self.B[0, 0] > 0

    def compose(self, other: "IsometryElement") -> "IsometryElement":
        """self after other."""
        return IsometryElement(self.B @ other.B, self.R @ other.R, self.R @ other.b + self.b,
                               self.model)


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _s1_isometry(ex: ExampleS1, p: ProductPoint, q: ProductPoint) -> IsometryElement:
    d = q.v - p.v
    theta = ex.kappa * float(d @ ex.y0)
    B = _rotation(theta)
    if np.abs(B @ p.h - q.h).max() > ISOMETRY_TOL:
        raise ConstructionError("points lie on different components of the level set")
    # translation splits into (theta/kappa) y0 plus a part orthogonal to y0
    return IsometryElement(B, np.eye(ex.m), d, "sphere")


def _null_frame(ex: ExampleHn) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p0, u_bar, E): <p0,u> = -1, u_bar = 2 p0 - u null, E orthonormal and orthogonal to both."""
    n, u = ex.n, ex.u
    # p0 on the hyperboloid with <p0, u> = -1: rescale the time axis point
    e0 = np.eye(n + 1)[0]
    t = -lorentz(e0, u)
    w = e0 / t  # <w, u> = -1 but w is not unit; correct along u
    p0 = w + ((1.0 + lorentz(w, w)) / 2.0) * u
    ubar = 2.0 * p0 - u
    J = np.diag([-1.0] + [1.0] * n)
    q, _ = np.linalg.qr(np.column_stack([J @ u, J @ ubar, np.eye(n + 1)]))
    cols: list[np.ndarray] = []
    for j in range(2, n + 1):
        w = q[:, j]
        for c in cols:
            w = w - lorentz(w, c) * c
        cols.append(w / np.sqrt(lorentz(w, w)))
    return p0, ubar, np.column_stack(cols) if cols else np.zeros((n + 1, 0))


def _lorentz_block(ex: ExampleHn, x: np.ndarray) -> np.ndarray:
    """The unique boost-then-parabolic element taking p0 to x."""
    p0, ubar, E = _null_frame(ex)
    u = ex.u
    s = -lorentz(x, u)
    if s <= 0:
        raise ConstructionError("point is not on the future hyperboloid")
    r = -np.log(s)
    xE = np.array([lorentz(x, E[:, j]) for j in range(E.shape[1])])
    z = np.exp(r) * xE
    basis = np.column_stack([u, ubar, E])
    k = basis.shape[1]
    D = np.eye(k)
    D[0, 0], D[1, 1] = np.exp(r), np.exp(-r)
    T = np.eye(k)
    T[0, 1] = float(z @ z)
    T[2:, 1] = 2.0 * z
    T[0, 2:] = z
    return basis @ (T @ D) @ np.linalg.inv(basis)


def _hn_isometry(ex: ExampleHn, p: ProductPoint, q: ProductPoint) -> IsometryElement:
    if abs(ex.F(p) - ex.F(q)) > ISOMETRY_TOL * max(1.0, abs(ex.F(p))):
        raise ConstructionError("points lie on different level sets")
    B = _lorentz_block(ex, q.h) @ np.linalg.inv(_lorentz_block(ex, p.h))
    s = float((q.v - p.v) @ ex.v0)
    # Lorentz adjoint of B applied to u must rescale it by exp(-a s)
    J = np.diag([-1.0] + [1.0] * ex.n)
    Bstar_u = J @ B.T @ J @ ex.u
    if np.abs(Bstar_u - np.exp(-ex.a * s) * ex.u).max() > ISOMETRY_TOL * max(1.0, np.abs(ex.u).max()):
        raise ConstructionError("Lorentz block does not rescale u as required")
    return IsometryElement(B, np.eye(ex.m), q.v - p.v, "hyperbolic")


def u_scaling_residual(ex: ExampleHn, g: IsometryElement, p: ProductPoint, q: ProductPoint) -> float:
    J = np.diag([-1.0] + [1.0] * ex.n)
    s = float((q.v - p.v) @ ex.v0)
    return float(np.abs(J @ g.B.T @ J @ ex.u - np.exp(-ex.a * s) * ex.u).max())


def transitive_isometry(example, p: ProductPoint, q: ProductPoint) -> IsometryElement:
    """Isometry of the ambient product preserving F and mapping p to q."""
    if isinstance(example, ExampleS1):
        g = _s1_isometry(example, p, q)
    elif isinstance(example, ExampleHn):
        g = _hn_isometry(example, p, q)
    else:
        raise ConstructionError(f"no isometry construction for {type(example).__name__}")
    img = g.apply(p)
    res = max(np.abs(img.h - q.h).max(), np.abs(img.v - q.v).max() if q.v.size else 0.0)
    if res > ISOMETRY_TOL * max(1.0, np.abs(q.h).max()):
        raise ConstructionError(f"constructed element misses the target (residual {res:.3e})")
    return g


@dataclass
class IsometryCheck:
    map_residual: float
    F_residual: float
    orthogonality_residual: float


def check_isometry(example, g: IsometryElement, p: ProductPoint, q: ProductPoint,
                   probes: list[ProductPoint]) -> IsometryCheck:
    img = g.apply(p)
    mres = float(max(np.abs(img.h - q.h).max(), np.abs(img.v - q.v).max()))
    fres = max((abs(example.F(g.apply(z)) - example.F(z)) for z in probes), default=0.0)
    return IsometryCheck(mres, float(fres), g.orthogonality_residual())
