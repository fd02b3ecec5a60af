"""Principal, sectional, Ricci and scalar curvature of level sets via the Gauss equation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .examples import (ExampleHn, level_set_frame, second_fundamental_form,
                       sigma_tangent_basis)
from .models import (ProductPoint, TangentVec, ambient_curvature, factor_exp, inner,
                     lorentz)


def _orthonormal_complement(vectors: np.ndarray, dim: int) -> np.ndarray:
    """Columns spanning the Euclidean orthogonal complement of the given columns."""
    k = vectors.shape[1]
    q, _ = np.linalg.qr(np.column_stack([vectors, np.eye(dim)]))
    return q[:, k:dim]


def adapted_frame(example: ExampleHn, p: ProductPoint) -> dict[str, list[TangentVec]]:
    """Frame adapted to the three principal distributions of an ExampleHn level set.

    V1: horizontal X with <X, u>_L = 0; V2: vertical Y orthogonal to v0;
    V3: V/|V|.
    """
    n, m = example.n, example.m
    x = p.h
    # tangent space of H^n at x in coordinates: Lorentz-orthogonal to x and to u
    J = np.diag([-1.0] + [1.0] * n)
    constraints = np.column_stack([J @ x, J @ example.u])
    raw = _orthonormal_complement(constraints, n + 1)
    horiz: list[np.ndarray] = []
    for k in range(raw.shape[1]):
        w = raw[:, k]
        for b in horiz:
            w = w - lorentz(w, b) * b
        horiz.append(w / np.sqrt(lorentz(w, w)))
    zero_v = np.zeros(m)
    V1 = [TangentVec(w, zero_v) for w in horiz]
    V = level_set_frame(example, p).V
    vn = np.sqrt(inner(p, V, V))
    if vn > 1e-12:
        vert = _orthonormal_complement(example.v0[:, None], m)
        V3 = [V * (1.0 / vn)]
    else:
        # a = 0: the normal is horizontal and every vertical direction is tangent
        vert, V3 = np.eye(m), []
    V2 = [TangentVec(np.zeros(n + 1), vert[:, j]) for j in range(vert.shape[1])]
    return {"V1": V1, "V2": V2, "V3": V3}


def sigma_curvature(example, p: ProductPoint, X, Y, Z, W) -> float:
    """Intrinsic Rm of the level set through p by the Gauss equation."""
    II = lambda A, B: second_fundamental_form(example, p, A, B)
    return ambient_curvature(p, X, Y, Z, W) + II(X, Z) * II(Y, W) - II(Y, Z) * II(X, W)


def sectional(example, p: ProductPoint, X: TangentVec, Y: TangentVec) -> float:
    den = inner(p, X, X) * inner(p, Y, Y) - inner(p, X, Y) ** 2
    return sigma_curvature(example, p, X, Y, X, Y) / den


@dataclass
class CurvatureTables:
    principal: list[float]
    H: float
    sectional: dict
    sectional_spread: float
    ricci: list[float]
    scalar: float
    shape_matrix: np.ndarray


def shape_matrix(example, p: ProductPoint, basis: list[TangentVec]) -> np.ndarray:
    k = len(basis)
    return np.array([[second_fundamental_form(example, p, basis[i], basis[j]) for j in range(k)]
                     for i in range(k)])


def curvature_tables(example: ExampleHn, p: ProductPoint) -> CurvatureTables:
    """Principal curvatures, mean curvature, 3x3 sectional table, Ricci and scalar curvature."""
    frame = adapted_frame(example, p)
    basis = frame["V1"] + frame["V2"] + frame["V3"]
    if len(basis) != example.n + example.m - 1:
        raise ParameterError("adapted frame does not span the level-set tangent space")
    A = shape_matrix(example, p, basis)
    principal = sorted(np.linalg.eigvalsh((A + A.T) / 2).tolist(), reverse=True)
    names = ["V1", "V2", "V3"]
    table: dict = {}
    spread = 0.0
    for i, a in enumerate(names):
        for b in names[i:]:
            vals = [sectional(example, p, X, Y)
                    for ia, X in enumerate(frame[a]) for ib, Y in enumerate(frame[b])
                    if not (a == b and ib <= ia)]
            if vals:
                table[a, b] = table[b, a] = float(np.mean(vals))
                spread = max(spread, float(np.ptp(vals)))
            else:
                table[a, b] = table[b, a] = None
    k = len(basis)
    ric = np.array([[sum(sigma_curvature(example, p, e, basis[i], e, basis[j]) for e in basis)
                     for j in range(k)] for i in range(k)])
    ricci = np.linalg.eigvalsh((ric + ric.T) / 2).tolist()
    return CurvatureTables(principal, float(np.trace(A)), table, spread, sorted(ricci),
                           float(np.trace(ric)), A)


def expected_tables(example: ExampleHn) -> dict:
    a2 = example.a ** 2
    n, m = example.n, example.m
    k = -a2 / (1 + a2)
    if a2 == 0:
        return {
            "principal": sorted([1.0] * (n - 1) + [0.0] * m, reverse=True),
            "H": float(n - 1),
            "sectional": {("V1", "V1"): 0.0 if n > 2 else None, ("V1", "V2"): 0.0,
                          ("V2", "V2"): 0.0 if m > 1 else None, ("V1", "V3"): None,
                          ("V2", "V3"): None, ("V3", "V3"): None},
            "ricci": [0.0] * (n + m - 1),
            "scalar": 0.0,
        }
    return {
        "principal": sorted([1 / np.sqrt(1 + a2)] * (n - 1) + [0.0] * m, reverse=True),
        "H": (n - 1) / np.sqrt(1 + a2),
        "sectional": {("V1", "V1"): k if n > 2 else None, ("V1", "V2"): 0.0 if m > 1 else None,
                      ("V1", "V3"): k, ("V2", "V2"): 0.0 if m > 2 else None,
                      ("V2", "V3"): 0.0 if m > 1 else None, ("V3", "V3"): None},
        "ricci": sorted([-(n - 1) * a2 / (1 + a2)] * n + [0.0] * (m - 1)),
        "scalar": -n * (n - 1) * a2 / (1 + a2),
    }


@dataclass
class PrincipalFrameCheck:
    ok: bool
    AV_residual: float
    block_residual: float


def check_principal_frame(example, p: ProductPoint, normal: TangentVec | None = None,
                          tol: float = 1e-9) -> PrincipalFrameCheck:
    """A V = 0 on the level set and A splits across the horizontal/vertical parts of the frame.

    ``normal`` replaces the true unit normal when building V (used to confirm
    the check is sensitive to a wrong normal).
    """
    basis, N = sigma_tangent_basis(example, p)
    if normal is not None:
        nn = np.sqrt(inner(p, normal, normal))
        N = normal * (1.0 / nn)
    PN = N.flip_vertical()
    C = inner(p, PN, N)
    V = PN - N * C
    AV = np.array([second_fundamental_form(example, p, V, e) for e in basis])
    av_res = float(np.linalg.norm(AV))
    block = 0.0
    if isinstance(example, ExampleHn) and abs(example.a) > 0:
        frame = adapted_frame(example, p)
        for X in frame["V1"]:
            for Y in frame["V2"] + frame["V3"]:
                block = max(block, abs(second_fundamental_form(example, p, X, Y)))
    return PrincipalFrameCheck(av_res <= tol and block <= tol, av_res, block)


def mean_curvature_at(example, p: ProductPoint) -> float:
    """H = -(Laplacian F - Hess F(N, N)) / |grad F| for the level set through p."""
    lf = level_set_frame(example, p)
    hnn = example.hessian(p, lf.N, lf.N)
    return -(example.laplacian(p) - hnn) / lf.grad_norm


def parallel_mean_curvatures(example, p: ProductPoint, ts) -> list[float]:
    """Mean curvature of the parallel hypersurface through exp_p(t N) for each t."""
    N = level_set_frame(example, p).N
    return [mean_curvature_at(example, factor_exp(p, N, float(t))) for t in ts]


def angle_function(example, p: ProductPoint) -> float:
    return level_set_frame(example, p).C
