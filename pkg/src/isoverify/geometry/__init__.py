"""Ambient product models, the explicit level-set families and their invariants."""

from .curvature import (CurvatureTables, PrincipalFrameCheck, angle_function,
                        check_principal_frame, curvature_tables, expected_tables,
                        mean_curvature_at, adapted_frame, parallel_mean_curvatures, sectional,
                        sigma_curvature)
from .examples import (ExampleHn, ExampleS1, LevelSetFrame, grad_F, hessian_F, laplace_F,
                       laplacian_fd, level_set_frame, second_fundamental_form,
                       sigma_tangent_basis)
from .homogeneity import IsometryCheck, IsometryElement, check_isometry, transitive_isometry
from .models import (ProductPoint, TangentVec, ambient_curvature, factor_exp, hyperboloid_point,
                     inner, lorentz, norm, tangent_frame)
from .parametrizations import (HorosphereData, HyperplaneData, eps_from_a, param_phi, param_psi,
                               phi_example, psi_example)

__all__ = [name for name in dir() if not name.startswith("_")]
