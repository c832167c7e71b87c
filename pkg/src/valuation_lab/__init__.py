"""Exact tensor valuations on convex polytopes, verified against
seeded spherical quadrature.

Core objects: :class:`PolytopeBody` (exact facet/moment geometry),
:class:`SymTensor` (symmetric tensors by sorted multi-index),
:class:`SphereSampler` (reproducible directions), and the check_*
functions pairing each spherical-integral identity with its exact
facet-sum counterpart.
"""

from .checks import (check_absmoment_tensor, check_cauchy, check_corollary,
                     check_eq41, check_tv17, check_theorem, run_suite)
from .mixed import (PolarizationRequest, directional_derivative_moment,
                    mixed_moment_with_ball, mixed_projected_moment, polarize,
                    polarize_request, upsilon_mixed)
from .polytope import (DegenerateGeometryError, EmbeddedProjection, FacetData,
                       PolytopeBody, build_hull, cross_polytope, cube,
                       make_body, minkowski_sum, project, random_hull,
                       random_translated_hull, scale_body, simplex, support,
                       translate_body, volume_and_moments)
from .quadrature import (Estimate, SphereSampler, absolute_moment, integrate,
                         integrate_sphere, subsphere_sampler)
from .reporting import (VerifyReport, format_table, report_from_json_dict,
                        report_to_json_dict)
from .tensors import (SymTensor, contract, kappa, metric_tensor, omega,
                      sym_power, sym_product)
from .valuations import (boundary_field_integral, cone_volume_atoms,
                         projected_moment, psi, q1, shadow_functional,
                         surface_area, upsilon, xi)

__version__ = "0.1.0"
