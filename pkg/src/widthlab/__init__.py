"""Numerical laboratory for random projections of convex bodies.

Support-function oracles for symmetric convex bodies, subgaussian sampling
ensembles, Monte Carlo gaussian mean-width estimation, inclusion certificates
(balls and cubes inside random projections), coordinate-subset cube search,
and a deterministic experiment harness.
"""

from ._rng import derive_rng, derive_seed_int, derive_seedseq
from .bodies import (BodyError, CapIntersection, ConvexBody, CubeBall,
                     Ellipsoid, EuclideanBall, IntersectionL1L2, L1Ball,
                     LinearImage, Membership, SymmetricPolytope,
                     UnsupportedOperation, body_from_descriptor)
from .ensembles import (ConfigError, GAUSSIAN, RADEMACHER, UNIFORM_SCALED,
                        SampleMatrix, ScalarLaw, coordinate_restrict,
                        law_from_descriptor, moment_psi2_proxy, project_body,
                        psi1_estimate, psi2_estimate, sample_matrix)
from .experiments import (EXPERIMENT_KINDS, EventAResult, ExperimentConfig,
                          Report, run_experiment)
from .harness import RunManifest, parse_config, run_suite, summarize
from .inclusion import (CubeSideEstimate, InclusionCertificate, InclusionOpts,
                        MinSupportResult, ball_in_body, body_in_ball,
                        cube_in_body, dvoretzky_certificate, max_cube_side,
                        min_support_on_sphere, sphere_net)
from .selection import (PackingResult, SubsetResult, hamming_separated_supports,
                        rho_k, separated_net, subset_cube_search,
                        support_size_m, wk_vertices)
from .widths import (DiameterEstimate, WidthEstimate, critical_dimension,
                     empirical_diameter, eps_critical_dimension, mean_width,
                     oscillation, projected_width, rearrangement_stat)

__version__ = "0.1.0"
