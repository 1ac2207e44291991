"""Polygons in R^5, quaternionic projective models, and their reductions.

The package splits along the geometry it implements:

* `quaternions` -- scalar/matrix arithmetic over H, the complex
  embedding, determinants, random symplectic frames;
* `moebius` -- the projective line, half-space, and ball models of
  hyperbolic 5-space with the 2x2 action on each;
* `barycenter` -- stable weighted configurations on the boundary
  sphere and the conformal-barycenter normalization;
* `polygons` -- closed polygons with fixed side lengths: sampling,
  degeneracy strata, diagonals, bending, the canonical planar form;
* `gt` -- quaternionic Hermitian eigenvalues, corner interlacing
  patterns, and rank-2 frames linking Grassmannians to polygons;
* `bridge` -- the involution fixing the quaternionic locus in complex
  matrices/Grassmannians, the polygon embedding, and GIT stability of
  weighted line configurations;
* `cli`, `serialization`, `verify` -- front end, interchange formats,
  and the reproducible invariant battery.
"""

from .barycenter import (BarycenterResult, WeightedConfiguration,
                         center_of_mass, conformal_barycenter, is_stable,
                         normalize_configuration, pushforward, xi_field)
from .bridge import (ComplexLineConfig, StabilityReport, Su4Configuration,
                     line_stability, psi_map, theta_grassmann, theta_matrix)
from .errors import (ClosureError, GenericityError, InterlacingError,
                     InvariantViolation, NonConvergenceError, PairingError,
                     QuatPolyError, ReconstructionError,
                     UnstableConfigurationError, UsageError)
from .gt import (GrassmannPoint, GTPattern, gram_map, gt_pattern,
                 partial_gram_spectra, polygon_from_grassmann,
                 quat_hermitian_eigenvalues, tri_momentum)
from .moebius import (HP1Point, INFINITY, ball_to_halfspace, halfspace_to_ball,
                      hp1_to_s4, mobius_ball, mobius_halfspace, mobius_hp1,
                      mobius_s4, s4_to_hp1)
from .polygons import (DegeneracyReport, DiagonalData, PolygonConfig, bend,
                       canonical_planar, check_weights, classify,
                       diagonal_lengths, sample_closed, so2_invariants,
                       angle_chart_dims)
from .quaternions import (DEFAULT_TOL, Quaternion, QuatMatrix, SL2H,
                          dieudonne_det, qmul, random_hermitian,
                          random_quat_matrix, random_symplectic,
                          random_unit_quaternion)

__all__ = [
    "BarycenterResult", "WeightedConfiguration", "center_of_mass",
    "conformal_barycenter", "is_stable", "normalize_configuration",
    "pushforward", "xi_field",
    "ComplexLineConfig", "StabilityReport", "Su4Configuration",
    "line_stability", "psi_map", "theta_grassmann", "theta_matrix",
    "ClosureError", "GenericityError", "InterlacingError",
    "InvariantViolation", "NonConvergenceError", "PairingError",
    "QuatPolyError", "ReconstructionError", "UnstableConfigurationError",
    "UsageError",
    "GrassmannPoint", "GTPattern", "gram_map", "gt_pattern",
    "partial_gram_spectra", "polygon_from_grassmann",
    "quat_hermitian_eigenvalues", "tri_momentum",
    "HP1Point", "INFINITY", "ball_to_halfspace", "halfspace_to_ball",
    "hp1_to_s4", "mobius_ball", "mobius_halfspace", "mobius_hp1", "mobius_s4",
    "s4_to_hp1",
    "DegeneracyReport", "DiagonalData", "PolygonConfig", "bend",
    "canonical_planar", "check_weights", "classify", "diagonal_lengths",
    "sample_closed", "so2_invariants", "angle_chart_dims",
    "DEFAULT_TOL", "Quaternion", "QuatMatrix", "SL2H", "dieudonne_det",
    "qmul", "random_hermitian", "random_quat_matrix", "random_symplectic",
    "random_unit_quaternion",
]
