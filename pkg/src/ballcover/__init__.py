"""Ball coverings of unit spheres in finite-dimensional normed spaces,
decided and certified through one-sided norm derivatives."""

from .config import ANALYTIC_TOL, CERT_SLACK, FD_TOL, Tolerances
from .covering import (Ball, CoverageCertificate, Covering, TargetSet, UncoveredPoint,
                       adversary_uncovered, cover_from_functionals,
                       exposed_norming_point, finite_target, merge_collinear,
                       smooth_cover_n_plus_1, sphere_target, symmetric_cover_2n,
                       verify_cover)
from .derivatives import (DerivativePair, DualitySet, SmoothnessVerdict, duality_set,
                          is_smooth, rho_analytic, rho_finite_difference)
from .errors import (BallcoverError, CertificateFailure, InputFormatError,
                     InternalInconsistencyError, NotExposedError, PreconditionError,
                     SeparationHypothesisError, TransferExhausted)
from .orthogonality import (PairClass, bj_bruteforce_oracle, bj_orthogonal,
                            classify_pair)
from .separation import (ClosureReport, EquivalenceReport, SelectionInstance,
                         SeparationVerdict, closure_precondition_check, make_instance,
                         positively_separates, selection_oracle_exhaustive,
                         separation_ballcover_equivalence)
from .smoothapprox import (SmoothingSequence, custom_list, linf_shrink,
                           linf_shrink_sequence, radial_lp_blend, transfer_witness)
from .spaces import (INF, NormSpec, Space, SphereNet, ValidationReport, dual_norm,
                     dual_pair, equivalence_constants, load_space, lp_space, norm,
                     norm_batch, polyhedral_space, space_from_dict, space_to_dict,
                     unit, unit_sphere_net, validate_space)
from .witness import (GapProfile, Witness, WitnessAbsence, gap, gap_profile,
                      negative_witness, positive_witness, witness_bruteforce_oracle)

__version__ = "0.1.0"
