"""Finite-dimensional q-commuting dilation and lifting toolkit."""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .linalg import (DEFAULT_TOL, Subspace, Tolerances, adj, assemble_blocks, defect,  # noqa: F401
                     operator_norm, pinv, psd_leq, psd_sqrt)
from .factorization import (DualParrottProblem, douglas_solve, dual_parrott_extend,  # noqa: F401
                            parrott_complete, triangular_complete, triangular_extract,
                            two_term_douglas)
from .dilation import (ChainSpace, DilationBundle, chain_projection,  # noqa: F401
                       coisometric_extension, minimal_reducing_subspace, q_scaled_coextension,
                       schaeffer_isometric, unitary_dilation)
from .lifting import (CoextensionTriple, IntertwiningCoextension, LiftResult, QPair,  # noqa: F401
                      adjoint_lift_q, coiso_lift_q, isometric_lift_q, pad_coextension,
                      q_coextension, q_intertwining_coextension, qcommutant_lift, qpart_step,
                      unitary_q_lift)
from .qalgebra import (GeneratorSpec, example_pair_jordan, hardy_pair_truncated,  # noqa: F401
                       q_commutant_basis, random_contraction, random_qpair)
from .verify import (Certificate, check_dilation_identity, check_lift,  # noqa: F401
                     check_q_commuting, purity_heuristic)
