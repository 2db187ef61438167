"""hflab: a numerical laboratory for higher-order Hermite-Fejer
interpolation at the zeros of orthonormal polynomials for
exponential-type weights, with weighted L_p error measurement."""

__version__ = "0.1.0"

from .errors import (AcceptanceFailure, ConfigError, ConvergenceError,
                     DomainError, GateRejection, HFLabError, PrecisionError,
                     QuadratureError, ScaleOverflowError,
                     UnsupportedOrderError)
from .funcs import REGISTRY, TestFunction, get_function
from .interp import (FundamentalCoeffs, build_fundamental, coeff_bound_diag,
                     e_coeffs, eval_fundamental, eval_L, eval_split,
                     taylor_lk)
from .mrs import MrsSolver, ScaleTable, freud_mrs_closed_form
from .orthopoly import (NodeSet, RecurrenceTable, eval_pn,
                        orthonormality_residual, spacing_diag,
                        stieltjes_recurrence, sup_bound_diag, zeros)
from .weights import (ExpPower, FreudMonomial, PowerExp, WeightSpec,
                      check_class_membership, family_from_dict, phi_cap,
                      q_eval, t_func, w_eval, w_rho_eval)
from .wnorm import (ConditionReport, ErrorReport, NormSpec, check_conditions,
                    convergence_run, multi_weighted_norms, theorem_weight,
                    weighted_lp_norm, z_normalizer)
