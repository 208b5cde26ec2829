"""Variational laboratory for exact area-preserving twist maps.

Builds minimal configurations and Peierls barriers for generating functions
of the form (x - x')^2/2 + V(x'), constructs localized trigonometric
perturbations whose barriers stay provably positive, and measures the norm
and degree scaling laws of those constructions against their predicted
exponents.
"""

from .bump import SmoothBump
from .cfrac import (ContinuedFraction, Convergent, approximation_exponent,
                    expand, from_quotients, is_badly_approximable,
                    jarnik_dimension, successive_denominator_ratio)
from .forge import (Construction, ConstructionParams, DegreeRouteReport,
                    NormRouteReport, RescaledPoly, VReport,
                    analytic_growth_check, assemble_generating,
                    build_bump, build_construction, choose_support,
                    cr_decay_sweep, cr_norm, degree_sweep,
                    destroy_with_low_degree, destroy_with_small_norm,
                    gamma_decomposition, gamma_exponent,
                    localized_perturbation, normalize_squared,
                    period_rescale, select_budget_and_degree, well_potential)
from .jackson import JacksonResult, jackson_approx, kernel_power_for_order
from .lemmas import (LemmaReport, fit_count_exponent, linear_orbit,
                     verify_counting_irrational, verify_counting_rational_gap,
                     verify_gap_triples, verify_step_bound)
from .minimizer import (BudgetExceeded, ConvergenceError, DPResult, MatherSet,
                        MinimizeOptions, MinimizeResult, SaddlePointError,
                        WindowError, aubry_crossing_count,
                        brute_force_periodic, mather_set, minimize_periodic,
                        periodic_action, window_minimize)
from .peierls import (BarrierResult, CircleEvidence, ContinuityReport,
                      InequalityReport, barrier_continuity_scan,
                      barrier_lower_bound_check, barrier_profile,
                      greene_residue, has_invariant_circle, peierls_barrier)
from .runcfg import (RunConfig, ResultRecord, cache_dir, cache_load,
                     cache_store, csv_table, read_config_file)
from .trigpoly import TrigPoly
from .twist_core import (Configuration, ContractViolation, GeneratingFunction,
                         RotationSymbol, TwistSolveError, cosine_well_family,
                         integrable, standard_family, stationarity_residual,
                         twist_map_step, with_potential)

__version__ = "0.1.0"
