"""iterlab: desk-scale analysis of constant-coefficient operator systems.

Exact polynomial symbols, growth-exponent estimation with rational
snapping, weight functions with numeric Young conjugates, and L2 iterate
norms of symbolic test functions on boxes.
"""

__version__ = "0.1.0"

from .functions import (Box, FunctionSum, PlaneWave, PolyGaussian,
                        add_functions, apply_iterate, apply_operator,
                        l2_norm_on_box, scale_function)
from .growth import (EllipticityReport, GrowthFit, SamplingPlan,
                     StrengthReport, check_elliptic, compare_strength,
                     estimate_gamma, estimate_h, make_plan, snap_to_rational,
                     verify_gamma_fit, verify_h_fit)
from .iterates import (InclusionReport, MembershipReport, NormTable,
                       SeminormResult, classify_membership, default_b_max,
                       iterate_norm_table, seminorm, seminorm_of,
                       verify_inclusion)
from .polynomials import (MultiPoly, OperatorSystem, iterate_symbol,
                          log_abs_iterate_symbol, multi_indices,
                          multi_indices_up_to, parse_poly, poly_derivative,
                          poly_eval, principal_part, system_symbol_sum)
from .weights import (ConjugateTable, GevreyWeight, LogPowerWeight,
                      RescaledWeight, SandwichReport, ShiftReport,
                      TabulatedWeight, WeightAxiomReport, WeightFunction,
                      biconjugate, check_conjugate_product_bound,
                      check_sup_sandwich, check_weight_axioms,
                      conjugate_table, make_weight, omega_eval,
                      rescale_weight, shift_constants, young_conjugate)

__all__ = [name for name in dir() if not name.startswith("_")]
