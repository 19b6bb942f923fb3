"""Unit-root sub-F-isocrystals, their Frobenius breaks and tower ramification."""

from .context import PrimeContext
from .decay import DecayProfile, Inconclusive, LogDecay, Overconvergent, decay_classify, decay_profile
from .errors import (ContextMismatch, ContractError, ConvergenceError, NotAUnit, PrecisionError,
                     UnitRootError, WindowOverflow)
from .frobsolve import IteratedEquation, mu_product, solve_R, solve_S, solve_T_iter
from .isocrystal import (ElementaryTransform, IsocrystalMatrix, newton_data, reduce_lower_left,
                         reduce_to_rank_one_form, skew_conjugate, solve_unit_root)
from .monodromy import (BreakSequence, PseudoStableFit, break_sequence_extract, check_log_bounded,
                        fit_pseudo_stable, min_over_conjugates)
from .ramification import (GenusTable, HerbrandFunction, LowerBreaks, TowerRamificationData,
                           base_change_disjoint_p, base_change_up_tower, different_of_level,
                           fit_genus_polynomials, genus_sequence, herbrand_psi, lower_from_upper,
                           upper_from_lower)
from .series import INF, PadicLaurentSeries, circ_split, frobenius_apply, partial_valuation
from .twist import twist_to_minimal

__version__ = "0.1.0"
