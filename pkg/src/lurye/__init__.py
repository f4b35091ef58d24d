"""Stability analysis of Lurye systems with generalized Zames-Falb multipliers.

The nonlinearity is described by monotone envelopes (ratio ``A``) and odd
envelopes (ratio ``B``).  A multiplier ``M = 1 - H+ + H-`` certifies
stability when ``A*||h+||_1 + B*||h-||_1 < 1`` and ``Re[M (1 + kG)] > 0``
at every frequency.  Frequencies are checked on grids, so certificates are
reported as *grid-certified*.
"""

from .bounds import (BoundQuartet, PwlMonotone, SectorSummary, asym_saturation_bounds,
                     bk_for_offset_saturation, bounds_from_dict, deadzone_ak_closed_form,
                     deadzone_bounds, loop_transform, odd_lower, odd_upper,
                     quartet_from_envelopes, ratio_bound, sample_admissible, summarize,
                     transformed_sector)
from .errors import (AlgebraicLoop, DomainError, Infeasible, InvalidEnvelope, InvalidMultiplier,
                     LuryeError, NoMultiplierFound, OffsetExceedsSaturation, PoleOnBoundary,
                     SlopeExceedsK, Unbounded)
from .lp import LPSolution, lp_maximize
from .lti import (Domain, FrequencyGrid, RationalPlant, continuous_grid, dc_gain, discrete_grid,
                  freq_response, is_stable, poles, refine)
from .multiplier import (DelayMultiplier, FirMultiplier, MultiplierClass, NormStatus, classify,
                         jordan_split, mult_freq_response, multiplier_from_dict, norm_margin,
                         norm_status)
from .search import (BStar, SearchConfig, SearchResult, max_feasible_B, optimal_margin,
                     search_delay_multiplier, search_multiplier)
from .sim import (ConvergedTo, LimitCycle, LuryeLoop, SimTrace, Undetermined, classify_trace,
                  detect_limit_cycle, detect_steady_state, equilibrium, equilibrium_state,
                  run_schedule, simulate)
from .sweep import b_sweep, offset_sweep
from .verify import (Certificate, certify, circle_criterion, lemma1_oracle, positivity_margin,
                     positivity_oracle)

__version__ = "0.1.0"
