"""Dynamic agenda-setting with privately informed voters.

A proposer repeatedly offers a policy in [0, M] to a committee that passes
it with q votes. Voters see noisy private signals about a binary state. The
package builds equilibrium paths, computes exact outcome distributions and
payoffs, and evaluates the closed-form limit results.
"""

from .analysis import classify_regime, quota_comparison, revision_value, setter_limit_value
from .beliefs import check_monotone, public_update, signal_posterior
from .benchmarks import complete_info_value, tioli_equilibrium, tioli_value
from .core import (
    PROPOSER,
    ModelParams,
    Signal,
    State,
    canonical_params,
    discounted_payoff,
    reservation_policy,
    stage_utility,
    validate_params,
)
from .engine import (
    OutcomeDistribution,
    StrategyProfile,
    deviation_gain,
    expected_payoffs,
    induced_distribution,
    simulate,
    solve_profile,
    tail_prob,
)
from .poisson_binomial import modes, pivotal_prob, pmf, verify_ranking
from .pooling import build_pooling_profile, continuation_values, solve_tilde_p
from .screening import acceptance_prob, build_screening_profile, screening_sequence, theorem2_value

__version__ = "0.1.0"
