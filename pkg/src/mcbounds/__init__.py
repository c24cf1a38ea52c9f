"""Finite-sample error bounds and estimates for Monte Carlo action-value search.

The package has five layers:

* :mod:`mcbounds.stats` -- streaming sample statistics and the normal / t CDFs.
* :mod:`mcbounds.bounds` -- the bound engine: general (Chernoff + empirical
  Bernstein) bounds, CLT bounds with a Berry-Esseen correction, t estimates,
  and per-bound significance-level optimization.
* :mod:`mcbounds.envs` -- the Gaussian bandit and slippery-gridworld test
  problems, plus exact value iteration and the epsilon-greedy baseline.
* :mod:`mcbounds.solvers` -- the two Monte Carlo searches under study
  (softmax root sampling, UCT) with the trajectory bookkeeping the bounds
  need.
* :mod:`mcbounds.harness` -- seeded episode sweeps aggregated into rate
  curves and serialized as deterministic CSV; :mod:`mcbounds.plotting`
  renders companion figures and :mod:`mcbounds.cli` exposes it all.
"""

from .bounds import (
    BERRY_ESSEEN_CONSTANT,
    ActionSampleSummary,
    BoundReport,
    InsufficientSamplesError,
    clt_action_error_bound,
    clt_value_error_bound,
    full_report,
    general_action_error_bound,
    general_value_error_bound,
    optimize_alpha,
    t_action_error_estimate,
    t_value_error_estimate,
    variance_upper_bound,
    welch_dof,
)
from .envs import (
    EpsilonGreedyBaseline,
    GaussianBandit,
    GridWorld,
    ValueTable,
    bandit_pull,
    epsilon_greedy_action,
    gridworld_step,
    load_gridworld_config,
    noisy_leaf_estimate,
    sample_bandit_episode,
    sample_start_state,
    value_iteration,
)
from .harness import (
    ConfigError,
    EpisodeRow,
    ExperimentConfig,
    RateCurve,
    RateRow,
    emit_csv,
    emit_episode_csv,
    parse_episode_csv,
    parse_rate_csv,
    run_experiment,
    true_value_oracle,
)
from .solvers import (
    SearchResult,
    TrajectoryRecord,
    compute_zeta,
    mcts_uct_search,
    simple_mc_search,
    softmax_weights,
)
from .stats import SampleStats, accumulate, normal_cdf, student_t_cdf

__version__ = "0.1.0"

__all__ = [
    "BERRY_ESSEEN_CONSTANT",
    "ActionSampleSummary",
    "BoundReport",
    "ConfigError",
    "EpisodeRow",
    "EpsilonGreedyBaseline",
    "ExperimentConfig",
    "GaussianBandit",
    "GridWorld",
    "InsufficientSamplesError",
    "RateCurve",
    "RateRow",
    "SampleStats",
    "SearchResult",
    "TrajectoryRecord",
    "ValueTable",
    "accumulate",
    "bandit_pull",
    "clt_action_error_bound",
    "clt_value_error_bound",
    "compute_zeta",
    "emit_csv",
    "emit_episode_csv",
    "epsilon_greedy_action",
    "full_report",
    "general_action_error_bound",
    "general_value_error_bound",
    "gridworld_step",
    "load_gridworld_config",
    "mcts_uct_search",
    "noisy_leaf_estimate",
    "normal_cdf",
    "optimize_alpha",
    "parse_episode_csv",
    "parse_rate_csv",
    "run_experiment",
    "sample_bandit_episode",
    "sample_start_state",
    "simple_mc_search",
    "softmax_weights",
    "student_t_cdf",
    "t_action_error_estimate",
    "t_value_error_estimate",
    "true_value_oracle",
    "value_iteration",
    "variance_upper_bound",
    "welch_dof",
    "__version__",
]
