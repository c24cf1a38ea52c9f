"""Experiment harness: seeded episode sweeps aggregated into rate curves.

For every episode and every sample budget n the configured solver runs once,
the bound engine reports on its top-two actions, and true error indicators
are recorded against the analytic ground truth. Aggregation across episodes
produces one row per (n, metric) with means, standard errors and observed
violation rates, serialized as CSV with a stable byte-for-byte layout.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .bounds import BoundReport, InsufficientSamplesError, full_report
from .envs import (
    EpsilonGreedyBaseline,
    GaussianBandit,
    GridWorld,
    sample_bandit_episode,
    sample_start_state,
    value_iteration,
)
from .solvers import SearchResult, mcts_uct_search, simple_mc_search

__all__ = [
    "PROBLEMS",
    "DEFAULT_SAMPLE_COUNTS",
    "VALUE_METRIC",
    "ACTION_METRIC",
    "CSV_HEADER",
    "EPISODE_CSV_HEADER",
    "ConfigError",
    "ExperimentConfig",
    "RateRow",
    "EpisodeRow",
    "RateCurve",
    "true_value_oracle",
    "run_experiment",
    "emit_csv",
    "emit_episode_csv",
    "parse_rate_csv",
    "parse_episode_csv",
]

PROBLEMS = ("bandit", "gridworld-mc", "gridworld-mcts")
DEFAULT_SAMPLE_COUNTS = (10, 20, 50, 100, 200, 500, 1000, 2000)
VALUE_METRIC = "value_error"
ACTION_METRIC = "action_error"
CSV_HEADER = (
    "n,metric,general_mean,general_se,clt_mean,clt_se,"
    "t_mean,t_se,observed,observed_se,episodes"
)
EPISODE_CSV_HEADER = "episode,n,metric,general,clt,t,violation"


class ConfigError(ValueError):
    """An experiment configuration failed validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment run.

    ``alpha`` of None means each bound is minimized over its significance
    level; a float fixes the significance for every bound evaluation.
    ``depth`` is the rollout / tree depth for the gridworld problems and is
    ignored by the bandit.
    """

    problem: str
    episode_count: int
    sample_counts: tuple[int, ...] = DEFAULT_SAMPLE_COUNTS
    epsilon_margin: float = 0.1
    depth: int = 10
    tau: float = 10.0
    uct_c: float = 1.0
    seed: int = 0
    alpha: float | None = None
    num_arms: int = 10
    payout_variance: float = 0.5
    explore_eps: float = 0.1

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise ConfigError(
                f"problem must be one of {', '.join(PROBLEMS)}; got {self.problem!r}"
            )
        if self.episode_count < 1:
            raise ConfigError(f"episode_count must be >= 1, got {self.episode_count}")
        if not self.sample_counts:
            raise ConfigError("sample_counts must be non-empty")
        for n in self.sample_counts:
            if n < 10:
                raise ConfigError(f"every sample count must be >= 10, got {n}")
        if not self.epsilon_margin > 0.0:
            raise ConfigError(
                f"epsilon_margin must be > 0, got {self.epsilon_margin}"
            )
        if self.depth < 1:
            raise ConfigError(f"depth must be >= 1, got {self.depth}")
        if not self.tau > 0.0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if self.uct_c < 0.0:
            raise ConfigError(f"uct_c must be >= 0, got {self.uct_c}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.num_arms < 2:
            raise ConfigError(f"num_arms must be >= 2, got {self.num_arms}")
        if self.payout_variance < 0.0:
            raise ConfigError(
                f"payout_variance must be >= 0, got {self.payout_variance}"
            )
        if not 0.0 < self.explore_eps < 1.0:
            raise ConfigError(
                f"explore_eps must lie in (0, 1), got {self.explore_eps}"
            )


@dataclass(frozen=True)
class RateRow:
    """One aggregate row of the rate curve: one sample budget, one metric."""

    n: int
    metric: str
    general_mean: float
    general_se: float
    clt_mean: float
    clt_se: float
    t_mean: float
    t_se: float
    observed: float
    observed_se: float
    episodes: int


@dataclass(frozen=True)
class EpisodeRow:
    """Per-episode record backing one aggregate row."""

    episode: int
    n: int
    metric: str
    general: float
    clt: float
    t: float
    violation: int


@dataclass(frozen=True)
class RateCurve:
    """Aggregate rows plus the per-episode records they were built from."""

    rows: tuple[RateRow, ...]
    episode_rows: tuple[EpisodeRow, ...] = ()
    config: ExperimentConfig | None = None


def true_value_oracle(
    env, root_state: int | None = None, value_table=None
) -> tuple[float, ...]:
    """Analytic per-action values: arm means, or value-iteration q-values."""
    if isinstance(env, GaussianBandit):
        return env.arm_means
    if isinstance(env, GridWorld):
        if root_state is None:
            raise ValueError("gridworld ground truth needs a root state")
        table = value_table if value_table is not None else value_iteration(env)
        return tuple(float(q) for q in table.q_values[root_state])
    raise TypeError(f"unsupported environment type {type(env).__name__}")


def _runner_up(result: SearchResult, best: int) -> int:
    candidate, candidate_mean = -1, -math.inf
    for i, summary in enumerate(result.summaries):
        if i == best or summary is None:
            continue
        if summary.mean > candidate_mean:
            candidate, candidate_mean = i, summary.mean
    if candidate < 0:
        raise ValueError("need at least two sampled actions to rank")
    return candidate


def _vacuous_report(epsilon: float) -> BoundReport:
    # top-two actions had a single sample each: no variance information,
    # so the bounds are trivial and the estimate is maximally uncertain
    return BoundReport(
        general_bound=1.0,
        clt_bound=1.0,
        t_estimate=0.5,
        alpha_general=0.5,
        alpha_clt=0.5,
        epsilon=epsilon,
    )


def _evaluate(
    result: SearchResult,
    truths: Sequence[float],
    epsilon: float,
    fixed_alpha: float | None,
) -> tuple[BoundReport, BoundReport, int, int]:
    best = result.recommended_action
    runner = _runner_up(result, best)
    best_mean = result.summaries[best].mean
    value_violation = int(best_mean - truths[best] >= epsilon)
    action_violation = int(truths[runner] - truths[best] >= epsilon)
    try:
        value_report, action_report = full_report(
            result.summaries, best, runner, epsilon, fixed_alpha=fixed_alpha
        )
    except InsufficientSamplesError:
        value_report = action_report = _vacuous_report(epsilon)
    return value_report, action_report, value_violation, action_violation


_Outcome = tuple[BoundReport, BoundReport, int, int]


def _episode_outcomes(config: ExperimentConfig) -> Iterator[list[_Outcome]]:
    """One list of per-n outcomes per episode, in episode order."""
    if config.problem == "bandit":
        for episode in range(config.episode_count):
            setup_rng = np.random.default_rng([config.seed, episode, 0])
            bandit = sample_bandit_episode(
                setup_rng,
                num_arms=config.num_arms,
                payout_variance=config.payout_variance,
            )
            truths = true_value_oracle(bandit)
            outcomes = []
            for idx, n in enumerate(config.sample_counts):
                rng = np.random.default_rng([config.seed, episode, idx + 1])
                result = simple_mc_search(bandit, None, n, 1, None, config.tau, rng)
                outcomes.append(
                    _evaluate(result, truths, config.epsilon_margin, config.alpha)
                )
            yield outcomes
        return

    world = GridWorld()
    table = value_iteration(world)
    baseline = EpsilonGreedyBaseline(table, explore_eps=config.explore_eps)
    use_mcts = config.problem == "gridworld-mcts"
    for episode in range(config.episode_count):
        setup_rng = np.random.default_rng([config.seed, episode, 0])
        root = sample_start_state(world, setup_rng)
        truths = true_value_oracle(world, root, table)
        outcomes = []
        for idx, n in enumerate(config.sample_counts):
            rng = np.random.default_rng([config.seed, episode, idx + 1])
            if use_mcts:
                result = mcts_uct_search(
                    world, root, n, config.depth, config.uct_c, baseline, rng
                )
            else:
                result = simple_mc_search(
                    world, root, n, config.depth, baseline, config.tau, rng
                )
            outcomes.append(
                _evaluate(result, truths, config.epsilon_margin, config.alpha)
            )
        yield outcomes


def _stderr(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


def _aggregate(
    n: int,
    metric: str,
    generals: np.ndarray,
    clts: np.ndarray,
    ts: np.ndarray,
    violations: np.ndarray,
) -> RateRow:
    episodes = violations.size
    observed = float(violations.sum()) / episodes
    return RateRow(
        n=n,
        metric=metric,
        general_mean=float(generals.mean()),
        general_se=_stderr(generals),
        clt_mean=float(clts.mean()),
        clt_se=_stderr(clts),
        t_mean=float(ts.mean()),
        t_se=_stderr(ts),
        observed=observed,
        observed_se=math.sqrt(observed * (1.0 - observed) / episodes),
        episodes=episodes,
    )


def run_experiment(config: ExperimentConfig) -> RateCurve:
    """Run the full episode sweep and aggregate it into a rate curve.

    Fully deterministic: episode e derives all of its random streams from
    (seed, e), so results do not depend on scheduling or sweep order.
    """
    config.validate()
    num_n = len(config.sample_counts)
    episodes = config.episode_count
    shape = (episodes, num_n)
    series = {
        metric: {
            "general": np.empty(shape),
            "clt": np.empty(shape),
            "t": np.empty(shape),
            "violation": np.empty(shape, dtype=np.int64),
        }
        for metric in (VALUE_METRIC, ACTION_METRIC)
    }
    for episode, outcomes in enumerate(_episode_outcomes(config)):
        for idx, (value_report, action_report, v_viol, a_viol) in enumerate(outcomes):
            for metric, report, viol in (
                (VALUE_METRIC, value_report, v_viol),
                (ACTION_METRIC, action_report, a_viol),
            ):
                series[metric]["general"][episode, idx] = report.general_bound
                series[metric]["clt"][episode, idx] = report.clt_bound
                series[metric]["t"][episode, idx] = report.t_estimate
                series[metric]["violation"][episode, idx] = viol

    rows = []
    episode_rows = []
    for idx, n in enumerate(config.sample_counts):
        for metric in (VALUE_METRIC, ACTION_METRIC):
            cols = series[metric]
            rows.append(
                _aggregate(
                    n,
                    metric,
                    cols["general"][:, idx],
                    cols["clt"][:, idx],
                    cols["t"][:, idx],
                    cols["violation"][:, idx],
                )
            )
    for episode in range(episodes):
        for idx, n in enumerate(config.sample_counts):
            for metric in (VALUE_METRIC, ACTION_METRIC):
                cols = series[metric]
                episode_rows.append(
                    EpisodeRow(
                        episode=episode,
                        n=n,
                        metric=metric,
                        general=float(cols["general"][episode, idx]),
                        clt=float(cols["clt"][episode, idx]),
                        t=float(cols["t"][episode, idx]),
                        violation=int(cols["violation"][episode, idx]),
                    )
                )
    return RateCurve(
        rows=tuple(rows), episode_rows=tuple(episode_rows), config=config
    )


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def _write_text(destination, text: str) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def emit_csv(curve: RateCurve, destination) -> None:
    """Serialize aggregate rows; byte-identical for identical curves."""
    lines = [CSV_HEADER]
    for row in curve.rows:
        lines.append(
            ",".join(
                (
                    str(row.n),
                    row.metric,
                    _fmt(row.general_mean),
                    _fmt(row.general_se),
                    _fmt(row.clt_mean),
                    _fmt(row.clt_se),
                    _fmt(row.t_mean),
                    _fmt(row.t_se),
                    _fmt(row.observed),
                    _fmt(row.observed_se),
                    str(row.episodes),
                )
            )
        )
    _write_text(destination, "\n".join(lines) + "\n")


def emit_episode_csv(curve: RateCurve, destination) -> None:
    """Serialize the per-episode records behind the aggregates."""
    lines = [EPISODE_CSV_HEADER]
    for row in curve.episode_rows:
        lines.append(
            ",".join(
                (
                    str(row.episode),
                    str(row.n),
                    row.metric,
                    _fmt(row.general),
                    _fmt(row.clt),
                    _fmt(row.t),
                    str(row.violation),
                )
            )
        )
    _write_text(destination, "\n".join(lines) + "\n")


def _read_lines(source) -> list[list[str]]:
    if hasattr(source, "read"):
        return list(csv.reader(source))
    with open(source, "r", encoding="utf-8", newline="") as handle:
        return list(csv.reader(handle))


def parse_rate_csv(source) -> RateCurve:
    """Inverse of :func:`emit_csv` (aggregate rows only)."""
    records = _read_lines(source)
    if not records or records[0] != CSV_HEADER.split(","):
        raise ValueError("unrecognized rate-curve CSV header")
    rows = []
    for record in records[1:]:
        if len(record) != 11:
            raise ValueError(f"malformed rate-curve row: {record!r}")
        rows.append(
            RateRow(
                n=int(record[0]),
                metric=record[1],
                general_mean=float(record[2]),
                general_se=float(record[3]),
                clt_mean=float(record[4]),
                clt_se=float(record[5]),
                t_mean=float(record[6]),
                t_se=float(record[7]),
                observed=float(record[8]),
                observed_se=float(record[9]),
                episodes=int(record[10]),
            )
        )
    return RateCurve(rows=tuple(rows))


def parse_episode_csv(source) -> tuple[EpisodeRow, ...]:
    """Inverse of :func:`emit_episode_csv`."""
    records = _read_lines(source)
    if not records or records[0] != EPISODE_CSV_HEADER.split(","):
        raise ValueError("unrecognized episode CSV header")
    rows = []
    for record in records[1:]:
        if len(record) != 7:
            raise ValueError(f"malformed episode row: {record!r}")
        rows.append(
            EpisodeRow(
                episode=int(record[0]),
                n=int(record[1]),
                metric=record[2],
                general=float(record[3]),
                clt=float(record[4]),
                t=float(record[5]),
                violation=int(record[6]),
            )
        )
    return tuple(rows)
