"""Monte Carlo search procedures with the bookkeeping the bounds need.

Both solvers return a :class:`SearchResult` holding, per root action, the
raw trajectory records and an :class:`ActionSampleSummary` ready for the
bound engine, including the discounted leaf-bias upper bound ``zeta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import ActionSampleSummary
from .envs import (
    NUM_ACTIONS,
    EpsilonGreedyBaseline,
    GaussianBandit,
    GridWorld,
)

__all__ = [
    "TrajectoryRecord",
    "SearchResult",
    "softmax_weights",
    "compute_zeta",
    "default_value_range",
    "simple_mc_search",
    "mcts_uct_search",
]

# lower bound on range_b so constant samples cannot produce a zero divisor
_RANGE_FLOOR = 1e-9


@dataclass(frozen=True)
class TrajectoryRecord:
    """One rollout from the root: return, depth and leaf-evaluation info.

    ``depth`` counts actions taken from the root to the evaluation point;
    ``discount_weight`` is discount**depth, the factor multiplying the leaf
    estimate (and hence its bias) in the recorded return. Bandit pulls are
    depth-0 terminal records.
    """

    root_action: int
    discounted_return: float
    depth: int
    leaf_estimate: float
    terminal: bool
    discount_weight: float


@dataclass(frozen=True)
class SearchResult:
    """Per-action trajectories and summaries plus the recommended action."""

    records: tuple[tuple[TrajectoryRecord, ...], ...]
    summaries: tuple[ActionSampleSummary | None, ...]
    recommended_action: int
    total_samples: int


def softmax_weights(estimates: Sequence[float], tau: float) -> list[float]:
    """Softmax with temperature tau, max-shifted for overflow safety."""
    if not estimates:
        raise ValueError("softmax needs at least one estimate")
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    top = max(estimates)
    raw = [math.exp((e - top) / tau) for e in estimates]
    total = sum(raw)
    return [w / total for w in raw]


def compute_zeta(
    records: Sequence[TrajectoryRecord], q_min: float, q_max: float
) -> float:
    """Average discounted worst-case leaf-estimate error over trajectories.

    Terminal trajectories contribute zero; a truncated one contributes
    discount**depth times the largest error its leaf estimate could have
    within the admissible value range [q_min, q_max].
    """
    if not records:
        raise ValueError("compute_zeta needs at least one trajectory record")
    total = 0.0
    for rec in records:
        if rec.terminal:
            continue
        worst = max(q_max - rec.leaf_estimate, rec.leaf_estimate - q_min)
        total += rec.discount_weight * worst
    return total / len(records)


def default_value_range(world: GridWorld) -> tuple[float, float]:
    """Analytic return range: single terminal reward, zero step rewards."""
    rewards = list(world.terminal_rewards.values())
    return min(0.0, min(rewards)), max(0.0, max(rewards))


def _summarize(
    records_by_action: Sequence[list[TrajectoryRecord]],
    q_min: float,
    q_max: float,
    theoretical_range: bool,
) -> tuple[ActionSampleSummary | None, ...]:
    summaries: list[ActionSampleSummary | None] = []
    for recs in records_by_action:
        if not recs:
            summaries.append(None)
            continue
        returns = np.array([r.discounted_return for r in recs])
        lo, hi = float(returns.min()), float(returns.max())
        if theoretical_range:
            range_b = q_max - q_min
            floor, ceiling = q_min, q_max
        else:
            range_b = max(hi - lo, _RANGE_FLOOR)
            floor, ceiling = lo, hi
        # the exact mean lies in [lo, hi]; clamp away summation rounding
        mean = min(max(float(returns.mean()), lo), hi)
        summaries.append(
            ActionSampleSummary(
                n=len(recs),
                mean=mean,
                variance_vn=float(returns.var()),
                range_b=range_b,
                zeta=compute_zeta(recs, q_min, q_max),
                value_floor=floor,
                value_ceiling=ceiling,
            )
        )
    return tuple(summaries)


def _recommend(summaries: Sequence[ActionSampleSummary | None]) -> int:
    best, best_mean = -1, -math.inf
    for i, summary in enumerate(summaries):
        if summary is not None and summary.mean > best_mean:
            best, best_mean = i, summary.mean
    if best < 0:
        raise ValueError("no action received any sample")
    return best


class _RootSampler:
    """Root-action rule of the simple solver: never-sampled actions first
    (uniformly), then a softmax draw over the running value estimates."""

    def __init__(self, num_actions: int, tau: float, rng: np.random.Generator):
        self.tau = tau
        self.rng = rng
        self.counts = [0] * num_actions
        self.sums = [0.0] * num_actions
        self.unsampled = list(range(num_actions))

    def pick(self) -> int:
        if self.unsampled:
            k = int(self.rng.integers(len(self.unsampled)))
            return self.unsampled[k]
        means = [s / c for s, c in zip(self.sums, self.counts)]
        weights = softmax_weights(means, self.tau)
        u = self.rng.random()
        acc = 0.0
        for i, w in enumerate(weights):
            acc += w
            if u < acc:
                return i
        return len(weights) - 1

    def record(self, action: int, value: float) -> None:
        if self.counts[action] == 0:
            self.unsampled.remove(action)
        self.counts[action] += 1
        self.sums[action] += value


def simple_mc_search(
    env,
    root_state,
    total_samples: int,
    depth: int,
    baseline: EpsilonGreedyBaseline | None,
    tau: float,
    rng: np.random.Generator,
    *,
    value_range: tuple[float, float] | None = None,
) -> SearchResult:
    """Fixed-depth Monte Carlo search with softmax root-action sampling.

    On a bandit each sample is a single pull (depth 0, terminal, no bias).
    On a gridworld the root action is followed by the epsilon-greedy
    baseline up to ``depth`` actions or termination; truncated rollouts
    bootstrap with the baseline's noisy leaf estimate.
    """
    if total_samples < 1:
        raise ValueError("total_samples must be >= 1")
    if isinstance(env, GaussianBandit):
        return _simple_mc_bandit(env, total_samples, tau, rng)
    if isinstance(env, GridWorld):
        if baseline is None:
            raise ValueError("gridworld search requires a baseline policy")
        if depth < 1:
            raise ValueError("depth must be >= 1")
        return _simple_mc_gridworld(
            env, root_state, total_samples, depth, baseline, tau, rng, value_range
        )
    raise TypeError(f"unsupported environment type {type(env).__name__}")


def _simple_mc_bandit(
    bandit: GaussianBandit, total_samples: int, tau: float, rng: np.random.Generator
) -> SearchResult:
    sampler = _RootSampler(bandit.num_arms, tau, rng)
    records: list[list[TrajectoryRecord]] = [[] for _ in range(bandit.num_arms)]
    means = bandit.arm_means
    sd = math.sqrt(bandit.payout_variance)
    for _ in range(total_samples):
        arm = sampler.pick()
        payout = means[arm] + sd * rng.standard_normal()
        sampler.record(arm, payout)
        records[arm].append(TrajectoryRecord(arm, payout, 0, 0.0, True, 1.0))
    summaries = _summarize(records, 0.0, 0.0, theoretical_range=False)
    return SearchResult(
        records=tuple(tuple(r) for r in records),
        summaries=summaries,
        recommended_action=_recommend(summaries),
        total_samples=total_samples,
    )


def _simple_mc_gridworld(
    world: GridWorld,
    root_state: int,
    total_samples: int,
    depth: int,
    baseline: EpsilonGreedyBaseline,
    tau: float,
    rng: np.random.Generator,
    value_range: tuple[float, float] | None,
) -> SearchResult:
    if world.is_terminal(root_state):
        raise ValueError("root state is terminal; nothing to search")
    q_min, q_max = value_range if value_range is not None else default_value_range(world)
    sampler = _RootSampler(NUM_ACTIONS, tau, rng)
    records: list[list[TrajectoryRecord]] = [[] for _ in range(NUM_ACTIONS)]
    gamma = world.discount
    # hot loop: pull env/table fields into locals
    p_hit = world.slip_success_prob
    move = world._move
    terminal_mask = world._terminal
    enter = world._reward_on_enter
    table = baseline.table
    greedy = table.greedy_action
    v_values = table.v_values
    explore = baseline.explore_eps
    rng_random = rng.random
    rng_uniform = rng.uniform
    for _ in range(total_samples):
        root_action = sampler.pick()
        s = root_state
        a = root_action
        ret = 0.0
        disc = 1.0
        reached_terminal = False
        leaf = 0.0
        traj_depth = depth
        for t in range(depth):
            u = rng_random()
            if u < p_hit:
                d = a
            else:
                r = (u - p_hit) / (1.0 - p_hit)
                if world.slip_includes_intended:
                    d = min(int(r * 4.0), 3)
                else:
                    d = [x for x in range(NUM_ACTIONS) if x != a][min(int(r * 3.0), 2)]
            s = int(move[s, d])
            if terminal_mask[s]:
                ret += disc * float(enter[s])
                disc *= gamma
                reached_terminal = True
                traj_depth = t + 1
                break
            disc *= gamma
            if t == depth - 1:
                leaf = float(v_values[s]) + rng_uniform(-0.1, 0.1)
                ret += disc * leaf
            else:
                u2 = rng_random()
                if u2 < explore:
                    a = min(int(u2 / explore * NUM_ACTIONS), NUM_ACTIONS - 1)
                else:
                    a = int(greedy[s])
        sampler.record(root_action, ret)
        records[root_action].append(
            TrajectoryRecord(
                root_action,
                ret,
                traj_depth,
                leaf,
                reached_terminal,
                gamma**traj_depth,
            )
        )
    summaries = _summarize(records, q_min, q_max, theoretical_range=True)
    return SearchResult(
        records=tuple(tuple(r) for r in records),
        summaries=summaries,
        recommended_action=_recommend(summaries),
        total_samples=total_samples,
    )


class _TreeNode:
    __slots__ = ("visits", "counts", "values", "children")

    def __init__(self) -> None:
        self.visits = 0
        self.counts = [0] * NUM_ACTIONS
        self.values = [0.0] * NUM_ACTIONS
        self.children: dict[tuple[int, int], "_TreeNode"] = {}

    def select(self, c: float) -> int:
        counts = self.counts
        for a in range(NUM_ACTIONS):
            if counts[a] == 0:
                return a
        log_n = math.log(self.visits)
        best, best_score = 0, -math.inf
        values = self.values
        for a in range(NUM_ACTIONS):
            score = values[a] + c * math.sqrt(log_n / counts[a])
            if score > best_score:
                best, best_score = a, score
        return best

    def update(self, action: int, value: float) -> None:
        self.visits += 1
        self.counts[action] += 1
        self.values[action] += (value - self.values[action]) / self.counts[action]


def mcts_uct_search(
    world: GridWorld,
    root_state: int,
    total_samples: int,
    max_depth: int,
    exploration_c: float,
    baseline: EpsilonGreedyBaseline,
    rng: np.random.Generator,
    *,
    value_range: tuple[float, float] | None = None,
) -> SearchResult:
    """Upper-confidence tree search with single-node expansion per simulation.

    Selection maximizes mean + c * sqrt(ln N / n_a) with unvisited actions
    taken first (lowest index). New leaves are evaluated with the noisy
    baseline estimate (no random rollout); values are mean-backed-up along
    the path. The tree is discarded when the search returns.
    """
    if total_samples < 1:
        raise ValueError("total_samples must be >= 1")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if exploration_c < 0.0:
        raise ValueError("exploration_c must be >= 0")
    if world.is_terminal(root_state):
        raise ValueError("root state is terminal; nothing to search")
    q_min, q_max = value_range if value_range is not None else default_value_range(world)
    gamma = world.discount
    table = baseline.table
    root = _TreeNode()
    records: list[list[TrajectoryRecord]] = [[] for _ in range(NUM_ACTIONS)]

    p_hit = world.slip_success_prob
    move = world._move
    terminal_mask = world._terminal
    enter = world._reward_on_enter
    v_values = table.v_values
    includes_intended = world.slip_includes_intended
    rng_random = rng.random
    rng_uniform = rng.uniform

    def step(s: int, a: int) -> int:
        u = rng_random()
        if u < p_hit:
            d = a
        else:
            r = (u - p_hit) / (1.0 - p_hit)
            if includes_intended:
                d = min(int(r * 4.0), 3)
            else:
                d = [x for x in range(NUM_ACTIONS) if x != a][min(int(r * 3.0), 2)]
        return int(move[s, d])

    def leaf_value(s: int) -> float:
        return float(v_values[s]) + rng_uniform(-0.1, 0.1)

    def simulate(node: _TreeNode, s: int, remaining: int):
        """Returns (action, return-from-s, leaf depth below s, leaf, terminal)."""
        a = node.select(exploration_c)
        nxt = step(s, a)
        if terminal_mask[nxt]:
            q, h, leaf, term = float(enter[nxt]), 1, 0.0, True
        elif remaining == 1:
            leaf = leaf_value(nxt)
            q, h, term = gamma * leaf, 1, False
        else:
            child = node.children.get((a, nxt))
            if child is None:
                # expansion: exactly one new node per simulation
                node.children[(a, nxt)] = _TreeNode()
                leaf = leaf_value(nxt)
                q, h, term = gamma * leaf, 1, False
            else:
                _, q_below, h_below, leaf, term = simulate(child, nxt, remaining - 1)
                q, h = gamma * q_below, 1 + h_below
        node.update(a, q)
        return a, q, h, leaf, term

    for _ in range(total_samples):
        action, q, h, leaf, term = simulate(root, root_state, max_depth)
        records[action].append(
            TrajectoryRecord(action, q, h, leaf, term, gamma**h)
        )

    summaries = _summarize(records, q_min, q_max, theoretical_range=True)
    return SearchResult(
        records=tuple(tuple(r) for r in records),
        summaries=summaries,
        recommended_action=_recommend(summaries),
        total_samples=total_samples,
    )
