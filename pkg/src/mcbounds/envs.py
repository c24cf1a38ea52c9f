"""Benchmark environments: a Gaussian bandit and a slippery gridworld MDP.

Both expose generative sampling driven by a caller-owned numpy Generator,
so episodes can run concurrently on independent streams. The gridworld also
provides exact-kernel value iteration, which doubles as the ground-truth
oracle and as the baseline rollout policy for the Monte Carlo solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .kvconfig import parse_kv_file

__all__ = [
    "UP",
    "DOWN",
    "LEFT",
    "RIGHT",
    "NUM_ACTIONS",
    "ACTION_NAMES",
    "GaussianBandit",
    "GridWorld",
    "ValueTable",
    "EpsilonGreedyBaseline",
    "sample_bandit_episode",
    "bandit_pull",
    "gridworld_step",
    "sample_start_state",
    "value_iteration",
    "epsilon_greedy_action",
    "noisy_leaf_estimate",
    "load_gridworld_config",
]

UP, DOWN, LEFT, RIGHT = 0, 1, 2, 3
NUM_ACTIONS = 4
ACTION_NAMES = ("up", "down", "left", "right")
# (dx, dy) per action; y grows upward
_DELTAS = ((0, 1), (0, -1), (-1, 0), (1, 0))

# Default terminal layout: two goals and two penalty cells spread across the
# 10x10 grid. Coordinates are (x, y) with the origin in the lower-left corner.
DEFAULT_TERMINAL_REWARDS: dict[tuple[int, int], float] = {
    (8, 8): 10.0,
    (1, 8): 3.0,
    (4, 4): -10.0,
    (8, 1): -5.0,
}


@dataclass(frozen=True)
class GaussianBandit:
    """Arms pay out Normal(arm_means[i], payout_variance)."""

    arm_means: tuple[float, ...]
    payout_variance: float = 0.5

    def __post_init__(self) -> None:
        if len(self.arm_means) < 1:
            raise ValueError("bandit needs at least one arm")
        if self.payout_variance < 0.0:
            raise ValueError("payout_variance must be >= 0")

    @property
    def num_arms(self) -> int:
        return len(self.arm_means)


def sample_bandit_episode(
    seed, num_arms: int = 10, payout_variance: float = 0.5
) -> GaussianBandit:
    """Draw one bandit instance: arm means i.i.d. uniform on [-1, 1]."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    means = rng.uniform(-1.0, 1.0, size=num_arms)
    return GaussianBandit(tuple(float(m) for m in means), payout_variance)


def bandit_pull(bandit: GaussianBandit, arm_index: int, rng: np.random.Generator) -> float:
    """Sample one payout from the chosen arm."""
    if not 0 <= arm_index < bandit.num_arms:
        raise ValueError(f"arm index {arm_index} out of range [0, {bandit.num_arms})")
    sd = math.sqrt(bandit.payout_variance)
    return bandit.arm_means[arm_index] + sd * rng.standard_normal()


@dataclass(frozen=True)
class GridWorld:
    """Slippery 2D grid with absorbing reward cells.

    An intended move succeeds with probability ``slip_success_prob``;
    otherwise the agent moves in a random cardinal direction (uniform over
    all four by default, over the other three when
    ``slip_includes_intended`` is False). Moves into a wall keep the agent
    in place. Entering a terminal cell yields that cell's reward and ends
    the episode; every other step has reward 0.
    """

    width: int = 10
    height: int = 10
    terminal_rewards: Mapping[tuple[int, int], float] = field(
        default_factory=lambda: dict(DEFAULT_TERMINAL_REWARDS)
    )
    slip_success_prob: float = 0.7
    discount: float = 0.95
    slip_includes_intended: bool = True

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if not 0.0 <= self.slip_success_prob <= 1.0:
            raise ValueError("slip_success_prob must be in [0, 1]")
        if not 0.0 <= self.discount < 1.0:
            raise ValueError("discount must be in [0, 1)")
        if not self.terminal_rewards:
            raise ValueError("at least one terminal reward cell is required")
        for (x, y) in self.terminal_rewards:
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"terminal cell ({x}, {y}) outside the grid")
        n = self.width * self.height
        move = np.empty((n, NUM_ACTIONS), dtype=np.int64)
        for s in range(n):
            x, y = s % self.width, s // self.width
            for a, (dx, dy) in enumerate(_DELTAS):
                nx = min(max(x + dx, 0), self.width - 1)
                ny = min(max(y + dy, 0), self.height - 1)
                move[s, a] = ny * self.width + nx
        terminal = np.zeros(n, dtype=bool)
        reward_on_enter = np.zeros(n, dtype=float)
        for (x, y), r in self.terminal_rewards.items():
            s = y * self.width + x
            terminal[s] = True
            reward_on_enter[s] = float(r)
        move.setflags(write=False)
        terminal.setflags(write=False)
        reward_on_enter.setflags(write=False)
        object.__setattr__(self, "_move", move)
        object.__setattr__(self, "_terminal", terminal)
        object.__setattr__(self, "_reward_on_enter", reward_on_enter)

    @property
    def num_states(self) -> int:
        return self.width * self.height

    def state_index(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise ValueError(f"cell ({x}, {y}) outside the grid")
        return y * self.width + x

    def state_coords(self, state: int) -> tuple[int, int]:
        return state % self.width, state // self.width

    def is_terminal(self, state: int) -> bool:
        return bool(self._terminal[state])

    def transition_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Exact kernel P[s, a, s'] and entry rewards R[s'] (terminals absorb)."""
        n = self.num_states
        p_hit = self.slip_success_prob
        p = np.zeros((n, NUM_ACTIONS, n))
        for s in range(n):
            if self._terminal[s]:
                p[s, :, s] = 1.0
                continue
            for a in range(NUM_ACTIONS):
                p[s, a, self._move[s, a]] += p_hit
                if self.slip_includes_intended:
                    for d in range(NUM_ACTIONS):
                        p[s, a, self._move[s, d]] += (1.0 - p_hit) / 4.0
                else:
                    for d in range(NUM_ACTIONS):
                        if d != a:
                            p[s, a, self._move[s, d]] += (1.0 - p_hit) / 3.0
        return p, np.array(self._reward_on_enter)


def gridworld_step(
    world: GridWorld, state: int, action: int, rng: np.random.Generator
) -> tuple[int, float, bool]:
    """Sample one transition; returns (next_state, reward, terminal)."""
    if world.is_terminal(state):
        raise ValueError(f"cannot step from terminal state {state}")
    if not 0 <= action < NUM_ACTIONS:
        raise ValueError(f"action {action} out of range")
    p = world.slip_success_prob
    u = rng.random()
    if u < p:
        d = action
    else:
        r = (u - p) / (1.0 - p)
        if world.slip_includes_intended:
            d = min(int(r * 4.0), 3)
        else:
            k = min(int(r * 3.0), 2)
            d = [a for a in range(NUM_ACTIONS) if a != action][k]
    nxt = int(world._move[state, d])
    if world._terminal[nxt]:
        return nxt, float(world._reward_on_enter[nxt]), True
    return nxt, 0.0, False


def sample_start_state(world: GridWorld, rng: np.random.Generator) -> int:
    """Uniform draw over the non-terminal cells."""
    candidates = np.flatnonzero(~world._terminal)
    return int(candidates[rng.integers(len(candidates))])


@dataclass(frozen=True)
class ValueTable:
    """Converged tabular solution: q/v values, greedy policy, terminal mask."""

    q_values: np.ndarray
    v_values: np.ndarray
    greedy_action: np.ndarray
    terminal: np.ndarray

    def v(self, state: int) -> float:
        return float(self.v_values[state])

    def q(self, state: int, action: int) -> float:
        return float(self.q_values[state, action])

    def greedy(self, state: int) -> int:
        return int(self.greedy_action[state])


def value_iteration(world: GridWorld, residual_tolerance: float = 1e-6) -> ValueTable:
    """Exact-kernel value iteration to a sup-norm Bellman residual below tol.

    Terminal states are absorbing with value 0: their reward is collected
    on entry and nothing follows.
    """
    if residual_tolerance <= 0.0:
        raise ValueError("residual_tolerance must be > 0")
    move = world._move
    terminal = world._terminal
    enter = world._reward_on_enter
    p = world.slip_success_prob
    gamma = world.discount
    v = np.zeros(world.num_states)
    while True:
        val = enter + gamma * np.where(terminal, 0.0, v)
        vm = val[move]  # (S, A) value of each intended target
        row = vm.sum(axis=1, keepdims=True)
        if world.slip_includes_intended:
            q = p * vm + (1.0 - p) / 4.0 * row
        else:
            q = p * vm + (1.0 - p) / 3.0 * (row - vm)
        q[terminal, :] = 0.0
        v_new = q.max(axis=1)
        residual = float(np.max(np.abs(v_new - v)))
        v = v_new
        if residual < residual_tolerance:
            break
    greedy = q.argmax(axis=1)
    return ValueTable(
        q_values=q,
        v_values=v,
        greedy_action=greedy,
        terminal=np.array(terminal),
    )


def epsilon_greedy_action(
    table: ValueTable, state: int, epsilon_explore: float, rng: np.random.Generator
) -> int:
    """Greedy action with probability 1 - epsilon_explore, else uniform."""
    if table.terminal[state]:
        raise ValueError(f"no action is defined at terminal state {state}")
    u = rng.random()
    if u < epsilon_explore:
        return min(int(u / epsilon_explore * NUM_ACTIONS), NUM_ACTIONS - 1)
    return int(table.greedy_action[state])


def noisy_leaf_estimate(table: ValueTable, state: int, rng: np.random.Generator) -> float:
    """Baseline state value plus Uniform(-0.1, 0.1) noise; exact 0 at terminals."""
    if table.terminal[state]:
        return 0.0
    return float(table.v_values[state]) + rng.uniform(-0.1, 0.1)


@dataclass(frozen=True)
class EpsilonGreedyBaseline:
    """Rollout policy used after the root action: epsilon-greedy on a table."""

    table: ValueTable
    explore_eps: float = 0.1

    def action(self, state: int, rng: np.random.Generator) -> int:
        return epsilon_greedy_action(self.table, state, self.explore_eps, rng)

    def leaf_estimate(self, state: int, rng: np.random.Generator) -> float:
        return noisy_leaf_estimate(self.table, state, rng)


_GRID_KEYS = {"width", "height", "slip", "discount", "seed"}


def load_gridworld_config(path) -> tuple[GridWorld, int | None]:
    """Build a GridWorld from a key=value file.

    Recognized keys: width, height, slip, discount, seed, and one
    ``cell.X.Y = reward`` entry per terminal cell. Returns the world and
    the seed (None when absent).
    """
    keys = parse_kv_file(path)
    rewards: dict[tuple[int, int], float] = {}
    plain: dict[str, str] = {}
    for key, value in keys.items():
        if key.startswith("cell."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ValueError(f"malformed reward cell key {key!r}")
            rewards[(int(parts[1]), int(parts[2]))] = float(value)
        elif key in _GRID_KEYS:
            plain[key] = value
        else:
            raise ValueError(f"unknown gridworld config key {key!r}")
    world = GridWorld(
        width=int(plain.get("width", 10)),
        height=int(plain.get("height", 10)),
        terminal_rewards=rewards or dict(DEFAULT_TERMINAL_REWARDS),
        slip_success_prob=float(plain.get("slip", 0.7)),
        discount=float(plain.get("discount", 0.95)),
    )
    seed = int(plain["seed"]) if "seed" in plain else None
    return world, seed
