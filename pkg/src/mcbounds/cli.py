"""Command-line interface.

One subcommand per problem (``bandit``, ``gridworld-mc``, ``gridworld-mcts``)
runs an experiment sweep and writes the rate-curve CSV to ``--out`` or
stdout, optionally with the per-episode CSV (``--keep-episodes``) and a
rendered figure (``--fig``). A ``plot`` subcommand re-renders a figure from
a previously written CSV. Settings may come from a plain key=value config
file (keys named like the flags); explicit flags win over the file.

Exit codes: 0 on success, 2 on configuration validation failure, 1 on
runtime I/O failures.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    DEFAULT_SAMPLE_COUNTS,
    PROBLEMS,
    ExperimentConfig,
    emit_csv,
    emit_episode_csv,
    parse_rate_csv,
    run_experiment,
)
from .kvconfig import parse_kv_file

__all__ = ["build_parser", "main", "entrypoint"]

_DEFAULT_EPISODES = 100
_DEPTH_DEFAULTS = {"bandit": 10, "gridworld-mc": 10, "gridworld-mcts": 25}
_RUN_KEYS = (
    "episodes",
    "samples",
    "epsilon",
    "depth",
    "tau",
    "uct-c",
    "seed",
    "alpha",
    "out",
    "keep-episodes",
    "fig",
)


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--episodes", type=int, help="number of episodes to run")
    sub.add_argument(
        "--samples", help="comma-separated sample budgets (default 10..2000 sweep)"
    )
    sub.add_argument("--epsilon", type=float, help="error margin (default 0.1)")
    sub.add_argument("--depth", type=int, help="rollout/tree depth (gridworld only)")
    sub.add_argument("--tau", type=float, help="softmax temperature (default 10)")
    sub.add_argument(
        "--uct-c", dest="uct_c", type=float, help="UCT exploration constant"
    )
    sub.add_argument("--seed", type=int, help="master random seed (default 0)")
    sub.add_argument(
        "--alpha", help="'opt' to minimize per bound (default), or a fixed value"
    )
    sub.add_argument("--out", help="rate-curve CSV path (stdout when omitted)")
    sub.add_argument("--config", help="key=value settings file; flags override it")
    sub.add_argument(
        "--keep-episodes",
        dest="keep_episodes",
        help="also write per-episode records to this CSV path",
    )
    sub.add_argument("--fig", help="also render the curve figure to this image path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcbounds",
        description=(
            "Finite-sample error bounds and observed error rates for "
            "Monte Carlo action-value search."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)
    helps = {
        "bandit": "Gaussian multi-armed bandit sweep",
        "gridworld-mc": "stochastic gridworld, fixed-depth Monte Carlo search",
        "gridworld-mcts": "stochastic gridworld, UCT tree search",
    }
    for problem in PROBLEMS:
        _add_run_flags(subs.add_parser(problem, help=helps[problem]))
    plot = subs.add_parser("plot", help="render a figure from a rate-curve CSV")
    plot.add_argument("csv", help="rate-curve CSV produced by a run")
    plot.add_argument("--fig", required=True, help="output image path")
    plot.add_argument("--title", help="optional figure title")
    return parser


def _parse_samples(text: str) -> tuple[int, ...]:
    tokens = [tok.strip() for tok in text.split(",")]
    values = tuple(int(tok) for tok in tokens if tok)
    if not values:
        raise ValueError(f"no sample counts in {text!r}")
    return values


def _parse_alpha(text: str) -> float | None:
    return None if text.strip().lower() == "opt" else float(text)


def _merge_settings(args: argparse.Namespace) -> dict[str, str]:
    """File settings overlaid with explicit flags, all as strings."""
    settings: dict[str, str] = {}
    if args.config is not None:
        file_values = parse_kv_file(args.config)
        for key, value in file_values.items():
            normalized = key.replace("_", "-")
            if normalized not in _RUN_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            settings[normalized] = value
    for key in _RUN_KEYS:
        flag_value = getattr(args, key.replace("-", "_"))
        if flag_value is not None:
            settings[key] = str(flag_value)
    return settings


def _resolve(args: argparse.Namespace) -> tuple[ExperimentConfig, dict[str, str]]:
    settings = _merge_settings(args)
    try:
        config = ExperimentConfig(
            problem=args.command,
            episode_count=int(settings.get("episodes", _DEFAULT_EPISODES)),
            sample_counts=(
                _parse_samples(settings["samples"])
                if "samples" in settings
                else DEFAULT_SAMPLE_COUNTS
            ),
            epsilon_margin=float(settings.get("epsilon", 0.1)),
            depth=int(settings.get("depth", _DEPTH_DEFAULTS[args.command])),
            tau=float(settings.get("tau", 10.0)),
            uct_c=float(settings.get("uct-c", 1.0)),
            seed=int(settings.get("seed", 0)),
            alpha=_parse_alpha(settings.get("alpha", "opt")),
        )
    except ValueError as exc:
        raise ValueError(f"invalid setting: {exc}") from exc
    config.validate()
    return config, settings


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "plot":
        from .plotting import render_rate_curve

        try:
            curve = parse_rate_csv(args.csv)
            render_rate_curve(curve, args.fig, title=args.title)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return 0

    try:
        config, settings = _resolve(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    curve = run_experiment(config)
    try:
        out_path = settings.get("out")
        if out_path:
            emit_csv(curve, out_path)
        else:
            emit_csv(curve, sys.stdout)
        episodes_path = settings.get("keep-episodes")
        if episodes_path:
            emit_episode_csv(curve, episodes_path)
        fig_path = settings.get("fig")
        if fig_path:
            from .plotting import render_rate_curve

            render_rate_curve(
                curve, fig_path, title=f"{config.problem} (seed {config.seed})"
            )
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entrypoint() -> None:
    sys.exit(main())
