import shutil
import subprocess

import pytest

from mcbounds.cli import build_parser, main
from mcbounds.harness import CSV_HEADER, EPISODE_CSV_HEADER, parse_episode_csv, parse_rate_csv

FAST = ["--episodes", "2", "--samples", "10,20", "--alpha", "0.05", "--seed", "3"]


def run_to_file(tmp_path, extra=(), name="out.csv"):
    out = tmp_path / name
    code = main(["bandit", *FAST, "--out", str(out), *extra])
    return code, out


# ------------------------------------------------------------------- runs


def test_run_writes_csv(tmp_path):
    code, out = run_to_file(tmp_path)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 2 * 2  # two sample counts, two metrics


def test_run_writes_to_stdout(capsys):
    assert main(["bandit", "--episodes", "1", "--samples", "10",
                 "--alpha", "0.05"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith(CSV_HEADER + "\n")


def test_run_optimized_alpha(tmp_path):
    out = tmp_path / "opt.csv"
    code = main(["bandit", "--episodes", "1", "--samples", "10",
                 "--alpha", "opt", "--out", str(out)])
    assert code == 0
    assert parse_rate_csv(out).rows


def test_gridworld_subcommand(tmp_path):
    out = tmp_path / "grid.csv"
    code = main(["gridworld-mc", "--episodes", "1", "--samples", "10",
                 "--depth", "3", "--alpha", "0.05", "--out", str(out)])
    assert code == 0
    rows = parse_rate_csv(out).rows
    assert {row.metric for row in rows} == {"value_error", "action_error"}


def test_run_byte_identical(tmp_path):
    _, first = run_to_file(tmp_path, name="a.csv")
    _, second = run_to_file(tmp_path, name="b.csv")
    assert first.read_bytes() == second.read_bytes()


def test_keep_episodes(tmp_path):
    episodes_path = tmp_path / "episodes.csv"
    code, _ = run_to_file(tmp_path, extra=["--keep-episodes", str(episodes_path)])
    assert code == 0
    text = episodes_path.read_text()
    assert text.startswith(EPISODE_CSV_HEADER + "\n")
    assert len(parse_episode_csv(episodes_path)) == 2 * 2 * 2


# ------------------------------------------------------------------ config


def test_config_file_supplies_settings(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("episodes = 4\nsamples = 10\nseed = 5\nalpha = 0.05\n")
    out = tmp_path / "out.csv"
    assert main(["bandit", "--config", str(cfg), "--out", str(out)]) == 0
    rows = parse_rate_csv(out).rows
    assert len(rows) == 2
    assert all(row.episodes == 4 and row.n == 10 for row in rows)


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("episodes = 4\nsamples = 10\nalpha = 0.05\n")
    out = tmp_path / "out.csv"
    assert main(["bandit", "--config", str(cfg), "--episodes", "2",
                 "--out", str(out)]) == 0
    assert all(row.episodes == 2 for row in parse_rate_csv(out).rows)


def test_config_file_accepts_underscored_keys(tmp_path):
    episodes_path = tmp_path / "eps.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "episodes = 1\nsamples = 10\nalpha = 0.05\n"
        f"keep_episodes = {episodes_path}\n"
    )
    out = tmp_path / "out.csv"
    assert main(["bandit", "--config", str(cfg), "--out", str(out)]) == 0
    assert episodes_path.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["bandit", "--samples", "abc"],
        ["bandit", "--alpha", "1.5", "--episodes", "1", "--samples", "10"],
        ["bandit", "--alpha", "zero"],
        ["bandit", "--episodes", "0"],
        ["bandit", "--samples", ""],
    ],
)
def test_invalid_settings_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_config_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("episoeds = 2\n")
    assert main(["bandit", "--config", str(cfg)]) == 2
    assert "episoeds" in capsys.readouterr().err


def test_missing_config_file_exits_2(tmp_path):
    assert main(["bandit", "--config", str(tmp_path / "nope.cfg")]) == 2


# ----------------------------------------------------------------- figures


def test_run_renders_figure(tmp_path):
    fig = tmp_path / "curve.png"
    code, _ = run_to_file(tmp_path, extra=["--fig", str(fig)])
    assert code == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_plot_subcommand(tmp_path):
    _, out = run_to_file(tmp_path)
    fig = tmp_path / "replot.png"
    assert main(["plot", str(out), "--fig", str(fig), "--title", "demo"]) == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_plot_rejects_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,curve\n")
    assert main(["plot", str(bad), "--fig", str(tmp_path / "x.png")]) == 1
    assert "error:" in capsys.readouterr().err


def test_plot_missing_csv(tmp_path):
    assert main(["plot", str(tmp_path / "gone.csv"),
                 "--fig", str(tmp_path / "x.png")]) == 1


# ------------------------------------------------------------------ parser


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_console_script_installed(tmp_path):
    exe = shutil.which("mcbounds")
    assert exe, "console script not on PATH"
    out = tmp_path / "cli.csv"
    proc = subprocess.run(
        [exe, "bandit", "--episodes", "1", "--samples", "10",
         "--alpha", "0.05", "--out", str(out)],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith(CSV_HEADER)
