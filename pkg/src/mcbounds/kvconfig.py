"""Tiny plain-text key=value configuration parser shared by env and CLI."""

from __future__ import annotations

from pathlib import Path

__all__ = ["parse_kv_file", "parse_kv_lines"]


def parse_kv_lines(lines) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"line {lineno}: empty key in {raw!r}")
        out[key] = value.strip()
    return out


def parse_kv_file(path) -> dict[str, str]:
    return parse_kv_lines(Path(path).read_text().splitlines())
