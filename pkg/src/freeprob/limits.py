"""Order caps shared by the table builders."""

from __future__ import annotations

import os

__all__ = ["cap", "check_range"]


def cap(default: int) -> int:
    """Order cap; ``FREEPROB_MAX_ORDER`` overrides every default."""
    env = os.environ.get("FREEPROB_MAX_ORDER")
    return int(env) if env else default


def check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not lo <= value <= cap(hi):
        raise ValueError(f"{name} must be in {lo}..{cap(hi)}, got {value}")
