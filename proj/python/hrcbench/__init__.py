"""Python access to the hrcbench runner and its scoring helpers."""

from __future__ import annotations

import json
import os
from typing import Any, Mapping

from . import _hrcbench as _core
from ._hrcbench import (
    CacheMissError,
    GatewayError,
    HrcError,
    LoadError,
    NotFoundError,
    ValidationError,
    bin_half,
    hour_f1,
    l1_between,
    majority_vote,
    pearson,
    score_big5_test,
    setting_days,
)

__all__ = [
    "CacheMissError",
    "GatewayError",
    "HrcError",
    "LoadError",
    "NotFoundError",
    "ValidationError",
    "bin_half",
    "default_config",
    "hour_f1",
    "l1_between",
    "majority_vote",
    "pearson",
    "replay",
    "report",
    "rescore",
    "run",
    "schedule",
    "score_big5_test",
    "setting_days",
]


def default_config() -> dict[str, Any]:
    """The run configuration used when no field is overridden."""
    return json.loads(_core.default_config())


def run(config: Mapping[str, Any], out_dir: str | os.PathLike[str]) -> dict[str, Any]:
    """Runs every scheduled day and returns the metrics summary."""
    return json.loads(_core.run(json.dumps(dict(config)), os.fspath(out_dir)))


def replay(src: str | os.PathLike[str], dst: str | os.PathLike[str]) -> dict[str, Any]:
    """Re-runs a recorded run directory strictly from its cache."""
    return json.loads(_core.replay(os.fspath(src), os.fspath(dst)))


def rescore(run_dir: str | os.PathLike[str]) -> dict[str, Any]:
    return json.loads(_core.rescore(os.fspath(run_dir)))


def report(run_dir: str | os.PathLike[str]) -> str:
    return _core.report(os.fspath(run_dir))


def schedule(setting: int, scenes: list[str], personas: list[str]) -> list[dict[str, Any]]:
    return json.loads(_core.schedule(setting, scenes, personas))
