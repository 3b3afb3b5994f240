"""Run configuration shared by the CLI, checks, and experiments.

All randomness in a run derives from the single seed; nothing reads the
clock or the environment beyond the documented ORDEMBED_SEED fallback, so a
report is a pure function of (what ran, seed, stages).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

ENV_SEED = "ORDEMBED_SEED"

DEFAULT_SEED = 0
DEFAULT_STAGES = 200
DEFAULT_CHECKPOINT_INTERVAL = 10
DEFAULT_WINDOW = 3
DEFAULT_POWER_WEIGHT_CAP = 13
DEFAULT_MAX_FACTS = 200_000


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    stages: int = DEFAULT_STAGES
    checkpoint_interval: int = DEFAULT_CHECKPOINT_INTERVAL
    window: int = DEFAULT_WINDOW
    power_weight_cap: int = DEFAULT_POWER_WEIGHT_CAP
    max_facts: int = DEFAULT_MAX_FACTS

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "stages": self.stages,
            "checkpoint_interval": self.checkpoint_interval,
            "window": self.window,
            "power_weight_cap": self.power_weight_cap,
            "max_facts": self.max_facts,
        }

    def subseed(self, index: int) -> int:
        """Deterministic per-trial seed derived from the run seed."""
        return (self.seed * 1_000_003 + index) & 0x7FFFFFFFFFFFFFFF


def env_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return default
    return int(raw)


def canonical_report_bytes(report: dict) -> bytes:
    """Stable serialization: sorted keys, fixed separators, trailing newline."""
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("ascii")
