import os
from dataclasses import dataclass, field
from typing import Dict

from .log_config import load_settings, setup_logging

logger = setup_logging()

# Report rendering
REPORT_FORMATS = ('text', 'tagged')


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer value {raw!r} for {name}")
        return default


@dataclass
class EvalConfig:
    """Observation defaults shared by eval, bisim and the realizability checks."""

    depth: int = 16
    budget: int = 10_000
    minimums: Dict[str, int] = field(
        default_factory=lambda: {'depth': 0, 'budget': 1}
    )

    def __post_init__(self):
        # Out-of-range values fall back to the documented defaults
        if self.depth < self.minimums['depth']:
            logger.warning(f"Overriding negative observation depth {self.depth}")
            self.depth = 16
        if self.budget < self.minimums['budget']:
            logger.warning(f"Overriding non-positive step budget {self.budget}")
            self.budget = 10_000


@dataclass
class RoundtripConfig:
    """Settings for the compile/prove/extract acceptance pipeline."""

    depth: int = 64
    inputs: int = 10
    budget: int = 100_000
    seed: int = 20100401

    def __post_init__(self):
        if self.depth < 0:
            logger.warning(f"Overriding negative roundtrip depth {self.depth}")
            self.depth = 64
        if self.inputs < 1:
            logger.warning(f"Overriding roundtrip input count {self.inputs}")
            self.inputs = 10
        if self.budget < 1:
            logger.warning(f"Overriding non-positive roundtrip budget {self.budget}")
            self.budget = 100_000


@dataclass
class KernelConfig:
    """Limits for the proof kernel."""

    normalize_step_limit: int = 10_000

    def __post_init__(self):
        if self.normalize_step_limit < 1:
            logger.warning(
                f"Overriding non-positive normalization limit {self.normalize_step_limit}"
            )
            self.normalize_step_limit = 10_000


class Config:
    """Central configuration manager that loads and provides access to all workbench settings."""

    def __init__(self):
        load_settings()

        self.eval = EvalConfig(
            depth=_int_from_env('CDS_DEFAULT_DEPTH', 16),
            budget=_int_from_env('CDS_DEFAULT_BUDGET', 10_000),
        )

        self.roundtrip = RoundtripConfig(
            depth=_int_from_env('CDS_ROUNDTRIP_DEPTH', 64),
            inputs=_int_from_env('CDS_ROUNDTRIP_INPUTS', 10),
            budget=_int_from_env('CDS_ROUNDTRIP_BUDGET', 100_000),
            seed=_int_from_env('CDS_RANDOM_SEED', 20100401),
        )

        self.kernel = KernelConfig(
            normalize_step_limit=_int_from_env('CDS_NORMALIZE_STEP_LIMIT', 10_000),
        )


# Global config instance
config = Config()
