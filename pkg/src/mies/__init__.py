"""Mixed-integer (1+1) evolution strategies with margin, and tools to test their theory."""

from .errors import ArtifactIOError, ConfigError, ContractError, DomainError, NumericalError
from .problems import MixedSolution, ProblemKind, ProblemSpec
from .strategies import (
    NoiseDraw,
    RunTrace,
    StrategyParams,
    StrategyState,
    Variant,
    init_state,
    run,
    step,
    step_lb,
    step_lub,
)

__version__ = "0.1.0"

__all__ = [
    "ArtifactIOError",
    "ConfigError",
    "ContractError",
    "DomainError",
    "MixedSolution",
    "NoiseDraw",
    "NumericalError",
    "ProblemKind",
    "ProblemSpec",
    "RunTrace",
    "StrategyParams",
    "StrategyState",
    "Variant",
    "init_state",
    "run",
    "step",
    "step_lb",
    "step_lub",
]
