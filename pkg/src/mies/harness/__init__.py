"""Configuration, seeded ensembles, figure presets and file output."""

from .config import ExperimentConfig, load_config, parse_config
from .figures import FigureResult, preset_cells, reproduce_figure
from .runner import EnsembleResult, RunArtifacts, run_experiment, verify_trace

__all__ = [
    "EnsembleResult",
    "ExperimentConfig",
    "FigureResult",
    "RunArtifacts",
    "load_config",
    "parse_config",
    "preset_cells",
    "reproduce_figure",
    "run_experiment",
    "verify_trace",
]
