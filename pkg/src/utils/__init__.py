from ..utils.atomic_write import atomic_path, dumps_json, write_json
from ..utils.errors import (
    ConfigError,
    DivergentIntegralError,
    EvaluationAtPoleError,
    InfeasibleSearchError,
    MissingBathError,
    SimulationError,
    SpecValidationError,
    UnstableSystemError,
)
from ..utils.handle_exceptions import CapturedError, handle_exceptions
from ..utils.load_config import Config
from ..utils.units import TWO_PI, hz_to_rad, rad_to_hz

__all__ = [
    "CapturedError",
    "Config",
    "ConfigError",
    "DivergentIntegralError",
    "EvaluationAtPoleError",
    "InfeasibleSearchError",
    "MissingBathError",
    "SimulationError",
    "SpecValidationError",
    "TWO_PI",
    "UnstableSystemError",
    "atomic_path",
    "dumps_json",
    "handle_exceptions",
    "hz_to_rad",
    "rad_to_hz",
    "write_json",
]
