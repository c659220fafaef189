from ..cli.commands import (
    cmd_gain,
    cmd_optimize,
    cmd_poles,
    cmd_scan_rate,
    cmd_spectrum,
    cmd_sweep,
    require_stable,
)
from ..cli.main import build_parser, main
from ..cli.run_config import GridConfig, OutputConfig, RunConfig

__all__ = [
    "GridConfig",
    "OutputConfig",
    "RunConfig",
    "build_parser",
    "cmd_gain",
    "cmd_optimize",
    "cmd_poles",
    "cmd_scan_rate",
    "cmd_spectrum",
    "cmd_sweep",
    "main",
    "require_stable",
]
