from ..sweep.grid import gain_versus_conventional, grid_sweep, stable_gain
from ..sweep.optimize import (
    BaselineResult,
    OptResult,
    network_scan_rate,
    optimize_scan_rate,
    optimize_single_cavity,
)
from ..sweep.runs import enhancement_surface, gw_budget_run

__all__ = [
    "BaselineResult",
    "OptResult",
    "enhancement_surface",
    "gain_versus_conventional",
    "grid_sweep",
    "gw_budget_run",
    "network_scan_rate",
    "optimize_scan_rate",
    "optimize_single_cavity",
    "stable_gain",
]
