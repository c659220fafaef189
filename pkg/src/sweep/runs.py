import itertools
import logging
from typing import Dict, Optional, Sequence

import pandas as pd

from src.detectors import GWParams, build_gw
from src.detectors.gw import GW_TOPOLOGIES
from src.spectra import SpectrumTable, noise_budget
from src.sweep.optimize import optimize_scan_rate
from src.utils.handle_exceptions import CapturedError, handle_exceptions

logger = logging.getLogger(__name__)

SURFACE_COLUMNS = (
    "enhancement",
    "scan_rate",
    "baseline_scan_rate",
    "kappa",
    "gamma_r",
    "converged",
    "classification",
)


def gw_budget_run(
    params: GWParams,
    omegas: Sequence[float],
    radiation_pressure: bool = True,
) -> Dict[str, SpectrumTable]:
    """
    Strain-referred noise budgets of the sWLC, uWLC and conventional
    detectors on one grid, with shared optical and thermal settings.
    """
    tables = {
        topology: noise_budget(
            build_gw(params, topology, radiation_pressure), omegas, name=topology
        )
        for topology in GW_TOPOLOGIES
    }
    logger.info(f"GW budgets computed for {', '.join(tables)}")
    return tables


def enhancement_surface(
    chis: Sequence[float],
    squeeze_rs: Sequence[float],
    topology: str = "swlc",
    workers: Optional[int] = None,
    grid_points: int = 40,
) -> pd.DataFrame:
    """
    Optimized scan-rate enhancement over a (chi, r) grid, one optimizer run
    per point; rows are ordered by chi, then r.
    """
    optimize = handle_exceptions(optimize_scan_rate)
    rows = []
    for chi, squeeze_r in itertools.product(chis, squeeze_rs):
        result = optimize(
            float(chi),
            float(squeeze_r),
            topology,
            workers=workers,
            grid_points=grid_points,
        )
        row = {"chi": float(chi), "squeeze_r": float(squeeze_r)}
        if isinstance(result, CapturedError):
            row.update({column: float("nan") for column in SURFACE_COLUMNS})
            row["error"] = str(result)
        else:
            data = result.to_dict()
            row.update({column: data[column] for column in SURFACE_COLUMNS})
            row["error"] = ""
        rows.append(row)
    return pd.DataFrame(
        rows, columns=["chi", "squeeze_r", *SURFACE_COLUMNS, "error"]
    )
