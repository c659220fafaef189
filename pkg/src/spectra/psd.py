import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.model import BathSpec, QuadratureSystem
from src.response.transfer import (
    TransferGrid,
    quadrature_index,
    transfer_matrix_grid,
)
from src.utils.atomic_write import atomic_path
from src.utils.errors import MissingBathError
from src.utils.units import TWO_PI

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def frequency_grid(
    f_min_hz: float, f_max_hz: float, points: int = 1000
) -> np.ndarray:
    """
    Log-spaced angular frequency grid (rad/s) between two frequencies in Hz.
    """
    if not (0 < f_min_hz < f_max_hz):
        raise ValueError(
            f"need 0 < f_min_hz < f_max_hz, got {f_min_hz}, {f_max_hz}"
        )
    if points < 2:
        raise ValueError(f"need at least 2 grid points, got {points}")
    return TWO_PI * np.logspace(np.log10(f_min_hz), np.log10(f_max_hz), points)


def _resolve_baths(
    system: QuadratureSystem, baths: Optional[Mapping[str, BathSpec]]
) -> Dict[str, BathSpec]:
    if baths is None:
        return system.baths()
    missing = [name for name in system.port_names if name not in baths]
    if missing:
        raise MissingBathError(missing[0])
    return {name: baths[name] for name in system.port_names}


def _contributions(
    grid: TransferGrid,
    system: QuadratureSystem,
    baths: Dict[str, BathSpec],
    row: int,
) -> "OrderedDict[str, np.ndarray]":
    result: "OrderedDict[str, np.ndarray]" = OrderedDict()
    for name in system.port_names:
        psd = baths[name].psd()
        total = np.zeros(len(grid))
        for quadrature in system.input_quadratures:
            col = system.input_column(name, quadrature)
            total += np.abs(grid.noise[:, row, col]) ** 2 * psd[quadrature]
        result[name] = total
    return result


@dataclass(frozen=True)
class PsdBreakdown:
    """Per-port contributions to the readout PSD at one frequency."""

    omega: float
    contributions: Dict[str, float]

    @property
    def total(self) -> float:
        return float(sum(self.contributions.values()))


def output_psd(
    system: QuadratureSystem,
    baths: Optional[Mapping[str, BathSpec]],
    omega: float,
    quadrature: Union[str, int] = "phase",
) -> PsdBreakdown:
    """
    Single-sided readout PSD split by input port.

    The contribution of port p is sum_j |T(quadrature, p_j)|^2 S_j(p).
    ``baths=None`` uses the baths declared on the ports.

    Raises:
        MissingBathError: If ``baths`` lacks an input port.
    """
    resolved = _resolve_baths(system, baths)
    grid = transfer_matrix_grid(system, [omega])
    row = system.output_row(quadrature_index(quadrature))
    parts = _contributions(grid, system, resolved, row)
    return PsdBreakdown(
        omega=float(omega),
        contributions={name: float(v[0]) for name, v in parts.items()},
    )


@dataclass(frozen=True)
class SpectrumTable:
    """
    Sampled noise spectra of a detector on a frequency grid.

    ``sources`` holds per-port readout PSDs; ``signal_referred`` is
    ``total / signal_transfer_sq`` with +inf where the signal transfer
    vanishes.
    """

    omegas: np.ndarray
    sources: Dict[str, np.ndarray]
    total: np.ndarray
    signal_transfer_sq: np.ndarray
    signal_referred: np.ndarray
    name: str = ""

    @property
    def freq_hz(self) -> np.ndarray:
        return self.omegas / TWO_PI

    def signal_referred_source(self, name: str) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            referred = self.sources[name] / self.signal_transfer_sq
        return np.where(self.signal_transfer_sq > 0, referred, np.inf)

    def to_frame(self) -> pd.DataFrame:
        columns: "OrderedDict[str, np.ndarray]" = OrderedDict()
        columns["freq_hz"] = self.freq_hz
        columns["total"] = self.total
        columns["signal_transfer_sq"] = self.signal_transfer_sq
        for name, values in self.sources.items():
            columns[f"src:{name}"] = values
        columns["signal_referred"] = self.signal_referred
        return pd.DataFrame(columns)

    def write_csv(self, path) -> None:
        with atomic_path(path) as tmp:
            self.to_frame().to_csv(
                tmp, index=False, float_format=CSV_FLOAT_FORMAT
            )
        logger.info(f"Spectrum '{self.name}' written to {path}")


def signal_referred_psd(
    system: QuadratureSystem,
    baths: Optional[Mapping[str, BathSpec]],
    grid: Sequence[float],
    quadrature: Union[str, int] = "phase",
    name: str = "",
) -> SpectrumTable:
    """
    Readout PSD and signal-referred PSD over a frequency grid.

    Raises:
        ValueError: If the system has no signal injection.
        MissingBathError: If ``baths`` lacks an input port.
    """
    if not system.has_signal:
        raise ValueError("signal-referred PSD needs a signal injection")
    resolved = _resolve_baths(system, baths)
    transfers = transfer_matrix_grid(system, grid)
    row = system.output_row(quadrature_index(quadrature))
    sources = _contributions(transfers, system, resolved, row)
    total = np.sum(list(sources.values()), axis=0)
    signal_sq = np.abs(transfers.signal[:, row]) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        referred = np.where(signal_sq > 0, total / signal_sq, np.inf)

    blind = int(np.sum(signal_sq == 0))
    if blind:
        logger.warning(f"Signal transfer vanishes at {blind} grid point(s)")
    return SpectrumTable(
        omegas=transfers.omegas,
        sources=dict(sources),
        total=total,
        signal_transfer_sq=signal_sq,
        signal_referred=referred,
        name=name,
    )


def signal_referred_function(
    system: QuadratureSystem,
    baths: Optional[Mapping[str, BathSpec]] = None,
    quadrature: Union[str, int] = "phase",
) -> Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]:
    """
    Vectorized omega -> signal-referred PSD, for integration.
    """
    resolved = _resolve_baths(system, baths)

    def spectrum(omega):
        values = signal_referred_psd(
            system, resolved, np.atleast_1d(omega), quadrature
        ).signal_referred
        return float(values[0]) if np.ndim(omega) == 0 else values

    return spectrum
