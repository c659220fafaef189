import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from src.model import NetworkSpec, QuadratureSystem, assemble_system
from src.response.realization import minimal_realization
from src.utils.units import TWO_PI

logger = logging.getLogger(__name__)

MARGINAL_TOL = 1e-9


@dataclass(frozen=True)
class Pole:
    value: complex
    hidden: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "re_hz": self.value.real / TWO_PI,
            "im_hz": self.value.imag / TWO_PI,
            "hidden": self.hidden,
        }


@dataclass(frozen=True)
class PoleSet:
    """
    Poles Omega = i*lambda of a system, each flagged visible or hidden.

    The classification only looks at visible poles: stable when every
    Im(Omega) < 0, marginal when the largest is zero within
    ``tolerance``, unstable otherwise.
    """

    poles: Tuple[Pole, ...]
    classification: str
    tolerance: float = 0.0

    @property
    def visible(self) -> List[complex]:
        return [p.value for p in self.poles if not p.hidden]

    @property
    def hidden(self) -> List[complex]:
        return [p.value for p in self.poles if p.hidden]

    @property
    def max_growth(self) -> float:
        return max((v.imag for v in self.visible), default=float("-inf"))

    def __len__(self) -> int:
        return len(self.poles)

    def grouped(self) -> List[Tuple[complex, int, int]]:
        """
        Cluster coincident poles.

        Returns:
            (value, multiplicity, hidden count) per cluster, ordered by
            imaginary part then real part.
        """
        groups: List[List[Pole]] = []
        for pole in self.poles:
            for group in groups:
                if abs(group[0].value - pole.value) <= max(self.tolerance, 1e-300):
                    group.append(pole)
                    break
            else:
                groups.append([pole])
        result = [
            (
                complex(np.mean([p.value for p in group])),
                len(group),
                sum(p.hidden for p in group),
            )
            for group in groups
        ]
        return sorted(result, key=lambda g: (g[0].imag, g[0].real))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classification": self.classification,
            "poles": [pole.to_dict() for pole in self.poles],
        }


def classify(visible: Sequence[complex], tolerance: float) -> str:
    if not len(visible):
        return "stable"
    growth = max(v.imag for v in visible)
    if growth > tolerance:
        return "unstable"
    if growth >= -tolerance:
        return "marginal"
    return "stable"


def _snap(values: np.ndarray, tolerance: float) -> np.ndarray:
    values = np.array(values, dtype=complex)
    values.real[np.abs(values.real) <= tolerance] = 0.0
    values.imag[np.abs(values.imag) <= tolerance] = 0.0
    return values


def poles(
    system: Union[QuadratureSystem, NetworkSpec], block: Optional[str] = None
) -> PoleSet:
    """
    Pole set of a system, optionally restricted to one quadrature block.

    Visible poles come from the minimal realization of the readout channel;
    the removed drift eigenvalues are reported with ``hidden=True``.
    """
    if isinstance(system, NetworkSpec):
        system = assemble_system(system)
    if block is not None:
        system = system.restrict(block)

    tolerance = MARGINAL_TOL * system.rate_scale
    reduced = minimal_realization(system)
    visible = (
        _snap(1j * np.linalg.eigvals(reduced.drift), tolerance)
        if reduced.order
        else np.zeros(0, dtype=complex)
    )
    hidden = _snap(1j * reduced.hidden, tolerance)

    ordered = sorted(visible, key=lambda v: (v.imag, v.real))
    items = [Pole(complex(v), False) for v in ordered]
    items += [Pole(complex(v), True) for v in sorted(hidden, key=lambda v: (v.imag, v.real))]
    result = PoleSet(
        poles=tuple(items),
        classification=classify(visible, tolerance),
        tolerance=tolerance,
    )
    logger.debug(
        f"Poles: {len(visible)} visible, {len(hidden)} hidden, "
        f"{result.classification}"
    )
    return result


def _match(previous: PoleSet, current: PoleSet) -> PoleSet:
    """Reorder ``current`` so each pole follows its nearest predecessor."""
    ordered: List[Pole] = []
    for hidden in (False, True):
        before = [p.value for p in previous.poles if p.hidden == hidden]
        after = [p for p in current.poles if p.hidden == hidden]
        if not before or len(before) != len(after):
            ordered += after
            continue
        cost = np.abs(np.subtract.outer(before, [p.value for p in after]))
        rows, cols = linear_sum_assignment(cost)
        ordered += [after[c] for _, c in sorted(zip(rows, cols))]
    return PoleSet(tuple(ordered), current.classification, current.tolerance)


def _min_separation(pole_set: PoleSet) -> float:
    values = np.array([p.value for p in pole_set.poles])
    if len(values) < 2:
        return float("inf")
    distance = np.abs(values[:, None] - values[None, :])
    distance[np.eye(len(values), dtype=bool)] = np.inf
    positive = distance[distance > pole_set.tolerance]
    return float(positive.min()) if positive.size else float("inf")


def pole_trajectory(
    family: Callable[[float], Union[NetworkSpec, QuadratureSystem]],
    sweep: Sequence[float],
    block: Optional[str] = None,
) -> List[PoleSet]:
    """
    Pole sets along a monotone parameter sweep, matched point to point.

    Consecutive sets are paired by a minimum-cost assignment; a warning is
    logged when a pole moves by more than half the smallest pole spacing
    of the previous set.

    Raises:
        ValueError: If ``sweep`` is empty or not monotone.
    """
    values = np.asarray(sweep, dtype=float)
    if values.size == 0:
        raise ValueError("sweep must not be empty")
    steps = np.diff(values)
    if not (np.all(steps >= 0) or np.all(steps <= 0)):
        raise ValueError("sweep must be monotone")

    trajectory: List[PoleSet] = []
    for value in values:
        current = poles(family(float(value)), block=block)
        if trajectory:
            previous = trajectory[-1]
            current = _match(previous, current)
            if len(previous) == len(current):
                moves = [
                    abs(a.value - b.value)
                    for a, b in zip(previous.poles, current.poles)
                ]
                limit = 0.5 * _min_separation(previous)
                if max(moves, default=0.0) > limit:
                    logger.warning(
                        f"Pole moved by {max(moves):.4g} rad/s at sweep value "
                        f"{value:.6g}, more than half the pole spacing "
                        f"({limit:.4g}); refine the sweep"
                    )
        trajectory.append(current)
    logger.info(f"Pole trajectory computed over {len(trajectory)} points")
    return trajectory


def trajectory_to_records(
    sweep: Sequence[float], trajectory: Sequence[PoleSet], key: str = "chi_hz"
) -> List[Dict[str, Any]]:
    """
    Serialize a trajectory; sweep values are taken as rad/s and written in Hz.
    """
    records = []
    for value, pole_set in zip(sweep, trajectory):
        record: Dict[str, Any] = {key: float(value) / TWO_PI}
        record.update(pole_set.to_dict())
        records.append(record)
    return records
