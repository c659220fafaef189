import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.model import NetworkSpec, QuadratureSystem, assemble_system

logger = logging.getLogger(__name__)

PT_TOL = 1e-9
# Exhaustive pairing search is skipped beyond this many partner modes.
MAX_PERMUTED = 7

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])
_F = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class PTReport:
    """
    Outcome of the sensor/partner exchange test.

    ``witness`` names the hub and the sensor-to-partner pairing that was
    accepted (or the best one tried), ``residual`` is the largest mismatch
    relative to the largest rate.
    """

    is_pt_symmetric: bool
    witness: Dict[str, object] = field(default_factory=dict)
    ep_indicator: float = 1.0
    residual: float = float("inf")


def ep_indicator(system: QuadratureSystem, block: Optional[str] = "phase") -> float:
    """
    Condition number of the eigenvector matrix of the block drift.

    Grows without bound as eigenvectors coalesce at an exceptional point;
    invariant under a uniform rescaling of all rates.
    """
    if block is not None:
        try:
            system = system.restrict(block)
        except ValueError:
            logger.debug(f"No decoupled {block} block, using the full drift")
    if system.state_dim == 0:
        return 1.0
    _, vectors = np.linalg.eig(system.drift)
    return float(np.linalg.cond(vectors))


def _infer_hub(spec: NetworkSpec, cavity: Sequence[str]) -> Optional[str]:
    squeezers = [t for t in spec.couplings if t.kind == "two-mode-squeeze"]
    if not squeezers:
        try:
            return spec.readout.mode
        except LookupError:
            return None
    common = set(cavity)
    for term in squeezers:
        common &= set(term.modes)
    if not common:
        return None
    signal_modes = {s.mode for s in spec.signals}
    for name in cavity:
        if name not in common:
            continue
        for term in spec.couplings:
            if term.kind == "beam-splitter" and name in term.modes:
                other = term.modes[1] if term.modes[0] == name else term.modes[0]
                if other in signal_modes:
                    return name
    return next(name for name in cavity if name in common)


def _infer_sensors(spec: NetworkSpec, hub: str) -> List[str]:
    edges: Dict[str, set] = {}
    for term in spec.couplings:
        if term.kind in ("beam-splitter", "linear"):
            first, second = term.modes
            edges.setdefault(first, set()).add(second)
            edges.setdefault(second, set()).add(first)
    seen = set()
    queue = deque(s.mode for s in spec.signals if s.mode != hub)
    while queue:
        name = queue.popleft()
        if name in seen or name == hub:
            continue
        seen.add(name)
        queue.extend(edges.get(name, ()))
    return [name for name in spec.mode_names if name in seen]


def _blocks(n_modes: int, matrix: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(n_modes), matrix)


def _residual(
    hamiltonian: np.ndarray,
    free_drift: np.ndarray,
    position: Dict[str, int],
    hub: str,
    pairs: Sequence[Tuple[str, str]],
) -> float:
    n = len(position)
    swapped = {m for pair in pairs for m in pair}

    exchange = np.zeros((2 * n, 2 * n))
    reverse = np.zeros((2 * n, 2 * n))
    for sensor, partner in pairs:
        i, j = position[sensor], position[partner]
        for q in (0, 1):
            exchange[2 * i + q, 2 * j + q] = exchange[2 * j + q, 2 * i + q] = 1.0
        reverse[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = _F
        reverse[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = _F
    for name, i in position.items():
        if name not in swapped:
            exchange[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = _F
            reverse[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = np.eye(2)

    # Coupling part through the hub: H -> -H under a <-> c^dagger with t -> -t.
    hub_rows = np.zeros(2 * n, dtype=bool)
    hub_rows[2 * position[hub] : 2 * position[hub] + 2] = True
    mask = np.logical_xor.outer(hub_rows, hub_rows)
    coupling = np.where(mask, hamiltonian, 0.0)
    mismatch = exchange.T @ coupling @ exchange + coupling

    # Free part of the partners must be the conjugate of the sensors'.
    free = np.where(~hub_rows[:, None] & ~hub_rows[None, :], free_drift, 0.0)
    free_mismatch = reverse @ free @ reverse - free

    return float(max(np.abs(mismatch).max(), np.abs(free_mismatch).max()))


def pt_check(
    spec: NetworkSpec,
    sensors: Optional[Sequence[str]] = None,
    partners: Optional[Sequence[str]] = None,
    hub: Optional[str] = None,
) -> PTReport:
    """
    Test invariance under exchanging each sensor mode with its partner
    (a -> c^dagger, c -> a^dagger) combined with time reversal.

    The hub is the mode shared by every two-mode-squeeze term, sensors are
    the modes reached from the signal injections without crossing the hub,
    and partners are the remaining cavity modes; any of them may be given
    explicitly. Every pairing of sensors with partners is tried.
    """
    system = assemble_system(spec)
    indicator = ep_indicator(system)
    cavity = list(system.cavity_modes)
    position = {name: i for i, name in enumerate(cavity)}

    hub = hub or _infer_hub(spec, cavity)
    if hub is None:
        return PTReport(False, {"reason": "no hub mode"}, indicator)
    sensors = list(sensors) if sensors is not None else _infer_sensors(spec, hub)
    if partners is None:
        partners = [m for m in cavity if m != hub and m not in sensors]
    partners = list(partners)
    if not sensors or len(sensors) != len(partners):
        return PTReport(
            False,
            {"reason": "sensors and partners do not pair", "hub": hub},
            indicator,
        )

    rows = [
        system.state_index(f"{name}_{q}") for name in cavity for q in (1, 2)
    ]
    drift = system.port_free_drift()[np.ix_(rows, rows)]
    hamiltonian = -_blocks(len(cavity), _J) @ drift
    scale = system.rate_scale

    if len(partners) <= MAX_PERMUTED:
        orderings = itertools.permutations(partners)
    else:
        orderings = iter([tuple(partners)])

    best = (float("inf"), tuple(partners))
    for ordering in orderings:
        pairs = list(zip(sensors, ordering))
        residual = _residual(hamiltonian, drift, position, hub, pairs) / scale
        if residual < best[0]:
            best = (residual, ordering)
        if residual <= PT_TOL:
            break

    residual, ordering = best
    witness: Dict[str, object] = {
        "hub": hub,
        "pairs": {s: p for s, p in zip(sensors, ordering)},
    }
    symmetric = residual <= PT_TOL
    logger.debug(
        f"PT check: hub={hub}, pairs={witness['pairs']}, "
        f"residual={residual:.3g}, symmetric={symmetric}"
    )
    return PTReport(symmetric, witness, indicator, residual)
