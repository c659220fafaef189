import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from src.model.network import BathSpec

logger = logging.getLogger(__name__)

BLOCK_QUADRATURE = {"amplitude": 0, "phase": 1}


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class QuadratureSystem:
    """
    Real state-space model over the quadrature basis.

    ``drift`` is A, ``input_map`` is B with one column per (port, quadrature),
    ``output_map`` and ``feedthrough`` are C and D for the readout port and
    ``signal_map`` is s. Rows of C and D follow ``output_quadratures``;
    input columns are ordered port-major over ``input_quadratures``.
    """

    state_labels: Tuple[str, ...]
    drift: np.ndarray
    input_map: np.ndarray
    output_map: np.ndarray
    feedthrough: np.ndarray
    signal_map: np.ndarray
    port_names: Tuple[str, ...]
    port_baths: Tuple[BathSpec, ...]
    port_decay: np.ndarray
    readout_index: int
    rate_scale: float = 1.0
    input_quadratures: Tuple[int, ...] = (0, 1)
    output_quadratures: Tuple[int, ...] = (0, 1)
    signal_name: Optional[str] = None
    cavity_modes: Tuple[str, ...] = ()

    def __post_init__(self):
        for attr in (
            "drift",
            "input_map",
            "output_map",
            "feedthrough",
            "signal_map",
            "port_decay",
        ):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))

    @property
    def state_dim(self) -> int:
        return self.drift.shape[0]

    @property
    def port_count(self) -> int:
        return len(self.port_names)

    @property
    def has_signal(self) -> bool:
        return bool(np.any(self.signal_map != 0.0))

    def input_column(self, port: str, quadrature: int) -> int:
        """Column of ``input_map`` fed by ``port`` on ``quadrature``."""
        index = self.port_names.index(port)
        position = self.input_quadratures.index(quadrature)
        return index * len(self.input_quadratures) + position

    def output_row(self, quadrature: int) -> int:
        return self.output_quadratures.index(quadrature)

    def state_index(self, label: str) -> int:
        return self.state_labels.index(label)

    def baths(self) -> Dict[str, BathSpec]:
        return dict(zip(self.port_names, self.port_baths))

    def port_free_drift(self) -> np.ndarray:
        """Drift with every port decay contribution removed."""
        return self.drift + self.port_decay

    def restrict(self, block: str) -> "QuadratureSystem":
        """
        Return the decoupled ``phase`` or ``amplitude`` sub-system.

        Raises:
            ValueError: If the block couples to the other quadratures, which
                is always the case with mechanical states.
        """
        if block not in BLOCK_QUADRATURE:
            raise ValueError(f"unknown quadrature block '{block}'")
        quadrature = BLOCK_QUADRATURE[block]
        if quadrature not in self.output_quadratures:
            raise ValueError(f"system has no {block} readout")

        suffix = f"_{quadrature + 1}"
        keep = [i for i, lab in enumerate(self.state_labels) if lab.endswith(suffix)]
        rest = [i for i in range(self.state_dim) if i not in keep]
        if rest and (
            np.any(self.drift[np.ix_(keep, rest)] != 0.0)
            or np.any(self.drift[np.ix_(rest, keep)] != 0.0)
        ):
            raise ValueError(f"{block} block couples to the other quadratures")

        cols = [
            self.input_column(port, quadrature) for port in self.port_names
        ]
        row = self.output_row(quadrature)
        return QuadratureSystem(
            state_labels=tuple(self.state_labels[i] for i in keep),
            drift=self.drift[np.ix_(keep, keep)],
            input_map=self.input_map[np.ix_(keep, cols)],
            output_map=self.output_map[np.ix_([row], keep)],
            feedthrough=self.feedthrough[np.ix_([row], cols)],
            signal_map=self.signal_map[keep],
            port_names=self.port_names,
            port_baths=self.port_baths,
            port_decay=self.port_decay[np.ix_(keep, keep)],
            readout_index=self.readout_index,
            rate_scale=self.rate_scale,
            input_quadratures=(quadrature,),
            output_quadratures=(quadrature,),
            signal_name=self.signal_name,
            cavity_modes=self.cavity_modes,
        )


def state_dim(system: QuadratureSystem) -> int:
    return system.state_dim


def port_count(system: QuadratureSystem) -> int:
    return system.port_count
