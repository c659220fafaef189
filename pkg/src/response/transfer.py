import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.model import QuadratureSystem
from src.model.system import BLOCK_QUADRATURE
from src.response.realization import MinimalRealization, minimal_realization
from src.utils.errors import EvaluationAtPoleError

logger = logging.getLogger(__name__)

# Relative distance to a drift pole below which the reduced model is used.
NEAR_POLE = 1e-6
# Relative distance to a visible pole treated as evaluation at the pole.
AT_POLE = 1e-9

Quadrature = Union[str, int]


def quadrature_index(value: Quadrature) -> int:
    return BLOCK_QUADRATURE[value] if isinstance(value, str) else int(value)


@dataclass(frozen=True)
class TransferMatrix:
    """
    Frequency response of a system at one frequency.

    ``noise`` maps input columns to readout rows and ``signal`` maps the
    signal to readout rows; rows and columns follow the system layout.
    """

    omega: float
    noise: np.ndarray
    signal: np.ndarray
    port_names: Tuple[str, ...]
    input_quadratures: Tuple[int, ...] = (0, 1)
    output_quadratures: Tuple[int, ...] = (0, 1)

    def entry(
        self, port: str, out: Quadrature = "phase", inp: Quadrature = "phase"
    ) -> complex:
        row = self.output_quadratures.index(quadrature_index(out))
        position = self.input_quadratures.index(quadrature_index(inp))
        col = self.port_names.index(port) * len(self.input_quadratures)
        return complex(self.noise[row, col + position])

    def port_block(self, port: str) -> np.ndarray:
        width = len(self.input_quadratures)
        col = self.port_names.index(port) * width
        return self.noise[:, col : col + width]

    def signal_entry(self, out: Quadrature = "phase") -> complex:
        row = self.output_quadratures.index(quadrature_index(out))
        return complex(self.signal[row])


@dataclass(frozen=True)
class TransferGrid:
    omegas: np.ndarray
    noise: np.ndarray
    signal: np.ndarray
    port_names: Tuple[str, ...]
    input_quadratures: Tuple[int, ...]
    output_quadratures: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.omegas)

    def at(self, i: int) -> TransferMatrix:
        return TransferMatrix(
            omega=float(self.omegas[i]),
            noise=self.noise[i],
            signal=self.signal[i],
            port_names=self.port_names,
            input_quadratures=self.input_quadratures,
            output_quadratures=self.output_quadratures,
        )


def _solve(a, b, c, d, s, omegas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    rhs = np.hstack([b, s[:, None]]).astype(complex)
    if n == 0:
        noise = np.broadcast_to(d, (len(omegas),) + d.shape).astype(complex)
        return noise, np.zeros((len(omegas), c.shape[0]), dtype=complex)
    resolvent = (-1j * omegas)[:, None, None] * np.eye(n) - a
    x = np.linalg.solve(resolvent, np.broadcast_to(rhs, (len(omegas),) + rhs.shape))
    response = c @ x
    return response[:, :, :-1] + d, response[:, :, -1]


def _near(omegas: np.ndarray, poles: np.ndarray, tol: float) -> np.ndarray:
    if poles.size == 0:
        return np.zeros(len(omegas), dtype=bool)
    distance = np.abs(omegas[:, None] - poles[None, :])
    return np.any(distance <= tol, axis=1)


def _reduced(
    system: QuadratureSystem, omegas: np.ndarray, tol: float
) -> Tuple[np.ndarray, np.ndarray]:
    reduced: MinimalRealization = minimal_realization(system)
    visible = 1j * np.linalg.eigvals(reduced.drift) if reduced.order else None
    if visible is not None:
        for omega in omegas:
            hit = np.abs(omega - visible) <= tol
            if np.any(hit):
                raise EvaluationAtPoleError(float(omega), complex(visible[hit][0]))
    return _solve(
        reduced.drift,
        reduced.input_map,
        reduced.output_map,
        reduced.feedthrough,
        reduced.signal_map,
        omegas,
    )


def transfer_matrix_grid(
    system: QuadratureSystem, omegas: Sequence[float]
) -> TransferGrid:
    """
    Evaluate C(-i omega I - A)^{-1}[B s] + [D 0] on a whole grid at once.

    Points that sit on a hidden pole are evaluated on the minimal
    realization instead.

    Raises:
        EvaluationAtPoleError: If a point coincides with a visible pole.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    scale = system.rate_scale
    poles = 1j * np.linalg.eigvals(system.drift) if system.state_dim else np.zeros(0)
    flagged = _near(omegas, poles, NEAR_POLE * max(scale, 1e-300))

    args = (
        system.drift,
        system.input_map,
        system.output_map,
        system.feedthrough,
        system.signal_map,
    )
    if not np.any(flagged):
        noise, signal = _solve(*args, omegas)
    else:
        noise = np.empty(
            (len(omegas),) + system.feedthrough.shape, dtype=complex
        )
        signal = np.empty((len(omegas), system.output_map.shape[0]), dtype=complex)
        clear = ~flagged
        if np.any(clear):
            noise[clear], signal[clear] = _solve(*args, omegas[clear])
        logger.debug(
            f"{int(flagged.sum())} grid point(s) near a drift pole, "
            "using the minimal realization"
        )
        noise[flagged], signal[flagged] = _reduced(
            system, omegas[flagged], AT_POLE * scale
        )

    return TransferGrid(
        omegas=omegas,
        noise=noise,
        signal=signal,
        port_names=system.port_names,
        input_quadratures=system.input_quadratures,
        output_quadratures=system.output_quadratures,
    )


def transfer_matrix(
    system: QuadratureSystem, omega: float, block: Optional[str] = None
) -> TransferMatrix:
    """
    Noise and signal transfer of ``system`` at angular frequency ``omega``.

    Args:
        system: Assembled quadrature system.
        omega: Finite angular frequency in rad/s.
        block: Optionally restrict to the ``phase`` or ``amplitude`` block.

    Raises:
        ValueError: If ``omega`` is not finite.
        EvaluationAtPoleError: If ``omega`` coincides with a visible pole.
    """
    if not np.isfinite(omega):
        raise ValueError(f"frequency must be finite, got {omega!r}")
    if block is not None:
        system = system.restrict(block)
    return transfer_matrix_grid(system, [omega]).at(0)
