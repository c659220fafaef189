import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from src.response.transfer import TransferMatrix
from src.utils.errors import EvaluationAtPoleError

logger = logging.getLogger(__name__)

# Reciprocal condition number below which the sensor resolvent is singular.
SINGULAR_RCOND = 1e-13


def _resolvent(sensor_matrix: np.ndarray, omega: float) -> np.ndarray:
    m = np.atleast_2d(np.asarray(sensor_matrix, dtype=complex))
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"sensor matrix must be square, got {m.shape}")
    resolvent = -1j * omega * np.eye(m.shape[0]) - m
    if 1.0 / np.linalg.cond(resolvent) < SINGULAR_RCOND:
        raise EvaluationAtPoleError(omega)
    return np.linalg.inv(resolvent)


def delta_detuning(
    sensor_matrix: np.ndarray,
    beta: Sequence[float],
    kappa: float,
    chi: float,
    omega: float,
) -> complex:
    """
    Residual detuning Delta = (chi^2 - kappa^2) beta^T G beta of the hub,
    with G = (-i omega I - M)^{-1}.

    Raises:
        EvaluationAtPoleError: If the sensor resolvent is singular.
    """
    g = _resolvent(sensor_matrix, omega)
    b = np.asarray(beta, dtype=float)
    return complex((chi**2 - kappa**2) * (b @ g @ b))


def multimode_readout(
    sensor_matrix: np.ndarray,
    beta: Sequence[float],
    alpha: Sequence[complex],
    kappa: float,
    chi: float,
    gamma_r: float,
    omega: float,
) -> Tuple[complex, complex]:
    """
    Complex-amplitude readout coefficients of the multi-mode network.

    Returns:
        (noise, signal) with
        noise = (omega - i gamma_r - i Delta) / (omega + i gamma_r - i Delta)
        signal = -i sqrt(2 gamma_r) kappa (beta^T G alpha)
                 / (-i omega + gamma_r - Delta).
    """
    g = _resolvent(sensor_matrix, omega)
    b = np.asarray(beta, dtype=float)
    a = np.asarray(alpha, dtype=complex)
    delta = (chi**2 - kappa**2) * (b @ g @ b)
    noise = (omega - 1j * gamma_r - 1j * delta) / (
        omega + 1j * gamma_r - 1j * delta
    )
    signal = (
        -1j
        * np.sqrt(2.0 * gamma_r)
        * kappa
        * (b @ g @ a)
        / (-1j * omega + gamma_r - delta)
    )
    return complex(noise), complex(signal)


def complex_amplitude_transfer(
    tm: TransferMatrix, port: Optional[str] = None
) -> Tuple[complex, complex]:
    """
    Convert quadrature transfers of a phase-insensitive channel to
    complex-amplitude coefficients.

    The 2x2 block of ``port`` gives T = (T11 + T22 + i(T21 - T12)) / 2 and
    the signal column gives (T_s1 + i T_s2) / sqrt(2).
    """
    if tm.output_quadratures != (0, 1) or tm.input_quadratures != (0, 1):
        raise ValueError("complex-amplitude transfer needs both quadratures")
    port = port or tm.port_names[0]
    block = tm.port_block(port)
    noise = 0.5 * (block[0, 0] + block[1, 1] + 1j * (block[1, 0] - block[0, 1]))
    signal = (tm.signal[0] + 1j * tm.signal[1]) / np.sqrt(2.0)
    return complex(noise), complex(signal)
