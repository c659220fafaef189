"""
Closed-form spectra used as independent references for the assembled
networks.
"""

import logging
from typing import Tuple, Union

import numpy as np
from scipy import constants

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def thermal_psd(
    temperature: float, omega_m: float, vacuum_floor: bool = False
) -> float:
    """
    Single-sided PSD 2 k_B T / (hbar omega_m) of a high-temperature bath,
    plus 1 when ``vacuum_floor`` is set.
    """
    if omega_m <= 0:
        raise ValueError(f"omega_m must be positive, got {omega_m}")
    value = 2.0 * constants.k * temperature / (constants.hbar * omega_m)
    return value + 1.0 if vacuum_floor else value


def loss_referred_noise(
    gamma_a: float,
    gamma_b: float,
    gamma_c: float,
    s_a: float,
    s_b: float,
    s_c: float,
    kappa: float,
    chi: float,
    alpha: float,
    omega: ArrayLike,
) -> ArrayLike:
    """
    Small-loss estimate of the extra signal-referred noise of the sWLC:

        [2 g_a S_a + 2 g_b (omega/kappa)^2 S_b + 2 g_c (chi/kappa)^2 S_c]
        / alpha^2

    Raises:
        ValueError: If ``kappa`` is zero or a loss rate is negative.
    """
    if kappa == 0:
        raise ValueError("loss-referred noise is undefined for kappa = 0")
    if min(gamma_a, gamma_b, gamma_c) < 0:
        raise ValueError("loss rates must be non-negative")
    omega = np.asarray(omega, dtype=float)
    total = (
        2.0 * gamma_a * s_a
        + 2.0 * gamma_b * (omega / kappa) ** 2 * s_b
        + 2.0 * gamma_c * (chi / kappa) ** 2 * s_c
    ) / alpha**2
    return float(total) if total.ndim == 0 else total


def uwlc_closed_form(
    gamma_r: float,
    gamma_m: float,
    kappa: float,
    chi: float,
    alpha: float,
    temperature: float,
    quality: float,
    omega: ArrayLike,
) -> Tuple[ArrayLike, ArrayLike]:
    """
    Shot and thermal signal-referred noise of the unstable white-light
    cavity read out on ``a``.

    Args:
        gamma_r: Readout rate of ``a``.
        gamma_m: Bath coupling of ``c``; zero switches the thermal term off.
        kappa: a-b beam-splitter rate.
        chi: b-c two-mode-squeeze rate.
        alpha: Signal coupling.
        temperature: Bath temperature in K.
        quality: Q = omega_m / gamma_m of the ``c`` oscillator.
        omega: Angular frequency (scalar or array).

    Returns:
        (S_shot, S_thermal) with
        S_shot = [g_R^2 + omega^2 R^2] / (2 g_R alpha^2),
        R = (omega^2 + chi^2 - kappa^2) / (omega^2 + chi^2), and
        S_thermal = 4 kappa^2 chi^2 k_B T / (hbar Q (chi^2 + omega^2)^2 alpha^2).
    """
    if min(gamma_r, gamma_m, kappa, chi) < 0:
        raise ValueError("rates must be non-negative")
    omega = np.asarray(omega, dtype=float)
    w2 = omega**2
    # omega = chi = 0 is signal blind for kappa > 0: the shot term is +inf.
    at_origin = w2 + chi**2 == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (w2 + chi**2 - kappa**2) / (w2 + chi**2)
        response = np.where(at_origin, np.inf if kappa > 0 else 0.0, w2 * ratio**2)
        shot = (gamma_r**2 + response) / (2.0 * gamma_r * alpha**2)
        if gamma_m == 0 or temperature == 0 or chi == 0:
            thermal = np.zeros_like(w2)
        else:
            thermal = (
                4.0
                * kappa**2
                * chi**2
                * constants.k
                * temperature
                / (constants.hbar * quality * (chi**2 + w2) ** 2 * alpha**2)
            )
    if omega.ndim == 0:
        return float(shot), float(thermal)
    return shot, thermal
