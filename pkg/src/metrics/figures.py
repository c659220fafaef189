import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Union

from scipy import constants

from src.metrics.integrals import (
    FigureOfMerit,
    integrated_inverse_psd,
    resonances_of,
    slowest_rate,
)
from src.model import BathSpec, QuadratureSystem
from src.spectra.psd import signal_referred_function
from src.utils.errors import DivergentIntegralError, UnstableSystemError

logger = logging.getLogger(__name__)

# Relative mismatch from chi^2 = kappa^2 - gamma_R^2 tolerated by the
# loss budget before it warns.
BASELINE_TOL = 1e-6
# Relative slack on lhs <= rhs of the loss budget.
BUDGET_RTOL = 1e-12

Integrable = Union[FigureOfMerit, Callable[[float], float]]


def _integral(item: Integrable, power: int, scale: float) -> float:
    if isinstance(item, FigureOfMerit):
        return item.value
    return integrated_inverse_psd(item, power=power, scale=scale).value


def gain_lambda(
    amplified: Integrable, conventional: Integrable, scale: float = 1.0
) -> float:
    """
    Sensitivity gain: ratio of the integrated inverse strain PSDs.

    Either argument may be a precomputed FigureOfMerit or a spectrum
    callable, which is integrated with power 1.

    Raises:
        DivergentIntegralError: If either integral diverges.
    """
    gain = _integral(amplified, 1, scale) / _integral(conventional, 1, scale)
    logger.debug(f"Sensitivity gain {gain:.8g}")
    return gain


def coherent_energy_variance(alpha: float) -> float:
    """
    Normalized energy variance at which the lossless conventional detector
    with signal coupling ``alpha`` saturates the energetic bound.
    """
    return 2.0 * alpha**2


def eql_ratio(integral: float, energy_variance: float) -> float:
    """
    Integrated sensitivity over the energetic bound energy_variance / 4.

    Raises:
        ValueError: If an input is not positive.
    """
    if integral <= 0 or energy_variance <= 0:
        raise ValueError("integral and energy variance must be positive")
    return integral / (energy_variance / 4.0)


def lambda_max_thermal(quality: float, gamma_r: float, temperature: float) -> float:
    """Thermal ceiling hbar gamma_R Q_m / (k_B T) on the sensitivity gain."""
    if min(quality, gamma_r, temperature) <= 0:
        raise ValueError("quality, gamma_r and temperature must be positive")
    return constants.hbar * gamma_r * quality / (constants.k * temperature)


@dataclass(frozen=True)
class LossBudget:
    ok: bool
    ratio: float
    lhs: float
    rhs: float

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "ratio": self.ratio, "lhs": self.lhs, "rhs": self.rhs}


def loss_budget_check(
    gamma_a: float,
    gamma_b: float,
    gamma_c: float,
    s_a: float,
    s_b: float,
    s_c: float,
    kappa: float,
    chi: float,
    gamma_r: float,
) -> LossBudget:
    """
    Check that losses stay below the quantum noise of the baseline sWLC:

        g_a S_a + (g_R / kappa)^2 g_b S_b + (chi / kappa)^2 g_c S_c
            <= g_R^3 / (4 kappa^2)

    The condition is derived on chi^2 = kappa^2 - gamma_R^2; other
    operating points are evaluated but logged with a warning.
    """
    if kappa <= 0 or gamma_r <= 0:
        raise ValueError("kappa and gamma_r must be positive")
    off_baseline = abs(chi**2 - (kappa**2 - gamma_r**2))
    if off_baseline > BASELINE_TOL * kappa**2:
        logger.warning(
            f"Loss budget evaluated off the chi^2 = kappa^2 - gamma_R^2 "
            f"baseline (kappa={kappa:.6g}, chi={chi:.6g}, gamma_R={gamma_r:.6g})"
        )
    lhs = (
        gamma_a * s_a
        + (gamma_r / kappa) ** 2 * gamma_b * s_b
        + (chi / kappa) ** 2 * gamma_c * s_c
    )
    rhs = gamma_r**3 / (4.0 * kappa**2)
    ratio = lhs / rhs
    ok = bool(lhs <= rhs * (1.0 + BUDGET_RTOL))
    return LossBudget(ok=ok, ratio=ratio, lhs=lhs, rhs=rhs)


def _system_integral(
    system: QuadratureSystem,
    baths: Optional[Mapping[str, BathSpec]],
    power: int,
) -> FigureOfMerit:
    if system.state_dim and system.input_quadratures == (0, 1):
        try:
            system = system.restrict("phase")
        except ValueError:
            logger.debug("Quadratures are coupled, integrating the full system")
    spectrum = signal_referred_function(system, baths)
    return integrated_inverse_psd(
        spectrum,
        power=power,
        scale=system.rate_scale,
        resonances=resonances_of(system.drift),
        low_rate=slowest_rate(system.drift),
    )


def sensitivity_integral(
    system: QuadratureSystem, baths: Optional[Mapping[str, BathSpec]] = None
) -> FigureOfMerit:
    """Integrated inverse signal-referred PSD (power 1)."""
    return _system_integral(system, baths, 1)


def scan_rate(
    system: QuadratureSystem, baths: Optional[Mapping[str, BathSpec]] = None
) -> FigureOfMerit:
    """Scan-rate figure of merit: integral of S^-2 over omega / (2 pi)."""
    return _system_integral(system, baths, 2)


def single_cavity_scan_rate(
    gamma_r: float, gamma_l: float, alpha: float = 1.0, squeeze_r: float = 0.0
) -> float:
    """
    Closed-form scan rate of a lossy single cavity with squeezed readout.

    With s = e^{-2r} and B = s (g_L - g_R)^2 + 4 g_R g_L the rate is
    g_R^2 alpha^4 / (2 sqrt(s) B^{3/2}), which is
    g_R^2 alpha^4 / (2 (g_R + g_L)^3) for vacuum input.
    """
    if gamma_r <= 0 or gamma_l < 0:
        raise ValueError("need gamma_r > 0 and gamma_l >= 0")
    s = math.exp(-2.0 * squeeze_r)
    b = s * (gamma_l - gamma_r) ** 2 + 4.0 * gamma_r * gamma_l
    return gamma_r**2 * alpha**4 / (2.0 * math.sqrt(s) * b**1.5)


def swlc_axion_scan_rate(
    kappa: float,
    gamma_r: float,
    chi: float,
    gamma_l: float = 1.0,
    alpha: float = 1.0,
    squeeze_r: float = 0.0,
) -> float:
    """
    Closed-form scan rate of the sWLC haloscope: readout on b, the same
    vacuum loss gamma_l on a, b and c, and squeezed readout input.

    The signal-referred noise is q(w) / (2 g_R kappa^2 alpha^2) with the even
    quartic q = s w^4 + b w^2 + c, where s = e^{-2r}, K = kappa^2 - chi^2,
    A = K + g_L (g_L - g_R) and

        b = s ((g_R - 2 g_L)^2 - 2 A) + 4 g_R g_L
        c = s A^2 + 4 g_R g_L (kappa^2 + chi^2 + g_L^2)

    so the rate is g_R^2 kappa^4 alpha^4 (b + 3m) / (2 c^{3/2} (b + 2m)^{3/2})
    with m = sqrt(s c).

    Raises:
        UnstableSystemError: If K + g_L (g_L + g_R) < 0.
        DivergentIntegralError: For the lossless network at threshold.
        ValueError: On negative rates or a non-positive ``gamma_r``.
    """
    if gamma_r <= 0 or min(kappa, chi, gamma_l) < 0:
        raise ValueError("need gamma_r > 0 and non-negative kappa, chi, gamma_l")
    k = kappa**2 - chi**2
    stiffness = k + gamma_l * (gamma_l + gamma_r)
    if stiffness < 0:
        root = (-gamma_r + math.sqrt(gamma_r**2 - 4.0 * k)) / 2.0
        raise UnstableSystemError("unstable", root - gamma_l)
    s = math.exp(-2.0 * squeeze_r)
    a = k + gamma_l * (gamma_l - gamma_r)
    b = s * ((gamma_r - 2.0 * gamma_l) ** 2 - 2.0 * a) + 4.0 * gamma_r * gamma_l
    c = s * a**2 + 4.0 * gamma_r * gamma_l * (kappa**2 + chi**2 + gamma_l**2)
    if c <= 0.0:
        raise DivergentIntegralError(
            math.nan, "S^-2 is not integrable at zero frequency"
        )
    m = math.sqrt(s * c)
    return (
        gamma_r**2
        * kappa**4
        * alpha**4
        * (b + 3.0 * m)
        / (2.0 * c**1.5 * (b + 2.0 * m) ** 1.5)
    )
