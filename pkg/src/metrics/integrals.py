import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Optional, Tuple

import numpy as np
from scipy import integrate

from src.utils.errors import DivergentIntegralError
from src.utils.units import TWO_PI, rad_to_hz

logger = logging.getLogger(__name__)

# Cutoff of the numerical part, in units of the rate scale.
CUTOFF = 1e3
# Lower end of the logarithmic panels, in units of the rate scale.
LOW_EDGE = 1e-4
# Tail exponents at or above this are treated as divergent.
DIVERGENCE_EXPONENT = -1.1
# Gauss-Legendre nodes per panel of the fixed rule.
PANEL_NODES = 20
# Logarithmic panels per decade of the fixed rule.
PANELS_PER_DECADE = 2
# Resonance half-widths bracketing each pole with extra panel edges.
POLE_WIDTHS = (0.25, 1.0, 4.0, 16.0)
# Poles below this fraction of the largest one count as zero.
ZERO_POLE = 1e-9

Spectrum = Callable[[Any], Any]


@dataclass(frozen=True)
class FigureOfMerit:
    """
    Result of an integrated figure of merit.

    ``cutoff`` is the angular frequency (rad/s) where the numerical part
    stops and the fitted power-law tail takes over.
    """

    value: float
    abs_error: float
    cutoff: float
    tail_corrected: bool
    tail_exponent: float = float("nan")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": float(self.value),
            "abs_error": float(self.abs_error),
            "cutoff_hz": float(rad_to_hz(self.cutoff)),
            "tail_corrected": bool(self.tail_corrected),
        }


def _inverse(values, power: int):
    values = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        result = np.where(np.isinf(values), 0.0, values ** (-float(power)))
    return result


def _tail(
    integrand: Callable[[np.ndarray], np.ndarray], cutoff: float
) -> Tuple[float, float, float]:
    """
    Fit g ~ omega^n from g(cutoff), g(2 cutoff) and integrate it to infinity.

    Returns:
        (tail, exponent, drift) where ``drift`` is the change of the tail
        when the exponent is refitted between 2 cutoff and 4 cutoff.
    """
    g1, g2, g4 = integrand(np.array([cutoff, 2.0 * cutoff, 4.0 * cutoff]))
    if g1 == 0.0 and g2 == 0.0:
        return 0.0, -math.inf, 0.0
    if g1 <= 0.0 or g2 <= 0.0:
        raise DivergentIntegralError(
            math.nan, "integrand vanishes at only one tail sample"
        )
    exponent = math.log(g2 / g1) / math.log(2.0)
    if exponent >= DIVERGENCE_EXPONENT:
        raise DivergentIntegralError(exponent)
    tail = g1 * cutoff / (-exponent - 1.0) / TWO_PI

    drift = 0.0
    if g4 > 0.0:
        far = math.log(g4 / g2) / math.log(2.0)
        if far < DIVERGENCE_EXPONENT:
            drift = abs(tail - g1 * cutoff / (-far - 1.0) / TWO_PI)
    return tail, exponent, drift


def _breakpoints(
    scale: float,
    resonances: Optional[Iterable[Tuple[float, float]]],
    per_decade: int = 1,
    low_rate: Optional[float] = None,
) -> np.ndarray:
    cutoff = CUTOFF * scale
    low = LOW_EDGE * (min(scale, low_rate) if low_rate else scale)
    decades = max(1, math.ceil(math.log10(cutoff / low) - 1e-9))
    edges = list(
        np.logspace(math.log10(low), math.log10(cutoff), decades * per_decade + 1)
    )
    for centre, width in resonances or ():
        for factor in POLE_WIDTHS:
            for edge in (centre - factor * width, centre + factor * width):
                if 0.0 < edge < cutoff:
                    edges.append(edge)
    return np.unique(np.asarray(edges, dtype=float))


def slowest_rate(drift: np.ndarray) -> Optional[float]:
    """
    Smallest nonzero pole magnitude of ``drift``, or None when every pole
    sits at zero.
    """
    if drift.size == 0:
        return None
    magnitudes = np.abs(np.linalg.eigvals(drift))
    floor = ZERO_POLE * max(float(magnitudes.max()), 1e-300)
    nonzero = magnitudes[magnitudes > floor]
    return float(nonzero.min()) if nonzero.size else None


def resonances_of(drift: np.ndarray) -> Tuple[Tuple[float, float], ...]:
    """
    (centre, half-width) of each drift pole on the positive frequency axis.
    """
    if drift.size == 0:
        return ()
    values = 1j * np.linalg.eigvals(drift)
    return tuple(
        (abs(float(v.real)), abs(float(v.imag)))
        for v in values
        if abs(v.real) > 0.0
    )


def integrated_inverse_psd(
    spectrum: Spectrum,
    power: int = 1,
    scale: float = 1.0,
    resonances: Optional[Iterable[Tuple[float, float]]] = None,
    low_rate: Optional[float] = None,
) -> FigureOfMerit:
    """
    Integral of S^{-power} over omega / (2 pi) from 0 to infinity.

    Adaptive quadrature runs over logarithmic panels up to 1e3 * ``scale``
    (refined around ``resonances`` when given); the remainder is a
    power-law tail fitted at the cutoff.

    Args:
        spectrum: Scalar callable omega -> S(omega); +inf is allowed.
        power: 1 for the integrated sensitivity, 2 for the scan rate.
        scale: Largest rate of the problem, sets the panel layout.
        resonances: Optional (centre, half-width) pairs in rad/s.
        low_rate: Slowest rate of the problem; the panels start 1e-4 below
            the smaller of it and ``scale``.

    Raises:
        DivergentIntegralError: If the fitted tail exponent of S^{-power}
            is not below -1.1.
        ValueError: If ``power`` is not 1 or 2 or ``scale`` is not positive.
    """
    if power not in (1, 2):
        raise ValueError(f"power must be 1 or 2, got {power}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")

    def integrand(omega: float) -> float:
        return float(_inverse(spectrum(omega), power))

    def vectorized(omegas: np.ndarray) -> np.ndarray:
        return np.array([integrand(float(w)) for w in omegas])

    cutoff = CUTOFF * scale
    tail, exponent, drift = _tail(vectorized, cutoff)

    edges = np.concatenate(
        [[0.0], _breakpoints(scale, resonances, low_rate=low_rate)]
    )
    value = 0.0
    error = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        part, part_error = integrate.quad(
            integrand,
            lo,
            hi,
            epsabs=0.0,
            epsrel=1e-10,
            limit=200,
        )
        value += part
        error += part_error
    value /= TWO_PI
    error /= TWO_PI

    logger.debug(
        f"Integral of S^-{power}: {value:.10g} + tail {tail:.4g} "
        f"(exponent {exponent:.4g}) over {len(edges) - 1} panels"
    )
    return FigureOfMerit(
        value=float(value + tail),
        abs_error=float(error + drift),
        cutoff=cutoff,
        tail_corrected=bool(tail > 0.0),
        tail_exponent=exponent,
    )


def log_quadrature(
    values_fn: Callable[[np.ndarray], np.ndarray],
    scale: float = 1.0,
    power: int = 2,
    resonances: Optional[Iterable[Tuple[float, float]]] = None,
    low_rate: Optional[float] = None,
) -> FigureOfMerit:
    """
    Fixed composite Gauss-Legendre version of ``integrated_inverse_psd``.

    ``values_fn`` maps an array of frequencies to S on the whole array, so a
    single batched call covers every node. Used in optimizer inner loops.
    """
    if power not in (1, 2):
        raise ValueError(f"power must be 1 or 2, got {power}")

    def integrand(omegas: np.ndarray) -> np.ndarray:
        return _inverse(values_fn(omegas), power)

    cutoff = CUTOFF * scale
    tail, exponent, drift = _tail(integrand, cutoff)

    edges = _breakpoints(
        scale, resonances, per_decade=PANELS_PER_DECADE, low_rate=low_rate
    )
    nodes, weights = np.polynomial.legendre.leggauss(PANEL_NODES)
    lo, hi = edges[:-1, None], edges[1:, None]
    omegas = (0.5 * (hi - lo) * nodes[None, :] + 0.5 * (hi + lo)).ravel()
    scaled = (0.5 * (hi - lo) * weights[None, :]).ravel()

    values = integrand(np.concatenate([[edges[0]], omegas]))
    low = values[0] * edges[0]
    body = float(np.dot(scaled, values[1:]))
    return FigureOfMerit(
        value=(low + body) / TWO_PI + tail,
        abs_error=drift,
        cutoff=cutoff,
        tail_corrected=bool(tail > 0.0),
        tail_exponent=exponent,
    )
