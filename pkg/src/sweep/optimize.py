import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from src.detectors import AxionParams, build_axion
from src.metrics import (
    log_quadrature,
    resonances_of,
    single_cavity_scan_rate,
    slowest_rate,
    swlc_axion_scan_rate,
)
from src.model import QuadratureSystem, assemble_system
from src.response.poles import MARGINAL_TOL, classify
from src.spectra import signal_referred_function
from src.utils.errors import InfeasibleSearchError, SimulationError

logger = logging.getLogger(__name__)

# Search box on kappa / gamma_L.
KAPPA_BOUNDS = (1e-2, 1e4)
# Search box on gamma_R / gamma_L. The sWLC box reaches kappa^2 / gamma_R of
# order one at the top of KAPPA_BOUNDS, where the network acts as a single
# cavity with readout rate kappa^2 / gamma_R.
GAMMA_BOUNDS = {"swlc": (1e-2, 1e8), "uwlc": (1e-2, 1e4)}
# Best distinct grid points refined by the simplex.
REFINE_STARTS = 3
# Search interval of the single-cavity readout rate.
BASELINE_BOUNDS = (1e-3, 1e3)
TOPOLOGIES = ("swlc", "uwlc")

Point = Tuple[float, float]


@dataclass(frozen=True)
class BaselineResult:
    gamma_r: float
    scan_rate: float
    evaluations: int
    converged: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class OptResult:
    """
    Optimized scan rate of a white-light network relative to the optimized
    lossy single cavity, in units where gamma_L = 1.

    ``classification`` is the stability class of the optimal network; the
    search never scores an unstable point.
    """

    enhancement: float
    scan_rate: float
    baseline_scan_rate: float
    kappa: float
    gamma_r: float
    chi: float
    squeeze_r: float
    topology: str
    evaluations: int
    converged: bool
    grid_best: float
    classification: str = "stable"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _axion_phase_system(
    kappa: float,
    gamma_r: float,
    chi: float,
    squeeze_r: float,
    topology: str,
    gamma_l: float,
) -> QuadratureSystem:
    params = AxionParams(
        gamma_l=gamma_l,
        gamma_r=gamma_r,
        kappa=kappa,
        chi=chi,
        squeeze_r=squeeze_r,
        topology=topology,
    )
    return assemble_system(build_axion(params)).restrict("phase")


def stability_class(system: QuadratureSystem) -> str:
    """
    Classification over every drift eigenvalue, hidden ones included.
    """
    if system.state_dim == 0:
        return "stable"
    values = 1j * np.linalg.eigvals(system.drift)
    return classify(values, MARGINAL_TOL * system.rate_scale)


def network_scan_rate(
    kappa: float,
    gamma_r: float,
    chi: float,
    squeeze_r: float = 0.0,
    topology: str = "swlc",
    gamma_l: float = 1.0,
) -> float:
    """
    Scan rate of the axion network with unit coupling, by the fixed
    Gauss-Legendre rule. Unstable and failing points score 0.
    """
    try:
        system = _axion_phase_system(
            kappa, gamma_r, chi, squeeze_r, topology, gamma_l
        )
        if stability_class(system) == "unstable":
            logger.debug(
                f"Unstable {topology} at kappa={kappa:.4g}, "
                f"gamma_r={gamma_r:.4g}, chi={chi:.4g}"
            )
            return 0.0
        merit = log_quadrature(
            signal_referred_function(system),
            scale=system.rate_scale,
            power=2,
            resonances=resonances_of(system.drift),
            low_rate=slowest_rate(system.drift),
        )
    except SimulationError as e:
        logger.debug(
            f"Scan rate failed at kappa={kappa:.4g}, gamma_r={gamma_r:.4g}: {e}"
        )
        return 0.0
    return merit.value


def optimize_single_cavity(
    squeeze_r: float = 0.0, gamma_l: float = 1.0
) -> BaselineResult:
    """
    Best readout rate of the lossy single cavity, by a bounded scalar search
    over log10(gamma_R) on the closed-form scan rate.
    """
    low, high = (math.log10(b * gamma_l) for b in BASELINE_BOUNDS)
    result = optimize.minimize_scalar(
        lambda u: -single_cavity_scan_rate(10.0**u, gamma_l, 1.0, squeeze_r),
        bounds=(low, high),
        method="bounded",
        options={"xatol": 1e-8},
    )
    gamma_r = 10.0 ** float(result.x)
    baseline = BaselineResult(
        gamma_r=gamma_r,
        scan_rate=single_cavity_scan_rate(gamma_r, gamma_l, 1.0, squeeze_r),
        evaluations=int(result.nfev),
        converged=bool(result.success),
    )
    logger.debug(
        f"Single-cavity baseline r={squeeze_r}: gamma_R={gamma_r:.6g}, "
        f"R={baseline.scan_rate:.6g}"
    )
    return baseline


def _objective(
    chi: float, squeeze_r: float, topology: str
) -> Callable[[float, float], float]:
    """
    Scan rate as a function of (kappa, gamma_R). The sWLC uses its closed
    form; the uWLC is integrated numerically from the network.
    """
    if topology == "swlc":

        def closed_form(kappa: float, gamma_r: float) -> float:
            try:
                return swlc_axion_scan_rate(
                    kappa, gamma_r, chi, squeeze_r=squeeze_r
                )
            except SimulationError:
                return 0.0

        return closed_form

    def numeric(kappa: float, gamma_r: float) -> float:
        return network_scan_rate(kappa, gamma_r, chi, squeeze_r, topology)

    return numeric


def _box(chi: float, topology: str, margin: float) -> List[Tuple[float, float]]:
    low, high = KAPPA_BOUNDS
    if topology == "swlc":
        low = max(chi / margin, low)
    if low > high:
        raise InfeasibleSearchError(
            f"no stable kappa in [{KAPPA_BOUNDS[0]:g}, {high:g}] for chi={chi:g}"
        )
    return [(low, high), GAMMA_BOUNDS[topology]]


def _starts(
    points: Sequence[Point], values: Sequence[float], count: int
) -> List[Point]:
    order = np.argsort(values)[::-1]
    chosen: List[Point] = []
    for i in order:
        if values[i] <= 0.0 or len(chosen) == count:
            break
        if points[i] not in chosen:
            chosen.append(points[i])
    return chosen


def optimize_scan_rate(
    chi: float,
    squeeze_r: float = 0.0,
    topology: str = "swlc",
    margin: float = 0.999,
    grid_points: int = 40,
    workers: Optional[int] = None,
    maxiter: int = 400,
    fatol: float = 1e-9,
) -> OptResult:
    """
    Maximize the scan rate over (kappa, gamma_R) at fixed chi and squeezing.

    A log-spaced grid search over the search box is followed by bounded
    Nelder-Mead runs in log10 coordinates, started from the best grid
    points and from the point where the network reduces to the optimized
    single cavity (kappa at the top of the box with kappa^2 / gamma_R at the
    baseline readout rate for ``swlc``, kappa at the bottom with the
    baseline gamma_R for ``uwlc``). For ``swlc`` every evaluated point keeps
    chi <= margin * kappa; unstable ``uwlc`` points score 0.

    Raises:
        InfeasibleSearchError: If the box holds no stable kappa or no grid
            point scores above 0.
        ValueError: On a negative chi or an unknown topology.
    """
    if chi < 0:
        raise ValueError(f"chi must be non-negative, got {chi}")
    if topology not in TOPOLOGIES:
        raise ValueError(f"unknown topology '{topology}'")
    if not 0 < margin <= 1:
        raise ValueError(f"margin must lie in (0, 1], got {margin}")

    box = _box(chi, topology, margin)
    logs = [(math.log10(lo), math.log10(hi)) for lo, hi in box]
    kappas = np.logspace(*logs[0], grid_points)
    gammas = np.logspace(*logs[1], grid_points)
    points: List[Point] = [(float(k), float(g)) for k in kappas for g in gammas]
    score = _objective(chi, squeeze_r, topology)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        values = list(executor.map(lambda p: score(*p), points))
    best = int(np.argmax(values))
    grid_best = float(values[best])
    if grid_best <= 0.0:
        raise InfeasibleSearchError(
            f"every {topology} grid point is unstable for chi={chi:g}"
        )
    logger.info(
        f"Grid search ({topology}, chi={chi:g}, r={squeeze_r:g}): best "
        f"R={grid_best:.6g} at kappa={points[best][0]:.4g}, "
        f"gamma_R={points[best][1]:.4g}"
    )

    baseline = optimize_single_cavity(squeeze_r)
    if topology == "swlc":
        top = box[0][1]
        seed = (top, top**2 / baseline.gamma_r)
    else:
        seed = (box[0][0], baseline.gamma_r)
    seed = (
        float(np.clip(seed[0], *box[0])),
        float(np.clip(seed[1], *box[1])),
    )
    starts = _starts(points, values, REFINE_STARTS) + [seed]

    def objective(u: Sequence[float]) -> float:
        return -score(10.0 ** u[0], 10.0 ** u[1])

    kappa, gamma_r = points[best]
    rate = grid_best
    converged = False
    evaluations = len(points)
    lows, highs = zip(*logs)
    for start in starts:
        refined = optimize.minimize(
            objective,
            x0=np.clip(np.log10(start), lows, highs),
            method="Nelder-Mead",
            bounds=logs,
            options={
                "maxiter": maxiter,
                "fatol": fatol * grid_best,
                "xatol": 1e-7,
            },
        )
        evaluations += int(refined.nfev)
        if -refined.fun > rate or (-refined.fun == rate and not converged):
            kappa, gamma_r = (10.0 ** float(u) for u in refined.x)
            rate = float(-refined.fun)
            converged = bool(refined.success)
        logger.debug(
            f"Simplex from kappa={start[0]:.4g}, gamma_R={start[1]:.4g}: "
            f"R={-refined.fun:.6g} after {refined.nfev} evaluations"
        )

    classification = stability_class(
        _axion_phase_system(kappa, gamma_r, chi, squeeze_r, topology, 1.0)
    )
    result = OptResult(
        enhancement=rate / baseline.scan_rate,
        scan_rate=rate,
        baseline_scan_rate=baseline.scan_rate,
        kappa=float(kappa),
        gamma_r=float(gamma_r),
        chi=float(chi),
        squeeze_r=float(squeeze_r),
        topology=topology,
        evaluations=evaluations,
        converged=converged,
        grid_best=grid_best,
        classification=classification,
    )
    logger.info(
        f"Optimized {topology}: enhancement {result.enhancement:.6g} at "
        f"kappa={result.kappa:.6g}, gamma_R={result.gamma_r:.6g} "
        f"({classification})"
    )
    return result
