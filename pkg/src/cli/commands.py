import logging
import sys
from typing import Any, Callable, Dict, Mapping, Optional

from src.cli.run_config import RunConfig
from src.detectors import build_conventional, build_from_config
from src.metrics import (
    coherent_energy_variance,
    eql_ratio,
    gain_lambda,
    scan_rate,
    sensitivity_integral,
    single_cavity_scan_rate,
)
from src.model import NetworkSpec, assemble_system
from src.response import ep_indicator, poles, pt_check
from src.spectra import frequency_grid, noise_budget
from src.sweep import (
    gain_versus_conventional,
    grid_sweep,
    optimize_scan_rate,
    optimize_single_cavity,
    stable_gain,
)
from src.utils import TWO_PI, dumps_json, write_json
from src.utils.atomic_write import atomic_path
from src.utils.errors import ConfigError, UnstableSystemError

logger = logging.getLogger(__name__)


def _emit(run: RunConfig, suffix: str, payload: Dict[str, Any]) -> str:
    run.output.ensure_writable()
    path = run.output.path(f"{suffix}.json")
    write_json(path, payload)
    sys.stdout.write(dumps_json(payload) + "\n")
    logger.info(f"Results written to {path}")
    return path


def _detector(run: RunConfig) -> NetworkSpec:
    spec = build_from_config(run.detector)
    if run.strict_stability:
        require_stable(spec)
    return spec


def require_stable(spec: NetworkSpec) -> None:
    """
    Raises:
        UnstableSystemError: If any visible pole of ``spec`` grows.
    """
    pole_set = poles(spec)
    if pole_set.classification == "unstable":
        raise UnstableSystemError(pole_set.classification, pole_set.max_growth)


def _reference(run: RunConfig, spec: NetworkSpec) -> NetworkSpec:
    if run.reference:
        return build_from_config(run.reference)
    return build_conventional(spec.readout.rate, alpha=spec.signals[0].coupling)


def cmd_spectrum(run: RunConfig) -> str:
    """Write the noise budget of the detector as CSV."""
    spec = _detector(run)
    grid = frequency_grid(run.grid.f_min_hz, run.grid.f_max_hz, run.grid.points)
    table = noise_budget(spec, grid)
    run.output.ensure_writable()
    path = run.output.path("spectrum.csv")
    table.write_csv(path)
    return path


def cmd_poles(run: RunConfig) -> str:
    """
    Poles of the phase block when it decouples, of the whole system
    otherwise; ``system_classification`` always covers every quadrature.
    """
    spec = _detector(run)
    system = assemble_system(spec)
    block: Optional[str] = "phase"
    try:
        system.restrict("phase")
    except ValueError:
        logger.debug("Phase block is coupled, reporting the poles of all states")
        block = None
    payload = poles(system, block=block).to_dict()
    payload["block"] = block or "full"
    payload["system_classification"] = poles(system).classification
    payload["ep_indicator"] = ep_indicator(system)
    report = pt_check(spec)
    payload["pt_symmetric"] = report.is_pt_symmetric
    payload["pt_residual"] = report.residual
    return _emit(run, "poles", payload)


def cmd_gain(run: RunConfig) -> str:
    spec = _detector(run)
    amplified = sensitivity_integral(assemble_system(spec))
    conventional = sensitivity_integral(assemble_system(_reference(run, spec)))
    alpha = spec.signals[0].coupling
    payload = {
        "lambda": gain_lambda(amplified, conventional),
        "eql_ratio": eql_ratio(amplified.value, coherent_energy_variance(alpha)),
        "amplified": amplified.to_dict(),
        "conventional": conventional.to_dict(),
    }
    return _emit(run, "gain", payload)


def cmd_scan_rate(run: RunConfig) -> str:
    """
    Scan rate of the detector; the single-cavity closed form is added for
    ``conventional`` detectors.
    """
    spec = _detector(run)
    merit = scan_rate(assemble_system(spec))
    payload: Dict[str, Any] = {"scan_rate": merit.to_dict()}
    section = run.detector
    if section.get("kind") == "conventional":
        payload["closed_form"] = single_cavity_scan_rate(
            float(section["gamma_r_hz"]) * TWO_PI,
            float(section.get("gamma_l_hz", 0.0)) * TWO_PI,
            float(section.get("alpha", 1.0)),
            float(section.get("squeeze_r", 0.0)),
        )
    return _emit(run, "scan_rate", payload)


def cmd_optimize(run: RunConfig) -> str:
    """
    Optimize the axion scan rate in units of gamma_L, or only the
    single-cavity baseline when ``topology`` is ``single-cavity``.
    """
    settings = run.optimizer
    topology = settings.get("topology", "swlc")
    squeeze_r = float(settings.get("squeeze_r", 0.0))
    if topology == "single-cavity":
        baseline = optimize_single_cavity(squeeze_r)
        payload = baseline.to_dict()
        payload["gamma_r_over_gamma_l"] = baseline.gamma_r
    else:
        result = optimize_scan_rate(
            float(settings.get("chi", 0.0)),
            squeeze_r,
            topology,
            margin=float(settings.get("margin", 0.999)),
            grid_points=int(settings.get("grid_points", 40)),
            workers=settings.get("workers"),
        )
        payload = result.to_dict()
    return _emit(run, "optimize", payload)


def _scan_rate_value(spec: NetworkSpec) -> float:
    return scan_rate(assemble_system(spec)).value


def _sensitivity_value(spec: NetworkSpec) -> float:
    return sensitivity_integral(assemble_system(spec)).value


SWEEP_METRICS: Mapping[str, Callable[[NetworkSpec], float]] = {
    "lambda": gain_versus_conventional,
    "stable_lambda": stable_gain,
    "scan_rate": _scan_rate_value,
    "sensitivity": _sensitivity_value,
}


def cmd_sweep(run: RunConfig) -> str:
    """
    Sweep detector parameters; ``sweep.axes`` maps detector keys to lists.
    """
    axes = run.sweep.get("axes")
    if not isinstance(axes, Mapping) or not axes:
        raise ConfigError("sweep needs a non-empty 'axes' mapping")
    name = run.sweep.get("metric", "lambda")
    if name not in SWEEP_METRICS:
        raise ConfigError(
            f"unknown sweep metric '{name}', expected one of {list(SWEEP_METRICS)}"
        )

    def family(**point: float) -> NetworkSpec:
        return build_from_config({**run.detector, **point})

    frame = grid_sweep(
        family,
        {key: list(values) for key, values in axes.items()},
        SWEEP_METRICS[name],
        workers=run.sweep.get("workers"),
        metric_name=name,
    )
    run.output.ensure_writable()
    path = run.output.path("sweep.csv")
    with atomic_path(path) as tmp:
        frame.to_csv(tmp, index=False, float_format="%.17g")
    logger.info(f"Sweep table written to {path}")
    return path


COMMAND_HANDLERS: Mapping[str, Callable[[RunConfig], str]] = {
    "spectrum": cmd_spectrum,
    "poles": cmd_poles,
    "gain": cmd_gain,
    "scan-rate": cmd_scan_rate,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
}
