import logging
from typing import Any, Callable, Dict, Mapping

import numpy as np

from src.detectors.axion import AxionParams, build_axion
from src.detectors.builders import (
    build_conventional,
    build_multimode,
    build_swlc,
    build_uwlc,
)
from src.detectors.gw import GWParams, build_gw
from src.model import BathSpec, NetworkSpec
from src.utils.errors import ConfigError
from src.utils.units import hz_to_rad

logger = logging.getLogger(__name__)

DETECTOR_KINDS = (
    "conventional",
    "swlc",
    "uwlc",
    "gw",
    "axion",
    "multimode",
    "network",
)


def _rate(section: Mapping[str, Any], key: str, default=None) -> float:
    """Read ``<key>_hz`` from a section and convert it to rad/s."""
    name = f"{key}_hz"
    if name not in section:
        if default is None:
            raise ConfigError(
                f"detector '{section.get('kind')}' needs '{name}'"
            )
        return default
    try:
        return hz_to_rad(float(section[name]))
    except (TypeError, ValueError):
        raise ConfigError(f"'{name}' must be a number, got {section[name]!r}")


def _losses(section: Mapping[str, Any]) -> Dict[str, float]:
    raw = section.get("losses_hz") or {}
    if not isinstance(raw, Mapping):
        raise ConfigError("'losses_hz' must map mode names to rates")
    return {mode: hz_to_rad(float(rate)) for mode, rate in raw.items()}


def _readout_bath(section: Mapping[str, Any]) -> BathSpec:
    return BathSpec.squeezed(float(section.get("squeeze_r", 0.0)))


def _conventional(section: Mapping[str, Any]) -> NetworkSpec:
    return build_conventional(
        _rate(section, "gamma_r"),
        _rate(section, "gamma_l", 0.0),
        alpha=float(section.get("alpha", 1.0)),
        readout_bath=_readout_bath(section),
    )


def _swlc(section: Mapping[str, Any]) -> NetworkSpec:
    return build_swlc(
        _rate(section, "kappa"),
        _rate(section, "chi"),
        _rate(section, "gamma_r"),
        losses=_losses(section),
        alpha=float(section.get("alpha", 1.0)),
        readout_bath=_readout_bath(section),
    )


def _uwlc(section: Mapping[str, Any]) -> NetworkSpec:
    return build_uwlc(
        _rate(section, "kappa"),
        _rate(section, "chi"),
        _rate(section, "gamma_r"),
        gamma_m=_rate(section, "gamma_m", 0.0),
        temperature=float(section.get("temperature_k", 0.0)),
        alpha=float(section.get("alpha", 1.0)),
        omega_m=_rate(section, "omega_m", hz_to_rad(1e5)),
        losses=_losses(section),
        readout_bath=_readout_bath(section),
    )


def gw_params_from_config(section: Mapping[str, Any]) -> GWParams:
    defaults = GWParams()
    return GWParams(
        mass=float(section.get("mass_kg", defaults.mass)),
        arm_length=float(section.get("arm_length_m", defaults.arm_length)),
        power=float(section.get("power_w", defaults.power)),
        wavelength=float(section.get("wavelength_m", defaults.wavelength)),
        gamma_r=_rate(section, "gamma_r", defaults.gamma_r),
        kappa=_rate(section, "kappa", defaults.kappa),
        chi=_rate(section, "chi", defaults.chi),
        quality=float(section.get("quality", defaults.quality)),
        omega_m=_rate(section, "omega_m", defaults.omega_m),
        temperature=float(section.get("temperature_k", defaults.temperature)),
    )


def _gw(section: Mapping[str, Any]) -> NetworkSpec:
    return build_gw(
        gw_params_from_config(section),
        topology=section.get("topology", "swlc"),
        radiation_pressure=bool(section.get("radiation_pressure", True)),
    )


def axion_params_from_config(section: Mapping[str, Any]) -> AxionParams:
    return AxionParams(
        gamma_l=_rate(section, "gamma_l"),
        gamma_r=_rate(section, "gamma_r"),
        kappa=_rate(section, "kappa"),
        chi=_rate(section, "chi", 0.0),
        squeeze_r=float(section.get("squeeze_r", 0.0)),
        alpha=float(section.get("alpha", 1.0)),
        topology=section.get("topology", "swlc"),
    )


def _axion(section: Mapping[str, Any]) -> NetworkSpec:
    return build_axion(axion_params_from_config(section))


def _multimode(section: Mapping[str, Any]) -> NetworkSpec:
    try:
        matrix = np.asarray(section["sensor_matrix_hz"], dtype=float)
        matrix = matrix + 1j * np.asarray(
            section.get("sensor_matrix_imag_hz", np.zeros_like(matrix)),
            dtype=float,
        )
        alpha = np.asarray(section["alpha"], dtype=float) + 1j * np.asarray(
            section.get("alpha_imag", np.zeros(len(section["alpha"]))),
            dtype=float,
        )
        beta = section["beta"]
    except KeyError as e:
        raise ConfigError(f"detector 'multimode' needs '{e.args[0]}'")
    return build_multimode(
        hz_to_rad(matrix),
        beta,
        alpha,
        _rate(section, "kappa"),
        _rate(section, "chi"),
        _rate(section, "gamma_r"),
    )


def _network(section: Mapping[str, Any]) -> NetworkSpec:
    data = section.get("spec", section)
    try:
        return NetworkSpec.from_dict(dict(data))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"invalid network description: {e}")


BUILDERS: Dict[str, Callable[[Mapping[str, Any]], NetworkSpec]] = {
    "conventional": _conventional,
    "swlc": _swlc,
    "uwlc": _uwlc,
    "gw": _gw,
    "axion": _axion,
    "multimode": _multimode,
    "network": _network,
}


def build_from_config(section: Mapping[str, Any]) -> NetworkSpec:
    """
    Build a detector from a config section selected by its ``kind``.

    Rates are given in Hz under ``<name>_hz`` keys.

    Raises:
        ConfigError: On an unknown kind, a missing key or a rejected value.
    """
    kind = section.get("kind")
    if kind not in BUILDERS:
        raise ConfigError(
            f"unknown detector kind {kind!r}, expected one of {DETECTOR_KINDS}"
        )
    try:
        spec = BUILDERS[kind](section)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"detector '{kind}': {e}")
    logger.info(f"Built detector '{spec.name or kind}' from config")
    return spec
