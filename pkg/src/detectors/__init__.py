from ..detectors.axion import AxionParams, alpha_axion, build_axion
from ..detectors.builders import (
    READOUT_PORT,
    THERMAL_PORT,
    build_conventional,
    build_multimode,
    build_single_cavity_axion,
    build_swlc,
    build_uwlc,
    white_light_network,
)
from ..detectors.from_config import (
    DETECTOR_KINDS,
    axion_params_from_config,
    build_from_config,
    gw_params_from_config,
)
from ..detectors.gw import GWParams, build_gw

__all__ = [
    "AxionParams",
    "DETECTOR_KINDS",
    "GWParams",
    "READOUT_PORT",
    "THERMAL_PORT",
    "alpha_axion",
    "axion_params_from_config",
    "build_axion",
    "build_conventional",
    "build_from_config",
    "build_gw",
    "build_multimode",
    "build_single_cavity_axion",
    "build_swlc",
    "build_uwlc",
    "gw_params_from_config",
    "white_light_network",
]
