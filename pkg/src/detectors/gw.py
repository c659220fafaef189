"""
Gravitational-wave detector networks with radiation pressure.

Mechanics is carried in scaled coordinates where the optomechanical
couplings both equal iota = (alpha_GW^2 / (hbar mu))^(1/3) and the mirror
pair has mass 1/iota; the strain enters the phase quadrature of a with
coupling -alpha_GW L / hbar.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List

from scipy import constants

from src.detectors.builders import (
    THERMAL_PORT,
    build_conventional,
    white_light_network,
)
from src.model import BathSpec, CouplingTerm, ModeSpec, NetworkSpec, PortSpec
from src.utils.units import TWO_PI

logger = logging.getLogger(__name__)

GW_TOPOLOGIES = ("swlc", "uwlc", "conventional")
MIRROR = "mirror"


@dataclass(frozen=True)
class GWParams:
    """
    Interferometer parameters in SI units; rates in rad/s.

    Defaults are a cryogenic 2 um, 4 km detector with a 5 kHz white-light
    cavity close to threshold.
    """

    mass: float = 200.0
    arm_length: float = 4000.0
    power: float = 3e6
    wavelength: float = 2e-6
    gamma_r: float = TWO_PI * 500.0
    kappa: float = TWO_PI * 5000.0
    chi: float = TWO_PI * 4930.0
    quality: float = 8e9
    omega_m: float = TWO_PI * 1e5
    temperature: float = 4.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"GWParams.{name} must be positive, got {value}")

    @property
    def reduced_mass(self) -> float:
        return self.mass / 4.0

    @property
    def bath_rate(self) -> float:
        """Coupling of the c oscillator to its bath, omega_m / (2 Q_m)."""
        return self.omega_m / (2.0 * self.quality)

    def derived(self) -> Dict[str, float]:
        omega_0 = TWO_PI * constants.c / self.wavelength
        alpha_gw = math.sqrt(
            2.0
            * self.power
            * constants.hbar
            * omega_0
            / (self.arm_length * constants.c)
        )
        alpha_n = alpha_gw / constants.hbar
        stored_energy = self.power * self.arm_length / constants.c
        iota = (alpha_gw**2 / (constants.hbar * self.reduced_mass)) ** (1.0 / 3.0)
        return {
            "omega_0": omega_0,
            "alpha_gw": alpha_gw,
            "alpha_n": alpha_n,
            "stored_energy": stored_energy,
            "energy_variance": constants.hbar * omega_0 * stored_energy,
            "radiation_pressure_rate": iota,
            "strain_coupling": alpha_n * self.arm_length,
        }

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _with_mirror(spec: NetworkSpec, iota: float) -> NetworkSpec:
    couplings: List[CouplingTerm] = list(spec.couplings)
    couplings += [
        CouplingTerm("position-phase", ("a", MIRROR), iota),
        CouplingTerm("momentum-kick", ("a", MIRROR), iota),
    ]
    return spec.replace(
        modes=spec.modes + (ModeSpec(MIRROR, "mechanical", 1.0 / iota, 0.0),),
        couplings=tuple(couplings),
    )


def build_gw(
    params: GWParams,
    topology: str = "swlc",
    radiation_pressure: bool = True,
) -> NetworkSpec:
    """
    GW detector in one of three readout topologies.

    The white-light builds carry the c-oscillator thermal bath at rate
    omega_m / (2 Q_m); ``radiation_pressure=False`` leaves the mirror out.
    """
    if topology not in GW_TOPOLOGIES:
        raise ValueError(
            f"unknown GW topology '{topology}', expected one of {GW_TOPOLOGIES}"
        )
    derived = params.derived()
    coupling = -derived["strain_coupling"]
    name = f"gw-{topology}"

    if topology == "conventional":
        spec = build_conventional(params.gamma_r, alpha=coupling, name=name)
    else:
        thermal = PortSpec(
            "loss",
            "c",
            params.bath_rate,
            BathSpec.thermal(params.temperature, params.omega_m),
            name=THERMAL_PORT,
        )
        spec = white_light_network(
            "b" if topology == "swlc" else "a",
            params.kappa,
            params.chi,
            params.gamma_r,
            alpha=coupling,
            extra_ports=(thermal,),
            name=name,
        )
    if radiation_pressure:
        spec = _with_mirror(spec, derived["radiation_pressure_rate"])
    logger.debug(
        f"Built {name}: alpha_GW={derived['alpha_gw']:.4g}, "
        f"iota={derived['radiation_pressure_rate']:.4g} rad/s"
    )
    return spec
