import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from scipy import constants

from src.detectors.builders import white_light_network
from src.model import BathSpec, NetworkSpec

logger = logging.getLogger(__name__)

AXION_TOPOLOGIES = ("swlc", "uwlc")


def alpha_axion(
    eta: float, g_agg: float, omega_0: float, energy_b: float
) -> float:
    """
    Axion signal coupling 4 pi eta g sqrt(hbar omega_0 E_B).

    Args:
        eta: Mode overlap with the applied field.
        g_agg: Axion-photon coupling.
        omega_0: Cavity resonance in rad/s.
        energy_b: Energy stored in the applied field, in J.
    """
    if min(eta, g_agg, omega_0, energy_b) < 0:
        raise ValueError("axion coupling inputs must be non-negative")
    return 4.0 * math.pi * eta * g_agg * math.sqrt(
        constants.hbar * omega_0 * energy_b
    )


@dataclass(frozen=True)
class AxionParams:
    """
    Haloscope network parameters; rates in rad/s, usually with gamma_l = 1.

    When all of ``eta``, ``g_agg``, ``omega_0`` and ``energy_b`` are set
    they override ``alpha``.
    """

    gamma_l: float = 1.0
    gamma_r: float = 2.0
    kappa: float = 1.0
    chi: float = 0.0
    squeeze_r: float = 0.0
    alpha: float = 1.0
    topology: str = "swlc"
    eta: Optional[float] = None
    g_agg: Optional[float] = None
    omega_0: Optional[float] = None
    energy_b: Optional[float] = None

    @property
    def coupling(self) -> float:
        physical = (self.eta, self.g_agg, self.omega_0, self.energy_b)
        if all(value is not None for value in physical):
            return alpha_axion(*physical)  # type: ignore[arg-type]
        return self.alpha

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


def build_axion(params: AxionParams) -> NetworkSpec:
    """
    Axion haloscope network: signal psi1 on the phase quadrature of a,
    squeezed readout on b (``swlc``) or on a (``uwlc``), and the same
    vacuum loss gamma_l on each of a, b and c.
    """
    if params.topology not in AXION_TOPOLOGIES:
        raise ValueError(
            f"unknown axion topology '{params.topology}', "
            f"expected one of {AXION_TOPOLOGIES}"
        )
    if params.gamma_l < 0:
        raise ValueError(f"gamma_l must be non-negative, got {params.gamma_l}")
    readout_mode = "b" if params.topology == "swlc" else "a"
    return white_light_network(
        readout_mode,
        params.kappa,
        params.chi,
        params.gamma_r,
        alpha=params.coupling,
        readout_bath=BathSpec.squeezed(params.squeeze_r),
        losses={mode: params.gamma_l for mode in ("a", "b", "c")},
        signal_name="psi1",
        name=f"axion-{params.topology}",
    )
