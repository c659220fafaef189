"""
Factories for the rate-level detector networks.

Every builder names its readout port ``quantum`` and its loss ports
``loss_<mode>``; the c-oscillator bath of the unstable configuration is
``thermal``.
"""

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.model import (
    BathSpec,
    CouplingTerm,
    ModeSpec,
    NetworkSpec,
    PortSpec,
    SignalSpec,
)

logger = logging.getLogger(__name__)

READOUT_PORT = "quantum"
THERMAL_PORT = "thermal"
WLC_MODES = ("a", "b", "c")


def readout_port(mode: str, rate: float, bath: Optional[BathSpec] = None) -> PortSpec:
    return PortSpec(
        "readout", mode, rate, bath or BathSpec.vacuum(), name=READOUT_PORT
    )


def loss_ports(
    losses: Optional[Mapping[str, float]],
    baths: Optional[Mapping[str, BathSpec]] = None,
) -> List[PortSpec]:
    """
    One vacuum (or given-bath) loss port per mode with a positive rate.
    """
    ports = []
    for mode, rate in (losses or {}).items():
        if rate < 0:
            raise ValueError(f"loss rate of mode '{mode}' is negative: {rate}")
        if rate > 0:
            bath = (baths or {}).get(mode, BathSpec.vacuum())
            ports.append(PortSpec("loss", mode, rate, bath, name=f"loss_{mode}"))
    return ports


def white_light_network(
    readout_mode: str,
    kappa: float,
    chi: float,
    gamma_r: float,
    alpha: float = 1.0,
    readout_bath: Optional[BathSpec] = None,
    losses: Optional[Mapping[str, float]] = None,
    extra_ports: Sequence[PortSpec] = (),
    signal_name: str = "h",
    name: str = "",
) -> NetworkSpec:
    """
    Three-mode a-b-c chain: beam splitter kappa between a and b, two-mode
    squeezing chi between b and c, readout on ``readout_mode`` and the
    signal on the phase quadrature of a.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if chi < 0 or gamma_r < 0:
        raise ValueError("chi and gamma_r must be non-negative")
    ports = [readout_port(readout_mode, gamma_r, readout_bath)]
    ports += loss_ports(losses)
    ports += list(extra_ports)
    return NetworkSpec(
        modes=tuple(ModeSpec(mode) for mode in WLC_MODES),
        couplings=(
            CouplingTerm("beam-splitter", ("a", "b"), kappa),
            CouplingTerm("two-mode-squeeze", ("b", "c"), chi),
        ),
        ports=tuple(ports),
        signals=(SignalSpec("a", "phase", alpha, signal_name),),
        name=name,
    )


def build_conventional(
    gamma_r: float,
    gamma_l: float = 0.0,
    alpha: float = 1.0,
    readout_bath: Optional[BathSpec] = None,
    signal_name: str = "h",
    name: str = "conventional",
) -> NetworkSpec:
    """
    Single-cavity detector: mode a read out at gamma_r, optionally lossy.
    """
    if gamma_r < 0 or gamma_l < 0:
        raise ValueError("rates must be non-negative")
    ports = [readout_port("a", gamma_r, readout_bath)]
    ports += loss_ports({"a": gamma_l})
    return NetworkSpec(
        modes=(ModeSpec("a"),),
        ports=tuple(ports),
        signals=(SignalSpec("a", "phase", alpha, signal_name),),
        name=name,
    )


def build_swlc(
    kappa: float,
    chi: float,
    gamma_r: float,
    losses: Optional[Mapping[str, float]] = None,
    alpha: float = 1.0,
    readout_bath: Optional[BathSpec] = None,
    name: str = "swlc",
) -> NetworkSpec:
    """
    Stable white-light cavity: the amplifier mode b carries the readout.
    Marginally stable at chi == kappa.
    """
    return white_light_network(
        "b",
        kappa,
        chi,
        gamma_r,
        alpha=alpha,
        readout_bath=readout_bath,
        losses=losses,
        name=name,
    )


def build_uwlc(
    kappa: float,
    chi: float,
    gamma_r: float,
    gamma_m: float = 0.0,
    temperature: float = 0.0,
    alpha: float = 1.0,
    omega_m: float = 2.0 * math.pi * 1e5,
    losses: Optional[Mapping[str, float]] = None,
    readout_bath: Optional[BathSpec] = None,
    name: str = "uwlc",
) -> NetworkSpec:
    """
    Unstable white-light cavity: the sensing mode a carries the readout and
    c couples to a thermal bath at rate gamma_m when gamma_m > 0.
    """
    if gamma_m < 0:
        raise ValueError(f"gamma_m must be non-negative, got {gamma_m}")
    extra = []
    if gamma_m > 0:
        extra.append(
            PortSpec(
                "loss",
                "c",
                gamma_m,
                BathSpec.thermal(temperature, omega_m),
                name=THERMAL_PORT,
            )
        )
    return white_light_network(
        "a",
        kappa,
        chi,
        gamma_r,
        alpha=alpha,
        readout_bath=readout_bath,
        losses=losses,
        extra_ports=extra,
        name=name,
    )


def build_multimode(
    sensor_matrix: np.ndarray,
    beta: Sequence[float],
    alpha: Sequence[complex],
    kappa: float,
    chi: float,
    gamma_r: float,
    name: str = "multimode",
) -> NetworkSpec:
    """
    Multi-mode generalization: sensors a_j evolving under ``sensor_matrix``,
    a hub b read out at gamma_r and coupled with rates kappa beta_j and
    chi beta_j, and partners c_j evolving under its complex conjugate.

    The complex signal coupling i alpha_j h of each sensor is injected as
    (-sqrt(2) Im alpha_j, sqrt(2) Re alpha_j) on its two quadratures.
    """
    m = np.atleast_2d(np.asarray(sensor_matrix, dtype=complex))
    b = np.asarray(beta, dtype=float)
    a = np.asarray(alpha, dtype=complex)
    n = m.shape[0]
    if m.shape != (n, n) or b.shape != (n,) or a.shape != (n,):
        raise ValueError(
            f"shape mismatch: sensor matrix {m.shape}, beta {b.shape}, "
            f"alpha {a.shape}"
        )
    if np.any(b < 0):
        raise ValueError("beta must be non-negative")

    sensors = [f"a{j}" for j in range(n)]
    partners = [f"c{j}" for j in range(n)]
    modes = [ModeSpec(x) for x in sensors] + [ModeSpec("b")]
    modes += [ModeSpec(x) for x in partners]

    couplings: List[CouplingTerm] = []
    for target in range(n):
        for source in range(n):
            rate = m[target, source]
            if rate == 0:
                continue
            couplings.append(
                CouplingTerm(
                    "linear",
                    (sensors[source], sensors[target]),
                    rate.real,
                    rate.imag,
                )
            )
            couplings.append(
                CouplingTerm(
                    "linear",
                    (partners[source], partners[target]),
                    rate.real,
                    -rate.imag,
                )
            )
    for j in range(n):
        couplings.append(
            CouplingTerm("beam-splitter", (sensors[j], "b"), kappa * b[j])
        )
        couplings.append(
            CouplingTerm("two-mode-squeeze", ("b", partners[j]), chi * b[j])
        )

    signals = []
    for j in range(n):
        forcing: Dict[str, float] = {
            "amplitude": -math.sqrt(2.0) * a[j].imag,
            "phase": math.sqrt(2.0) * a[j].real,
        }
        for quadrature, coupling in forcing.items():
            if coupling != 0:
                signals.append(SignalSpec(sensors[j], quadrature, coupling))

    return NetworkSpec(
        modes=tuple(modes),
        couplings=tuple(couplings),
        ports=(readout_port("b", gamma_r),),
        signals=tuple(signals),
        name=name,
    )


def build_single_cavity_axion(
    gamma_r: float,
    gamma_l: float,
    squeeze_r: float = 0.0,
    alpha: float = 1.0,
) -> NetworkSpec:
    """
    Lossy single cavity with squeezed readout, the scan-rate baseline.
    """
    return build_conventional(
        gamma_r,
        gamma_l,
        alpha=alpha,
        readout_bath=BathSpec.squeezed(squeeze_r),
        signal_name="psi1",
        name="single-cavity",
    )
