import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from scipy import constants

from src.utils.units import TWO_PI

MODE_KINDS = ("cavity", "mechanical")
COUPLING_KINDS = (
    "beam-splitter",
    "two-mode-squeeze",
    "position-phase",
    "momentum-kick",
    "linear",
)
PORT_KINDS = ("readout", "loss")
BATH_KINDS = ("vacuum", "squeezed", "thermal")
QUADRATURES = ("amplitude", "phase")
SIGNAL_NAMES = ("h", "psi1")


@dataclass(frozen=True)
class BathSpec:
    """
    Input-field statistics of one port.

    Single-sided PSDs: vacuum is 1 per quadrature, squeezed vacuum is
    e^{+2r} (amplitude) and e^{-2r} (phase), and a thermal bath is
    2 k_B T / (hbar omega_m) on both quadratures, plus 1 when
    ``vacuum_floor`` is set.
    """

    kind: str = "vacuum"
    squeeze_r: float = 0.0
    temperature: float = 0.0
    omega_m: float = 0.0
    vacuum_floor: bool = False

    @classmethod
    def vacuum(cls) -> "BathSpec":
        return cls("vacuum")

    @classmethod
    def squeezed(cls, squeeze_r: float) -> "BathSpec":
        return cls("squeezed", squeeze_r=squeeze_r)

    @classmethod
    def thermal(
        cls, temperature: float, omega_m: float, vacuum_floor: bool = False
    ) -> "BathSpec":
        return cls(
            "thermal",
            temperature=temperature,
            omega_m=omega_m,
            vacuum_floor=vacuum_floor,
        )

    def psd(self) -> Tuple[float, float]:
        """Return the (amplitude, phase) single-sided PSDs."""
        if self.kind == "squeezed":
            return math.exp(2.0 * self.squeeze_r), math.exp(-2.0 * self.squeeze_r)
        if self.kind == "thermal":
            occupation = (
                2.0
                * constants.k
                * self.temperature
                / (constants.hbar * self.omega_m)
            )
            if self.vacuum_floor:
                occupation += 1.0
            return occupation, occupation
        return 1.0, 1.0

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "squeezed":
            data["squeeze_r"] = self.squeeze_r
        elif self.kind == "thermal":
            data["temperature_k"] = self.temperature
            data["omega_m_hz"] = self.omega_m / TWO_PI
            data["vacuum_floor"] = self.vacuum_floor
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BathSpec":
        return cls(
            kind=data.get("kind", "vacuum"),
            squeeze_r=float(data.get("squeeze_r", 0.0)),
            temperature=float(data.get("temperature_k", 0.0)),
            omega_m=float(data.get("omega_m_hz", 0.0)) * TWO_PI,
            vacuum_floor=bool(data.get("vacuum_floor", False)),
        )


@dataclass(frozen=True)
class ModeSpec:
    """
    A cavity mode, or a mechanical (x, p) pair with reduced mass and
    eigenfrequency.
    """

    name: str
    kind: str = "cavity"
    mass: float = 1.0
    omega_m: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "kind": self.kind}
        if self.kind == "mechanical":
            data["mass"] = self.mass
            data["omega_m_hz"] = self.omega_m / TWO_PI
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModeSpec":
        return cls(
            name=str(data["name"]),
            kind=data.get("kind", "cavity"),
            mass=float(data.get("mass", 1.0)),
            omega_m=float(data.get("omega_m_hz", 0.0)) * TWO_PI,
        )


@dataclass(frozen=True)
class CouplingTerm:
    """
    A bilinear coupling between two modes.

    ``modes`` is ordered: (a, b) for beam-splitter, (b, c) for
    two-mode-squeeze, (cavity, mechanical) for position-phase and
    momentum-kick, and (source, target) for ``linear`` terms whose complex
    rate is ``rate + 1j * rate_imag``.
    """

    kind: str
    modes: Tuple[str, str]
    rate: float
    rate_imag: float = 0.0

    @property
    def complex_rate(self) -> complex:
        return complex(self.rate, self.rate_imag)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind,
            "modes": list(self.modes),
            "rate_hz": self.rate / TWO_PI,
        }
        if self.kind == "linear":
            data["rate_imag_hz"] = self.rate_imag / TWO_PI
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CouplingTerm":
        modes = data["modes"]
        return cls(
            kind=data["kind"],
            modes=(str(modes[0]), str(modes[1])),
            rate=float(data.get("rate_hz", 0.0)) * TWO_PI,
            rate_imag=float(data.get("rate_imag_hz", 0.0)) * TWO_PI,
        )


@dataclass(frozen=True)
class PortSpec:
    """
    A readout or loss continuum attached to a cavity mode.

    Ports are named so that noise sources can be reported per port; the
    default name is ``readout`` or ``loss_<mode>``.
    """

    kind: str
    mode: str
    rate: float
    bath: BathSpec = field(default_factory=BathSpec)
    name: Optional[str] = None

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return "readout" if self.kind == "readout" else f"loss_{self.mode}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "rate_hz": self.rate / TWO_PI,
            "bath": self.bath.to_dict(),
            "name": self.label,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PortSpec":
        return cls(
            kind=data["kind"],
            mode=str(data["mode"]),
            rate=float(data.get("rate_hz", 0.0)) * TWO_PI,
            bath=BathSpec.from_dict(data.get("bath", {})),
            name=data.get("name"),
        )


@dataclass(frozen=True)
class SignalSpec:
    """
    A classical signal forcing one quadrature of a mode with coupling alpha.
    """

    mode: str
    quadrature: str = "phase"
    coupling: float = 1.0
    name: str = "h"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "quadrature": self.quadrature,
            "coupling": self.coupling,
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SignalSpec":
        return cls(
            mode=str(data["mode"]),
            quadrature=data.get("quadrature", "phase"),
            coupling=float(data.get("coupling", 1.0)),
            name=data.get("name", "h"),
        )


@dataclass(frozen=True)
class NetworkSpec:
    """
    Declarative description of a linear detector network.
    """

    modes: Tuple[ModeSpec, ...]
    couplings: Tuple[CouplingTerm, ...] = ()
    ports: Tuple[PortSpec, ...] = ()
    signals: Tuple[SignalSpec, ...] = ()
    name: str = ""

    def __post_init__(self):
        for attr in ("modes", "couplings", "ports", "signals"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))

    @property
    def mode_names(self) -> List[str]:
        return [mode.name for mode in self.modes]

    def mode(self, name: str) -> ModeSpec:
        for mode in self.modes:
            if mode.name == name:
                return mode
        raise KeyError(name)

    @property
    def readout(self) -> PortSpec:
        for port in self.ports:
            if port.kind == "readout":
                return port
        raise LookupError("network has no readout port")

    def largest_rate(self) -> float:
        """
        Largest absolute rate in the network, used to scale tolerances.
        """
        rates = [abs(term.complex_rate) for term in self.couplings]
        rates += [port.rate for port in self.ports]
        rates += [mode.omega_m for mode in self.modes]
        finite = [rate for rate in rates if math.isfinite(rate)]
        return max(finite, default=0.0) or 1.0

    def replace(self, **changes: Any) -> "NetworkSpec":
        data = {
            "modes": self.modes,
            "couplings": self.couplings,
            "ports": self.ports,
            "signals": self.signals,
            "name": self.name,
        }
        data.update(changes)
        return NetworkSpec(**data)

    def to_dict(self) -> Dict[str, Any]:
        signal: Union[Dict[str, Any], List[Dict[str, Any]], None]
        if not self.signals:
            signal = None
        elif len(self.signals) == 1:
            signal = self.signals[0].to_dict()
        else:
            signal = [item.to_dict() for item in self.signals]
        data: Dict[str, Any] = {
            "modes": [mode.to_dict() for mode in self.modes],
            "couplings": [term.to_dict() for term in self.couplings],
            "ports": [port.to_dict() for port in self.ports],
            "signal": signal,
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NetworkSpec":
        raw_signal = data.get("signal")
        if raw_signal is None:
            signals: Sequence[Dict[str, Any]] = []
        elif isinstance(raw_signal, list):
            signals = raw_signal
        else:
            signals = [raw_signal]
        return cls(
            modes=tuple(ModeSpec.from_dict(m) for m in data.get("modes", [])),
            couplings=tuple(
                CouplingTerm.from_dict(c) for c in data.get("couplings", [])
            ),
            ports=tuple(PortSpec.from_dict(p) for p in data.get("ports", [])),
            signals=tuple(SignalSpec.from_dict(s) for s in signals),
            name=data.get("name", ""),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "NetworkSpec":
        return cls.from_dict(json.loads(text))
