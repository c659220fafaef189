from ..model.assembly import assemble_system, validate_spec
from ..model.network import (
    BathSpec,
    CouplingTerm,
    ModeSpec,
    NetworkSpec,
    PortSpec,
    SignalSpec,
)
from ..model.system import QuadratureSystem, port_count, state_dim

__all__ = [
    "BathSpec",
    "CouplingTerm",
    "ModeSpec",
    "NetworkSpec",
    "PortSpec",
    "QuadratureSystem",
    "SignalSpec",
    "assemble_system",
    "port_count",
    "state_dim",
    "validate_spec",
]
