import logging
import math
from typing import Dict, List

import numpy as np

from src.model.network import (
    BATH_KINDS,
    COUPLING_KINDS,
    MODE_KINDS,
    PORT_KINDS,
    QUADRATURES,
    NetworkSpec,
)
from src.model.system import QuadratureSystem
from src.utils.errors import SpecValidationError

logger = logging.getLogger(__name__)


def _finite(value: float) -> bool:
    try:
        return math.isfinite(float(value))
    except (TypeError, ValueError):
        return False


def validate_spec(spec: NetworkSpec) -> List[str]:
    """
    Check a network description against its structural rules.

    Returns:
        One diagnostic per violated rule, each naming the offending element.
        The list is empty iff the network is well formed.
    """
    diagnostics: List[str] = []
    kinds: Dict[str, str] = {}

    for mode in spec.modes:
        where = f"mode '{mode.name}'"
        if mode.name in kinds:
            diagnostics.append(f"{where}: duplicate mode name")
            continue
        kinds[mode.name] = mode.kind
        if mode.kind not in MODE_KINDS:
            diagnostics.append(f"{where}: unknown mode kind '{mode.kind}'")
        elif mode.kind == "mechanical":
            if not _finite(mode.mass) or mode.mass <= 0:
                diagnostics.append(f"{where}: non-positive reduced mass")
            if not _finite(mode.omega_m) or mode.omega_m < 0:
                diagnostics.append(f"{where}: negative eigenfrequency")

    for i, term in enumerate(spec.couplings):
        where = f"coupling #{i} ({term.kind} {term.modes[0]}-{term.modes[1]})"
        if term.kind not in COUPLING_KINDS:
            diagnostics.append(f"{where}: unknown coupling kind")
            continue
        missing = [name for name in term.modes if name not in kinds]
        for name in missing:
            diagnostics.append(f"{where}: unknown mode '{name}'")
        if not (_finite(term.rate) and _finite(term.rate_imag)):
            diagnostics.append(f"{where}: non-finite coupling rate")
            continue
        if term.kind in ("beam-splitter", "two-mode-squeeze") and term.rate < 0:
            diagnostics.append(f"{where}: negative coupling rate")
        if missing:
            continue
        first, second = (kinds[name] for name in term.modes)
        if term.kind in ("beam-splitter", "two-mode-squeeze"):
            if term.modes[0] == term.modes[1]:
                diagnostics.append(f"{where}: couples a mode to itself")
            if first != "cavity" or second != "cavity":
                diagnostics.append(f"{where}: requires two cavity modes")
        elif term.kind in ("position-phase", "momentum-kick"):
            if first != "cavity" or second != "mechanical":
                diagnostics.append(
                    f"{where}: requires a cavity mode then a mechanical pair"
                )
        elif first != "cavity" or second != "cavity":
            diagnostics.append(f"{where}: requires two cavity modes")

    readouts = [port for port in spec.ports if port.kind == "readout"]
    if not readouts:
        diagnostics.append("ports: no readout port")
    elif len(readouts) > 1:
        diagnostics.append("ports: more than one readout port")

    labels = set()
    for port in spec.ports:
        where = f"port '{port.label}'"
        if port.label in labels:
            diagnostics.append(f"{where}: duplicate port name")
        labels.add(port.label)
        if port.kind not in PORT_KINDS:
            diagnostics.append(f"{where}: unknown port kind '{port.kind}'")
        if port.mode not in kinds:
            diagnostics.append(f"{where}: unknown mode '{port.mode}'")
        elif kinds[port.mode] != "cavity":
            diagnostics.append(f"{where}: ports attach to cavity modes only")
        if not _finite(port.rate) or port.rate < 0:
            diagnostics.append(f"{where}: negative port rate")
        bath = port.bath
        if bath.kind not in BATH_KINDS:
            diagnostics.append(f"{where}: unknown bath kind '{bath.kind}'")
        elif bath.kind == "squeezed" and not _finite(bath.squeeze_r):
            diagnostics.append(f"{where}: non-finite squeeze factor")
        elif bath.kind == "thermal":
            if not _finite(bath.temperature) or bath.temperature < 0:
                diagnostics.append(f"{where}: negative bath temperature")
            if not _finite(bath.omega_m) or bath.omega_m <= 0:
                diagnostics.append(f"{where}: thermal bath needs omega_m > 0")

    names = {signal.name for signal in spec.signals}
    if len(names) > 1:
        diagnostics.append(f"signal: mixed signal names {sorted(names)}")
    for signal in spec.signals:
        where = f"signal on '{signal.mode}'"
        if signal.mode not in kinds:
            diagnostics.append(f"{where}: unknown mode '{signal.mode}'")
        if signal.quadrature not in QUADRATURES:
            diagnostics.append(
                f"{where}: unknown quadrature '{signal.quadrature}'"
            )
        if not _finite(signal.coupling):
            diagnostics.append(f"{where}: non-finite coupling")

    return diagnostics


def _state_labels(spec: NetworkSpec) -> List[str]:
    labels: List[str] = []
    for mode in spec.modes:
        if mode.kind == "mechanical":
            labels += [f"{mode.name}_x", f"{mode.name}_p"]
        else:
            labels += [f"{mode.name}_1", f"{mode.name}_2"]
    return labels


def assemble_system(spec: NetworkSpec) -> QuadratureSystem:
    """
    Compile a network description into its quadrature state-space model.

    Raises:
        SpecValidationError: If ``validate_spec`` reports any diagnostic.
    """
    diagnostics = validate_spec(spec)
    if diagnostics:
        raise SpecValidationError(diagnostics)

    labels = _state_labels(spec)
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)

    def q(mode: str, quadrature: int) -> int:
        return index[f"{mode}_{quadrature + 1}"]

    drift = np.zeros((n, n))
    for term in spec.couplings:
        first, second = term.modes
        if term.kind == "beam-splitter":
            for k in (0, 1):
                drift[q(first, k), q(second, k)] -= term.rate
                drift[q(second, k), q(first, k)] += term.rate
        elif term.kind == "two-mode-squeeze":
            drift[q(first, 0), q(second, 0)] += term.rate
            drift[q(first, 1), q(second, 1)] -= term.rate
            drift[q(second, 0), q(first, 0)] += term.rate
            drift[q(second, 1), q(first, 1)] -= term.rate
        elif term.kind == "linear":
            re, im = term.rate, term.rate_imag
            drift[q(second, 0), q(first, 0)] += re
            drift[q(second, 0), q(first, 1)] -= im
            drift[q(second, 1), q(first, 0)] += im
            drift[q(second, 1), q(first, 1)] += re
        elif term.kind == "position-phase":
            drift[q(first, 1), index[f"{second}_x"]] += term.rate
        elif term.kind == "momentum-kick":
            drift[index[f"{second}_p"], q(first, 0)] += term.rate

    for mode in spec.modes:
        if mode.kind == "mechanical":
            x, p = index[f"{mode.name}_x"], index[f"{mode.name}_p"]
            drift[x, p] += 1.0 / mode.mass
            drift[p, x] -= mode.mass * mode.omega_m**2

    ports = list(spec.ports)
    input_map = np.zeros((n, 2 * len(ports)))
    port_decay = np.zeros((n, n))
    output_map = np.zeros((2, n))
    feedthrough = np.zeros((2, 2 * len(ports)))
    readout_index = 0
    for k, port in enumerate(ports):
        root = math.sqrt(2.0 * port.rate)
        for quadrature in (0, 1):
            row = q(port.mode, quadrature)
            port_decay[row, row] += port.rate
            input_map[row, 2 * k + quadrature] = root
        if port.kind == "readout":
            readout_index = k
            for quadrature in (0, 1):
                output_map[quadrature, q(port.mode, quadrature)] = -root
                feedthrough[quadrature, 2 * k + quadrature] = 1.0
    drift -= port_decay

    signal_map = np.zeros(n)
    for signal in spec.signals:
        mode = spec.mode(signal.mode)
        quadrature = 0 if signal.quadrature == "amplitude" else 1
        if mode.kind == "mechanical":
            row = index[f"{mode.name}_{'x' if quadrature == 0 else 'p'}"]
        else:
            row = q(mode.name, quadrature)
        signal_map[row] += signal.coupling

    system = QuadratureSystem(
        state_labels=tuple(labels),
        drift=drift,
        input_map=input_map,
        output_map=output_map,
        feedthrough=feedthrough,
        signal_map=signal_map,
        port_names=tuple(port.label for port in ports),
        port_baths=tuple(port.bath for port in ports),
        port_decay=port_decay,
        readout_index=readout_index,
        rate_scale=spec.largest_rate(),
        signal_name=spec.signals[0].name if spec.signals else None,
        cavity_modes=tuple(
            mode.name for mode in spec.modes if mode.kind == "cavity"
        ),
    )
    logger.debug(
        f"Assembled '{spec.name or 'network'}': {system.state_dim} states, "
        f"{system.port_count} ports"
    )
    return system
