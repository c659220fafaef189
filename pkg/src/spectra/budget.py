import logging
from typing import Optional, Sequence

from src.model import NetworkSpec, assemble_system
from src.spectra.psd import SpectrumTable, signal_referred_psd

logger = logging.getLogger(__name__)


def noise_budget(
    spec: NetworkSpec,
    omegas: Sequence[float],
    name: Optional[str] = None,
) -> SpectrumTable:
    """
    Signal-referred noise budget of a detector build, one source per port.

    Sources are named after the ports of the build (``quantum`` for the
    readout, ``thermal`` for the c-oscillator bath, ``loss_<mode>`` for
    mode losses) with the baths declared on them.
    """
    system = assemble_system(spec)
    table = signal_referred_psd(
        system, None, omegas, name=name if name is not None else spec.name
    )
    for source in table.sources:
        logger.debug(
            f"Budget '{table.name}': source {source}, peak readout PSD "
            f"{table.sources[source].max():.4g}"
        )
    logger.info(
        f"Noise budget '{table.name}' over {len(table.omegas)} points with "
        f"{len(table.sources)} source(s)"
    )
    return table
