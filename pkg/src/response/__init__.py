from ..response.multimode import (
    complex_amplitude_transfer,
    delta_detuning,
    multimode_readout,
)
from ..response.poles import (
    Pole,
    PoleSet,
    pole_trajectory,
    poles,
    trajectory_to_records,
)
from ..response.realization import MinimalRealization, minimal_realization
from ..response.symmetry import PTReport, ep_indicator, pt_check
from ..response.transfer import (
    TransferGrid,
    TransferMatrix,
    transfer_matrix,
    transfer_matrix_grid,
)

__all__ = [
    "MinimalRealization",
    "PTReport",
    "Pole",
    "PoleSet",
    "TransferGrid",
    "TransferMatrix",
    "complex_amplitude_transfer",
    "delta_detuning",
    "ep_indicator",
    "minimal_realization",
    "multimode_readout",
    "pole_trajectory",
    "poles",
    "pt_check",
    "trajectory_to_records",
    "transfer_matrix",
    "transfer_matrix_grid",
]
