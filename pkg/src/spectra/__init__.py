from ..spectra.analytic import loss_referred_noise, thermal_psd, uwlc_closed_form
from ..spectra.budget import noise_budget
from ..spectra.psd import (
    PsdBreakdown,
    SpectrumTable,
    frequency_grid,
    output_psd,
    signal_referred_function,
    signal_referred_psd,
)

__all__ = [
    "PsdBreakdown",
    "SpectrumTable",
    "frequency_grid",
    "loss_referred_noise",
    "noise_budget",
    "output_psd",
    "signal_referred_function",
    "signal_referred_psd",
    "thermal_psd",
    "uwlc_closed_form",
]
