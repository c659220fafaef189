# Programmatic use of the simulator, without the command line.

import logging

from src.detectors import build_conventional, build_swlc
from src.metrics import gain_lambda, sensitivity_integral
from src.model import assemble_system
from src.response import pt_check
from src.spectra import frequency_grid, noise_budget
from src.ui import setup_logging
from src.utils import hz_to_rad

setup_logging(logging.INFO)

kappa, gamma_r = hz_to_rad(5000.0), hz_to_rad(500.0)
conventional = sensitivity_integral(assemble_system(build_conventional(gamma_r)))

for chi_hz in (0.0, 2500.0, 4500.0, 4930.0):
    spec = build_swlc(kappa, hz_to_rad(chi_hz), gamma_r)
    amplified = sensitivity_integral(assemble_system(spec))
    report = pt_check(spec)
    print(
        f"chi = {chi_hz:7.1f} Hz  Lambda = {gain_lambda(amplified, conventional):8.3f}"
        f"  PT = {report.is_pt_symmetric}"
    )

table = noise_budget(build_swlc(kappa, hz_to_rad(4930.0), gamma_r), frequency_grid(1, 1e4, 200))
print(table.to_frame().head())
