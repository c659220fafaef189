from ..metrics.figures import (
    LossBudget,
    coherent_energy_variance,
    eql_ratio,
    gain_lambda,
    lambda_max_thermal,
    loss_budget_check,
    scan_rate,
    sensitivity_integral,
    single_cavity_scan_rate,
    swlc_axion_scan_rate,
)
from ..metrics.integrals import (
    FigureOfMerit,
    integrated_inverse_psd,
    log_quadrature,
    resonances_of,
    slowest_rate,
)

__all__ = [
    "FigureOfMerit",
    "LossBudget",
    "coherent_energy_variance",
    "eql_ratio",
    "gain_lambda",
    "integrated_inverse_psd",
    "lambda_max_thermal",
    "log_quadrature",
    "loss_budget_check",
    "resonances_of",
    "scan_rate",
    "sensitivity_integral",
    "single_cavity_scan_rate",
    "slowest_rate",
    "swlc_axion_scan_rate",
]
