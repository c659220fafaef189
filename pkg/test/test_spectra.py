import math

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from src.detectors import build_conventional, build_swlc, build_uwlc
from src.model import BathSpec, SignalSpec, assemble_system
from src.spectra import (
    frequency_grid,
    loss_referred_noise,
    noise_budget,
    output_psd,
    signal_referred_function,
    signal_referred_psd,
    thermal_psd,
    uwlc_closed_form,
)
from src.utils.errors import MissingBathError

OMEGAS = np.logspace(-2, 1, 40)


def test_frequency_grid_is_log_spaced_in_rad_per_second():
    grid = frequency_grid(1.0, 1e4, 5)

    assert_allclose(grid, 2 * math.pi * np.array([1, 10, 100, 1e3, 1e4]))


@pytest.mark.parametrize(
    "f_min, f_max, points",
    [(0.0, 1.0, 10), (10.0, 1.0, 10), (1.0, 10.0, 1)],
    ids=["zero-min", "reversed", "single-point"],
)
def test_frequency_grid_rejects_bad_ranges(f_min, f_max, points):
    with pytest.raises(ValueError):
        frequency_grid(f_min, f_max, points)


def test_lossless_swlc_readout_is_vacuum_limited():
    system = assemble_system(build_swlc(2.0, 1.5, 1.0))

    for omega in (0.1, 1.0, 7.0):
        breakdown = output_psd(system, None, omega)
        assert breakdown.total == pytest.approx(1.0, rel=1e-12)
        assert list(breakdown.contributions) == ["quantum"]


def test_squeezed_readout_bath_scales_phase_noise():
    bath = BathSpec.squeezed(math.log(2.0) / 2)
    system = assemble_system(build_swlc(2.0, 1.5, 1.0, readout_bath=bath))

    assert output_psd(system, None, 0.4).total == pytest.approx(0.5)
    assert output_psd(system, None, 0.4, "amplitude").total == pytest.approx(2.0)


def test_conventional_signal_referred_psd():
    gamma, alpha = 1.5, 0.5
    system = assemble_system(build_conventional(gamma, alpha=alpha))

    table = signal_referred_psd(system, None, OMEGAS)

    expected = (OMEGAS**2 + gamma**2) / (2 * gamma * alpha**2)
    assert_allclose(table.signal_referred, expected, rtol=1e-10)


def test_swlc_signal_referred_psd_matches_closed_form():
    # Arrange
    kappa, chi, gamma, alpha = 3.0, 2.0, 0.7, 1.3
    system = assemble_system(build_swlc(kappa, chi, gamma, alpha=alpha))

    # Act
    table = signal_referred_psd(system, None, OMEGAS)

    # Assert
    expected = (
        (OMEGAS**2 - kappa**2 + chi**2) ** 2 + gamma**2 * OMEGAS**2
    ) / (2 * gamma * kappa**2 * alpha**2)
    assert_allclose(table.signal_referred, expected, rtol=1e-10)


def test_swlc_on_baseline_beats_conventional_at_low_frequency():
    gamma = 1.0
    kappa = 10.0 * gamma
    chi = math.sqrt(kappa**2 - gamma**2)
    omegas = np.array([1e-3, 1e-2])

    swlc = signal_referred_psd(
        assemble_system(build_swlc(kappa, chi, gamma)), None, omegas
    )
    conventional = signal_referred_psd(
        assemble_system(build_conventional(gamma)), None, omegas
    )

    ratio = swlc.signal_referred / conventional.signal_referred
    assert_allclose(ratio, 0.01, rtol=1e-3)


def test_uwlc_budget_matches_closed_form():
    # Arrange
    kappa, chi, gamma = 2.0, 1.0, 1.0
    gamma_m, omega_m, temperature = 1e-15, 1e-3, 4.0
    spec = build_uwlc(
        kappa,
        chi,
        gamma,
        gamma_m=gamma_m,
        temperature=temperature,
        omega_m=omega_m,
    )

    # Act
    table = noise_budget(spec, OMEGAS)

    # Assert
    shot, thermal = uwlc_closed_form(
        gamma, gamma_m, kappa, chi, 1.0, temperature, omega_m / gamma_m, OMEGAS
    )
    assert_allclose(table.signal_referred_source("quantum"), shot, rtol=1e-6)
    assert_allclose(table.signal_referred_source("thermal"), thermal, rtol=1e-6)
    assert_allclose(table.signal_referred, shot + thermal, rtol=1e-6)


def test_uwlc_closed_form_without_bath():
    shot, thermal = uwlc_closed_form(1.0, 0.0, 2.0, 1.0, 1.0, 4.0, 1e9, 0.5)

    ratio = (0.25 + 1.0 - 4.0) / (0.25 + 1.0)
    assert shot == pytest.approx((1.0 + 0.25 * ratio**2) / 2.0)
    assert thermal == 0.0


def test_uwlc_shot_noise_at_dc_is_half_the_readout_rate():
    shot, _ = uwlc_closed_form(3.0, 0.0, 2.0, 1.0, 1.0, 0.0, 1.0, 0.0)

    assert shot == pytest.approx(1.5)


def test_uwlc_closed_form_is_blind_at_dc_without_squeezing():
    # Arrange
    omegas = np.array([0.0, 0.5])

    # Act
    shot, thermal = uwlc_closed_form(1.0, 1e-3, 2.0, 0.0, 1.0, 4.0, 1e3, omegas)

    # Assert
    assert shot[0] == math.inf
    assert shot[1] == pytest.approx((1.0 + (0.25 - 4.0) ** 2 / 0.25) / 2.0)
    assert_allclose(thermal, 0.0)
    assert uwlc_closed_form(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0)[0] == 0.5


@pytest.mark.parametrize(
    "mode, term",
    [("a", "gamma_a"), ("b", "gamma_b"), ("c", "gamma_c")],
    ids=["sensor-loss", "amplifier-loss", "partner-loss"],
)
def test_loss_sources_follow_injection_estimate(mode, term):
    # Arrange
    kappa, chi, gamma, loss = 2.0, 1.5, 1.0, 1e-3
    spec = build_swlc(kappa, chi, gamma, losses={"a": loss, "b": loss, "c": loss})
    omegas = np.logspace(-1, 1, 20)
    rates = {"gamma_a": 0.0, "gamma_b": 0.0, "gamma_c": 0.0, term: loss}

    # Act
    table = noise_budget(spec, omegas)

    # Assert
    expected = loss_referred_noise(
        rates["gamma_a"],
        rates["gamma_b"],
        rates["gamma_c"],
        1.0,
        1.0,
        1.0,
        kappa,
        chi,
        1.0,
        omegas,
    )
    assert_allclose(table.signal_referred_source(f"loss_{mode}"), expected, rtol=1e-3)


def test_loss_referred_noise_validation():
    with pytest.raises(ValueError):
        loss_referred_noise(1, 1, 1, 1, 1, 1, 0.0, 1, 1, 1.0)
    with pytest.raises(ValueError):
        loss_referred_noise(-1, 1, 1, 1, 1, 1, 1.0, 1, 1, 1.0)


def test_thermal_psd_value():
    value = thermal_psd(4.0, 2 * math.pi * 1e5)

    assert value == pytest.approx(1.667e6, rel=1e-3)
    assert thermal_psd(4.0, 2 * math.pi * 1e5, vacuum_floor=True) == value + 1.0
    with pytest.raises(ValueError):
        thermal_psd(4.0, 0.0)


def test_spectrum_csv_layout(tmp_path):
    # Arrange
    spec = build_swlc(2.0, 1.0, 1.0, losses={"a": 0.01})
    table = noise_budget(spec, frequency_grid(0.1, 10.0, 8))
    path = tmp_path / "run_spectrum.csv"

    # Act
    table.write_csv(path)

    # Assert
    frame = pd.read_csv(path)
    assert list(frame.columns) == [
        "freq_hz",
        "total",
        "signal_transfer_sq",
        "src:quantum",
        "src:loss_a",
        "signal_referred",
    ]
    assert len(frame) == 8
    assert_allclose(frame["freq_hz"], table.freq_hz, rtol=1e-15)
    assert list(tmp_path.iterdir()) == [path]


def test_missing_bath_is_reported():
    system = assemble_system(build_swlc(2.0, 1.0, 1.0, losses={"c": 0.1}))

    with pytest.raises(MissingBathError) as error:
        signal_referred_psd(system, {"quantum": BathSpec.vacuum()}, OMEGAS)
    assert error.value.port == "loss_c"


def test_blind_readout_gives_infinite_psd(caplog):
    # Amplitude forcing never reaches the phase readout of a single cavity.
    spec = build_conventional(1.0).replace(
        signals=(SignalSpec("a", "amplitude", 1.0),)
    )

    table = signal_referred_psd(assemble_system(spec), None, [0.5, 1.0])

    assert np.all(np.isinf(table.signal_referred))
    assert "vanishes" in caplog.text


def test_signal_referred_function_handles_scalars_and_arrays():
    system = assemble_system(build_conventional(2.0))
    spectrum = signal_referred_function(system)

    assert spectrum(1.0) == pytest.approx(5.0 / 4.0)
    assert_allclose(spectrum(np.array([0.0, 2.0])), [1.0, 2.0])


def test_signal_referred_psd_needs_signal():
    spec = build_conventional(1.0).replace(signals=())

    with pytest.raises(ValueError):
        signal_referred_psd(assemble_system(spec), None, OMEGAS)
