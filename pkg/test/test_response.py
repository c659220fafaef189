import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.detectors import build_conventional, build_multimode, build_swlc, build_uwlc
from src.model import assemble_system
from src.response import (
    complex_amplitude_transfer,
    delta_detuning,
    ep_indicator,
    minimal_realization,
    multimode_readout,
    pole_trajectory,
    poles,
    pt_check,
    transfer_matrix,
    transfer_matrix_grid,
    trajectory_to_records,
)
from src.utils.errors import EvaluationAtPoleError


def swlc_readout(omega, kappa, chi, gamma, alpha=1.0):
    den = omega**2 + 1j * gamma * omega + chi**2 - kappa**2
    noise = (omega**2 - 1j * gamma * omega + chi**2 - kappa**2) / den
    signal = math.sqrt(2 * gamma) * kappa * alpha / den
    return noise, signal


def test_swlc_matches_closed_form_on_random_triples():
    # Arrange
    rng = np.random.default_rng(7)

    for _ in range(20):
        gamma = rng.uniform(0.1, 10.0)
        kappa = rng.uniform(0.1, 10.0)
        chi = kappa * rng.uniform(0.0, 0.99)
        system = assemble_system(build_swlc(kappa, chi, gamma)).restrict("phase")
        omegas = np.sort(rng.uniform(0.01, 10.0, 50)) * kappa

        # Act
        grid = transfer_matrix_grid(system, omegas)

        # Assert
        noise, signal = swlc_readout(omegas, kappa, chi, gamma)
        assert_allclose(grid.noise[:, 0, 0], noise, rtol=1e-10)
        assert_allclose(grid.signal[:, 0], signal, rtol=1e-10)


def test_conventional_input_output_relation():
    gamma, alpha = 1.5, 0.7
    system = assemble_system(build_conventional(gamma, alpha=alpha))

    for omega in (0.0, 0.3, 4.0):
        tm = transfer_matrix(system, omega)
        expected_noise = (omega - 1j * gamma) / (omega + 1j * gamma)
        expected_signal = (
            -1j * math.sqrt(2 * gamma) * alpha / (omega + 1j * gamma)
        )
        assert tm.entry("quantum") == pytest.approx(expected_noise, rel=1e-12)
        assert tm.signal_entry() == pytest.approx(expected_signal, rel=1e-12)
        assert tm.entry("quantum", "phase", "amplitude") == pytest.approx(0.0)


def test_lossy_conventional_impedance_matched_at_dc():
    system = assemble_system(build_conventional(1.0, 1.0))
    tm = transfer_matrix(system, 0.0)
    assert abs(tm.entry("quantum")) == pytest.approx(0.0, abs=1e-12)
    assert abs(tm.entry("loss_a")) == pytest.approx(1.0)


def test_zero_coupling_gives_zero_signal():
    tm = transfer_matrix(assemble_system(build_conventional(1.0, alpha=0.0)), 0.5)
    assert_allclose(tm.signal, 0.0)


def test_hidden_pole_is_evaluated_on_minimal_realization():
    # Ω = 0 is an eigenvalue of the full drift but not of the readout channel.
    system = assemble_system(build_swlc(2.0, 1.0, 1.0))

    tm = transfer_matrix(system, 0.0, block="phase")

    noise, signal = swlc_readout(0.0, 2.0, 1.0, 1.0)
    assert tm.entry("quantum") == pytest.approx(noise)
    assert tm.signal_entry() == pytest.approx(signal)


def test_visible_pole_raises():
    system = assemble_system(build_swlc(2.0, 2.0, 1.0))
    with pytest.raises(EvaluationAtPoleError):
        transfer_matrix(system, 0.0, block="phase")


def test_non_finite_frequency_rejected():
    system = assemble_system(build_conventional(1.0))
    with pytest.raises(ValueError):
        transfer_matrix(system, float("inf"))


def test_minimal_realization_hides_partner_mode():
    system = assemble_system(build_swlc(2.0, 1.0, 1.0)).restrict("phase")

    reduced = minimal_realization(system)

    assert reduced.order == 2
    assert_allclose(reduced.hidden, [0.0], atol=1e-12)


def test_threshold_poles():
    # Arrange
    gamma = 1.0

    # Act
    pole_set = poles(build_swlc(2.0, 2.0, gamma), block="phase")

    # Assert
    assert pole_set.classification == "marginal"
    grouped = pole_set.grouped()
    assert len(grouped) == 2
    at_zero = [g for g in grouped if abs(g[0]) < 1e-9 * gamma]
    assert at_zero and at_zero[0][1] == 2 and at_zero[0][2] == 1
    damped = [g for g in grouped if g is not at_zero[0]][0]
    assert damped[0] == pytest.approx(-1j * gamma, abs=1e-9 * gamma)
    assert damped[1] == 1


def test_below_threshold_poles():
    pole_set = poles(build_swlc(2.0, 1.0, 1.0), block="phase")
    visible = sorted(pole_set.visible, key=lambda v: v.real)
    assert pole_set.classification == "stable"
    assert_allclose(
        visible,
        [(-math.sqrt(11) - 1j) / 2, (math.sqrt(11) - 1j) / 2],
        atol=1e-12,
    )


stability_cases = [
    ("swlc-below", lambda: build_swlc(1.0, 0.999, 1.0), "stable"),
    ("swlc-at", lambda: build_swlc(1.0, 1.0, 1.0), "marginal"),
    ("swlc-above", lambda: build_swlc(1.0, 1.001, 1.0), "unstable"),
    ("uwlc-zero-chi", lambda: build_uwlc(1.0, 0.0, 1.0), "stable"),
    ("uwlc-small-chi", lambda: build_uwlc(1.0, 0.01, 1.0), "unstable"),
]


@pytest.mark.parametrize(
    "test_id, factory, expected",
    stability_cases,
    ids=[case[0] for case in stability_cases],
)
def test_stability_classification(test_id, factory, expected):
    assert poles(factory(), block="phase").classification == expected


def test_pt_symmetry_only_at_threshold():
    assert pt_check(build_swlc(2.0, 2.0, 1.0)).is_pt_symmetric
    for chi in (0.0, 1.0, 1.999, 2.5):
        report = pt_check(build_swlc(2.0, chi, 1.0))
        assert not report.is_pt_symmetric
        assert report.witness["hub"] == "b"


def test_pt_witness_pairs_sensor_with_partner():
    report = pt_check(build_swlc(3.0, 3.0, 0.5))
    assert report.witness["pairs"] == {"a": "c"}
    assert report.residual <= 1e-9


pt_multimode_cases = [
    ("at-threshold", 1.0, True),
    ("below-threshold", 0.8, False),
]


@pytest.mark.parametrize(
    "test_id, chi_over_kappa, expected",
    pt_multimode_cases,
    ids=[case[0] for case in pt_multimode_cases],
)
def test_pt_check_on_multimode_network(test_id, chi_over_kappa, expected):
    # Arrange: partners c_j follow the conjugate of the sensor dynamics.
    matrix = np.array([[-0.2 + 0.5j, 0.3], [0.3, -0.4 - 0.1j]])
    kappa = 1.5
    spec = build_multimode(
        matrix, [1.0, 0.6], [1.0, 0.5j], kappa, chi_over_kappa * kappa, 1.0
    )

    # Act
    report = pt_check(spec)

    # Assert
    assert report.is_pt_symmetric is expected
    assert report.witness["hub"] == "b"
    if expected:
        assert report.witness["pairs"] == {"a0": "c0", "a1": "c1"}


def test_ep_indicator_grows_near_threshold():
    far = ep_indicator(assemble_system(build_swlc(2.0, 0.0, 1.0)))
    near = ep_indicator(assemble_system(build_swlc(2.0, 2.0 * (1 - 1e-6), 1.0)))

    assert math.isfinite(far)
    assert near > 100 * far


def test_ep_indicator_is_scale_invariant():
    base = ep_indicator(assemble_system(build_swlc(2.0, 1.0, 1.0)))
    scaled = ep_indicator(assemble_system(build_swlc(20.0, 10.0, 10.0)))
    assert scaled == pytest.approx(base, rel=1e-6)


def _random_sensor_problem(rng, n):
    matrix = (
        -np.diag(rng.uniform(0.1, 1.0, n))
        + 1j * np.diag(rng.uniform(-1.0, 1.0, n))
        + 0.2 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    )
    beta = rng.uniform(0.2, 1.0, n)
    alpha = rng.normal(size=n) + 1j * rng.normal(size=n)
    return matrix, beta, alpha


def test_delta_vanishes_at_threshold():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        matrix, beta, _ = _random_sensor_problem(rng, n)
        kappa = rng.uniform(0.5, 2.0)
        omega = rng.uniform(0.1, 3.0)
        assert delta_detuning(matrix, beta, kappa, kappa, omega) == 0


def test_multimode_readout_matches_assembled_network():
    # Arrange
    rng = np.random.default_rng(3)

    for n in (1, 2, 3):
        matrix, beta, alpha = _random_sensor_problem(rng, n)
        kappa, chi, gamma = 1.3, 0.6, 0.8
        system = assemble_system(
            build_multimode(matrix, beta, alpha, kappa, chi, gamma)
        )

        for omega in rng.uniform(0.05, 3.0, 5):
            # Act
            tm = transfer_matrix(system, omega)
            noise, signal = complex_amplitude_transfer(tm, "quantum")

            # Assert
            expected = multimode_readout(
                matrix, beta, alpha, kappa, chi, gamma, omega
            )
            assert noise == pytest.approx(expected[0], rel=1e-10, abs=1e-12)
            assert signal == pytest.approx(expected[1], rel=1e-10, abs=1e-12)


def test_multimode_reduces_to_swlc():
    omega = 0.7
    noise, signal = multimode_readout([[0.0]], [1.0], [1.0], 2.0, 1.0, 1.0, omega)
    expected_noise, _ = swlc_readout(omega, 2.0, 1.0, 1.0)
    assert noise == pytest.approx(expected_noise)
    assert abs(signal) == pytest.approx(abs(swlc_readout(omega, 2.0, 1.0, 1.0)[1]))


def test_pole_trajectory_crosses_threshold():
    kappa = 1.0
    sweep = np.linspace(0.0, 1.2, 13)

    trajectory = pole_trajectory(
        lambda chi: build_swlc(kappa, chi, 1.0), sweep, block="phase"
    )

    classes = [p.classification for p in trajectory]
    assert classes[:10] == ["stable"] * 10
    assert classes[10] == "marginal"
    assert classes[11:] == ["unstable"] * 2
    records = trajectory_to_records(sweep, trajectory)
    assert records[0]["chi_hz"] == 0.0
    assert records[10]["classification"] == "marginal"


def test_pole_trajectory_rejects_bad_sweeps():
    with pytest.raises(ValueError):
        pole_trajectory(lambda chi: build_swlc(1.0, chi, 1.0), [])
    with pytest.raises(ValueError):
        pole_trajectory(lambda chi: build_swlc(1.0, chi, 1.0), [0.1, 0.3, 0.2])


def test_pole_trajectory_warns_on_coarse_steps(caplog):
    with caplog.at_level(logging.WARNING):
        pole_trajectory(lambda chi: build_swlc(1.0, chi, 0.01), [0.0, 0.999])
    assert "refine the sweep" in caplog.text


@pytest.mark.parametrize(
    "factory",
    [
        lambda: build_conventional(1.5, alpha=0.7),
        lambda: build_swlc(2.0, 1.0, 1.0),
        lambda: build_uwlc(2.0, 0.0, 1.0),
    ],
    ids=["conventional", "swlc", "uwlc"],
)
def test_noise_transfer_approaches_feedthrough_at_high_frequency(factory):
    # Arrange
    system = assemble_system(factory())
    omega = 1e6 * system.rate_scale

    # Act
    tm = transfer_matrix(system, omega)

    # Assert
    assert_allclose(tm.noise, system.feedthrough, atol=1e-4)
    assert np.abs(tm.signal).max() < 1e-4
