import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.model import (
    BathSpec,
    CouplingTerm,
    ModeSpec,
    NetworkSpec,
    PortSpec,
    SignalSpec,
    assemble_system,
    port_count,
    state_dim,
    validate_spec,
)
from src.utils.errors import SpecValidationError

KAPPA, CHI, GAMMA = 2.0, 1.0, 1.0


def swlc_spec(kappa=KAPPA, chi=CHI, gamma=GAMMA, alpha=1.0):
    return NetworkSpec(
        modes=(ModeSpec("a"), ModeSpec("b"), ModeSpec("c")),
        couplings=(
            CouplingTerm("beam-splitter", ("a", "b"), kappa),
            CouplingTerm("two-mode-squeeze", ("b", "c"), chi),
        ),
        ports=(PortSpec("readout", "b", gamma),),
        signals=(SignalSpec("a", "phase", alpha),),
        name="swlc",
    )


def test_valid_spec_has_no_diagnostics():
    assert validate_spec(swlc_spec()) == []


invalid_cases = [
    (
        "duplicate-mode",
        dict(modes=(ModeSpec("a"), ModeSpec("a"))),
        "duplicate mode name",
    ),
    (
        "unknown-mode",
        dict(couplings=(CouplingTerm("beam-splitter", ("a", "z"), 1.0),)),
        "unknown mode 'z'",
    ),
    (
        "negative-rate",
        dict(couplings=(CouplingTerm("two-mode-squeeze", ("b", "c"), -1.0),)),
        "negative coupling rate",
    ),
    ("no-readout", dict(ports=()), "no readout port"),
    (
        "two-readouts",
        dict(
            ports=(
                PortSpec("readout", "a", 1.0, name="r1"),
                PortSpec("readout", "b", 1.0, name="r2"),
            )
        ),
        "more than one readout port",
    ),
    (
        "negative-port-rate",
        dict(ports=(PortSpec("readout", "b", -1.0),)),
        "negative port rate",
    ),
    (
        "thermal-without-frequency",
        dict(
            ports=(
                PortSpec("readout", "b", 1.0),
                PortSpec("loss", "c", 1.0, BathSpec.thermal(4.0, 0.0)),
            )
        ),
        "thermal bath needs omega_m > 0",
    ),
]


@pytest.mark.parametrize(
    "test_id, changes, expected",
    invalid_cases,
    ids=[case[0] for case in invalid_cases],
)
def test_validate_spec_reports_each_rule(test_id, changes, expected):
    # Arrange
    spec = swlc_spec().replace(**changes)

    # Act
    diagnostics = validate_spec(spec)

    # Assert
    assert any(expected in item for item in diagnostics), diagnostics


def test_assemble_rejects_invalid_spec():
    with pytest.raises(SpecValidationError) as info:
        assemble_system(swlc_spec().replace(ports=()))
    assert "no readout port" in str(info.value)
    assert info.value.diagnostics


def test_swlc_phase_block_drift():
    system = assemble_system(swlc_spec())
    phase = system.restrict("phase")

    assert phase.state_labels == ("a_2", "b_2", "c_2")
    expected = np.array(
        [
            [0.0, -KAPPA, 0.0],
            [KAPPA, -GAMMA, -CHI],
            [0.0, -CHI, 0.0],
        ]
    )
    assert_allclose(phase.drift, expected)


def test_swlc_amplitude_block_drift():
    amplitude = assemble_system(swlc_spec()).restrict("amplitude")
    expected = np.array(
        [
            [0.0, -KAPPA, 0.0],
            [KAPPA, -GAMMA, CHI],
            [0.0, CHI, 0.0],
        ]
    )
    assert_allclose(amplitude.drift, expected)


def test_readout_maps_and_signal():
    system = assemble_system(swlc_spec(alpha=0.5))
    root = math.sqrt(2.0 * GAMMA)

    assert state_dim(system) == 6
    assert port_count(system) == 1
    assert system.port_names == ("readout",)
    assert system.input_map[system.state_index("b_1"), 0] == pytest.approx(root)
    assert system.input_map[system.state_index("b_2"), 1] == pytest.approx(root)
    assert system.output_map[1, system.state_index("b_2")] == pytest.approx(-root)
    assert_allclose(system.feedthrough, np.eye(2))
    assert system.signal_map[system.state_index("a_2")] == 0.5
    assert system.signal_name == "h"


def test_port_free_drift_removes_decay():
    system = assemble_system(swlc_spec())
    free = system.port_free_drift()
    assert free[system.state_index("b_2"), system.state_index("b_2")] == 0.0


def test_mechanical_pair_and_optomechanical_terms():
    spec = NetworkSpec(
        modes=(ModeSpec("a"), ModeSpec("m", "mechanical", 2.0, 3.0)),
        couplings=(
            CouplingTerm("position-phase", ("a", "m"), 0.7),
            CouplingTerm("momentum-kick", ("a", "m"), 0.4),
        ),
        ports=(PortSpec("readout", "a", 1.0),),
        signals=(SignalSpec("m", "amplitude", 1.0),),
    )
    system = assemble_system(spec)
    x, p = system.state_index("m_x"), system.state_index("m_p")
    a1, a2 = system.state_index("a_1"), system.state_index("a_2")

    assert system.drift[x, p] == pytest.approx(0.5)
    assert system.drift[p, x] == pytest.approx(-2.0 * 9.0)
    assert system.drift[a2, x] == pytest.approx(0.7)
    assert system.drift[p, a1] == pytest.approx(0.4)
    assert system.signal_map[x] == 1.0
    with pytest.raises(ValueError):
        system.restrict("phase")


def test_linear_coupling_is_complex_rate():
    spec = NetworkSpec(
        modes=(ModeSpec("a"), ModeSpec("d")),
        couplings=(CouplingTerm("linear", ("a", "d"), 0.3, 0.2),),
        ports=(PortSpec("readout", "d", 1.0),),
    )
    system = assemble_system(spec)
    rows = [system.state_index("d_1"), system.state_index("d_2")]
    cols = [system.state_index("a_1"), system.state_index("a_2")]
    assert_allclose(system.drift[np.ix_(rows, cols)], [[0.3, -0.2], [0.2, 0.3]])


def test_system_arrays_are_read_only():
    system = assemble_system(swlc_spec())
    with pytest.raises(ValueError):
        system.drift[0, 0] = 1.0


bath_cases = [
    ("vacuum", BathSpec.vacuum(), (1.0, 1.0)),
    ("squeezed", BathSpec.squeezed(0.5), (math.e, 1.0 / math.e)),
    ("thermal", BathSpec.thermal(4.0, 2 * math.pi * 1e5), (1.667e6, 1.667e6)),
]


@pytest.mark.parametrize(
    "test_id, bath, expected",
    bath_cases,
    ids=[case[0] for case in bath_cases],
)
def test_bath_psd(test_id, bath, expected):
    assert bath.psd() == pytest.approx(expected, rel=1e-3)


def test_thermal_floor_adds_one():
    plain = BathSpec.thermal(4.0, 1e5).psd()[0]
    floored = BathSpec.thermal(4.0, 1e5, vacuum_floor=True).psd()[0]
    assert floored - plain == pytest.approx(1.0)


def test_spec_json_round_trip():
    # Arrange
    text = json.dumps(
        {
            "name": "lossy",
            "modes": [{"name": "a"}, {"name": "b"}, {"name": "c"}],
            "couplings": [
                {"kind": "beam-splitter", "modes": ["a", "b"], "rate_hz": 2.0},
                {"kind": "two-mode-squeeze", "modes": ["b", "c"], "rate_hz": 1.5},
            ],
            "ports": [
                {"kind": "readout", "mode": "b", "rate_hz": 1.0},
                {
                    "kind": "loss",
                    "mode": "c",
                    "rate_hz": 0.01,
                    "bath": {"kind": "squeezed", "squeeze_r": 0.3},
                },
            ],
            "signal": {"mode": "a", "quadrature": "phase", "coupling": 1.0},
        }
    )

    # Act
    spec = NetworkSpec.from_json(text)
    again = NetworkSpec.from_json(spec.to_json())

    # Assert
    assert spec.couplings[0].rate == pytest.approx(2 * math.pi * 2.0)
    assert again.mode_names == ["a", "b", "c"]
    assert [p.label for p in again.ports] == ["readout", "loss_c"]
    assert again.ports[1].bath == BathSpec.squeezed(0.3)
    assert again.signals == spec.signals
    for before, after in zip(spec.couplings, again.couplings):
        assert after.rate == pytest.approx(before.rate, rel=1e-15)


def test_signal_list_accepted():
    data = json.loads(swlc_spec().to_json())
    data["signal"] = [
        {"mode": "a", "quadrature": "phase", "coupling": 1.0},
        {"mode": "c", "quadrature": "amplitude", "coupling": 2.0},
    ]
    spec = NetworkSpec.from_dict(data)
    assert len(spec.signals) == 2
    assert isinstance(spec.to_dict()["signal"], list)


def test_largest_rate_scales_tolerances():
    assert swlc_spec(kappa=5.0).largest_rate() == 5.0
    assert NetworkSpec(modes=(ModeSpec("a"),)).largest_rate() == 1.0


def random_spec(seed, terms=6, modes=4):
    """Cavity-only network with random beam-splitter, squeeze and loss terms."""
    rng = np.random.default_rng(seed)
    names = [f"m{i}" for i in range(modes)]
    couplings = []
    for _ in range(terms):
        first, second = rng.choice(modes, size=2, replace=False)
        kind = rng.choice(["beam-splitter", "two-mode-squeeze", "linear"])
        couplings.append(
            CouplingTerm(
                str(kind), (names[first], names[second]), float(rng.uniform(0.1, 3.0))
            )
        )
    lossy = [name for name in names[1:] if rng.random() < 0.5]
    ports = (PortSpec("readout", names[0], float(rng.uniform(0.5, 2.0))),) + tuple(
        PortSpec("loss", name, float(rng.uniform(0.0, 0.2))) for name in lossy
    )
    return NetworkSpec(
        modes=tuple(ModeSpec(name) for name in names),
        couplings=tuple(couplings),
        ports=ports,
        signals=(SignalSpec(names[-1], "phase", 1.0),),
    )


@pytest.mark.parametrize("seed", range(10))
def test_random_networks_decouple_into_quadrature_blocks(seed):
    # Arrange
    system = assemble_system(random_spec(seed))
    amplitude = [i for i, lab in enumerate(system.state_labels) if lab.endswith("_1")]
    phase = [i for i, lab in enumerate(system.state_labels) if lab.endswith("_2")]

    # Act
    cross = [
        system.drift[np.ix_(amplitude, phase)],
        system.drift[np.ix_(phase, amplitude)],
    ]

    # Assert
    for block in cross:
        assert np.all(block == 0.0)
    assert system.restrict("phase").state_dim == len(phase)
    assert system.restrict("amplitude").state_dim == len(amplitude)


@pytest.mark.parametrize("seed", range(10))
def test_each_term_has_its_symmetry(seed):
    spec = random_spec(seed)

    for term in spec.couplings:
        if term.kind == "linear":
            continue
        system = assemble_system(spec.replace(couplings=(term,)))
        drift = system.port_free_drift()
        first, second = term.modes

        for suffix, sign in (("_1", 1.0), ("_2", -1.0)):
            i = system.state_index(first + suffix)
            j = system.state_index(second + suffix)
            if term.kind == "beam-splitter":
                assert drift[i, j] == pytest.approx(-term.rate)
                assert drift[j, i] == pytest.approx(term.rate)
            else:
                assert drift[i, j] == pytest.approx(sign * term.rate)
                assert drift[j, i] == pytest.approx(sign * term.rate)
        assert np.count_nonzero(drift) == 4


@pytest.mark.parametrize("seed", range(10))
def test_assembly_is_additive_over_disjoint_terms(seed):
    # Arrange
    spec = random_spec(seed, terms=8)
    head, tail = spec.couplings[:3], spec.couplings[3:]

    # Act
    whole = assemble_system(spec)
    left = assemble_system(spec.replace(couplings=head))
    right = assemble_system(spec.replace(couplings=tail))
    bare = assemble_system(spec.replace(couplings=()))

    # Assert
    assert_allclose(whole.drift, left.drift + right.drift - bare.drift, atol=1e-12)
    assert_allclose(whole.input_map, left.input_map)
    assert_allclose(whole.output_map, right.output_map)
    assert_allclose(whole.feedthrough, bare.feedthrough)
