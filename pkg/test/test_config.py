import json
from pathlib import Path

import pytest

from src.cli import GridConfig, OutputConfig, RunConfig
from src.cli.run_config import get_bool_config, get_float_config, get_int_config
from src.detectors import build_from_config
from src.utils import Config
from src.utils.errors import ConfigError

EXAMPLES = sorted((Path(__file__).parent.parent / "example").glob("*.json"))


def test_dotted_lookup_and_missing_keys(caplog):
    config = Config(data={"detector": {"kind": "swlc", "losses_hz": {"a": 0.1}}})

    assert config.get_config("detector", "losses_hz.a") == 0.1
    assert config.get_config("detector", "losses_hz.b") is None
    assert "not found" in caplog.text


override_cases = [
    ("number", "detector.chi_hz=0.25", ("detector", "chi_hz"), 0.25),
    ("boolean", "strict_stability=true", ("strict_stability", ""), True),
    ("list", "sweep.axes.chi_hz=[0, 1]", ("sweep", "axes.chi_hz"), [0, 1]),
    ("plain-string", "output.directory=runs/a", ("output", "directory"), "runs/a"),
]


@pytest.mark.parametrize(
    "test_id, assignment, key, expected",
    override_cases,
    ids=[case[0] for case in override_cases],
)
def test_overrides_parse_json_literals(test_id, assignment, key, expected):
    # Arrange
    config = Config(data={"detector": {"chi_hz": 1.0}})
    config.get_config(*key)

    # Act
    config.apply_override(assignment)

    # Assert
    assert config.get_config(*key) == expected


def test_override_needs_assignment():
    with pytest.raises(ConfigError):
        Config(data={}).apply_override("detector.chi_hz")


def test_config_does_not_alias_input():
    data = {"detector": {"chi_hz": 1.0}}
    config = Config(data=data)

    config.apply_override("detector.chi_hz=2.0")
    config.section("detector")["chi_hz"] = 3.0

    assert data["detector"]["chi_hz"] == 1.0
    assert config.get_config("detector", "chi_hz") == 2.0


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "command": "gain",\n  "detector": }', encoding="utf-8")

    with pytest.raises(ConfigError) as error:
        Config(str(path))
    assert error.value.line == 3


def test_top_level_must_be_object(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")

    with pytest.raises(ConfigError):
        Config(str(path))


def test_typed_getters():
    config = Config(data={"grid": {"points": 10.0, "bad": 2.5, "name": "x"}})

    assert get_int_config(config, "grid", "points", 5) == 10
    assert get_int_config(config, "grid", "absent", 5) == 5
    assert get_float_config(config, "grid", "absent", 1.5) == 1.5
    with pytest.raises(ConfigError):
        get_int_config(config, "grid", "bad", 5)
    with pytest.raises(ConfigError):
        get_float_config(config, "grid", "name", 1.0)


@pytest.mark.parametrize(
    "value, expected",
    [
        (True, True),
        (False, False),
        ("false", False),
        ("No", False),
        ("0", False),
        ("yes", True),
        (1, True),
    ],
    ids=[
        "json-true",
        "json-false",
        "string-false",
        "string-no",
        "string-zero",
        "string-yes",
        "one",
    ],
)
def test_strict_stability_parses_booleans(value, expected):
    # Arrange
    data = {"detector": {"kind": "swlc"}, "strict_stability": value}

    # Act
    run = RunConfig.from_dict(data)

    # Assert
    assert run.strict_stability is expected


def test_bool_getter_rejects_other_words():
    config = Config(data={"flags": {"strict": "maybe"}})

    assert get_bool_config(config, "flags", "absent", True) is True
    with pytest.raises(ConfigError):
        get_bool_config(config, "flags", "strict", False)


def test_run_config_round_trip():
    run = RunConfig(
        command="sweep",
        detector={"kind": "swlc", "kappa_hz": 1.0, "gamma_r_hz": 1.0},
        grid=GridConfig(0.1, 100.0, 50),
        sweep={"axes": {"chi_hz": [0.1, 0.2]}, "metric": "lambda"},
        output=OutputConfig("out", "threshold"),
        strict_stability=True,
        reference={"kind": "conventional", "gamma_r_hz": 1.0},
    )

    assert RunConfig.from_dict(run.to_dict()) == run
    assert "reference" not in RunConfig(detector={"kind": "swlc"}).to_dict()


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(f_min_hz=0.0),
        dict(f_min_hz=10.0, f_max_hz=1.0),
        dict(points=1),
    ],
    ids=["zero-min", "reversed", "single-point"],
)
def test_grid_config_validation(kwargs):
    with pytest.raises(ConfigError):
        GridConfig(**kwargs)


def test_run_config_rejects_unknown_command():
    with pytest.raises(ConfigError):
        RunConfig(command="plot", detector={"kind": "swlc"})


def test_output_paths(tmp_path):
    output = OutputConfig(str(tmp_path / "nested" / "dir"), "gw")

    output.ensure_writable()

    assert output.path("gain.json").endswith("gw_gain.json")
    assert (tmp_path / "nested" / "dir").is_dir()


@pytest.mark.parametrize("path", EXAMPLES, ids=[p.stem for p in EXAMPLES])
def test_example_configs_load(path):
    # Arrange
    document = json.loads(path.read_text(encoding="utf-8"))

    # Act
    run = RunConfig.from_config(Config(str(path)))

    # Assert
    assert run.command == document["command"]
    assert RunConfig.from_dict(run.to_dict()) == run
    if run.detector:
        assert build_from_config(run.detector).readout.rate > 0
