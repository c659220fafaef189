import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional

from src.utils import Config
from src.utils.errors import ConfigError

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "poles", "gain", "scan-rate", "optimize", "sweep")
TRUE_WORDS = ("true", "yes", "on", "1")
FALSE_WORDS = ("false", "no", "off", "0")


def get_float_config(
    config: Config, section: str, option: str, default: float
) -> float:
    """
    Retrieves a float value from the configuration.
    If the value is missing, returns the default; invalid values are errors.
    """
    value = config.get_config(section, option)
    if value is None:
        logger.warning(
            f"Missing number for [{section}] {option}, using default {default}."
        )
        return default
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"[{section}] {option} must be a number, got {value!r}")


def get_int_config(
    config: Config, section: str, option: str, default: int
) -> int:
    """
    Retrieves an integer value from the configuration.
    If the value is missing, returns the default; invalid values are errors.
    """
    value = config.get_config(section, option)
    if value is None:
        logger.warning(
            f"Missing integer for [{section}] {option}, using default {default}."
        )
        return default
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {option} must be an integer, got {value!r}")
    if int(value) != value:
        raise ConfigError(f"[{section}] {option} must be an integer, got {value!r}")
    return int(value)


def get_str_config(
    config: Config, section: str, option: str, default: str
) -> str:
    """
    Retrieves a string value from the configuration.
    If the value is missing, returns the default.
    """
    value = config.get_config(section, option)
    if value is None:
        logger.warning(
            f"Missing string for [{section}] {option}, using default '{default}'."
        )
        return default
    return str(value)


def get_bool_config(
    config: Config, section: str, option: str, default: bool
) -> bool:
    """
    Retrieves a boolean value from the configuration.
    Accepts JSON booleans and the strings true/false, yes/no, on/off, 1/0.
    """
    value = config.get_config(section, option)
    if value is None:
        return default
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in TRUE_WORDS:
        return True
    if text in FALSE_WORDS:
        return False
    raise ConfigError(f"[{section}] {option} must be a boolean, got {value!r}")


@dataclass(frozen=True)
class GridConfig:
    f_min_hz: float = 1.0
    f_max_hz: float = 1e4
    points: int = 1000

    def __post_init__(self):
        if not 0 < self.f_min_hz < self.f_max_hz:
            raise ConfigError(
                f"grid needs 0 < f_min_hz < f_max_hz, got "
                f"{self.f_min_hz} and {self.f_max_hz}"
            )
        if self.points < 2:
            raise ConfigError(f"grid needs at least 2 points, got {self.points}")


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "results"
    basename: str = "run"

    def path(self, suffix: str) -> str:
        return os.path.join(self.directory, f"{self.basename}_{suffix}")

    def ensure_writable(self) -> None:
        """
        Raises:
            ConfigError: If the directory cannot be created or written.
        """
        try:
            os.makedirs(self.directory, exist_ok=True)
        except OSError as e:
            raise ConfigError(f"cannot create output directory: {e}")
        if not os.access(self.directory, os.W_OK):
            raise ConfigError(f"output directory not writable: {self.directory}")


@dataclass(frozen=True)
class RunConfig:
    """
    One simulator run: the command, the detector section and the
    command-specific settings. Frequencies are in Hz throughout.
    """

    command: str = "spectrum"
    detector: Dict[str, Any] = field(default_factory=dict)
    grid: GridConfig = field(default_factory=GridConfig)
    sweep: Dict[str, Any] = field(default_factory=dict)
    optimizer: Dict[str, Any] = field(default_factory=dict)
    output: OutputConfig = field(default_factory=OutputConfig)
    strict_stability: bool = False
    reference: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(
                f"unknown command '{self.command}', expected one of {COMMANDS}"
            )

    @classmethod
    def from_config(
        cls, config: Config, command: Optional[str] = None
    ) -> "RunConfig":
        """
        Build a RunConfig from a loaded Config; ``command`` overrides the
        document's own ``command``.
        """
        command = command or get_str_config(config, "command", "", "spectrum")
        detector = config.section("detector")
        if command != "optimize" and not detector:
            raise ConfigError("config has no 'detector' section")
        grid = GridConfig(
            f_min_hz=get_float_config(config, "grid", "f_min_hz", 1.0),
            f_max_hz=get_float_config(config, "grid", "f_max_hz", 1e4),
            points=get_int_config(config, "grid", "points", 1000),
        )
        output = OutputConfig(
            directory=get_str_config(config, "output", "directory", "results"),
            basename=get_str_config(config, "output", "basename", "run"),
        )
        return cls(
            command=command,
            detector=detector,
            grid=grid,
            sweep=config.section("sweep"),
            optimizer=config.section("optimizer"),
            output=output,
            strict_stability=get_bool_config(
                config, "strict_stability", "", False
            ),
            reference=config.section("reference") or None,
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        return cls.from_config(Config(data=data))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if self.reference is None:
            del data["reference"]
        return data
