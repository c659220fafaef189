import copy
import json
import logging
import os
from functools import lru_cache
from typing import Any, Dict, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)


class Config:
    """
    A class to manage the JSON run configuration of the simulator.
    """

    def __init__(
        self,
        config_file: Optional[str] = None,
        data: Optional[Dict[str, Any]] = None,
    ):
        """
        Initialize the Config class from a JSON file or an in-memory dict.

        Raises:
            ConfigError: If the file is missing, unreadable or not valid JSON.
        """
        self.config: Dict[str, Any] = {}
        self._config_cache = lru_cache(maxsize=None)(self._cache_config_value)

        if config_file is not None:
            self.config = self._read(self._get_absolute_path(config_file))
        elif data is not None:
            self.config = copy.deepcopy(data)

    @staticmethod
    def _get_absolute_path(path: str) -> str:
        return os.path.abspath(os.path.expanduser(path))

    @staticmethod
    def _read(path: str) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                document = json.load(handle)
        except FileNotFoundError as e:
            logger.error(f"Error reading config file: {str(e)}")
            raise ConfigError(f"config file not found: {path}") from e
        except json.JSONDecodeError as e:
            logger.error(f"Error parsing config file {path}: {e.msg}")
            raise ConfigError(
                f"malformed JSON in {path}: {e.msg}", e.lineno, e.colno
            ) from e

        if not isinstance(document, dict):
            raise ConfigError(f"top level of {path} must be a JSON object")
        return document

    def _cache_config_value(self, section: str, key: str) -> Optional[Any]:
        node: Any = self.config.get(section)
        for part in key.split(".") if key else []:
            if not isinstance(node, dict) or part not in node:
                logger.warning(
                    f"Config key '{key}' not found in section '{section}'"
                )
                return None
            node = node[part]
        return node

    def get_config(self, section: str, key: str = "") -> Optional[Any]:
        """
        Retrieve a configuration value; ``key`` may be a dotted path.
        """
        return self._config_cache(section, key)

    def section(self, name: str) -> Dict[str, Any]:
        """
        Return a copy of a top-level section, or an empty dict.
        """
        value = self.config.get(name)
        return copy.deepcopy(value) if isinstance(value, dict) else {}

    def apply_override(self, assignment: str) -> None:
        """
        Apply a ``dotted.key=value`` override.

        The value is parsed as a JSON literal and kept as a plain string when
        that fails.

        Raises:
            ConfigError: If the assignment has no ``=`` or an empty key.
        """
        key, sep, raw = assignment.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override must look like key=value: {assignment!r}")

        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw

        parts = key.split(".")
        node = self.config
        for part in parts[:-1]:
            child = node.get(part)
            if not isinstance(child, dict):
                child = {}
                node[part] = child
            node = child
        node[parts[-1]] = value
        self._config_cache.cache_clear()
        logger.debug(f"Override applied: {key} = {value!r}")
