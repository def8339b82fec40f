"""
Configuration module for loading and accessing numerical settings.
"""
import json
import os
from pathlib import Path
from typing import Dict, Any, Optional, cast

from loguru import logger


class Config:
    """
    Configuration manager for the library and CLI.

    Loads settings from a JSON file and provides access to configuration values.
    Every value has a default, so a missing file leaves the defaults in place.
    """

    def __init__(self, config_path: Optional[str] = None) -> None:
        """
        Initialize the configuration manager.

        :param config_path: Path to the configuration file. If None, uses default path.
        """
        self._config_path: str = config_path or os.environ.get(
            "CONFIG_PATH",
            str(Path(__file__).parent.parent.parent / "config.json")
        )
        self._config: Dict[str, Any] = {}
        self.load()

    def load(self) -> None:
        """
        Load configuration from the JSON file.

        :raises ValueError: If the configuration file contains invalid JSON.
        """
        try:
            with open(self._config_path, 'r', encoding='utf-8') as f:
                self._config = json.load(f)
        except FileNotFoundError:
            logger.debug(f"Configuration file not found, using defaults: {self._config_path}")
            self._config = {}
        except json.JSONDecodeError:
            raise ValueError(f"Invalid JSON in configuration file: {self._config_path}")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """
        Get a configuration value.

        :param section: Configuration section name.
        :param key: Configuration key within the section.
        :param default: Default value if the key doesn't exist.
        :return: Configuration value or default.
        """
        if section not in self._config:
            return default
        return self._config[section].get(key, default)

    @property
    def probability_sum_tol(self) -> float:
        """Get the largest accepted deviation of the probability sum from 1."""
        return cast(float, self.get('tolerance', 'probability_sum', 1e-9))

    @property
    def normalized_sum_tol(self) -> float:
        """Get the deviation below which probabilities are kept as parsed."""
        return cast(float, self.get('tolerance', 'normalized_sum', 1e-12))

    @property
    def level_eps(self) -> float:
        """Get the default tolerance for probability comparisons against p."""
        return cast(float, self.get('tolerance', 'level_eps', 1e-12))

    @property
    def pareto_tol(self) -> float:
        """Get the coordinate tolerance of the non-domination filter."""
        return cast(float, self.get('tolerance', 'pareto', 1e-9))

    @property
    def law_tol(self) -> float:
        """Get the tolerance used when checking risk-measure laws."""
        return cast(float, self.get('tolerance', 'law', 1e-9))

    @property
    def grid_batch_cells(self) -> int:
        """Get the number of grid-point by scenario comparisons per vectorised batch."""
        return cast(int, self.get('enumeration', 'grid_batch_cells', 1_000_000))

    @property
    def oracle_max_scenarios(self) -> int:
        """Get the largest scenario count accepted by the subset-scan oracle."""
        return cast(int, self.get('enumeration', 'oracle_max_scenarios', 20))

    @property
    def laws_seed(self) -> int:
        """Get the default seed of the law checks."""
        return cast(int, self.get('laws', 'seed', 0))

    @property
    def laws_trials(self) -> int:
        """Get the default number of random instances per law."""
        return cast(int, self.get('laws', 'trials', 1000))

    @property
    def log_level(self) -> str:
        """Get the level of the CLI stderr log sink."""
        return cast(str, self.get('logging', 'level', 'WARNING'))


config = Config()
