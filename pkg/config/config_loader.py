"""
Configuration loader for DiffInvariants.

Provides centralized access to application configuration from config.json.
"""

import json
from typing import Optional, Dict, Any, Tuple
from pathlib import Path


class ConfigLoader:
    """Singleton configuration loader."""

    _instance: Optional['ConfigLoader'] = None
    _config: Optional[Dict[str, Any]] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._load_config()

    def _load_config(self):
        """Load configuration from config.json file."""
        config_path = Path(__file__).parent / 'config.json'

        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                self._config = json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in configuration file: {e}")

    def get(self, *keys, default=None) -> Any:
        """Get configuration value by nested keys.

        Args:
            *keys: Nested keys to traverse (e.g., 'evaluation', 'default_trials')
            default: Default value if key not found

        Returns:
            Configuration value or default

        Example:
            config.get('evaluation', 'value_range')
        """
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def reload(self):
        """Reload configuration from file."""
        self._config = None
        self._load_config()

    # Convenience methods for common configuration values

    def get_default_trials(self) -> int:
        """Number of random points per evaluation-mode check (default: 5)."""
        return int(self.get('evaluation', 'default_trials', default=5))

    def get_default_seed(self) -> int:
        return int(self.get('evaluation', 'default_seed', default=7))

    def get_value_range(self) -> Tuple[int, int]:
        """Inclusive bounds for numerators and denominators of random rationals.

        Returns:
            (low, high) with low < 0 < high (default: (-9, 9))
        """
        low, high = self.get('evaluation', 'value_range', default=[-9, 9])
        return int(low), int(high)

    def get_retry_cap(self) -> int:
        """Redraws allowed per trial when a denominator vanishes (default: 100)."""
        return int(self.get('evaluation', 'retry_cap', default=100))

    def get_cofactor_limit(self) -> int:
        return int(self.get('algebra', 'cofactor_limit', default=4))

    def get_symbolic_term_budget(self) -> int:
        """Largest cross-multiplication a symbolic comparison may attempt."""
        return int(self.get('algebra', 'symbolic_term_budget', default=20000))

    def get_log_directory(self) -> str:
        return self.get('logging', 'directory', default='logs')

    def get_console_log_level(self) -> str:
        return self.get('logging', 'console_level', default='WARNING')

    def get_catalog_path(self) -> Optional[str]:
        """User group catalog path, None for the bundled catalog."""
        return self.get('catalog', 'path', default=None)


# Global instance for easy access
_config_loader = None

def get_config() -> ConfigLoader:
    """Get the global configuration loader instance.

    Returns:
        ConfigLoader instance
    """
    global _config_loader
    if _config_loader is None:
        _config_loader = ConfigLoader()
    return _config_loader


# Convenience functions for direct access
def get_default_trials() -> int:
    return get_config().get_default_trials()


def get_default_seed() -> int:
    return get_config().get_default_seed()


def get_value_range() -> Tuple[int, int]:
    return get_config().get_value_range()


def get_retry_cap() -> int:
    return get_config().get_retry_cap()


def get_cofactor_limit() -> int:
    return get_config().get_cofactor_limit()


def get_symbolic_term_budget() -> int:
    return get_config().get_symbolic_term_budget()


def get_log_directory() -> str:
    return get_config().get_log_directory()


def get_console_log_level() -> str:
    return get_config().get_console_log_level()


def get_catalog_path() -> Optional[str]:
    return get_config().get_catalog_path()
