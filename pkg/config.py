"""
Configuration settings for fgl-cobord
"""
import json
import os
from pathlib import Path
from typing import Any, Optional

from fgl_cobord.utils.logging import logger

# Application constants
APP_NAME = "fgl-cobord"
APP_VERSION = "1.0.0"

# Default settings
DEFAULT_SETTINGS = {
    # Kernel
    "max_weight": 6,
    "mode": "integral",  # 'integral' or 'rational'
    "cost_warning_weight": 8,
    "parallel_weights": False,

    # Input / output
    "output_format": "json",  # 'json' or 'table'
    "input_path": None,
    "output_path": None,
    "log_level": "WARNING",

    # Presentation cache
    "cache_enabled": True,

    # Redis Cache
    "redis_enabled": False,
    "redis_host": "localhost",
    "redis_port": 6379,
    "redis_db": 0,
    "redis_ttl_s": 7 * 24 * 3600,

    # Randomized checks
    "verify_seed": 0,
    "verify_samples": 100,
}


def get_config_dir() -> Path:
    """Get the configuration directory"""
    config_dir = Path.home() / ".config" / "fgl-cobord"
    config_dir.mkdir(parents=True, exist_ok=True)
    return config_dir

def get_cache_dir() -> Optional[Path]:
    """Directory named by FGL_COBORD_CACHE, or None when unset"""
    location = os.environ.get("FGL_COBORD_CACHE")
    if not location:
        return None
    cache_dir = Path(location).expanduser()
    cache_dir.mkdir(parents=True, exist_ok=True)
    return cache_dir

class AppConfig:
    """Application configuration manager"""

    def __init__(self, config_file: Optional[Path] = None):
        self.settings = DEFAULT_SETTINGS.copy()
        self.config_file = config_file or get_config_dir() / "settings.json"
        self.load_config()

    def load_config(self):
        """Load configuration from file"""
        if self.config_file.exists():
            try:
                with open(self.config_file, 'r') as f:
                    user_settings = json.load(f)
                    self.settings.update(user_settings)
            except (OSError, ValueError) as e:
                logger.warning(f"Could not load config: {e}")

    def save_config(self):
        """Save configuration to file"""
        try:
            with open(self.config_file, 'w') as f:
                json.dump(self.settings, f, indent=2)
        except OSError as e:
            logger.warning(f"Could not save config: {e}")

    def get(self, key: str, default=None):
        """Get a configuration value"""
        return self.settings.get(key, default)

    def set(self, key: str, value: Any):
        """Set a configuration value"""
        self.settings[key] = value
        self.save_config()

# Global config instance
config = AppConfig()
