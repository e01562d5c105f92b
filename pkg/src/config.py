"""Configuration loading for numeric and output defaults."""

import copy
import json
from pathlib import Path


DEFAULT_CONFIG = {
    "numerics": {
        "tolerance": 1e-9,
        "decimal_precision": 12
    },
    "batch": {
        "workers": 1
    },
    "output": {
        "format": "text"  # "text" or "json"
    }
}


def load_config(config_path: Path = None) -> dict:
    """
    Load configuration from config.json file.

    Args:
        config_path: Alternative file to read (default: config.json at the repository root)

    Returns:
        Configuration dictionary with default values merged with file values.
    """
    if config_path is None:
        config_path = Path(__file__).parent.parent / 'config.json'
    config = copy.deepcopy(DEFAULT_CONFIG)

    if config_path.exists():
        with open(config_path, encoding='utf-8') as f:
            file_config = json.load(f)
        # Deep merge per section; unknown sections are ignored
        for section, values in config.items():
            if isinstance(file_config.get(section), dict):
                values.update(file_config[section])

    return config
