"""
Configuration loading for posetlab.

Values come from config.json (or the file named by POSETLAB_CONFIG) merged
over the built-in defaults below, so a partial file is fine. POSETLAB_MAX_N
lowers every ground-set guard; it never raises one.
"""

import json
import logging
import os
from copy import deepcopy
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

from errors import BadParam, TooLarge

logger = logging.getLogger(__name__)

CONFIG_FILE = Path(__file__).with_name("config.json")

DEFAULTS: Dict[str, Any] = {
    "project": {"name": "posetlab", "version": "1.0.0"},
    "limits": {
        "max_ground_n": 20,
        "container_max_n": 16,
        "census_max_n": 12,
        "la_exact_max_n": 5,
        "la_chain_max_n": 12,
        "min_copies_max_n": 4,
        "count_free_max_n": 4,
        "count_free_special_max_n": 5,
        "chain_walk_max_n": 10,
        "supersat_max_n": 14,
        "removal_max_n": 14,
        "exact_sample_max": 24,
        "d_param_max_size": 8,
        "d_param_max_relations": 16,
        "copy_count_max_family": 20000,
        "tree_exact_max_vertices": 4096,
    },
    "regression": {
        "removal_mean_ratio_min": 1.55,
        "antichain_mean_ratio_max": 1.2,
        "vee_heuristic_band": [0.85, 1.15],
        "pnp_sigma_band": 4,
    },
    "settings": {
        "default_format": "json",
        "default_seed": 20240101,
        "default_threads": 1,
        "log_level": "WARNING",
        "auto_save_reports": False,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path=None) -> Dict[str, Any]:
    """Load configuration from config.json, falling back to defaults."""
    path = Path(path or os.environ.get("POSETLAB_CONFIG") or CONFIG_FILE)
    try:
        with open(path, "r", encoding="utf-8") as f:
            config = _merge(DEFAULTS, json.load(f))
    except FileNotFoundError:
        logger.debug("no config file at %s, using defaults", path)
        config = deepcopy(DEFAULTS)

    cap = os.environ.get("POSETLAB_MAX_N")
    if cap:
        try:
            cap_n = int(cap)
        except ValueError:
            raise BadParam(f"POSETLAB_MAX_N must be an integer, got {cap!r}")
        for name, value in config["limits"].items():
            if name.endswith("_n") and cap_n < value:
                config["limits"][name] = cap_n
    return config


@lru_cache(maxsize=1)
def get_config() -> Dict[str, Any]:
    return load_config()


def reload_config() -> Dict[str, Any]:
    get_config.cache_clear()
    return get_config()


def limit(name: str) -> int:
    return get_config()["limits"][name]


def require_at_most(name: str, value, error=TooLarge) -> None:
    """Raise the guard error when value exceeds the configured limit `name`."""
    bound = limit(name)
    if value > bound:
        raise error(name, value, bound)
