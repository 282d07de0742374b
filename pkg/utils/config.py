"""Configuration management for matineq."""

import json
import logging
import os
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "panels": 32,
    "scheme": "gauss",
    "nodes_per_panel": 5,
    "tol_abs": 1e-9,
    "tol_rel": 1e-8,
    "threads": 0,
    "findings_dir": "findings",
    "log_level": "INFO",
}

CONFIG_DIR = Path.home() / ".matineq"
CONFIG_FILE = CONFIG_DIR / "config.json"

THREADS_ENV = "MATINEQ_THREADS"
MAX_AUTO_THREADS = 8


class Config:
    """Defaults overlaid with ~/.matineq/config.json."""

    def __init__(self) -> None:
        self._data: dict = dict(DEFAULT_CONFIG)
        self._load()

    def _load(self) -> None:
        if CONFIG_FILE.exists():
            try:
                with open(CONFIG_FILE, "r") as f:
                    stored = json.load(f)
                if not isinstance(stored, dict):
                    raise ValueError("top-level value is not an object")
                self._data.update(stored)
            except (json.JSONDecodeError, OSError, ValueError) as e:
                logger.warning("Failed to load config: %s", e)

    def save(self) -> None:
        CONFIG_DIR.mkdir(parents=True, exist_ok=True)
        try:
            with open(CONFIG_FILE, "w") as f:
                json.dump(self._data, f, indent=2)
        except OSError as e:
            logger.error("Failed to save config: %s", e)

    def get(self, key: str, default=None):
        return self._data.get(key, default)

    def set(self, key: str, value) -> None:
        self._data[key] = value
        self.save()

    @property
    def threads(self) -> int:
        """Worker count: configured value (0 = auto), capped by MATINEQ_THREADS."""
        try:
            wanted = int(self._data.get("threads", 0))
        except (TypeError, ValueError):
            logger.warning("Ignoring non-integer threads setting %r", self._data.get("threads"))
            wanted = 0
        if wanted <= 0:
            wanted = min(MAX_AUTO_THREADS, os.cpu_count() or 1)
        cap = os.environ.get(THREADS_ENV, "").strip()
        if cap:
            try:
                wanted = min(wanted, max(1, int(cap)))
            except ValueError:
                logger.warning("Ignoring %s=%r (not an integer)", THREADS_ENV, cap)
        return wanted

    @threads.setter
    def threads(self, value: int) -> None:
        self._data["threads"] = value
        self.save()


config = Config()
