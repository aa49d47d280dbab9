"""Run configuration shared by the command line and the suites."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .nil import DEFAULT_NMAX

DEFAULT_WINDOWS = (1, 2, 3, 8)


@dataclass(frozen=True)
class Config:
    """Seed, window widths and search limits for a run.

    Attributes:
        seed: base seed; every random case derives its own seed from it.
        windows: window widths for the characteristic-sequence suite.
        nmax: largest exponent tried by nilpotence searches.
    """

    seed: int = 0
    windows: tuple = field(default=DEFAULT_WINDOWS)
    nmax: int = DEFAULT_NMAX

    def __post_init__(self):
        if not self.windows or any((not isinstance(w, int)) or w < 1 for w in self.windows):
            raise ConfigError("window widths must be positive integers", "window")
        if self.nmax < 1:
            raise ConfigError("nmax must be positive", "nmax")

    @staticmethod
    def from_json(data, where: str = "config") -> "Config":
        if not isinstance(data, dict):
            raise ConfigError("config must be an object", where)
        unknown = set(data) - {"seed", "windows", "nmax"}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", where)
        seed = data.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("seed must be an integer", f"{where}.seed")
        windows = data.get("windows", list(DEFAULT_WINDOWS))
        if not isinstance(windows, list):
            raise ConfigError("windows must be a list", f"{where}.windows")
        for i, w in enumerate(windows):
            if isinstance(w, bool) or not isinstance(w, int) or w < 1:
                raise ConfigError("window widths must be positive integers", f"{where}.windows[{i}]")
        nmax = data.get("nmax", DEFAULT_NMAX)
        if isinstance(nmax, bool) or not isinstance(nmax, int) or nmax < 1:
            raise ConfigError("nmax must be a positive integer", f"{where}.nmax")
        return Config(seed, tuple(windows), nmax)
