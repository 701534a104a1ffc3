"""Runtime limits and the accelerator switch.

Every cap can be overridden by an environment variable of the same name
prefixed with ``BLINDCOUNTER_``; the CLI mirrors them as flags.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded. Never a silent truncation."""


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(f"BLINDCOUNTER_{name.upper()}")
    return int(raw) if raw else default


def use_numba() -> bool:
    """False when BLINDCOUNTER_DISABLE_NUMBA is set to a truthy value."""
    flag = os.environ.get("BLINDCOUNTER_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


@dataclass
class Config:
    component_cap: int = 4096
    vector_set_cap: int = 100_000
    search_budget: int = 200_000
    ball_cap: int = 1_000_000
    constants_period_cap: int = 10
    workers: int = 1
    output_format: str = "text"
    seed: int = 20071

    def __post_init__(self):
        for f in fields(self):
            if f.type == "int" and getattr(self, f.name) < 1:
                raise ValueError(f"{f.name} must be >= 1")
        if self.output_format not in ("json", "text"):
            raise ValueError("output_format must be 'json' or 'text'")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        base = {f.name: _env_int(f.name, f.default) for f in fields(cls) if f.type == "int"}
        base["output_format"] = os.environ.get("BLINDCOUNTER_OUTPUT_FORMAT", "text")
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**base)


DEFAULT = Config.from_env()
