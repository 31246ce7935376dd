"""Run configuration shared by the command-line front end and scripts."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass
class RunConfig:
    command: str = "analyze"
    inputs: list[str] = field(default_factory=list)
    horizon: int = 10_000
    verify_len: int | None = None  # None: per-module default
    max_radius: int = 3
    shift_bound: int = 32
    coverage_factor: int = 4
    tolerance: float = 1e-9
    steps: int = 40
    node_budget: int = 2_000_000
    threshold: float = 64.0
    prefix_len: int = 1024
    output_format: str = "text"

    def __post_init__(self):
        for name in ("horizon", "shift_bound", "coverage_factor", "node_budget", "prefix_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_radius", "steps"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.verify_len is not None and self.verify_len <= 0:
            raise ValueError("verify_len must be positive")
        if not (self.tolerance > 0 and self.threshold > 0):
            raise ValueError("tolerance and threshold must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError("output format must be 'text' or 'json'")

    def as_dict(self) -> dict:
        return asdict(self)
