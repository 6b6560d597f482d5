"""Engine configuration: defaults, JSON loading, and validation."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


class ConfigError(ValueError):
    """Raised for malformed configuration documents or overrides."""


@dataclass(frozen=True)
class EngineConfig:
    # selective ingestion
    tau_high: float = 0.9
    tau_low: float = 0.7
    frame_buffer: int = 3
    vad_threshold: float = 0.5
    tau_dup: float = 0.8
    # entity resolution and graph expansion
    tau_res: float = 0.85
    alpha: float = 0.5
    beta: float = 0.7
    hops_h: int = 2
    graph_score_floor: float = 0.1
    # retrieval and context expansion
    theta: float = 0.4
    budget_B_tokens: int = 6000
    bm25_k1: float = 1.5
    bm25_b: float = 0.75
    top_k: int = 20
    top_k_by_category: dict[str, int] = field(default_factory=dict)
    embedding_dim: int = 384
    # ablation switches
    disable_bm25: bool = False
    disable_pyramid: bool = False
    disable_graph: bool = False
    disable_summarization: bool = False
    top_k_override: int | None = None

    @property
    def effective_top_k(self) -> int:
        return self.top_k_override if self.top_k_override is not None else self.top_k

    def replace(self, **overrides: Any) -> "EngineConfig":
        cfg = dataclasses.replace(self, **overrides)
        violations = validate_config(cfg)
        if violations:
            raise ConfigError("; ".join(violations))
        return cfg

    def to_dict(self) -> dict[str, Any]:
        out = dataclasses.asdict(self)
        out["top_k_by_category"] = dict(self.top_k_by_category)
        return out


_FIELD_TYPES: dict[str, tuple[type, ...]] = {
    "tau_high": (int, float),
    "tau_low": (int, float),
    "frame_buffer": (int,),
    "vad_threshold": (int, float),
    "tau_dup": (int, float),
    "tau_res": (int, float),
    "alpha": (int, float),
    "beta": (int, float),
    "hops_h": (int,),
    "graph_score_floor": (int, float),
    "theta": (int, float),
    "budget_B_tokens": (int,),
    "bm25_k1": (int, float),
    "bm25_b": (int, float),
    "top_k": (int,),
    "top_k_by_category": (dict,),
    "embedding_dim": (int,),
    "disable_bm25": (bool,),
    "disable_pyramid": (bool,),
    "disable_graph": (bool,),
    "disable_summarization": (bool,),
    "top_k_override": (int, type(None)),
}


def config_from_dict(doc: dict[str, Any]) -> EngineConfig:
    """Build a config from a JSON-style dict; unknown keys are an error."""
    if not isinstance(doc, dict):
        raise ConfigError(f"config document must be an object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(_FIELD_TYPES))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key, value in doc.items():
        expected = _FIELD_TYPES[key]
        # bool is an int subclass; reject it for numeric fields explicitly
        if isinstance(value, bool) and bool not in expected:
            raise ConfigError(f"{key} has wrong type bool")
        if not isinstance(value, expected):
            raise ConfigError(f"{key} has wrong type {type(value).__name__}")
    cfg = EngineConfig(**doc)
    violations = validate_config(cfg)
    if violations:
        raise ConfigError("; ".join(violations))
    return cfg


def load_config(path: str | Path) -> EngineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def validate_config(cfg: EngineConfig) -> list[str]:
    """Return a list of human-readable violations, empty when the config is valid."""
    bad: list[str] = []

    def unit_interval(name: str) -> None:
        value = getattr(cfg, name)
        if not 0.0 <= value <= 1.0:
            bad.append(f"{name} out of [0,1]")

    for name in ("tau_high", "tau_low", "vad_threshold", "tau_dup", "tau_res",
                 "alpha", "beta", "theta", "graph_score_floor", "bm25_b"):
        unit_interval(name)
    if cfg.tau_low > cfg.tau_high:
        bad.append("tau_low > tau_high")
    if cfg.frame_buffer < 1:
        bad.append("frame_buffer < 1")
    if cfg.hops_h < 0:
        bad.append("hops_h < 0")
    if cfg.budget_B_tokens < 0:
        bad.append("budget_B_tokens < 0")
    if cfg.bm25_k1 < 0:
        bad.append("bm25_k1 < 0")
    if cfg.top_k < 1:
        bad.append("top_k < 1")
    if cfg.embedding_dim < 2:
        bad.append("embedding_dim < 2")
    if cfg.top_k_override is not None and cfg.top_k_override < 1:
        bad.append("top_k_override < 1")
    for category, k in sorted(cfg.top_k_by_category.items()):
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            bad.append(f"top_k_by_category[{category}] < 1")
    return bad
