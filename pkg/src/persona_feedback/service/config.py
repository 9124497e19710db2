"""Service configuration, loadable from a JSON file with CLI overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..engine import GenerationParams


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    provider: str = "mock"  # "remote" | "mock"
    remote_base_url: str = ""
    data_dir: str = "./data"
    condense: bool = False
    few_shot_path: str | None = None
    dump_prompt: bool = False
    audit_log: str | None = None
    max_in_flight: int = 4
    generation: GenerationParams = field(default_factory=GenerationParams)

    def __post_init__(self):
        if self.provider not in ("remote", "mock"):
            raise ValueError(f"unknown provider kind: {self.provider!r}")
        if self.provider == "remote" and not self.remote_base_url:
            raise ValueError("remote provider requires remote_base_url")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        gen = doc.pop("generation", {})
        doc.update({k: v for k, v in overrides.items() if v is not None})
        return cls(generation=GenerationParams(**gen), **doc)
