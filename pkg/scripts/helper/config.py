# scripts/helper/config.py
"""
Run configuration: a preset name or an inline scenario block, plus grid,
initial-state and output overrides. Files are JSON; CLI flags win over file values.

    {"preset": "fig2b", "h": 0.005, "initial": "fock:2", "plots": true}
    {"scenario": {"name": "mine", "physics": {"lambda": 1.0}, "sweep_param": "g",
                  "sweep_values": [0.2, 0.4]}, "out_dir": "runs/mine"}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..qb.scenarios import InitialState, Scenario, preset
from .env import env_float, env_int, env_path, user_path

DEFAULT_OUT_DIR = "runs"


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    preset: Optional[str] = None
    scenario: Optional[Scenario] = None
    out_dir: Optional[str] = None
    h: Optional[float] = Field(None, gt=0)
    t_max: Optional[float] = Field(None, gt=0, validation_alias=AliasChoices("t_max", "tmax"))
    initial: Optional[str] = None
    plots: bool = False
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _one_source(self) -> "RunConfig":
        if (self.preset is None) == (self.scenario is None):
            raise ValueError("give exactly one of 'preset' or 'scenario'")
        if self.initial is not None:
            InitialState.parse(self.initial)
        return self

    def resolve(self) -> Scenario:
        """
        Fully populated scenario. Env defaults (QBSIM_H, QBSIM_TMAX) apply to
        presets only; an inline block already states its own grid.
        """
        if self.preset is not None:
            base = preset(self.preset)
            h = self.h if self.h is not None else env_float("QBSIM_H", base.grid.h)
            t_max = self.t_max if self.t_max is not None else env_float("QBSIM_TMAX", base.grid.t_max)
        else:
            base = self.scenario
            h, t_max = self.h, self.t_max
        initial = InitialState.parse(self.initial) if self.initial is not None else None
        return base.with_overrides(h=h, t_max=t_max, initial=initial)

    def resolve_out_dir(self) -> Path:
        if self.out_dir:
            return user_path(self.out_dir)
        return env_path("QBSIM_OUT_DIR", DEFAULT_OUT_DIR)

    def resolve_workers(self, n_points: int) -> int:
        if self.workers is not None:
            return self.workers
        return max(1, env_int("QBSIM_WORKERS", min(n_points, 4)))


def load_config_file(path: Path) -> dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ValueError(f"cannot read config {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ValueError(f"{path}: top level must be a JSON object")
    return data


def build_run_config(file_data: Optional[dict[str, Any]] = None, **overrides: Any) -> RunConfig:
    """Merge file values with non-None CLI overrides and validate."""
    data = dict(file_data or {})
    for key, value in overrides.items():
        if value is not None and value is not False:
            data[key] = value
    return RunConfig.model_validate(data)


def format_validation_error(e: ValidationError) -> list[str]:
    """One 'field.path: message' line per error."""
    lines = []
    for err in e.errors():
        loc = ".".join(str(p) for p in err.get("loc", ())) or "config"
        lines.append(f"{loc}: {err.get('msg', 'invalid value')}")
    return lines
