"""Run configuration: config file, command table and flags merged into one RunConfig.

Precedence, lowest first: model defaults, top-level keys of the file, the
file table named after the command, command-line flags.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Set, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib
from pydantic import BaseModel, ConfigDict, Field, field_validator

from models.errors import ConfigurationError
from models.schemas import (
    CertificationThresholds,
    IvpSpec,
    LambdaParams,
    LimitProblem,
    PerronSettings,
    ShootingSettings,
    SweepSettings,
)
from verify.certification import CHECK_NAMES

COMMANDS = ("solve-limit", "solve-lambda", "sweep-lambda", "ode", "certify")
ODE_ACTIONS = ("solve", "shoot", "perron")
RUN_KEYS = {"output_dir", "seed", "progress"}
CERTIFY_KEYS = {"pair", "checks"}


class CertifyOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    pair: Optional[Path] = None
    checks: Optional[List[str]] = None
    thresholds: CertificationThresholds = Field(default_factory=CertificationThresholds)

    @field_validator("checks")
    @classmethod
    def check_names(cls, v: Optional[List[str]]) -> Optional[List[str]]:
        if v is not None:
            unknown = [name for name in v if name not in CHECK_NAMES]
            if unknown:
                raise ValueError(f"unknown checks: {', '.join(unknown)}")
        return v


class RunConfig(BaseModel):
    """Validated configuration of one command run."""

    model_config = ConfigDict(frozen=True)

    command: Literal["solve-limit", "solve-lambda", "sweep-lambda", "ode", "certify"]
    output_dir: Path
    seed: int = 0
    format_version: Literal[1] = 1
    progress: bool = False
    ode_action: Optional[Literal["solve", "shoot", "perron"]] = None
    limit: Optional[LimitProblem] = None
    lambda_params: Optional[LambdaParams] = None
    sweep: Optional[SweepSettings] = None
    ivp: Optional[IvpSpec] = None
    shooting: Optional[ShootingSettings] = None
    perron: Optional[PerronSettings] = None
    certify: Optional[CertifyOptions] = None

    def echo(self) -> Dict[str, Any]:
        """JSON-ready copy of the configuration for manifests."""
        return self.model_dump(mode="json", exclude_none=True)


def load_config_file(path: Optional[Path]) -> Dict[str, Any]:
    """Read a TOML or JSON config file; ``None`` gives an empty mapping."""
    if path is None:
        return {}
    path = Path(path)
    if not path.exists():
        raise ConfigurationError("config file not found", path=str(path))
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(path.read_text(encoding="utf-8"))
        else:
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigurationError("config file is not valid TOML or JSON", path=str(path), reason=str(exc)) from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config file must hold a table", path=str(path))
    return data


def merge_sections(
    file_data: Dict[str, Any], command: str, flags: Dict[str, Any]
) -> Tuple[Dict[str, Any], Set[str]]:
    """Merged mapping plus the keys set explicitly for this command.

    Top-level file keys are shared by all commands, so only the command table
    and the flags are checked for unknown keys.
    """
    merged = {key: value for key, value in file_data.items() if not isinstance(value, dict)}
    section = file_data.get(command, {})
    if not isinstance(section, dict):
        raise ConfigurationError("command section must be a table", command=command)
    merged.update(section)
    given = {key: value for key, value in flags.items() if value is not None}
    merged.update(given)
    return merged, set(section) | set(given)


def _take(merged: Dict[str, Any], model: type[BaseModel], used: set) -> Dict[str, Any]:
    fields = set(model.model_fields)
    used.update(fields & merged.keys())
    return {key: merged[key] for key in fields if key in merged}


def build_run_config(
    command: str,
    merged: Dict[str, Any],
    default_output: Path,
    ode_action: Optional[str] = None,
    explicit: Iterable[str] = (),
) -> RunConfig:
    """Validate merged keys into a RunConfig.

    Raises:
        ConfigurationError: unknown explicit keys or a missing ode action.
        pydantic.ValidationError: a value violates a model constraint.
    """
    used = set(RUN_KEYS)
    sections: Dict[str, Any] = {}
    if command == "solve-limit":
        sections["limit"] = LimitProblem(**_take(merged, LimitProblem, used))
    elif command == "solve-lambda":
        sections["lambda_params"] = LambdaParams(**_take(merged, LambdaParams, used))
    elif command == "sweep-lambda":
        sweep = SweepSettings(**_take(merged, SweepSettings, used))
        values = _take(merged, LambdaParams, used)
        values.setdefault("Lambda", sweep.Lambdas[0])
        sections["lambda_params"] = LambdaParams(**values)
        sections["sweep"] = sweep
    elif command == "ode":
        if ode_action not in ODE_ACTIONS:
            raise ConfigurationError("ode needs one of solve, shoot, perron", action=ode_action)
        model = {"solve": IvpSpec, "shoot": ShootingSettings, "perron": PerronSettings}[ode_action]
        key = {"solve": "ivp", "shoot": "shooting", "perron": "perron"}[ode_action]
        sections[key] = model(**_take(merged, model, used))
        sections["ode_action"] = ode_action
    elif command == "certify":
        used.update(CERTIFY_KEYS, LimitProblem.model_fields)
        thresholds = CertificationThresholds(**_take(merged, CertificationThresholds, used))
        sections["certify"] = CertifyOptions(
            pair=merged.get("pair"), checks=merged.get("checks"), thresholds=thresholds
        )
        if merged.get("pair") is None:
            sections["limit"] = LimitProblem(**_take(merged, LimitProblem, used))
    else:
        raise ConfigurationError("unknown command", command=command)

    unknown = sorted(set(explicit) - used)
    if unknown:
        raise ConfigurationError("unknown configuration keys", command=command, keys=unknown)
    return RunConfig(
        command=command,
        output_dir=merged.get("output_dir", default_output),
        seed=merged.get("seed", 0),
        progress=merged.get("progress", False),
        **sections,
    )
