"""Deterministic CSV and JSON writers for run outputs."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict

import pandas as pd
import structlog

from models.results import LambdaSolution, SolutionPair, Trajectory
from models.schemas import Grid, Profile

logger = structlog.get_logger()

FORMAT_VERSION = 1
FLOAT_FORMAT = "%.17g"


def grid_header(grid: Grid) -> str:
    return f"# grid a={grid.a!r} b={grid.b!r} n={grid.n}\n"


def dumps(payload: Dict[str, Any]) -> str:
    """JSON with sorted keys and a trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


class ProfileWriter:
    """Write profiles, trajectories and reports into one run directory."""

    def __init__(self, output_dir: Path) -> None:
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def _csv(self, name: str, frame: pd.DataFrame, header: str = "") -> Path:
        path = self.output_dir / name
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(header)
            frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info("Wrote CSV", path=str(path), rows=len(frame))
        return path

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.output_dir / name
        document = {"format_version": FORMAT_VERSION, **payload}
        path.write_text(dumps(document), encoding="utf-8")
        logger.info("Wrote JSON", path=str(path))
        return path

    def write_pair(self, pair: SolutionPair, stem: str = "pair") -> Path:
        """``x,U,V`` CSV with a grid header plus the JSON sidecar."""
        frame = pd.DataFrame({"x": pair.x, "U": pair.U.values, "V": pair.V.values})
        path = self._csv(f"{stem}.csv", frame, grid_header(pair.grid))
        self.write_json(
            f"{stem}.json",
            {
                "p": pair.p,
                "R": pair.R,
                "n": pair.grid.n,
                "coupling": pair.coupling,
                "T_inf": pair.T_inf,
                "b1": pair.b1,
                "b2": pair.b2,
                "grad_norm": pair.grad_norm,
                "energy": pair.energy,
                "eps": pair.eps,
                "iterations": pair.iterations,
                "enforce_symmetry": pair.enforce_symmetry,
            },
        )
        return path

    def write_lambda_solution(self, sol: LambdaSolution, stem: str = "lambda") -> Path:
        frame = pd.DataFrame({"x": sol.u.x, "u": sol.u.values, "v": sol.v.values})
        path = self._csv(f"{stem}.csv", frame, grid_header(sol.u.grid))
        self.write_json(
            f"{stem}.json",
            {
                "params": sol.params.model_dump(mode="json"),
                "lambda1": sol.lambda1,
                "lambda2": sol.lambda2,
                "T_Lambda": sol.T_Lambda,
                "T_drift": sol.T_drift,
                "grad_norm": sol.grad_norm,
                "energy": sol.energy,
                "iterations": sol.iterations,
            },
        )
        return path

    def write_trajectory(self, trajectory: Trajectory, name: str = "trajectory.csv") -> Path:
        frame = pd.DataFrame(
            {
                "x": trajectory.nodes,
                "y": trajectory.y,
                "dy": trajectory.dy,
                "status_code": trajectory.status.code,
            }
        )
        return self._csv(name, frame)

    def write_profile(self, profile: Profile, name: str, column: str = "y") -> Path:
        frame = pd.DataFrame({"x": profile.x, column: profile.values})
        return self._csv(name, frame, grid_header(profile.grid))
