"""Readers for profiles written by :mod:`loaders.profile_writer`."""
from __future__ import annotations

import json
import re
from pathlib import Path

import pandas as pd
import structlog

from models.errors import ConfigurationError
from models.results import SolutionPair
from models.schemas import Grid, Profile

logger = structlog.get_logger()

HEADER = re.compile(r"#\s*grid\s+a=(?P<a>\S+)\s+b=(?P<b>\S+)\s+n=(?P<n>\d+)")


def read_grid_header(path: Path) -> Grid:
    with open(path, encoding="utf-8") as handle:
        first = handle.readline()
    match = HEADER.match(first)
    if match is None:
        raise ConfigurationError("profile CSV lacks a grid header", path=str(path))
    return Grid(a=float(match["a"]), b=float(match["b"]), n=int(match["n"]))


def read_pair(path: Path) -> SolutionPair:
    """Load ``x,U,V`` from CSV and scalars from the sibling ``.json`` sidecar.

    Raises:
        ConfigurationError: missing file, header, sidecar or columns.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError("pair file not found", path=str(path))
    grid = read_grid_header(path)
    frame = pd.read_csv(path, comment="#")
    missing = {"x", "U", "V"} - set(frame.columns)
    if missing:
        raise ConfigurationError("pair CSV misses columns", path=str(path), missing=sorted(missing))
    sidecar_path = path.with_suffix(".json")
    if not sidecar_path.exists():
        raise ConfigurationError("pair sidecar not found", path=str(sidecar_path))
    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))

    pair = SolutionPair(
        grid=grid,
        U=Profile(grid=grid, values=frame["U"].to_numpy()),
        V=Profile(grid=grid, values=frame["V"].to_numpy()),
        p=sidecar["p"],
        coupling=sidecar.get("coupling", sidecar["p"] - 1.0),
        T_inf=sidecar.get("T_inf", 0.0),
        b1=sidecar.get("b1"),
        b2=sidecar.get("b2"),
        grad_norm=sidecar.get("grad_norm", 0.0),
        energy=sidecar.get("energy", 0.0),
        eps=sidecar.get("eps", 0.0),
        iterations=sidecar.get("iterations", 0),
        enforce_symmetry=sidecar.get("enforce_symmetry", True),
    )
    logger.info("Read pair", path=str(path), n=grid.n, p=pair.p)
    return pair
