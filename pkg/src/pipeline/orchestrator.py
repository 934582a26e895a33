"""Run orchestration: timed stages, error mapping and the run manifest."""
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional
from uuid import uuid4

import structlog
from pydantic import BaseModel, Field, ValidationError

from loaders.profile_writer import ProfileWriter, dumps
from models.errors import ConfigurationError, DiagnosticError, PlapError, SolverError

logger = structlog.get_logger()

TOOL_VERSION = "0.1.0"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2
EXIT_CERTIFICATION = 3


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class StageSummary(BaseModel):
    name: str
    status: str = "running"
    iterations: Optional[int] = None
    duration_s: float = 0.0
    details: Dict[str, Any] = Field(default_factory=dict)


class RunManifest(BaseModel):
    """Record of one run; written even when the run fails."""

    run_id: str = Field(default_factory=lambda: uuid4().hex)
    tool_version: str = TOOL_VERSION
    format_version: int = 1
    command: str
    config: Dict[str, Any] = Field(default_factory=dict)
    started_at: str = Field(default_factory=_now)
    finished_at: Optional[str] = None
    status: str = "running"
    exit_code: Optional[int] = None
    stages: List[StageSummary] = Field(default_factory=list)
    certification: Optional[Dict[str, int]] = None
    error_type: Optional[str] = None
    error_message: Optional[str] = None
    error_context: Dict[str, Any] = Field(default_factory=dict)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ValidationError, ConfigurationError)):
        return EXIT_CONFIG
    if isinstance(exc, SolverError):
        return EXIT_SOLVER
    if isinstance(exc, DiagnosticError):
        return EXIT_CERTIFICATION
    return EXIT_SOLVER


class RunOrchestrator:
    """Drive one command in an output directory and keep its manifest."""

    def __init__(self, command: str, output_dir: Path, config: Optional[Dict[str, Any]] = None):
        self.output_dir = Path(output_dir)
        self.writer = ProfileWriter(self.output_dir)
        self.manifest = RunManifest(command=command, config=config or {})

    @contextmanager
    def stage(self, name: str) -> Iterator[StageSummary]:
        """Time a stage; the yielded summary may be filled with iterations and details."""
        summary = StageSummary(name=name)
        self.manifest.stages.append(summary)
        start = time.perf_counter()
        logger.info("Stage started", stage=name, run_id=self.manifest.run_id)
        try:
            yield summary
        except Exception:
            summary.status = "failed"
            raise
        else:
            summary.status = "ok"
        finally:
            summary.duration_s = time.perf_counter() - start
            logger.info("Stage finished", stage=name, status=summary.status, duration_s=summary.duration_s)

    def record_certification(self, passed: int, failed: int) -> None:
        self.manifest.certification = {"passed": passed, "failed": failed}

    def finish(self, exit_code: int, error: Optional[BaseException] = None) -> int:
        """Write manifest.json and return ``exit_code``."""
        manifest = self.manifest
        manifest.exit_code = exit_code
        manifest.finished_at = _now()
        manifest.status = {
            EXIT_OK: "ok",
            EXIT_CONFIG: "config_error",
            EXIT_SOLVER: "solver_error",
            EXIT_CERTIFICATION: "certification_failed",
        }.get(exit_code, "failed")
        if error is not None:
            manifest.error_type = type(error).__name__
            manifest.error_message = str(error)
            if isinstance(error, PlapError):
                manifest.error_context = {key: str(value) for key, value in error.context.items()}
        path = self.output_dir / "manifest.json"
        path.write_text(dumps(manifest.model_dump(mode="json")), encoding="utf-8")
        logger.info("Run finished", run_id=manifest.run_id, status=manifest.status, exit_code=exit_code)
        return exit_code

    def execute(self, body: Callable[["RunOrchestrator"], int]) -> int:
        """Run ``body`` and map package errors to exit codes.

        ``body`` returns the exit code of a completed run. Errors outside the
        package hierarchy are recorded in the manifest and re-raised.
        """
        try:
            code = body(self)
        except (PlapError, ValidationError) as exc:
            code = exit_code_for(exc)
            logger.error("Run failed", error_type=type(exc).__name__, error=str(exc))
            return self.finish(code, exc)
        except Exception as exc:
            self.finish(EXIT_SOLVER, exc)
            raise
        return self.finish(code)
