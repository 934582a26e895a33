"""Command bodies: each takes a RunConfig and returns an exit code."""
import numpy as np
import structlog

from bvp.solver import minimize_limit
from ingestors.profile_reader import read_pair
from ivp.integrator import ivp_solve
from ivp.perron import perron_construct
from ivp.shooting import shoot_decaying
from lambda_system.blowup import blowup_extract, lambda_sweep
from lambda_system.solver import minimize_lambda
from models.errors import NoCrossing
from models.schemas import LimitProblem
from pipeline.config import RunConfig
from pipeline.orchestrator import EXIT_CERTIFICATION, EXIT_OK, EXIT_SOLVER, RunOrchestrator
from verify.certification import PairCertifier

logger = structlog.get_logger()


def _orchestrator(config: RunConfig) -> RunOrchestrator:
    np.random.seed(config.seed)
    return RunOrchestrator(config.command, config.output_dir, config.echo())


def cmd_solve_limit(config: RunConfig) -> int:
    def body(run: RunOrchestrator) -> int:
        with run.stage("minimize_limit") as stage:
            pair = minimize_limit(config.limit)
            stage.iterations = pair.iterations
            stage.details = {"grad_norm": pair.grad_norm, "T_inf": pair.T_inf}
        with run.stage("write"):
            run.writer.write_pair(pair)
        return EXIT_OK

    return _orchestrator(config).execute(body)


def cmd_solve_lambda(config: RunConfig) -> int:
    params = config.lambda_params

    def body(run: RunOrchestrator) -> int:
        with run.stage("minimize_lambda") as stage:
            sol = minimize_lambda(params)
            stage.iterations = sol.iterations
            stage.details = {"grad_norm": sol.grad_norm, "T_Lambda": sol.T_Lambda, "T_drift": sol.T_drift}
        with run.stage("write"):
            run.writer.write_lambda_solution(sol)
        with run.stage("blowup") as stage:
            try:
                report = blowup_extract(sol, params)
            except NoCrossing as exc:
                stage.details = {"skipped": str(exc)}
            else:
                stage.details = {
                    "x_Lambda": report.x_Lambda,
                    "m_Lambda": report.m_Lambda,
                    "scale_invariant": report.scale_invariant,
                    "root_count": report.root_count,
                }
                run.writer.write_json(
                    "blowup.json", report.model_dump(mode="json", exclude={"rescaled_u", "rescaled_v"})
                )
        return EXIT_OK

    return _orchestrator(config).execute(body)


def cmd_sweep_lambda(config: RunConfig) -> int:
    def body(run: RunOrchestrator) -> int:
        with run.stage("limit_pair") as stage:
            sweep = config.sweep
            pair = minimize_limit(LimitProblem(p=config.lambda_params.p, R=sweep.limit_R, n=sweep.limit_n))
            stage.iterations = pair.iterations
        with run.stage("lambda_sweep") as stage:
            report = lambda_sweep(config.lambda_params, sweep, limit_pair=pair, progress=config.progress)
            stage.details = {"entries": len(report.entries), "failures": len(report.failures)}
        for failure in report.failures:
            logger.warning("Sweep entry failed", Lambda=failure.Lambda, error_type=failure.error_type)
        run.writer.write_json(
            "sweep.json",
            {
                "entries": [entry.model_dump() for entry in report.entries],
                "failures": [failure.model_dump() for failure in report.failures],
            },
        )
        return EXIT_SOLVER if report.failures else EXIT_OK

    return _orchestrator(config).execute(body)


def cmd_ode(config: RunConfig) -> int:
    action = config.ode_action

    def body(run: RunOrchestrator) -> int:
        with run.stage(f"ode_{action}") as stage:
            if action == "solve":
                trajectory = ivp_solve(config.ivp)
                run.writer.write_trajectory(trajectory)
                summary = {"status": trajectory.status.value, "x_end": trajectory.x_end}
            elif action == "shoot":
                s = config.shooting
                y_star, trajectory = shoot_decaying(
                    s.p, s.y1, s.x_far, s.bracket, tol=s.tol, step=s.step, decay_floor=s.decay_floor
                )
                run.writer.write_trajectory(trajectory)
                summary = {"y_star": y_star, "status": trajectory.status.value, "resolved_to": trajectory.resolved_to}
            else:
                s = config.perron
                profile = perron_construct(s.p, s.R, s.n, tol=s.tol, max_iter=s.max_iter)
                run.writer.write_profile(profile, "perron.csv", column="y")
                summary = {"y_R": float(profile.values[-1])}
            stage.details = summary
        run.writer.write_json("ode.json", {"action": action, **summary})
        return EXIT_OK

    return _orchestrator(config).execute(body)


def cmd_certify(config: RunConfig) -> int:
    options = config.certify

    def body(run: RunOrchestrator) -> int:
        with run.stage("load_pair") as stage:
            if options.pair is not None:
                pair = read_pair(options.pair)
            else:
                pair = minimize_limit(config.limit)
                run.writer.write_pair(pair)
            stage.iterations = pair.iterations
        with run.stage("certify") as stage:
            report = PairCertifier(options.thresholds).run(pair, options.checks)
            stage.details = {"failed": report.failed}
        run.record_certification(report.passed_count, len(report.failed))
        logger.info("Certification done", passed=report.passed_count, failed=report.failed)
        run.writer.write_json(
            "certification.json",
            {"checks": [check.model_dump(by_alias=True, exclude_none=True) for check in report.checks]},
        )
        return EXIT_OK if report.passed else EXIT_CERTIFICATION

    return _orchestrator(config).execute(body)


COMMANDS = {
    "solve-limit": cmd_solve_limit,
    "solve-lambda": cmd_solve_lambda,
    "sweep-lambda": cmd_sweep_lambda,
    "ode": cmd_ode,
    "certify": cmd_certify,
}
