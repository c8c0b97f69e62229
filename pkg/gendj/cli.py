"""CLI entry point for the generalized Deutsch-Jozsa experiment harness."""

import functools
import os
import sys
from pathlib import Path
from typing import List, Optional

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from . import GenDJ
from .core.algorithms import FourierFinal, PeriodReport, RunReport, Transform
from .core.classical import ClassicalResult
from .core.errors import FormatError, GenDJError, PromiseViolationError
from .core.experiment_runner import ExperimentConfig, HarnessConfig
from .core.oracle_model import classify_function
from .utils.logger_utils import LoggerUtils, LogConfig
from .utils import serialization


def _exit_on_error(func):
    """Map library errors onto the exit-code taxonomy"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except GenDJError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)
        except OSError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(FormatError.exit_code)
    return wrapper


def _experiment(**fields) -> ExperimentConfig:
    try:
        return ExperimentConfig(**fields)
    except ValidationError as e:
        raise FormatError(f"Invalid experiment options: {e}") from e


def _parse_order(order: Optional[str]) -> Optional[List[int]]:
    if not order:
        return None
    try:
        return [int(token) for token in order.split(',')]
    except ValueError as e:
        raise FormatError(f"--order must be comma-separated integers, got {order!r}") from e


def _emit(report, output: Optional[str], summary: str, digits: int):
    """Write the report to --output (summary on stdout) or to stdout (summary on stderr)"""
    if output:
        serialization.write_json(report, output, digits)
        click.echo(summary)
    else:
        click.echo(serialization.dumps(report, digits), nl=False)
        click.echo(summary, err=True)


def _summary(report) -> str:
    if isinstance(report, RunReport):
        return report.summary_line()
    if isinstance(report, PeriodReport):
        if report.inconclusive:
            return f"inconclusive: all {len(report.samples)} samples were 0, mu_hat={report.mu_hat}"
        return f"mu_hat: {report.mu_hat}, K_hat: {report.k_hat}, samples={report.samples}"
    if isinstance(report, ClassicalResult):
        return f"decision: {report.decision.value}, queries={report.count}"
    return ""


@click.group()
@click.option("--log-level", default=None, help="Logging level (default: GENDJ_LOG_LEVEL or WARNING)")
@click.option("--log-json", is_flag=True, help="Emit log records as JSON")
@click.pass_context
def main(ctx, log_level, log_json):
    """Generalized Deutsch-Jozsa simulations and classical baselines."""
    load_dotenv()
    level = (log_level or os.getenv("GENDJ_LOG_LEVEL") or "WARNING").upper()
    LoggerUtils.configure(LogConfig(level=level, json_format=log_json, enable_file=False,
                                    console_stream="stderr"))
    try:
        config = HarnessConfig.from_env()
    except GenDJError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(e.exit_code)
    ctx.obj = GenDJ(config)


@main.command()
@click.option("--n", "n", type=int, required=True, help="Control qubits (N = 2^n)")
@click.option("--m", "m", type=int, required=True, help="Auxiliary qubits (M = 2^m)")
@click.option("--constant", type=int, default=None, help="Constant value c")
@click.option("--evenly", is_flag=True, help="Evenly distributed table (needs --k)")
@click.option("--random", "random_table", is_flag=True, help="Uniformly random table")
@click.option("--k", "k", type=int, default=None, help="Number of distinct values K")
@click.option("--t", "t", type=int, default=0, help="Shift t (0 <= t < M/K)")
@click.option("--seed", type=int, default=0, help="Seed for block assignment / random values")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Table file to write")
@click.pass_obj
@_exit_on_error
def gen(gendj: GenDJ, n, m, constant, evenly, random_table, k, t, seed, output):
    """Generate a function table."""
    chosen = [constant is not None, evenly, random_table]
    if sum(chosen) != 1:
        raise click.UsageError("Choose exactly one of --constant, --evenly, --random")

    if constant is not None:
        f = gendj.generate("constant", n, m, c=constant)
    elif evenly:
        f = gendj.generate("evenly", n, m, k=k, t=t, seed=seed)
    else:
        f = gendj.generate("random", n, m, seed=seed)

    classification = classify_function(f)
    summary = f"classification: {classification.promise.value}"
    if classification.spec is not None:
        summary += f", K={classification.k}, mu={classification.mu}, t={classification.spec.t}"
    _emit(f, output, summary, gendj.config.float_digits)


@main.command()
@click.argument("function_file", type=click.Path(dir_okay=False))
@click.option("--algorithm", type=click.Choice(["gdj1", "dj-uninit", "gdj2"]), default="gdj1")
@click.option("--xi", type=int, default=1, help="Phase multiplier ξ (gdj1)")
@click.option("--transform", type=click.Choice([t.value for t in Transform]), default="walsh")
@click.option("--fourier-final", type=click.Choice([d.value for d in FourierFinal]), default="inverse")
@click.option("--aux", default=None, help="fourier-xi | product:a0,b0,... | vector JSON file")
@click.option("--allow-entangled", is_flag=True, help="Let gdj2 run a non-product auxiliary vector")
@click.option("--shots", type=int, default=0, help="Samples to draw from the control distribution")
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_exit_on_error
def run(gendj: GenDJ, function_file, algorithm, xi, transform, fourier_final, aux,
        allow_entangled, shots, seed, output):
    """Run one quantum algorithm on a function table."""
    experiment = _experiment(subcommand="run", function=function_file, algorithm=algorithm, xi=xi,
                             transform=transform, fourier_final=fourier_final, aux=aux,
                             allow_entangled=allow_entangled, shots=shots, seed=seed)
    report = gendj.run(experiment)
    _emit(report, output, _summary(report), gendj.config.float_digits)


@main.command()
@click.argument("function_file", type=click.Path(dir_okay=False))
@click.option("--samples", "-r", type=int, default=8, help="Number of preparations r")
@click.option("--seed", type=int, default=0)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_exit_on_error
def period(gendj: GenDJ, function_file, samples, seed, output):
    """Recover μ = M/K of an evenly distributed table."""
    experiment = _experiment(subcommand="period", function=function_file, samples=samples, seed=seed)
    report = gendj.run(experiment)
    _emit(report, output, _summary(report), gendj.config.float_digits)


@main.command()
@click.argument("function_file", type=click.Path(dir_okay=False))
@click.option("--known-k", type=int, default=None, help="Decide with K known (bound ν+1)")
@click.option("--order", default=None, help="Comma-separated query order (default ascending)")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_exit_on_error
def classical(gendj: GenDJ, function_file, known_k, order, output):
    """Run a deterministic classical decider and count its queries."""
    experiment = _experiment(subcommand="classical", function=function_file, known_k=known_k,
                             order=_parse_order(order))
    report = gendj.run(experiment)
    _emit(report, output, _summary(report), gendj.config.float_digits)
    if report.promise_violation:
        raise PromiseViolationError(report.violation_reason or "promise violation",
                                    {'queries': report.count})


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--known-k", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_exit_on_error
def certify(gendj: GenDJ, n, m, known_k, output):
    """Exhaustively certify the worst-case classical query count."""
    certificate = gendj.certify(1 << n, 1 << m, known_k)
    summary = (f"max_queries: {certificate.max_queries}, bound={certificate.bound}, "
               f"tight={certificate.tight}")
    _emit(certificate, output, summary, gendj.config.float_digits)


@main.command()
@click.argument("sweep_file", type=click.Path(dir_okay=False))
@click.option("--max-workers", type=int, default=None, help="Override GENDJ_MAX_WORKERS")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
@_exit_on_error
def sweep(gendj: GenDJ, sweep_file, max_workers, output):
    """Run a JSON list of experiments; results keep the file's order."""
    if max_workers is not None:
        gendj.config.max_workers = max(1, max_workers)
    experiments = gendj.runner.load_sweep(sweep_file)
    entries = gendj.sweep(experiments, base_dir=Path(sweep_file).parent)

    lines = []
    for entry in entries:
        if entry.status == "ok":
            lines.append(f"[{entry.index}] ok {_summary(entry.report)}")
        else:
            lines.append(f"[{entry.index}] {entry.status} {entry.error_type}: {entry.message}")
    _emit(entries, output, "\n".join(lines), gendj.config.float_digits)

    failures = [entry for entry in entries if entry.status != "ok"]
    if failures:
        sys.exit(failures[0].exit_code)


if __name__ == "__main__":
    main()
