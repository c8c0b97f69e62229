#!/usr/bin/env python3
"""
GenDJ Package Test Script

Checks the public surface: package exports, the GenDJ facade, harness
configuration from the environment and the logging utilities.
"""

import json
import logging

import pytest

import gendj
from gendj import (
    GenDJ,
    ExperimentConfig,
    FormatError,
    HarnessConfig,
    LoggerConfig,
    LoggerUtils,
    PreconditionError,
    PromiseClass,
    make_constant,
)
from gendj.utils.logger_utils import LogConfig


@pytest.fixture
def restore_logging():
    yield
    LoggerUtils.configure(LogConfig(enable_file=False))


def test_all_exports_resolve():
    for name in gendj.__all__:
        assert hasattr(gendj, name), name
    assert LoggerConfig is LogConfig


def test_facade_generate_and_classify():
    dj = GenDJ()
    assert dj.generate("constant", 2, 2, c=1).values == (1, 1, 1, 1)
    f = dj.generate("evenly", 3, 2, k=2, t=1, seed=3)
    classification = dj.classify(f)
    assert classification.promise == PromiseClass.EVENLY_DISTRIBUTED
    assert (classification.k, classification.mu) == (2, 2)
    assert dj.generate("random", 2, 2, seed=1) == dj.generate("random", 2, 2, seed=1)
    with pytest.raises(PreconditionError):
        dj.generate("evenly", 2, 2)
    with pytest.raises(PreconditionError):
        dj.generate("balanced", 2, 2)


def test_facade_run_inline_table():
    dj = GenDJ()
    report = dj.run(ExperimentConfig(function=make_constant(2, 2, 0)))
    assert report.p_zero == pytest.approx(1.0)
    assert report.oracle_calls == 1


def test_facade_run_writes_output(tmp_path):
    dj = GenDJ()
    out = tmp_path / "nested" / "report.json"
    dj.run(ExperimentConfig(subcommand="classical", function=make_constant(2, 1, 1), output=str(out)))
    assert json.loads(out.read_text())["decision"] == "constant"


def test_facade_sweep_and_certify():
    dj = GenDJ(HarnessConfig(max_workers=2))
    experiments = [ExperimentConfig(subcommand="period", function=make_constant(2, 2, 0), samples=2, seed=s)
                   for s in range(5)]
    entries = dj.sweep(experiments)
    assert [entry.index for entry in entries] == list(range(5))
    assert [entry.report.seed for entry in entries] == list(range(5))
    assert all(len(entry.report.samples) == 2 for entry in entries)
    assert dj.certify(8, 4, 2).max_queries == 5


def test_harness_config_from_env(monkeypatch):
    monkeypatch.delenv("GENDJ_MAX_WORKERS", raising=False)
    assert HarnessConfig.from_env().max_workers == 4
    monkeypatch.setenv("GENDJ_MAX_WORKERS", "7")
    assert HarnessConfig.from_env().max_workers == 7
    monkeypatch.setenv("GENDJ_MAX_WORKERS", "0")
    assert HarnessConfig.from_env().max_workers == 1
    monkeypatch.setenv("GENDJ_MAX_WORKERS", "many")
    with pytest.raises(FormatError):
        HarnessConfig.from_env()


def test_experiment_config_rejects_unknown_fields():
    with pytest.raises(ValueError):
        ExperimentConfig(function="f.json", colour="red")


def test_json_logging_includes_extras(capsys, restore_logging):
    LoggerUtils.configure(LogConfig(level="INFO", json_format=True, enable_file=False, console_stream="stdout"))
    LoggerUtils.get_logger("gendj.test").info("sweep step", extra={'index': 3})
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record["message"] == "sweep step"
    assert record["index"] == 3
    assert record["level"] == "INFO"


def test_file_logging(tmp_path, restore_logging):
    path = tmp_path / "logs" / "gendj.log"
    LoggerUtils.configure(LogConfig(level="DEBUG", enable_console=False, file_path=str(path)))
    LoggerUtils.get_logger("gendj.test").debug("to file")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "to file" in path.read_text()


def test_log_operation_reports_failures(caplog):
    @LoggerUtils.log_operation("explode")
    def explode():
        raise PreconditionError("bad input")

    caplog.set_level(logging.INFO)
    with pytest.raises(PreconditionError):
        explode()
    failed = [r for r in caplog.records if getattr(r, 'status', None) == 'error']
    assert failed and failed[0].error_type == "PreconditionError"


def test_log_performance_flags_slow_calls(caplog):
    @LoggerUtils.log_performance(threshold_seconds=0.0)
    def quick():
        return 42

    caplog.set_level(logging.WARNING)
    assert quick() == 42
    assert any(getattr(r, 'performance_issue', False) for r in caplog.records)


def test_operation_context_logs_error(caplog):
    caplog.set_level(logging.INFO)
    with pytest.raises(FormatError):
        with LoggerUtils.create_operation_context("experiment-0", index=0):
            raise FormatError("broken")
    statuses = [getattr(r, 'status', None) for r in caplog.records if r.name == 'gendj.operations']
    assert statuses == ['start', 'error']
