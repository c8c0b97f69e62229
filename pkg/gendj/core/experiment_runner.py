"""
Experiment Runner Module - Config-driven runs and concurrent sweeps

An ExperimentConfig names one function table, one procedure (quantum run,
period finding or classical decider) and its parameters. The runner loads
the table, builds the auxiliary state, dispatches, and optionally writes the
report. Sweeps run a list of configs on a thread pool and return results in
config order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Any, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from .algorithms import (
    AlgorithmConfig,
    AuxKind,
    AuxSpec,
    FourierFinal,
    GeneralizedDJ,
    PeriodReport,
    RunReport,
    Transform,
)
from .classical import (
    ClassicalConfig,
    ClassicalResult,
    classical_decide_known_K,
    classical_decide_unknown_K,
)
from .errors import FormatError, GenDJError, PreconditionError, PromiseViolationError
from .oracle_model import FunctionTable
from ..utils.logger_utils import LoggerUtils
from ..utils import serialization

Report = Union[RunReport, PeriodReport, ClassicalResult]


class ExperimentConfig(BaseModel):
    """One experiment: which table, which procedure, which parameters"""

    model_config = ConfigDict(extra='forbid')

    subcommand: Literal['run', 'period', 'classical'] = 'run'
    function: Union[FunctionTable, str]
    algorithm: Literal['gdj1', 'dj-uninit', 'gdj2'] = 'gdj1'
    xi: int = 1
    transform: Transform = Transform.WALSH
    fourier_final: FourierFinal = FourierFinal.INVERSE
    aux: Optional[str] = None
    allow_entangled: bool = False
    shots: int = 0
    seed: int = 0
    samples: int = 8
    known_k: Optional[int] = None
    order: Optional[List[int]] = None
    output: Optional[str] = None


@dataclass
class HarnessConfig:
    """Configuration for the experiment harness"""
    max_workers: int = 4
    float_digits: int = serialization.DEFAULT_FLOAT_DIGITS
    algorithm: AlgorithmConfig = field(default_factory=AlgorithmConfig)
    classical: ClassicalConfig = field(default_factory=ClassicalConfig)

    @classmethod
    def from_env(cls) -> 'HarnessConfig':
        """Read GENDJ_MAX_WORKERS (call load_dotenv first to honour a .env file)"""
        raw = os.getenv('GENDJ_MAX_WORKERS')
        if raw is None:
            return cls()
        try:
            workers = int(raw)
        except ValueError as e:
            raise FormatError(f"GENDJ_MAX_WORKERS must be an integer, got {raw!r}") from e
        return cls(max_workers=max(1, workers))


@dataclass
class SweepEntry:
    """Result or failure of one experiment in a sweep"""
    index: int
    status: str
    report: Optional[Report] = None
    error_type: Optional[str] = None
    message: Optional[str] = None
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'index': self.index, 'status': self.status}
        if self.report is not None:
            data['report'] = self.report
        if self.error_type is not None:
            data['error'] = {'type': self.error_type, 'message': self.message, 'exit_code': self.exit_code}
        return data


def parse_aux(text: Optional[str], base_dir: Optional[Path] = None) -> Optional[AuxSpec]:
    """
    Decode an --aux value.

    `fourier-xi` and None mean "the algorithm's own default";
    `product:a0,b0,a1,b1,...` lists the single-qubit amplitudes (Python
    complex literals such as `0.6`, `-0.8j`, `0.5+0.5j`); anything else is
    a JSON file `{"amplitudes": [[re, im], ...]}`.
    """
    if text is None or text == '' or text == 'fourier-xi':
        return None
    if text.startswith('product:'):
        tokens = [token.strip() for token in text[len('product:'):].split(',') if token.strip()]
        if not tokens or len(tokens) % 2:
            raise FormatError(f"product aux needs an even number of amplitudes, got {len(tokens)}",
                              {'aux': text})
        try:
            values = [complex(token.replace(' ', '')) for token in tokens]
        except ValueError as e:
            raise FormatError(f"Cannot parse product aux {text!r}: {e}", {'aux': text}) from e
        return AuxSpec.product_state(list(zip(values[0::2], values[1::2])))

    path = Path(text)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    data = serialization.read_json(path)
    if not isinstance(data, dict) or 'amplitudes' not in data:
        raise FormatError(f"Aux vector file {path} needs an 'amplitudes' list", {'path': str(path)})
    return AuxSpec.arbitrary(serialization.parse_complex_pairs(data['amplitudes']).tolist())


class ExperimentRunner:
    """
    Dispatches ExperimentConfigs to the algorithm runner and classical deciders.

    Features:
    - Function tables inline or from JSON files
    - Auxiliary states from --aux strings or vector files
    - Optional report files written deterministically
    - Thread-pool sweeps with results in config order
    """

    def __init__(self, config: Optional[HarnessConfig] = None):
        self.config = config or HarnessConfig()
        self.logger = LoggerUtils.get_logger(__name__)

    def load_function(self, experiment: ExperimentConfig, base_dir: Optional[Path] = None) -> FunctionTable:
        if isinstance(experiment.function, FunctionTable):
            return experiment.function
        path = Path(experiment.function)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return FunctionTable.load(path)

    @LoggerUtils.log_operation("run_experiment")
    def run_experiment(self, experiment: ExperimentConfig, base_dir: Optional[Path] = None) -> Report:
        f = self.load_function(experiment, base_dir)

        if experiment.subcommand == 'classical':
            if experiment.known_k is not None:
                report: Report = classical_decide_known_K(f, experiment.known_k, experiment.order)
            else:
                report = classical_decide_unknown_K(f, experiment.order)
        elif experiment.subcommand == 'period':
            report = GeneralizedDJ(self.config.algorithm).find_mu(f, r=experiment.samples, seed=experiment.seed)
        else:
            report = self._run_quantum(f, experiment, base_dir)

        if experiment.output:
            output = Path(experiment.output)
            if base_dir is not None and not output.is_absolute():
                output = base_dir / output
            serialization.write_json(report, output, self.config.float_digits)
        return report

    def _run_quantum(self, f: FunctionTable, experiment: ExperimentConfig,
                     base_dir: Optional[Path]) -> RunReport:
        runner = GeneralizedDJ(self.config.algorithm)
        aux = parse_aux(experiment.aux, base_dir)

        if experiment.algorithm == 'gdj1':
            if aux is not None:
                raise PreconditionError("gdj1 always prepares F|-xi>; use --aux fourier-xi or omit it",
                                        {'algorithm': 'gdj1'})
            return runner.run_gdj1(f, experiment.xi, experiment.transform, experiment.shots,
                                   experiment.seed, experiment.fourier_final)

        if experiment.algorithm == 'dj-uninit':
            aux = aux or AuxSpec.zeros(1)
            if aux.kind == AuxKind.PRODUCT_STATE:
                if len(aux.pairs) != 1:
                    raise PreconditionError(f"dj-uninit takes one (a, b) pair, got {len(aux.pairs)}")
                a, b = aux.pairs[0]
            else:
                if len(aux.vector) != 2:
                    raise PreconditionError(f"dj-uninit takes a 2-amplitude vector, got {len(aux.vector)}")
                a, b = aux.vector
            return runner.run_dj_uninit(f, a, b, experiment.shots, experiment.seed)

        return runner.run_gdj2(f, aux, experiment.transform, experiment.shots, experiment.seed,
                               experiment.fourier_final, allow_entangled=experiment.allow_entangled)

    def run_sweep(self, experiments: Sequence[ExperimentConfig],
                  base_dir: Optional[Path] = None) -> List[SweepEntry]:
        """Run every experiment; entry i always belongs to experiments[i]"""

        def run_one(indexed) -> SweepEntry:
            index, experiment = indexed
            context = LoggerUtils.create_operation_context(
                f"experiment-{index}", index=index, subcommand=experiment.subcommand)
            try:
                with context:
                    report = self.run_experiment(experiment, base_dir)
            except GenDJError as e:
                return SweepEntry(index, 'error', error_type=type(e).__name__, message=str(e),
                                  exit_code=e.exit_code)
            except OSError as e:
                return SweepEntry(index, 'error', error_type=type(e).__name__, message=str(e),
                                  exit_code=FormatError.exit_code)
            if isinstance(report, ClassicalResult) and report.promise_violation:
                return SweepEntry(index, 'promise-violated', report=report,
                                  error_type=PromiseViolationError.__name__,
                                  message=report.violation_reason or "promise violation",
                                  exit_code=PromiseViolationError.exit_code)
            return SweepEntry(index, 'ok', report=report)

        with ThreadPoolExecutor(max_workers=max(1, self.config.max_workers)) as executor:
            entries = list(executor.map(run_one, enumerate(experiments)))

        self.logger.info("Sweep finished", extra={
            'experiments': len(entries),
            'failures': sum(1 for entry in entries if entry.status != 'ok'),
        })
        return entries

    @staticmethod
    def load_sweep(path: Union[str, Path]) -> List[ExperimentConfig]:
        """A sweep file is a JSON list of ExperimentConfig objects"""
        data = serialization.read_json(path)
        if not isinstance(data, list):
            raise FormatError(f"Sweep file {path} must contain a JSON list", {'path': str(path)})
        try:
            return [ExperimentConfig.model_validate(item) for item in data]
        except ValidationError as e:
            raise FormatError(f"Invalid experiment in {path}: {e}", {'path': str(path)}) from e
