"""
GenDJ - Generalized Deutsch-Jozsa simulation toolkit

A dense state-vector simulator for the generalized Deutsch-Jozsa family of
algorithms on f: Z_N -> Z_M, with analytic amplitude oracles, classical
query-counting baselines and a reproducible experiment harness.

Core Features:
- Control/auxiliary register simulator (Walsh, Fourier, U_f, U_f^⊕, σ_z)
- Constant / evenly distributed function tables and classification
- Single-evaluation and uninitialized-auxiliary algorithms
- Period (μ) recovery by Fourier sampling
- Classical deciders with exhaustive worst-case certification
- JSON reports and concurrent sweeps
"""

__version__ = "1.0.0"
__author__ = "GenDJ Development Team"
__license__ = "MIT"

from typing import Optional, Sequence, List

# Core components
from .core.errors import (
    GenDJError,
    PreconditionError,
    PromiseViolationError,
    FormatError,
    SimulationError,
)
from .core.statevector import (
    Register,
    PhaseMode,
    RegisterShape,
    StateVector,
    FactoredState,
    Measurement,
    StateVectorSimulator,
    SimulatorConfig,
)
from .core.oracle_model import (
    PromiseClass,
    FunctionTable,
    EvenSpec,
    Classification,
    ShiftParityReport,
    make_constant,
    make_evenly_distributed,
    make_random,
    classify_function,
    shift_parity_check,
    parity_of,
)
from .core.algorithms import (
    Transform,
    FourierFinal,
    Decision,
    AuxKind,
    AuxSpec,
    RunReport,
    PeriodReport,
    KickbackCheck,
    AlgorithmConfig,
    GeneralizedDJ,
    analytic_Sy,
    analytic_Sy_prime,
    analytic_amplitudes,
    analytic_amplitudes_prime,
)
from .core.classical import (
    ClassicalConfig,
    QueryLog,
    QueryOracle,
    ClassicalResult,
    WorstCaseCertificate,
    classical_decide_known_K,
    classical_decide_unknown_K,
    worst_case_certifier,
)
from .core.experiment_runner import (
    ExperimentConfig,
    HarnessConfig,
    ExperimentRunner,
    SweepEntry,
    parse_aux,
)

# Utilities
from .utils.logger_utils import LoggerUtils, LoggerConfig

__all__ = [
    # Version and metadata
    '__version__',
    '__author__',
    '__license__',

    # Errors
    'GenDJError',
    'PreconditionError',
    'PromiseViolationError',
    'FormatError',
    'SimulationError',

    # Simulator
    'Register',
    'PhaseMode',
    'RegisterShape',
    'StateVector',
    'FactoredState',
    'Measurement',
    'StateVectorSimulator',
    'SimulatorConfig',

    # Oracle model
    'PromiseClass',
    'FunctionTable',
    'EvenSpec',
    'Classification',
    'ShiftParityReport',
    'make_constant',
    'make_evenly_distributed',
    'make_random',
    'classify_function',
    'shift_parity_check',
    'parity_of',

    # Algorithms
    'Transform',
    'FourierFinal',
    'Decision',
    'AuxKind',
    'AuxSpec',
    'RunReport',
    'PeriodReport',
    'KickbackCheck',
    'AlgorithmConfig',
    'GeneralizedDJ',
    'analytic_Sy',
    'analytic_Sy_prime',
    'analytic_amplitudes',
    'analytic_amplitudes_prime',

    # Classical baseline
    'ClassicalConfig',
    'QueryLog',
    'QueryOracle',
    'ClassicalResult',
    'WorstCaseCertificate',
    'classical_decide_known_K',
    'classical_decide_unknown_K',
    'worst_case_certifier',

    # Harness
    'ExperimentConfig',
    'HarnessConfig',
    'ExperimentRunner',
    'SweepEntry',
    'parse_aux',

    # Utilities
    'LoggerUtils',
    'LoggerConfig',

    'GenDJ',
]


class GenDJ:
    """
    Main GenDJ class providing unified access to all components.

    One object carries the harness configuration and hands out the
    simulator, algorithm runner, classical baseline and experiment runner
    built from it.
    """

    def __init__(self, config: Optional[HarnessConfig] = None,
                 logger_config: Optional[LoggerConfig] = None):
        self.logger = LoggerUtils.get_logger(__name__)

        if logger_config:
            LoggerUtils.configure(logger_config)

        self.config = config or HarnessConfig()
        self.simulator = StateVectorSimulator(self.config.algorithm.simulator)
        self.algorithms = GeneralizedDJ(self.config.algorithm)
        self.runner = ExperimentRunner(self.config)

        self.logger.debug("GenDJ initialized", extra={'max_workers': self.config.max_workers})

    def generate(self, kind: str, n: int, m: int, c: int = 0, k: Optional[int] = None,
                 t: int = 0, seed: int = 0) -> FunctionTable:
        """
        Build a function table.

        Kinds:
        - constant: f(x) = c
        - evenly: K values {jμ + t}, blocks drawn from `seed`
        - random: uniform table from `seed`
        """
        if kind == "constant":
            return make_constant(n, m, c)
        if kind == "evenly":
            if k is None:
                raise PreconditionError("An evenly distributed table needs K")
            return make_evenly_distributed(EvenSpec(n=n, m=m, k=k, t=t), seed)
        if kind == "random":
            return make_random(n, m, seed)
        raise PreconditionError(f"Unknown table kind: {kind}", {'kind': kind})

    def classify(self, f: FunctionTable) -> Classification:
        return classify_function(f)

    def run(self, experiment: ExperimentConfig, base_dir=None):
        return self.runner.run_experiment(experiment, base_dir)

    def sweep(self, experiments: Sequence[ExperimentConfig], base_dir=None) -> List[SweepEntry]:
        return self.runner.run_sweep(experiments, base_dir)

    def certify(self, N: int, M: int, k: Optional[int] = None) -> WorstCaseCertificate:
        return worst_case_certifier(N, M, k, self.config.classical)
