"""
Algorithms Module - Generalized Deutsch-Jozsa procedures

This module runs the three end-to-end procedures on the dense simulator:

- gdj1: one evaluation of U_f with the auxiliary register prepared in
  F|-ξ>, deciding constant vs evenly distributed f: Z_N -> Z_M.
- dj-uninit: the Boolean algorithm that works from an arbitrary auxiliary
  qubit a|0> + b|1> by evaluating f twice around a σ_z, and hands the
  auxiliary qubit back unchanged.
- gdj2: the bitwise/parity version of dj-uninit for an m-qubit product
  auxiliary register.

Each run is checked against an analytic amplitude oracle (S_y or S_y').
The module also holds the kickback-condition checks and the period finder
that recovers μ = M/K from an evenly distributed f.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Dict, Any, List, Optional, Sequence, Tuple

import numpy as np

from .errors import PreconditionError
from .oracle_model import (
    Classification,
    EvenSpec,
    FunctionTable,
    PromiseClass,
    classify_function,
    parity_of,
)
from .statevector import (
    FactoredState,
    PhaseMode,
    Register,
    RegisterShape,
    SimulatorConfig,
    StateVector,
    StateVectorSimulator,
    roots_of_unity,
)
from ..utils.logger_utils import LoggerUtils

PROMISE_SATISFIED = "satisfied"
PROMISE_VIOLATED = "promise-violated: outcome heuristic"


class Transform(Enum):
    """Control-register transform used around the oracle"""
    WALSH = "walsh"
    FOURIER = "fourier"


class FourierFinal(Enum):
    """Direction of the closing Fourier transform in the Fourier variants"""
    INVERSE = "inverse"
    FORWARD = "forward"


class Decision(Enum):
    """Outcome of the measurement rule on the control register"""
    NOT_EVENLY_DISTRIBUTED = "not-evenly-distributed"
    NONCONSTANT = "nonconstant"


class AuxKind(Enum):
    """How the auxiliary register starts out"""
    FOURIER_OF_MINUS_XI = "fourier-xi"
    PRODUCT_STATE = "product"
    ARBITRARY = "vector"


@dataclass(frozen=True)
class AuxSpec:
    """Initial state of the auxiliary register"""
    kind: AuxKind
    xi: Optional[int] = None
    pairs: Optional[Tuple[Tuple[complex, complex], ...]] = None
    vector: Optional[Tuple[complex, ...]] = None

    @classmethod
    def fourier_of_minus_xi(cls, xi: int) -> 'AuxSpec':
        return cls(AuxKind.FOURIER_OF_MINUS_XI, xi=int(xi))

    @classmethod
    def product_state(cls, pairs: Sequence[Tuple[complex, complex]]) -> 'AuxSpec':
        return cls(AuxKind.PRODUCT_STATE, pairs=tuple((complex(a), complex(b)) for a, b in pairs))

    @classmethod
    def arbitrary(cls, vector: Sequence[complex]) -> 'AuxSpec':
        return cls(AuxKind.ARBITRARY, vector=tuple(complex(v) for v in vector))

    @classmethod
    def zeros(cls, m: int) -> 'AuxSpec':
        """|0^m>, the uninitialized default"""
        return cls.product_state([(1.0, 0.0)] * m)

    @classmethod
    def minus(cls, m: int) -> 'AuxSpec':
        """((|0> - |1>)/√2)^{⊗m}"""
        h = 1.0 / math.sqrt(2.0)
        return cls.product_state([(h, -h)] * m)

    def validate(self, m: int, tolerance: float = 1e-12) -> 'AuxSpec':
        M = 1 << m
        if self.kind == AuxKind.FOURIER_OF_MINUS_XI:
            if self.xi is None or self.xi % M == 0:
                raise PreconditionError(f"F|-xi> needs a nonzero xi in Z_{M}, got {self.xi}", {'xi': self.xi})
        elif self.kind == AuxKind.PRODUCT_STATE:
            if self.pairs is None or len(self.pairs) != m:
                count = 0 if self.pairs is None else len(self.pairs)
                raise PreconditionError(f"Product state needs {m} (a, b) pairs, got {count}",
                                        {'expected': m, 'actual': count})
            for j, (a, b) in enumerate(self.pairs):
                weight = abs(a) ** 2 + abs(b) ** 2
                if abs(weight - 1.0) > tolerance:
                    raise PreconditionError(f"Auxiliary qubit {j} has |a|^2 + |b|^2 = {weight!r}",
                                            {'qubit': j, 'weight': weight})
        else:
            if self.vector is None or len(self.vector) != M:
                count = 0 if self.vector is None else len(self.vector)
                raise PreconditionError(f"Auxiliary vector needs {M} amplitudes, got {count}",
                                        {'expected': M, 'actual': count})
            norm = float(np.linalg.norm(np.asarray(self.vector)))
            if abs(norm - 1.0) > tolerance:
                raise PreconditionError(f"Auxiliary vector has norm {norm!r}", {'norm': norm})
        return self

    def state_vector(self, m: int) -> np.ndarray:
        """Amplitudes over z in Z_M"""
        M = 1 << m
        if self.kind == AuxKind.FOURIER_OF_MINUS_XI:
            z = np.arange(M, dtype=np.int64)
            return roots_of_unity(M)[(-self.xi * z) % M] / np.sqrt(M)
        if self.kind == AuxKind.PRODUCT_STATE:
            vector = np.ones(1, dtype=np.complex128)
            # qubit j is bit j of z, so the highest qubit goes leftmost in the kron
            for a, b in reversed(self.pairs):
                vector = np.kron(vector, np.array([a, b], dtype=np.complex128))
            return vector
        return np.asarray(self.vector, dtype=np.complex128)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'kind': self.kind.value}
        if self.xi is not None:
            data['xi'] = self.xi
        if self.pairs is not None:
            data['pairs'] = [[a, b] for a, b in self.pairs]
        if self.vector is not None:
            data['vector'] = list(self.vector)
        return data


@dataclass
class RunReport:
    """Everything one quantum run produced"""
    algorithm: str
    n: int
    m: int
    aux: AuxSpec
    transform: Transform
    fourier_final: Optional[FourierFinal]
    xi: Optional[int]
    distribution: np.ndarray
    p_zero: float
    decision: Decision
    promise: PromiseClass
    recovered_spec: Optional[EvenSpec]
    promise_status: str
    xi_valid: Optional[bool]
    aux_fidelity: float
    oracle_calls: int
    control_amplitudes: np.ndarray
    analytic_amplitudes: np.ndarray
    max_analytic_deviation: float
    shots: int = 0
    seed: Optional[int] = None
    histogram: Optional[Dict[int, int]] = None

    def summary_line(self) -> str:
        return f"decision: {self.decision.value}, P0={self.p_zero:.12f}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'algorithm': self.algorithm,
            'shape': {'n': self.n, 'm': self.m},
            'aux': self.aux.to_dict(),
            'transform': self.transform.value,
            'fourier_final': self.fourier_final.value if self.fourier_final else None,
            'xi': self.xi,
            'distribution': self.distribution,
            'histogram': self.histogram,
            'p_zero': self.p_zero,
            'decision': self.decision.value,
            'promise': self.promise.value,
            'recovered_spec': self.recovered_spec.to_dict() if self.recovered_spec else None,
            'promise_status': self.promise_status,
            'xi_valid': self.xi_valid,
            'aux_fidelity': self.aux_fidelity,
            'oracle_calls': self.oracle_calls,
            'control_amplitudes': self.control_amplitudes,
            'analytic_amplitudes': self.analytic_amplitudes,
            'max_analytic_deviation': self.max_analytic_deviation,
            'shots': self.shots,
            'seed': self.seed,
        }


@dataclass
class PeriodReport:
    """Samples and the recovered spacing from the period finder"""
    samples: List[int]
    k_hat: int
    mu_hat: int
    success: Optional[bool]
    inconclusive: bool
    herald_probability: float
    distribution: np.ndarray
    oracle_calls: int
    M: int
    seed: Optional[int] = None
    true_k: Optional[int] = None
    true_mu: Optional[int] = None
    expected_preparations: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'samples': self.samples,
            'K_hat': self.k_hat,
            'mu_hat': self.mu_hat,
            'success': self.success,
            'inconclusive': self.inconclusive,
            'herald_probability': self.herald_probability,
            'distribution': self.distribution,
            'oracle_calls': self.oracle_calls,
            'expected_preparations': self.expected_preparations,
            'M': self.M,
            'seed': self.seed,
            'true_K': self.true_k,
            'true_mu': self.true_mu,
        }


@dataclass
class KickbackCheck:
    """Whether one oracle call already produced the phase-kicked product state"""
    holds: bool
    residual: float
    degenerate: bool
    degenerate_bits: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'holds': self.holds,
            'residual': self.residual,
            'degenerate': self.degenerate,
            'degenerate_bits': list(self.degenerate_bits),
        }


@dataclass
class AlgorithmConfig:
    """Configuration for the algorithm runner"""
    simulator: SimulatorConfig = field(default_factory=SimulatorConfig)
    decision_threshold: float = 0.5
    default_xi: int = 1
    period_samples: int = 8
    fourier_final: FourierFinal = FourierFinal.INVERSE
    kickback_tolerance: float = 1e-10


def _kernel_row(n: int, y: int, transform: Transform, final: FourierFinal) -> np.ndarray:
    """Closing-transform kernel over x for fixed y (without normalization)"""
    N = 1 << n
    x = np.arange(N, dtype=np.int64)
    if transform == Transform.WALSH:
        return (1 - 2 * parity_of(x & y)).astype(np.complex128)
    exponents = (x * y) % N
    if final == FourierFinal.INVERSE:
        exponents = (-exponents) % N
    return roots_of_unity(N)[exponents]


def _check_y(f: FunctionTable, y: int):
    if not 0 <= y < f.N:
        raise PreconditionError(f"Outcome y={y} out of range [0, {f.N})", {'index': y, 'bound': f.N})


def analytic_Sy(f: FunctionTable, xi: int, y: int,
                transform: Transform = Transform.WALSH,
                final: FourierFinal = FourierFinal.INVERSE) -> complex:
    """S_y = (1/N) Σ_x (-1)^{x·y} ω_M^{ξ f(x)} (or the Fourier kernel ω_N^{∓xy})"""
    _check_y(f, y)
    phases = roots_of_unity(f.M)[(int(xi) * f.as_array()) % f.M]
    return complex(np.sum(_kernel_row(f.n, y, transform, final) * phases) / f.N)


def analytic_amplitudes(f: FunctionTable, xi: int,
                        transform: Transform = Transform.WALSH,
                        final: FourierFinal = FourierFinal.INVERSE) -> np.ndarray:
    return np.array([analytic_Sy(f, xi, y, transform, final) for y in range(f.N)], dtype=np.complex128)


def analytic_Sy_prime(f: FunctionTable, y: int,
                      transform: Transform = Transform.WALSH,
                      final: FourierFinal = FourierFinal.INVERSE) -> complex:
    """S_y' = (1/N) Σ_x (-1)^{x·y} (-1)^{p∘f(x)}; real for the Walsh kernel"""
    _check_y(f, y)
    signs = 1 - 2 * parity_of(f.as_array())
    value = complex(np.sum(_kernel_row(f.n, y, transform, final) * signs) / f.N)
    if transform == Transform.WALSH:
        return value.real
    return value


def analytic_amplitudes_prime(f: FunctionTable,
                              transform: Transform = Transform.WALSH,
                              final: FourierFinal = FourierFinal.INVERSE) -> np.ndarray:
    return np.array([analytic_Sy_prime(f, y, transform, final) for y in range(f.N)], dtype=np.complex128)


class GeneralizedDJ:
    """
    Runner for the generalized Deutsch-Jozsa algorithms.

    Features:
    - Single-evaluation algorithm with F|-ξ> auxiliary (Walsh or Fourier)
    - Two-evaluation algorithms that restore an uninitialized auxiliary
    - Analytic S_y / S_y' oracles attached to every report
    - Kickback-condition checks
    - μ recovery by Fourier sampling of the image of f
    """

    def __init__(self, config: Optional[AlgorithmConfig] = None):
        self.config = config or AlgorithmConfig()
        self.logger = LoggerUtils.get_logger(__name__)

    def _simulator(self) -> StateVectorSimulator:
        return StateVectorSimulator(self.config.simulator)

    # ------------------------------------------------------------------
    # single-evaluation algorithm

    @LoggerUtils.log_operation("run_gdj1")
    def run_gdj1(self, f: FunctionTable, xi: Optional[int] = None,
                 transform: Transform = Transform.WALSH, shots: int = 0, seed: Optional[int] = 0,
                 fourier_final: Optional[FourierFinal] = None) -> RunReport:
        """
        W_n ⊗ I, U_f, W_n ⊗ I on |0^n> ⊗ F|-ξ>.

        In the Fourier variant the transforms are F then F^-1 (or F again
        with `fourier_final=FORWARD`).
        """
        xi = self.config.default_xi if xi is None else int(xi)
        if xi % f.M == 0:
            raise PreconditionError(f"xi must be nonzero in Z_{f.M}; xi={xi} makes every phase trivial",
                                    {'xi': xi, 'M': f.M})
        xi %= f.M
        final = fourier_final or self.config.fourier_final
        shape = RegisterShape.of(f)
        aux = AuxSpec.fourier_of_minus_xi(xi)

        sim = self._simulator()
        state = sim.init_basis(shape, 0, (-xi) % f.M)
        state = sim.apply_qft(state, Register.AUXILIARY)
        state = self._open(sim, state, transform)
        state = sim.apply_oracle_add(state, f)
        state = self._close(sim, state, transform, final)

        analytic = analytic_amplitudes(f, xi, transform, final)
        return self._report("gdj1", f, sim, state, aux, transform, final, xi, analytic, shots, seed)

    # ------------------------------------------------------------------
    # two-evaluation algorithms

    @LoggerUtils.log_operation("run_dj_uninit")
    def run_dj_uninit(self, f: FunctionTable, a: complex, b: complex,
                      shots: int = 0, seed: Optional[int] = 0) -> RunReport:
        """W_n ⊗ I, U_f, I ⊗ σ_z, U_f, I ⊗ σ_z, W_n ⊗ I on |0^n> ⊗ (a|0> + b|1>)"""
        if not f.is_boolean():
            raise PreconditionError(f"The one-qubit algorithm needs a Boolean f (m = 1), got m = {f.m}",
                                    {'m': f.m})
        aux = AuxSpec.product_state([(a, b)]).validate(1, self.config.simulator.norm_tolerance)
        shape = RegisterShape.of(f)

        sim = self._simulator()
        state = sim.init_product(shape, self._basis_control(shape), aux.state_vector(1))
        state = sim.apply_walsh_control(state)
        state = sim.apply_oracle_add(state, f)
        state = sim.apply_pauli_z_aux(state)
        state = sim.apply_oracle_add(state, f)
        state = sim.apply_pauli_z_aux(state)
        state = sim.apply_walsh_control(state)

        analytic = analytic_amplitudes_prime(f)
        return self._report("dj-uninit", f, sim, state, aux, Transform.WALSH, None, None,
                            analytic, shots, seed)

    @LoggerUtils.log_operation("run_gdj2")
    def run_gdj2(self, f: FunctionTable, aux: Optional[AuxSpec] = None,
                 transform: Transform = Transform.WALSH, shots: int = 0, seed: Optional[int] = 0,
                 fourier_final: Optional[FourierFinal] = None,
                 allow_entangled: bool = False) -> RunReport:
        """
        W_n ⊗ I, U_f^⊕, I ⊗ σ_z^{⊗m}, U_f^⊕, I ⊗ σ_z^{⊗m}, W_n ⊗ I.

        The auxiliary register must be a product of single-qubit states.
        With `allow_entangled` an arbitrary vector is accepted and run as
        is; restoration is then reported, not promised.
        """
        aux = aux or AuxSpec.zeros(f.m)
        if aux.kind != AuxKind.PRODUCT_STATE and not (allow_entangled and aux.kind == AuxKind.ARBITRARY):
            raise PreconditionError(
                "The parity algorithm assumes the auxiliary qubits are separable; "
                f"got an auxiliary state of kind '{aux.kind.value}'",
                {'aux_kind': aux.kind.value, 'constraint': 'separable auxiliary register'})
        aux.validate(f.m, self.config.simulator.norm_tolerance)
        final = fourier_final or self.config.fourier_final
        shape = RegisterShape.of(f)

        sim = self._simulator()
        state = sim.init_product(shape, self._basis_control(shape), aux.state_vector(f.m))
        state = self._open(sim, state, transform)
        state = sim.apply_oracle_xor(state, f)
        state = sim.apply_pauli_z_aux(state)
        state = sim.apply_oracle_xor(state, f)
        state = sim.apply_pauli_z_aux(state)
        state = self._close(sim, state, transform, final)

        analytic = analytic_amplitudes_prime(f, transform, final)
        return self._report("gdj2", f, sim, state, aux, transform, final, None, analytic, shots, seed)

    # ------------------------------------------------------------------
    # kickback conditions

    @LoggerUtils.log_operation("check_kickback_condition")
    def check_kickback_condition(self, a: complex, b: complex, f: FunctionTable) -> KickbackCheck:
        """Does U_f (W_n ⊗ I)(|0^n> ⊗ Ψ) already equal (1/√N) Σ (-1)^{f(x)} |x> ⊗ Ψ ?"""
        if not f.is_boolean():
            raise PreconditionError(f"The one-qubit condition needs a Boolean f (m = 1), got m = {f.m}")
        aux = AuxSpec.product_state([(a, b)]).validate(1, self.config.simulator.norm_tolerance)
        check = self._kickback(f, aux, bitwise=False)
        check.degenerate = classify_function(f).promise == PromiseClass.CONSTANT
        return check

    @LoggerUtils.log_operation("check_kickback_condition_bitwise")
    def check_kickback_condition_bitwise(self, aux: AuxSpec, f: FunctionTable) -> KickbackCheck:
        """Does U_f^⊕ (W_n ⊗ I)(|0^n> ⊗ Ψ) already equal (1/√N) Σ (-1)^{p∘f(x)} |x> ⊗ Ψ ?"""
        if aux.kind != AuxKind.PRODUCT_STATE:
            raise PreconditionError("The bitwise condition is stated for product auxiliary states",
                                    {'aux_kind': aux.kind.value})
        aux.validate(f.m, self.config.simulator.norm_tolerance)
        check = self._kickback(f, aux, bitwise=True)
        check.degenerate_bits = tuple(j for j in range(f.m) if np.all(f.bit_column(j) == f.bit_column(j)[0]))
        check.degenerate = len(check.degenerate_bits) == f.m
        return check

    def _kickback(self, f: FunctionTable, aux: AuxSpec, bitwise: bool) -> KickbackCheck:
        shape = RegisterShape.of(f)
        aux_vector = aux.state_vector(f.m)
        sim = self._simulator()

        lhs = sim.init_product(shape, self._basis_control(shape), aux_vector)
        lhs = sim.apply_walsh_control(lhs)
        lhs = sim.apply_oracle_xor(lhs, f) if bitwise else sim.apply_oracle_add(lhs, f)

        uniform = np.full(shape.N, 1.0 / np.sqrt(shape.N), dtype=np.complex128)
        rhs = sim.apply_phase_transform(FactoredState(shape, uniform, aux_vector), f, 1, PhaseMode.PARITY)
        residual = float(np.linalg.norm(lhs.amps - rhs.expand().amps))
        return KickbackCheck(holds=residual <= self.config.kickback_tolerance, residual=residual, degenerate=False)

    # ------------------------------------------------------------------
    # period finding

    @LoggerUtils.log_operation("find_mu")
    def find_mu(self, f: FunctionTable, r: Optional[int] = None, seed: Optional[int] = 0) -> PeriodReport:
        """
        Recover μ = M/K by Fourier sampling the image of f.

        Each of the r preparations evaluates U_f once on the uniform control
        superposition, heralds the control register on Walsh outcome 0^n
        (leaving the auxiliary in an equal superposition over the image
        {jμ + t}), applies F to the auxiliary register and measures it.
        Outcomes are multiples of K whatever t is; the gcd of the samples
        and M estimates K.

        `oracle_calls` counts the r accepted preparations only. A device
        without postselection needs about r / herald_probability = r·K
        attempts, reported as `expected_preparations`.
        """
        r = self.config.period_samples if r is None else int(r)
        if r < 1:
            raise PreconditionError(f"The period finder needs r >= 1 samples, got {r}", {'r': r})
        shape = RegisterShape.of(f)
        rng = np.random.default_rng(seed)
        sim = self._simulator()

        samples: List[int] = []
        herald_probability = 0.0
        measurement = None
        for _ in range(r):
            state = sim.init_basis(shape, 0, 0)
            state = sim.apply_walsh_control(state)
            state = sim.apply_oracle_add(state, f)
            state = sim.apply_walsh_control(state)
            state, herald_probability = sim.postselect(state, Register.CONTROL, 0)
            state = sim.apply_qft(state, Register.AUXILIARY)
            measurement = sim.measure_register(state, Register.AUXILIARY, shots=1, rng=rng)
            samples.append(int(measurement.samples[0]))

        g = reduce(math.gcd, samples, f.M)
        inconclusive = g == f.M
        k_hat = g
        mu_hat = f.M // g

        classification = classify_function(f)
        true_k = classification.k if classification.promise != PromiseClass.NEITHER else None
        true_mu = classification.mu if true_k is not None else None
        success = (mu_hat == true_mu) if true_mu is not None else None
        if inconclusive:
            self.logger.info("All period samples were zero", extra={'M': f.M, 'r': r})

        return PeriodReport(
            samples=samples,
            k_hat=k_hat,
            mu_hat=mu_hat,
            success=success,
            inconclusive=inconclusive,
            herald_probability=herald_probability,
            distribution=measurement.distribution,
            oracle_calls=sim.oracle_calls,
            M=f.M,
            seed=seed,
            true_k=true_k,
            true_mu=true_mu,
            expected_preparations=r / herald_probability if herald_probability > 0 else None,
        )

    # ------------------------------------------------------------------
    # auxiliary-free summary

    def run_phase_summary(self, f: FunctionTable, xi: int = 1, mode: PhaseMode = PhaseMode.EXACT,
                          transform: Transform = Transform.WALSH,
                          fourier_final: Optional[FourierFinal] = None) -> np.ndarray:
        """Control amplitudes of W_n R_{ξ,f} W_n |0^n>, with no auxiliary register involved"""
        final = fourier_final or self.config.fourier_final
        shape = RegisterShape.of(f)
        sim = self._simulator()
        state = FactoredState(shape, self._basis_control(shape), self._basis_aux(shape))
        state = self._open(sim, state, transform)
        state = sim.apply_phase_transform(state, f, xi, mode)
        state = self._close(sim, state, transform, final)
        return state.control

    # ------------------------------------------------------------------
    # helpers

    @staticmethod
    def _basis_control(shape: RegisterShape) -> np.ndarray:
        control = np.zeros(shape.N, dtype=np.complex128)
        control[0] = 1.0
        return control

    @staticmethod
    def _basis_aux(shape: RegisterShape) -> np.ndarray:
        aux = np.zeros(shape.M, dtype=np.complex128)
        aux[0] = 1.0
        return aux

    @staticmethod
    def _open(sim: StateVectorSimulator, state, transform: Transform):
        if transform == Transform.WALSH:
            return sim.apply_walsh_control(state)
        return sim.apply_qft(state, Register.CONTROL)

    @staticmethod
    def _close(sim: StateVectorSimulator, state, transform: Transform, final: FourierFinal):
        if transform == Transform.WALSH:
            return sim.apply_walsh_control(state)
        return sim.apply_qft(state, Register.CONTROL, inverse=final == FourierFinal.INVERSE)

    def _report(self, algorithm: str, f: FunctionTable, sim: StateVectorSimulator, state: StateVector,
                aux: AuxSpec, transform: Transform, final: Optional[FourierFinal], xi: Optional[int],
                analytic: np.ndarray, shots: int, seed: Optional[int]) -> RunReport:
        aux_vector = aux.state_vector(f.m)
        measurement = sim.measure_register(state, Register.CONTROL, shots=shots, seed=seed)
        p_zero = measurement.probability(0)
        decision = (Decision.NOT_EVENLY_DISTRIBUTED if p_zero > self.config.decision_threshold
                    else Decision.NONCONSTANT)

        classification = classify_function(f)
        promise_status = PROMISE_VIOLATED if classification.promise == PromiseClass.NEITHER else PROMISE_SATISFIED
        xi_valid = self._xi_valid(classification, xi)
        if xi_valid is False:
            self.logger.warning("xi is a multiple of K; the evenly distributed cancellation does not apply",
                                extra={'xi': xi, 'K': classification.k})

        control = sim.control_amplitudes(state, aux_vector)
        fidelity = sim.aux_fidelity(state, aux_vector)
        deviation = float(np.max(np.abs(control - analytic)))

        self.logger.debug(f"{algorithm} finished", extra={
            'algorithm': algorithm, 'p_zero': p_zero, 'decision': decision.value,
            'oracle_calls': sim.oracle_calls, 'promise': classification.promise.value,
        })

        return RunReport(
            algorithm=algorithm,
            n=f.n,
            m=f.m,
            aux=aux,
            transform=transform,
            fourier_final=final if transform == Transform.FOURIER else None,
            xi=xi,
            distribution=measurement.distribution,
            p_zero=p_zero,
            decision=decision,
            promise=classification.promise,
            recovered_spec=classification.spec,
            promise_status=promise_status,
            xi_valid=xi_valid,
            aux_fidelity=fidelity,
            oracle_calls=sim.oracle_calls,
            control_amplitudes=control,
            analytic_amplitudes=analytic,
            max_analytic_deviation=deviation,
            shots=shots,
            seed=seed,
            histogram=measurement.histogram,
        )

    @staticmethod
    def _xi_valid(classification: Classification, xi: Optional[int]) -> Optional[bool]:
        if xi is None or classification.promise == PromiseClass.NEITHER:
            return None
        if classification.promise == PromiseClass.CONSTANT:
            return True
        return xi % classification.k != 0
