"""
State Vector Module - Exact two-register simulation

This module holds the dense complex state of a control register (n qubits,
N = 2^n) joined with an auxiliary register (m qubits, M = 2^m), together
with every unitary the algorithms are built from: the Walsh-Hadamard
transform, the QFT over Z_D, the additive and bitwise oracles, the
auxiliary σ_z layer and the f-dependent phase transform.

Index convention: flat index = x*M + z, bits little-endian inside each
register (x = Σ x_j 2^j). Viewed as an (N, M) matrix, row x holds the
auxiliary amplitudes attached to control basis state |x>.
"""

import functools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Any, Optional, Tuple, Union

import numpy as np

from .errors import PreconditionError, SimulationError
from .oracle_model import FunctionTable, parity_of
from ..utils.logger_utils import LoggerUtils


class Register(Enum):
    """The two registers of the system"""
    CONTROL = "control"
    AUXILIARY = "auxiliary"


class PhaseMode(Enum):
    """How the phase transform turns f(x) into a phase"""
    EXACT = "exact"
    PARITY = "parity"


@dataclass(frozen=True)
class RegisterShape:
    """Qubit counts of the control (n) and auxiliary (m) registers"""
    n: int
    m: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not isinstance(self.m, (int, np.integer)):
            raise PreconditionError("Register sizes must be integers", {'n': self.n, 'm': self.m})
        if self.n < 1 or self.m < 1:
            raise PreconditionError(f"Register sizes must satisfy n >= 1 and m >= 1, got n={self.n}, m={self.m}",
                                    {'n': self.n, 'm': self.m})

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def size(self) -> int:
        return self.N * self.M

    def dimension(self, target: Register) -> int:
        return self.N if target == Register.CONTROL else self.M

    @classmethod
    def of(cls, f: FunctionTable) -> 'RegisterShape':
        return cls(f.n, f.m)


@dataclass
class StateVector:
    """Dense amplitudes over the joint control ⊗ auxiliary basis"""
    shape: RegisterShape
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if self.amps.size != self.shape.size:
            raise PreconditionError(f"Expected {self.shape.size} amplitudes, got {self.amps.size}",
                                    {'expected': self.shape.size, 'actual': self.amps.size})

    def as_matrix(self) -> np.ndarray:
        """(N, M) view: row x, column z"""
        return self.amps.reshape(self.shape.N, self.shape.M)

    @classmethod
    def from_matrix(cls, shape: RegisterShape, matrix: np.ndarray) -> 'StateVector':
        return cls(shape, np.ascontiguousarray(matrix).reshape(-1))

    def amplitude(self, x: int, z: int) -> complex:
        return complex(self.amps[x * self.shape.M + z])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> 'StateVector':
        return StateVector(self.shape, self.amps.copy())


@dataclass
class FactoredState:
    """
    Product state control ⊗ aux kept as two factors.

    This is the fast path for `W_n R_{ξ,f} W_n |0^n>`: the auxiliary factor
    is carried along untouched and never multiplied out unless `expand` is
    called.
    """
    shape: RegisterShape
    control: np.ndarray
    aux: np.ndarray

    def __post_init__(self):
        self.control = np.asarray(self.control, dtype=np.complex128).reshape(-1)
        self.aux = np.asarray(self.aux, dtype=np.complex128).reshape(-1)
        if self.control.size != self.shape.N or self.aux.size != self.shape.M:
            raise PreconditionError("Factor lengths do not match the register shape",
                                    {'N': self.shape.N, 'M': self.shape.M,
                                     'control': self.control.size, 'aux': self.aux.size})

    def expand(self) -> StateVector:
        return StateVector(self.shape, np.outer(self.control, self.aux).reshape(-1))

    def copy(self) -> 'FactoredState':
        return FactoredState(self.shape, self.control.copy(), self.aux.copy())


@dataclass
class Measurement:
    """Exact marginal distribution of one register plus optional samples"""
    register: Register
    distribution: np.ndarray
    shots: int = 0
    seed: Optional[int] = None
    samples: Optional[np.ndarray] = None
    histogram: Optional[Dict[int, int]] = None

    def probability(self, outcome: int) -> float:
        return float(self.distribution[outcome])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'register': self.register.value,
            'distribution': self.distribution,
            'shots': self.shots,
            'seed': self.seed,
            'histogram': self.histogram,
        }


@dataclass
class SimulatorConfig:
    """Configuration for the state-vector simulator"""
    norm_tolerance: float = 1e-12
    amplitude_tolerance: float = 1e-10
    qft_method: str = "direct"  # "direct" O(D^2) matrix, or "fft"
    walsh_method: str = "butterfly"  # "butterfly" or "matrix"
    check_norm: bool = True
    max_qubits: int = 24


@functools.lru_cache(maxsize=64)
def roots_of_unity(d: int) -> np.ndarray:
    """Table of ω_d^k for k in Z_d; quarter turns are exact"""
    roots = np.exp(2j * np.pi * np.arange(d) / d)
    roots[0] = 1.0
    if d % 2 == 0:
        roots[d // 2] = -1.0
    if d % 4 == 0:
        roots[d // 4] = 1j
        roots[3 * d // 4] = -1j
    roots.setflags(write=False)
    return roots


@functools.lru_cache(maxsize=32)
def fourier_matrix(d: int, inverse: bool = False) -> np.ndarray:
    """Kernel ω_d^{±xy}/√d, built by index arithmetic mod d"""
    k = np.arange(d, dtype=np.int64)
    exponents = np.outer(k, k) % d
    if inverse:
        exponents = (-exponents) % d
    matrix = roots_of_unity(d)[exponents] / np.sqrt(d)
    matrix.setflags(write=False)
    return matrix


@functools.lru_cache(maxsize=32)
def walsh_matrix(n: int) -> np.ndarray:
    """Kernel (-1)^{x·y}/√N with x·y the bitwise dot product mod 2"""
    size = 1 << n
    k = np.arange(size, dtype=np.int64)
    signs = 1 - 2 * parity_of(np.bitwise_and.outer(k, k))
    matrix = signs.astype(np.complex128) / np.sqrt(size)
    matrix.setflags(write=False)
    return matrix


def _walsh_butterfly(rows: np.ndarray) -> np.ndarray:
    """Apply W_n along axis 0 of an (N, cols) array, one qubit at a time"""
    size, cols = rows.shape
    n = size.bit_length() - 1
    tensor = rows.reshape((2,) * n + (cols,))
    for axis in range(n):
        lo = np.take(tensor, 0, axis=axis)
        hi = np.take(tensor, 1, axis=axis)
        tensor = np.stack((lo + hi, lo - hi), axis=axis)
    return tensor.reshape(size, cols) / np.sqrt(size)


class StateVectorSimulator:
    """
    Dense simulator for the two-register system.

    Every apply_* returns a new state and leaves its input untouched.
    `oracle_calls` counts applications of U_f and U_f^⊕ made through this
    instance, so each run gets its own simulator.
    """

    def __init__(self, config: Optional[SimulatorConfig] = None):
        self.config = config or SimulatorConfig()
        self.logger = LoggerUtils.get_logger(__name__)
        self.oracle_calls = 0
        if self.config.qft_method not in ("direct", "fft"):
            raise PreconditionError(f"Unknown QFT method: {self.config.qft_method}")
        if self.config.walsh_method not in ("butterfly", "matrix"):
            raise PreconditionError(f"Unknown Walsh method: {self.config.walsh_method}")

    # ------------------------------------------------------------------
    # preparation

    def init_basis(self, shape: RegisterShape, x: int, z: int) -> StateVector:
        """Basis state |x> ⊗ |z>"""
        if shape.n + shape.m > self.config.max_qubits:
            raise PreconditionError(f"{shape.n + shape.m} qubits exceed the simulator limit of {self.config.max_qubits}")
        if not 0 <= x < shape.N:
            raise PreconditionError(f"Control index {x} out of range [0, {shape.N})",
                                    {'index': x, 'bound': shape.N, 'register': 'control'})
        if not 0 <= z < shape.M:
            raise PreconditionError(f"Auxiliary index {z} out of range [0, {shape.M})",
                                    {'index': z, 'bound': shape.M, 'register': 'auxiliary'})
        amps = np.zeros(shape.size, dtype=np.complex128)
        amps[x * shape.M + z] = 1.0
        return StateVector(shape, amps)

    def init_product(self, shape: RegisterShape, control: np.ndarray, aux: np.ndarray) -> StateVector:
        """Dense state for control ⊗ aux, each factor already normalized"""
        factored = FactoredState(shape, control, aux)
        for name, vector in (('control', factored.control), ('aux', factored.aux)):
            if abs(np.linalg.norm(vector) - 1.0) > self.config.norm_tolerance:
                raise PreconditionError(f"The {name} factor is not normalized",
                                        {'norm': float(np.linalg.norm(vector))})
        return self._checked(factored.expand())

    # ------------------------------------------------------------------
    # control-register transforms

    @LoggerUtils.log_performance(threshold_seconds=2.0)
    def apply_walsh_control(self, state: Union[StateVector, FactoredState]) -> Union[StateVector, FactoredState]:
        """W_n ⊗ I"""
        return self._on_control(state, self._walsh_rows)

    @LoggerUtils.log_performance(threshold_seconds=2.0)
    def apply_qft(self, state: Union[StateVector, FactoredState], target: Register,
                  inverse: bool = False) -> Union[StateVector, FactoredState]:
        """F (or F^-1) on one register: amp'(y) = (1/√D) Σ_x ω_D^{±xy} amp(x)"""
        if target == Register.CONTROL:
            return self._on_control(state, lambda rows: self._fourier_rows(rows, inverse))
        if isinstance(state, FactoredState):
            aux = self._fourier_rows(state.aux[:, None], inverse)[:, 0]
            return FactoredState(state.shape, state.control.copy(), aux)
        matrix = self._fourier_rows(state.as_matrix().T, inverse).T
        return self._checked(StateVector.from_matrix(state.shape, matrix))

    def _walsh_rows(self, rows: np.ndarray) -> np.ndarray:
        if self.config.walsh_method == "matrix":
            return walsh_matrix(rows.shape[0].bit_length() - 1) @ rows
        return _walsh_butterfly(rows)

    def _fourier_rows(self, rows: np.ndarray, inverse: bool) -> np.ndarray:
        if self.config.qft_method == "fft":
            # numpy's ifft carries the +2πi kernel, i.e. our forward F
            if inverse:
                return np.fft.fft(rows, axis=0, norm="ortho")
            return np.fft.ifft(rows, axis=0, norm="ortho")
        return fourier_matrix(rows.shape[0], inverse) @ rows

    def _on_control(self, state, transform):
        if isinstance(state, FactoredState):
            control = transform(state.control[:, None])[:, 0]
            return self._checked_factored(FactoredState(state.shape, control, state.aux.copy()))
        return self._checked(StateVector.from_matrix(state.shape, transform(state.as_matrix())))

    # ------------------------------------------------------------------
    # oracles

    def apply_oracle_add(self, state: StateVector, f: FunctionTable) -> StateVector:
        """U_f: |x>|z> -> |x>|z + f(x) mod M>"""
        self._check_function(state.shape, f)
        shape = state.shape
        z = np.arange(shape.M, dtype=np.int64)
        source = (z[None, :] - f.as_array()[:, None]) % shape.M
        self.oracle_calls += 1
        matrix = np.take_along_axis(state.as_matrix(), source, axis=1)
        return self._checked(StateVector.from_matrix(shape, matrix))

    def apply_oracle_xor(self, state: StateVector, f: FunctionTable) -> StateVector:
        """U_f^⊕: |x>|z> -> |x>|z ⊕ f(x)>"""
        self._check_function(state.shape, f)
        shape = state.shape
        z = np.arange(shape.M, dtype=np.int64)
        source = z[None, :] ^ f.as_array()[:, None]
        self.oracle_calls += 1
        matrix = np.take_along_axis(state.as_matrix(), source, axis=1)
        return self._checked(StateVector.from_matrix(shape, matrix))

    def apply_pauli_z_aux(self, state: StateVector) -> StateVector:
        """I ⊗ σ_z^{⊗m}: phase (-1)^{popcount(z)}"""
        signs = 1 - 2 * parity_of(np.arange(state.shape.M, dtype=np.int64))
        return self._checked(StateVector.from_matrix(state.shape, state.as_matrix() * signs[None, :]))

    def apply_phase_transform(self, state: Union[StateVector, FactoredState], f: FunctionTable,
                              xi: int, mode: PhaseMode = PhaseMode.EXACT) -> Union[StateVector, FactoredState]:
        """R_{ξ,f}: |x> -> ω_M^{ξ f(x)} |x> (exact) or (-1)^{p(f(x))} |x> (parity)"""
        self._check_function(state.shape, f)
        phases = self.phase_vector(f, xi, mode)
        if isinstance(state, FactoredState):
            return self._checked_factored(FactoredState(state.shape, state.control * phases, state.aux.copy()))
        return self._checked(StateVector.from_matrix(state.shape, state.as_matrix() * phases[:, None]))

    @staticmethod
    def phase_vector(f: FunctionTable, xi: int, mode: PhaseMode = PhaseMode.EXACT) -> np.ndarray:
        values = f.as_array()
        if mode == PhaseMode.PARITY:
            return (1 - 2 * parity_of(values)).astype(np.complex128)
        return roots_of_unity(f.M)[(int(xi) * values) % f.M]

    # ------------------------------------------------------------------
    # measurement and read-out

    def measure_register(self, state: StateVector, target: Register, shots: int = 0,
                         seed: Optional[int] = None,
                         rng: Optional[np.random.Generator] = None) -> Measurement:
        """Marginal distribution of `target` (the other register is discarded) and optional samples"""
        if shots < 0:
            raise PreconditionError(f"shots must be >= 0, got {shots}", {'shots': shots})
        weights = np.abs(state.as_matrix()) ** 2
        axis = 1 if target == Register.CONTROL else 0
        distribution = weights.sum(axis=axis)

        measurement = Measurement(register=target, distribution=distribution, shots=shots, seed=seed)
        if shots > 0:
            rng = rng if rng is not None else np.random.default_rng(seed)
            samples = rng.choice(distribution.size, size=shots, p=distribution / distribution.sum())
            counts = np.bincount(samples, minlength=distribution.size)
            measurement.samples = samples
            measurement.histogram = {int(k): int(v) for k, v in enumerate(counts) if v}
        return measurement

    def postselect(self, state: StateVector, target: Register, outcome: int) -> Tuple[StateVector, float]:
        """Project `target` onto |outcome> and renormalize; returns the state and its probability"""
        dimension = state.shape.dimension(target)
        if not 0 <= outcome < dimension:
            raise PreconditionError(f"Outcome {outcome} out of range [0, {dimension})",
                                    {'index': outcome, 'bound': dimension})
        matrix = state.as_matrix()
        projected = np.zeros_like(matrix)
        if target == Register.CONTROL:
            projected[outcome, :] = matrix[outcome, :]
        else:
            projected[:, outcome] = matrix[:, outcome]
        probability = float(np.vdot(projected, projected).real)
        if probability <= 0.0:
            raise SimulationError(f"Outcome {outcome} on the {target.value} register has probability zero")
        projected /= np.sqrt(probability)
        return self._checked(StateVector.from_matrix(state.shape, projected)), probability

    @staticmethod
    def control_amplitudes(state: StateVector, aux: np.ndarray) -> np.ndarray:
        """<aux| applied to the auxiliary register: the control factor when state = c ⊗ aux"""
        return state.as_matrix() @ np.conj(np.asarray(aux, dtype=np.complex128))

    @staticmethod
    def aux_fidelity(state: StateVector, aux: np.ndarray) -> float:
        """<aux| ρ_aux |aux> where ρ_aux is the reduced auxiliary state"""
        projected = StateVectorSimulator.control_amplitudes(state, aux)
        return float(np.vdot(projected, projected).real)

    # ------------------------------------------------------------------
    # guards

    def _check_function(self, shape: RegisterShape, f: FunctionTable):
        if f.n != shape.n or f.m != shape.m:
            raise PreconditionError(
                f"Function table (n={f.n}, m={f.m}) does not match state (n={shape.n}, m={shape.m})",
                {'function': (f.n, f.m), 'state': (shape.n, shape.m)})

    def _checked(self, state: StateVector) -> StateVector:
        if self.config.check_norm:
            self._check_vector(state.amps)
        return state

    def _checked_factored(self, state: FactoredState) -> FactoredState:
        if self.config.check_norm:
            self._check_vector(state.control)
            self._check_vector(state.aux)
        return state

    def _check_vector(self, amps: np.ndarray):
        if not np.all(np.isfinite(amps)):
            raise SimulationError("State contains non-finite amplitudes")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > self.config.norm_tolerance:
            raise SimulationError(f"State norm drifted to {norm!r}", {'norm': norm})
