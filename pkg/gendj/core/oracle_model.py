"""
Oracle Model Module - Promise functions f: Z_N -> Z_M

This module builds, serializes and classifies the lookup tables the
algorithms evaluate: constant functions, evenly distributed functions
(K equally spaced values jμ+t, each taken by exactly ν = N/K inputs) and
arbitrary tables that satisfy neither promise.
"""

from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from .errors import FormatError, PreconditionError
from ..utils.logger_utils import LoggerUtils
from ..utils import serialization

logger = LoggerUtils.get_logger(__name__)


def is_power_of_two(value: int) -> bool:
    return isinstance(value, (int, np.integer)) and value > 0 and (value & (value - 1)) == 0


def popcount(values: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
    """Number of set bits, elementwise for arrays"""
    if isinstance(values, (int, np.integer)):
        return bin(int(values)).count("1")
    arr = np.asarray(values, dtype=np.int64)
    if np.any(arr < 0):
        raise PreconditionError("popcount is defined on non-negative integers")
    counts = np.zeros_like(arr)
    remaining = arr.copy()
    while np.any(remaining):
        counts += remaining & 1
        remaining >>= 1
    return counts


def parity_of(v: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
    """Parity p: Z_2^m -> Z_2, i.e. popcount(v) mod 2"""
    if isinstance(v, (int, np.integer)):
        if v < 0:
            raise PreconditionError(f"Parity is defined on non-negative integers, got {v}")
        return popcount(v) & 1
    return popcount(v) & 1


class PromiseClass(Enum):
    """Which side of the promise a function falls on"""
    CONSTANT = "constant"
    EVENLY_DISTRIBUTED = "evenly-distributed"
    NEITHER = "neither"


class FunctionTable(BaseModel):
    """Explicit lookup table of f: Z_N -> Z_M with N = 2^n, M = 2^m"""

    model_config = ConfigDict(frozen=True, extra='forbid')

    n: StrictInt = Field(ge=1)
    m: StrictInt = Field(ge=1)
    values: Tuple[StrictInt, ...]

    @model_validator(mode='after')
    def _check_table(self) -> 'FunctionTable':
        if len(self.values) != self.N:
            raise ValueError(f"Table for n={self.n} needs {self.N} values, got {len(self.values)}")
        for x, value in enumerate(self.values):
            if not 0 <= value < self.M:
                raise ValueError(f"f({x}) = {value} is outside Z_{self.M}")
        return self

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return 1 << self.m

    def __call__(self, x: int) -> int:
        return self.values[x]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def is_boolean(self) -> bool:
        return self.m == 1

    def bit_column(self, j: int) -> np.ndarray:
        """The j-th output bit f(x)_j for every x"""
        return (self.as_array() >> j) & 1

    @classmethod
    def from_values(cls, values: Sequence[int], m: int) -> 'FunctionTable':
        values = [int(v) for v in values]
        size = len(values)
        if not is_power_of_two(size) or size < 2:
            raise PreconditionError(f"Table length must be a power of two >= 2, got {size}",
                                    {'length': size})
        try:
            return cls(n=size.bit_length() - 1, m=int(m), values=tuple(values))
        except ValidationError as e:
            raise PreconditionError(str(e)) from e

    @classmethod
    def from_dict(cls, data: Any) -> 'FunctionTable':
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise FormatError(f"Invalid function table: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'FunctionTable':
        return cls.from_dict(serialization.read_json(path))

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'm': self.m, 'values': list(self.values)}

    def save(self, path: Union[str, Path]) -> Path:
        return serialization.write_json(self.to_dict(), path)


@dataclass(frozen=True)
class EvenSpec:
    """
    Parameters of an evenly distributed function.

    The range is {jμ + t : j in Z_K} with μ = M/K and 0 <= t < μ; block
    A_j (the inputs mapped to jμ + t) has ν = N/K elements. `blocks` is
    either None (drawn from a seeded permutation) or an explicit partition.
    """
    n: int
    m: int
    k: int
    t: int = 0
    blocks: Optional[Tuple[Tuple[int, ...], ...]] = None

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def mu(self) -> int:
        return self.M // self.k

    @property
    def nu(self) -> int:
        return self.N // self.k

    def range_values(self) -> List[int]:
        return [j * self.mu + self.t for j in range(self.k)]

    def validate(self) -> 'EvenSpec':
        if self.n < 1 or self.m < 1:
            raise PreconditionError("Register sizes must satisfy n >= 1 and m >= 1",
                                    {'n': self.n, 'm': self.m})
        if self.k < 1:
            raise PreconditionError(f"K must be positive, got {self.k}", {'K': self.k})
        if self.M % self.k != 0:
            raise PreconditionError(f"K={self.k} does not divide M={self.M}",
                                    {'constraint': 'K | M', 'K': self.k, 'M': self.M})
        if self.N % self.k != 0:
            raise PreconditionError(f"K={self.k} does not divide N={self.N}",
                                    {'constraint': 'K | N', 'K': self.k, 'N': self.N})
        if not 0 <= self.t < self.mu:
            # t >= μ only aliases t mod μ over Z_M and breaks the bit-disjointness
            # the parity algorithm relies on
            raise PreconditionError(f"Shift t={self.t} must satisfy 0 <= t < mu={self.mu}",
                                    {'constraint': '0 <= t < mu', 't': self.t, 'mu': self.mu})
        if self.blocks is not None:
            self._validate_blocks()
        return self

    def _validate_blocks(self):
        if len(self.blocks) != self.k:
            raise PreconditionError(f"Expected {self.k} blocks, got {len(self.blocks)}")
        seen = set()
        for j, block in enumerate(self.blocks):
            if len(block) != self.nu:
                raise PreconditionError(f"Block A_{j} has {len(block)} inputs, expected nu={self.nu}",
                                        {'block': j, 'size': len(block), 'nu': self.nu})
            for x in block:
                if not 0 <= x < self.N or x in seen:
                    raise PreconditionError(f"Blocks are not a partition of Z_{self.N} (input {x})")
                seen.add(x)

    def to_dict(self) -> Dict[str, Any]:
        data = {'n': self.n, 'm': self.m, 'K': self.k, 'mu': self.mu, 't': self.t, 'nu': self.nu}
        if self.blocks is not None:
            data['blocks'] = [list(block) for block in self.blocks]
        return data


@dataclass(frozen=True)
class Classification:
    """Result of brute-force classification"""
    promise: PromiseClass
    spec: Optional[EvenSpec] = None

    @property
    def k(self) -> Optional[int]:
        return self.spec.k if self.spec else None

    @property
    def mu(self) -> Optional[int]:
        return self.spec.mu if self.spec else None

    def to_dict(self) -> Dict[str, Any]:
        return {'promise': self.promise.value, 'spec': self.spec.to_dict() if self.spec else None}


@dataclass(frozen=True)
class ShiftParityReport:
    """Outcome of checking p(jμ) = p(j) over j in Z_K"""
    k: int
    mu: int
    M: int
    shifts_match: bool
    mismatches: Tuple[int, ...]
    shifted_sum: int
    plain_sum: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'K': self.k, 'mu': self.mu, 'M': self.M,
            'shifts_match': self.shifts_match,
            'mismatches': list(self.mismatches),
            'shifted_sum': self.shifted_sum,
            'plain_sum': self.plain_sum,
        }


@LoggerUtils.log_operation("make_constant")
def make_constant(n: int, m: int, c: int) -> FunctionTable:
    if not 0 <= c < (1 << m):
        raise PreconditionError(f"Constant c={c} is outside Z_{1 << m}", {'c': c, 'M': 1 << m})
    return FunctionTable.from_values([c] * (1 << n), m)


def assign_blocks(spec: EvenSpec, seed: int = 0) -> EvenSpec:
    """Return `spec` with an explicit partition, drawing one from `seed` if absent"""
    spec.validate()
    if spec.blocks is not None:
        return spec
    rng = np.random.default_rng(seed)
    perm = rng.permutation(spec.N).reshape(spec.k, spec.nu)
    blocks = tuple(tuple(sorted(int(x) for x in row)) for row in perm)
    return replace(spec, blocks=blocks)


@LoggerUtils.log_operation("make_evenly_distributed")
def make_evenly_distributed(spec: EvenSpec, seed: int = 0) -> FunctionTable:
    spec = assign_blocks(spec, seed)
    values = np.empty(spec.N, dtype=np.int64)
    for j, block in enumerate(spec.blocks):
        values[list(block)] = j * spec.mu + spec.t
    return FunctionTable.from_values(values.tolist(), spec.m)


@LoggerUtils.log_operation("make_random")
def make_random(n: int, m: int, seed: int = 0) -> FunctionTable:
    rng = np.random.default_rng(seed)
    return FunctionTable.from_values(rng.integers(0, 1 << m, size=1 << n).tolist(), m)


def classify_function(f: FunctionTable) -> Classification:
    """
    Brute-force ground truth for the promise, O(N + M).

    K is read off the number of distinct values; the spacing and the
    multiplicities are then checked against the definition.
    """
    counts = np.bincount(f.as_array(), minlength=f.M)
    attained = np.flatnonzero(counts)
    k = len(attained)

    if k == 1:
        c = int(attained[0])
        return Classification(PromiseClass.CONSTANT, EvenSpec(n=f.n, m=f.m, k=1, t=c))

    if f.N % k != 0 or f.M % k != 0:
        return Classification(PromiseClass.NEITHER)

    nu = f.N // k
    mu = f.M // k
    if np.any(counts[attained] != nu):
        return Classification(PromiseClass.NEITHER)

    t = int(attained[0])
    # k distinct values sharing one residue mod μ are exactly {jμ + t}
    if t >= mu or np.any(attained % mu != t):
        return Classification(PromiseClass.NEITHER)

    return Classification(PromiseClass.EVENLY_DISTRIBUTED, EvenSpec(n=f.n, m=f.m, k=k, t=t))


def shift_parity_check(k: int, mu: int, M: int) -> ShiftParityReport:
    """Verify that jμ is j shifted left by log2(μ) bits, so p(jμ) = p(j)"""
    if not (is_power_of_two(k) and is_power_of_two(mu) and is_power_of_two(M)):
        raise PreconditionError("K, mu and M must be powers of two",
                                {'K': k, 'mu': mu, 'M': M})
    if k * mu != M:
        raise PreconditionError(f"K * mu = {k * mu} differs from M = {M}",
                                {'constraint': 'K * mu = M'})

    j = np.arange(k, dtype=np.int64)
    shifted = parity_of(j * mu)
    plain = parity_of(j)
    mismatches = tuple(int(x) for x in j[shifted != plain])

    report = ShiftParityReport(
        k=k, mu=mu, M=M,
        shifts_match=not mismatches,
        mismatches=mismatches,
        shifted_sum=int(np.sum(1 - 2 * shifted)),
        plain_sum=int(np.sum(1 - 2 * plain)),
    )
    logger.debug("Shift parity check", extra={'K': k, 'mu': mu, 'sum': report.shifted_sum})
    return report
