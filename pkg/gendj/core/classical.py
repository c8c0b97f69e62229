"""
Classical Module - Deterministic query-counting baselines

The deciders read f one input at a time through a QueryOracle that logs
every evaluation. They stop as soon as two distinct values have been seen
(the nonconstant side) or once enough equal values have been seen that no
evenly distributed function could produce them (the constant side).

worst_case_certifier maximizes a decider's query count over every
promise-satisfying value pattern and every adversarial input ordering.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Sequence, Tuple

from .errors import PreconditionError
from .oracle_model import FunctionTable, PromiseClass, is_power_of_two
from ..utils.logger_utils import LoggerUtils

logger = LoggerUtils.get_logger(__name__)


@dataclass
class ClassicalConfig:
    """Configuration for the classical baseline"""
    exhaustive_limit: int = 16
    max_workers: int = 1


@dataclass
class QueryLog:
    """Ordered record of the evaluations a decider performed"""
    inputs: List[int] = field(default_factory=list)
    values: List[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.inputs)

    def to_dict(self) -> Dict[str, Any]:
        return {'inputs': list(self.inputs), 'values': list(self.values), 'count': self.count}


class QueryOracle:
    """Black-box access to a table; every input may be evaluated once"""

    def __init__(self, f: FunctionTable):
        self._values = f.values
        self.N = f.N
        self.M = f.M
        self.log = QueryLog()
        self._seen = set()

    def query(self, x: int) -> int:
        if not 0 <= x < self.N:
            raise PreconditionError(f"Query {x} out of range [0, {self.N})", {'index': x, 'bound': self.N})
        if x in self._seen:
            raise PreconditionError(f"Input {x} was already queried", {'index': x})
        self._seen.add(x)
        value = self._values[x]
        self.log.inputs.append(x)
        self.log.values.append(value)
        return value


@dataclass
class ClassicalResult:
    """Decision of a classical decider plus its query log"""
    decision: PromiseClass
    log: QueryLog
    bound: int
    known_k: Optional[int] = None
    promise_violation: bool = False
    violation_reason: Optional[str] = None

    @property
    def count(self) -> int:
        return self.log.count

    def to_dict(self) -> Dict[str, Any]:
        return {
            'decision': self.decision.value,
            'known_K': self.known_k,
            'bound': self.bound,
            'queries': self.log.to_dict(),
            'promise_violation': self.promise_violation,
            'violation_reason': self.violation_reason,
        }


@dataclass
class WorstCaseCertificate:
    """Exhaustive maximum of a decider's query count"""
    N: int
    M: int
    known_k: Optional[int]
    max_queries: int
    bound: int
    tight: bool
    witness_values: Tuple[int, ...]
    witness_order: Tuple[int, ...]
    functions_checked: int
    orders_checked: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'N': self.N, 'M': self.M, 'known_K': self.known_k,
            'max_queries': self.max_queries,
            'bound': self.bound,
            'tight': self.tight,
            'witness': {'values': list(self.witness_values), 'order': list(self.witness_order)},
            'functions_checked': self.functions_checked,
            'orders_checked': self.orders_checked,
        }


def _resolve_order(order: Optional[Sequence[int]], N: int) -> List[int]:
    if order is None:
        return list(range(N))
    order = [int(x) for x in order]
    if sorted(order) != list(range(N)):
        raise PreconditionError(f"Query order must be a permutation of 0..{N - 1}", {'N': N})
    return order


def _check_k(k: int, N: int, M: int):
    if k < 2:
        raise PreconditionError(f"A known K must be at least 2, got {k}", {'K': k})
    if N % k != 0 or M % k != 0:
        raise PreconditionError(f"K={k} must divide both N={N} and M={M}",
                                {'constraint': 'K | N and K | M', 'K': k, 'N': N, 'M': M})


def known_k_bound(N: int, k: int) -> int:
    """ν + 1"""
    return N // k + 1


def unknown_k_bound(N: int) -> int:
    """N/2 + 1"""
    return N // 2 + 1


def _decide(f: FunctionTable, bound: int, spacing: int, known_k: Optional[int],
            order: Sequence[int]) -> ClassicalResult:
    """Shared loop: `spacing` is the smallest gap two distinct promise values can have"""
    oracle = QueryOracle(f)
    first = oracle.query(order[0])
    for x in order[1:]:
        value = oracle.query(x)
        if value != first:
            if (value - first) % spacing != 0:
                reason = (f"values {first} and {value} differ by {(value - first) % f.M}, "
                          f"not a multiple of {spacing}")
                logger.warning("Promise violation detected", extra={'reason': reason, 'queries': oracle.log.count})
                return ClassicalResult(PromiseClass.NEITHER, oracle.log, bound, known_k,
                                       promise_violation=True, violation_reason=reason)
            return ClassicalResult(PromiseClass.EVENLY_DISTRIBUTED, oracle.log, bound, known_k)
        if oracle.log.count >= bound:
            break
    return ClassicalResult(PromiseClass.CONSTANT, oracle.log, bound, known_k)


@LoggerUtils.log_operation("classical_decide_known_K")
def classical_decide_known_K(f: FunctionTable, k: int, order: Optional[Sequence[int]] = None) -> ClassicalResult:
    """
    Decide constant vs evenly distributed when K is known.

    An evenly distributed f repeats each value exactly ν = N/K times, so
    ν + 1 equal values mean constant. Two distinct values whose difference
    is not a multiple of μ = M/K break both hypotheses and are reported as
    a promise violation.
    """
    _check_k(k, f.N, f.M)
    return _decide(f, known_k_bound(f.N, k), f.M // k, k, _resolve_order(order, f.N))


@LoggerUtils.log_operation("classical_decide_unknown_K")
def classical_decide_unknown_K(f: FunctionTable, order: Optional[Sequence[int]] = None) -> ClassicalResult:
    """
    Decide constant vs evenly distributed for an unknown K >= 2.

    Multiplicities of an evenly distributed f are at most N/2, so N/2 + 1
    equal values mean constant. The finest spacing any valid K allows is
    M / min(N, M); a gap that is not a multiple of it is a violation.
    """
    spacing = f.M // min(f.N, f.M)
    return _decide(f, unknown_k_bound(f.N), spacing, None, _resolve_order(order, f.N))


def promise_patterns(N: int, M: int, k: Optional[int] = None) -> List[Tuple[int, ...]]:
    """
    One table per promise-satisfying value multiset.

    A decider's run depends only on the sequence of values it reads, so
    tables with the same multiset are interchangeable once every ordering
    is on the table. Constants come first, then (K, t) with contiguous
    blocks.
    """
    patterns: List[Tuple[int, ...]] = [tuple([c] * N) for c in range(M)]
    ks = [k] if k is not None else [d for d in range(2, min(N, M) + 1)
                                     if is_power_of_two(d) and N % d == 0 and M % d == 0]
    for kk in ks:
        mu, nu = M // kk, N // kk
        for t in range(mu):
            patterns.append(tuple((x // nu) * mu + t for x in range(N)))
    return patterns


def adversarial_orders(values: Sequence[int]) -> List[Tuple[int, ...]]:
    """
    Orderings that delay the first distinct value as long as possible.

    For each attained value v and each other value w: every preimage of v,
    then one preimage of w, then the rest ascending. A constant table only
    has the ascending order.
    """
    N = len(values)
    preimages: Dict[int, List[int]] = {}
    for x, v in enumerate(values):
        preimages.setdefault(v, []).append(x)
    if len(preimages) == 1:
        return [tuple(range(N))]
    orders = []
    for v, block in preimages.items():
        for w, other in preimages.items():
            if w == v:
                continue
            head = block + [other[0]]
            taken = set(head)
            orders.append(tuple(head + [x for x in range(N) if x not in taken]))
    return orders


def _worst_for_pattern(values: Tuple[int, ...], m: int, k: Optional[int]) -> Tuple[int, Tuple[int, ...], int]:
    f = FunctionTable.from_values(values, m)
    best, best_order = -1, ()
    orders = adversarial_orders(values)
    for order in orders:
        if k is None:
            result = _decide(f, unknown_k_bound(f.N), f.M // min(f.N, f.M), None, order)
        else:
            result = _decide(f, known_k_bound(f.N, k), f.M // k, k, order)
        if result.count > best:
            best, best_order = result.count, order
    return best, best_order, len(orders)


@LoggerUtils.log_operation("worst_case_certifier")
@LoggerUtils.log_performance(threshold_seconds=5.0)
def worst_case_certifier(N: int, M: int, k: Optional[int] = None,
                         config: Optional[ClassicalConfig] = None) -> WorstCaseCertificate:
    """
    Exhaustive worst case of the known-K (k given) or unknown-K decider.

    Returns the largest query count over all promise patterns and their
    adversarial orderings, together with the stated bound (ν + 1 or
    N/2 + 1) and a witness reaching the maximum.
    """
    config = config or ClassicalConfig()
    if not (is_power_of_two(N) and is_power_of_two(M)) or N < 2 or M < 2:
        raise PreconditionError(f"N and M must be powers of two >= 2, got N={N}, M={M}")
    if N > config.exhaustive_limit:
        raise PreconditionError(f"Exhaustive certification is limited to N <= {config.exhaustive_limit}",
                                {'N': N, 'bound': config.exhaustive_limit})
    if k is not None:
        _check_k(k, N, M)
    m = int(math.log2(M))

    patterns = promise_patterns(N, M, k)
    if config.max_workers > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            outcomes = list(executor.map(lambda values: _worst_for_pattern(values, m, k), patterns))
    else:
        outcomes = [_worst_for_pattern(values, m, k) for values in patterns]

    # first maximum in pattern order keeps the witness deterministic
    index = max(range(len(outcomes)), key=lambda i: (outcomes[i][0], -i))
    max_queries, witness_order, _ = outcomes[index]
    bound = known_k_bound(N, k) if k is not None else unknown_k_bound(N)

    certificate = WorstCaseCertificate(
        N=N, M=M, known_k=k,
        max_queries=max_queries,
        bound=bound,
        tight=max_queries == bound,
        witness_values=patterns[index],
        witness_order=witness_order,
        functions_checked=len(patterns),
        orders_checked=sum(outcome[2] for outcome in outcomes),
    )
    logger.debug("Worst case certified", extra=certificate.to_dict())
    return certificate
