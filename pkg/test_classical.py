#!/usr/bin/env python3
"""
Classical Baseline Test Script

Query counts of the deterministic deciders, their correctness on every
promise-satisfying table, and the exhaustive worst-case certificate.
"""

import itertools

import pytest

from gendj import (
    ClassicalConfig,
    EvenSpec,
    FunctionTable,
    PreconditionError,
    PromiseClass,
    QueryOracle,
    classical_decide_known_K,
    classical_decide_unknown_K,
    classify_function,
    make_constant,
    make_evenly_distributed,
    worst_case_certifier,
)


def valid_ks(N, M):
    k = 2
    while k <= min(N, M):
        yield k
        k *= 2


def test_known_k_constant_takes_nu_plus_one():
    result = classical_decide_known_K(make_constant(3, 2, 1), k=2)
    assert result.decision == PromiseClass.CONSTANT
    assert result.count == 5
    assert result.bound == 5


def test_known_k_adversarial_order_example():
    f = FunctionTable.from_values([0, 2, 0, 2], 2)
    result = classical_decide_known_K(f, k=2, order=[0, 2, 1, 3])
    assert result.decision == PromiseClass.EVENLY_DISTRIBUTED
    assert result.count == 3
    assert result.log.inputs == [0, 2, 1]
    assert result.log.values == [0, 0, 2]


def test_known_k_one_to_one():
    f = FunctionTable.from_values([2, 0, 3, 1], 2)
    result = classical_decide_known_K(f, k=4)
    assert result.count == 2


def test_unknown_k_counts():
    assert classical_decide_unknown_K(make_constant(3, 3, 6)).count == 5
    assert classical_decide_unknown_K(FunctionTable.from_values([0, 1], 1)).count == 2

    f = make_evenly_distributed(EvenSpec(n=3, m=2, k=2), seed=4)
    block = [x for x in range(8) if f(x) == f(0)]
    rest = [x for x in range(8) if x not in block]
    result = classical_decide_unknown_K(f, order=block + rest)
    assert result.count == 5
    assert result.decision == PromiseClass.EVENLY_DISTRIBUTED


def test_deciders_agree_with_classification():
    for n in range(1, 5):
        for m in range(1, 5):
            N, M = 1 << n, 1 << m
            for c in range(M):
                f = make_constant(n, m, c)
                assert classical_decide_unknown_K(f).decision == PromiseClass.CONSTANT
                for k in valid_ks(N, M):
                    assert classical_decide_known_K(f, k).decision == PromiseClass.CONSTANT
            for k in valid_ks(N, M):
                for t in range(M // k):
                    for seed in range(3):
                        f = make_evenly_distributed(EvenSpec(n=n, m=m, k=k, t=t), seed=seed)
                        assert classify_function(f).promise == PromiseClass.EVENLY_DISTRIBUTED
                        known = classical_decide_known_K(f, k)
                        unknown = classical_decide_unknown_K(f)
                        assert known.decision == unknown.decision == PromiseClass.EVENLY_DISTRIBUTED
                        assert known.count <= N // k + 1
                        assert unknown.count <= N // 2 + 1


def test_known_k_reports_promise_violation():
    f = FunctionTable.from_values([0, 1, 0, 0], 2)
    result = classical_decide_known_K(f, k=2)
    assert result.promise_violation
    assert result.decision == PromiseClass.NEITHER
    assert result.count == 2
    assert "not a multiple of 2" in result.violation_reason


def test_off_promise_never_exceeds_bound():
    for code in range(256):
        f = FunctionTable.from_values([(code >> (2 * x)) & 3 for x in range(4)], 2)
        assert classical_decide_unknown_K(f).count <= 3
        for k in (2, 4):
            assert classical_decide_known_K(f, k).count <= 4 // k + 1


def test_unknown_k_violation_when_m_exceeds_n():
    # N = 2 allows K = 2 only, so two values must differ by M/2 = 4
    f = FunctionTable.from_values([0, 1], 3)
    result = classical_decide_unknown_K(f)
    assert result.promise_violation


def test_decider_preconditions():
    f = make_constant(2, 2, 0)
    with pytest.raises(PreconditionError):
        classical_decide_known_K(f, k=1)
    with pytest.raises(PreconditionError):
        classical_decide_known_K(f, k=8)
    with pytest.raises(PreconditionError):
        classical_decide_unknown_K(f, order=[0, 1, 1, 2])


def test_query_oracle_refuses_repeats():
    oracle = QueryOracle(make_constant(1, 1, 0))
    oracle.query(1)
    with pytest.raises(PreconditionError):
        oracle.query(1)
    with pytest.raises(PreconditionError):
        oracle.query(2)
    assert oracle.log.count == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_certifier_bounds_are_tight(n, m):
    N, M = 1 << n, 1 << m
    for k in valid_ks(N, M):
        certificate = worst_case_certifier(N, M, k)
        assert certificate.max_queries == N // k + 1
        assert certificate.tight
    certificate = worst_case_certifier(N, M)
    assert certificate.max_queries == N // 2 + 1
    assert certificate.tight


def test_certifier_examples():
    assert worst_case_certifier(8, 8, 2).max_queries == 5
    assert worst_case_certifier(8, 8).max_queries == 5
    assert worst_case_certifier(4, 4, 4).max_queries == 2


def test_certifier_parallel_matches_serial():
    serial = worst_case_certifier(16, 8)
    parallel = worst_case_certifier(16, 8, config=ClassicalConfig(max_workers=4))
    assert serial == parallel


def test_certifier_limits():
    with pytest.raises(PreconditionError):
        worst_case_certifier(32, 4)
    with pytest.raises(PreconditionError):
        worst_case_certifier(6, 4)
    with pytest.raises(PreconditionError):
        worst_case_certifier(8, 4, k=8)


def brute_force_worst(N, M, k):
    """Every table satisfying the promise, every permutation of Z_N"""
    worst = 0
    for values in itertools.product(range(M), repeat=N):
        f = FunctionTable.from_values(list(values), M.bit_length() - 1)
        classification = classify_function(f)
        if classification.promise == PromiseClass.NEITHER:
            continue
        if k is not None and classification.promise == PromiseClass.EVENLY_DISTRIBUTED \
                and classification.k != k:
            continue
        for order in itertools.permutations(range(N)):
            if k is None:
                count = classical_decide_unknown_K(f, order).count
            else:
                count = classical_decide_known_K(f, k, order).count
            worst = max(worst, count)
    return worst


@pytest.mark.parametrize("N,M", [(2, 2), (2, 4), (4, 2), (4, 4)])
def test_certifier_matches_brute_force(N, M):
    assert worst_case_certifier(N, M).max_queries == brute_force_worst(N, M, None)
    for k in valid_ks(N, M):
        assert worst_case_certifier(N, M, k).max_queries == brute_force_worst(N, M, k)
