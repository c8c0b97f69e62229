#!/usr/bin/env python3
"""
Oracle Model Test Script

Covers table validation and serialization, the constant / evenly
distributed generators, brute-force classification and the parity helpers.
"""

import json

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from gendj import (
    EvenSpec,
    FormatError,
    FunctionTable,
    PreconditionError,
    PromiseClass,
    classify_function,
    make_constant,
    make_evenly_distributed,
    make_random,
    parity_of,
    shift_parity_check,
)
from gendj.core.oracle_model import popcount


def valid_specs(max_n=4, max_m=4):
    for n in range(1, max_n + 1):
        for m in range(1, max_m + 1):
            N, M = 1 << n, 1 << m
            k = 2
            while k <= min(N, M):
                for t in range(M // k):
                    yield EvenSpec(n=n, m=m, k=k, t=t)
                k *= 2


def test_constant_table():
    f = make_constant(2, 2, 3)
    assert f.values == (3, 3, 3, 3)
    assert classify_function(f).promise == PromiseClass.CONSTANT
    assert classify_function(f).spec.t == 3


def test_constant_out_of_range():
    with pytest.raises(PreconditionError):
        make_constant(2, 2, 4)


def test_evenly_distributed_example():
    f = make_evenly_distributed(EvenSpec(n=2, m=2, k=2, t=0), seed=7)
    assert sorted(f.values) == [0, 0, 2, 2]
    classification = classify_function(f)
    assert classification.promise == PromiseClass.EVENLY_DISTRIBUTED
    assert classification.k == 2
    assert classification.mu == 2


def test_divisibility_errors_name_the_constraint():
    with pytest.raises(PreconditionError) as info:
        make_evenly_distributed(EvenSpec(n=2, m=2, k=3))
    assert info.value.details['constraint'] == 'K | M'
    with pytest.raises(PreconditionError) as info:
        make_evenly_distributed(EvenSpec(n=1, m=3, k=4))
    assert info.value.details['constraint'] == 'K | N'
    with pytest.raises(PreconditionError) as info:
        make_evenly_distributed(EvenSpec(n=2, m=3, k=2, t=4))
    assert info.value.details['constraint'] == '0 <= t < mu'


def test_explicit_blocks_are_respected():
    spec = EvenSpec(n=2, m=2, k=2, t=1, blocks=((0, 3), (1, 2)))
    f = make_evenly_distributed(spec)
    assert f.values == (1, 3, 3, 1)


@pytest.mark.parametrize("blocks", [
    ((0, 1), (1, 2)),
    ((0, 1, 2), (3,)),
    ((0, 1),),
    ((0, 4), (1, 2)),
])
def test_invalid_partitions_rejected(blocks):
    with pytest.raises(PreconditionError):
        make_evenly_distributed(EvenSpec(n=2, m=2, k=2, blocks=blocks))


def test_generated_tables_classify_back_to_their_spec():
    for spec in valid_specs():
        for seed in range(3):
            f = make_evenly_distributed(spec, seed=seed)
            classification = classify_function(f)
            assert classification.promise == PromiseClass.EVENLY_DISTRIBUTED
            assert (classification.k, classification.spec.t) == (spec.k, spec.t)
            counts = np.bincount(f.as_array(), minlength=f.M)
            assert set(counts[counts > 0]) == {spec.nu}


def test_round_trip_up_to_256():
    for spec in valid_specs(max_n=8, max_m=8):
        f = make_evenly_distributed(spec, seed=spec.k + spec.t)
        classification = classify_function(f)
        assert classification.promise == PromiseClass.EVENLY_DISTRIBUTED, spec
        assert (classification.k, classification.mu, classification.spec.t) == (spec.k, spec.mu, spec.t)


@pytest.mark.parametrize("values,m,expected", [
    ([0, 1, 1, 1], 1, PromiseClass.NEITHER),
    ([0, 1, 2, 3], 2, PromiseClass.EVENLY_DISTRIBUTED),
    ([0, 2, 0, 2], 2, PromiseClass.EVENLY_DISTRIBUTED),
    ([0, 1, 0, 1], 2, PromiseClass.NEITHER),   # spacing 1, needs μ = 2
    ([1, 3, 3, 1], 2, PromiseClass.EVENLY_DISTRIBUTED),
    ([0, 0, 4, 4, 1, 1, 5, 5], 3, PromiseClass.NEITHER),
])
def test_classification_cases(values, m, expected):
    assert classify_function(FunctionTable.from_values(values, m)).promise == expected


def test_classification_matches_definition_exhaustively():
    """All 256 tables at N = M = 4 against a direct reading of the definition"""
    for code in range(256):
        values = [(code >> (2 * x)) & 3 for x in range(4)]
        f = FunctionTable.from_values(values, 2)
        distinct = sorted(set(values))
        k = len(distinct)
        if k == 1:
            expected = PromiseClass.CONSTANT
        else:
            mu = 4 // k if 4 % k == 0 else None
            even = (mu is not None and all(values.count(v) == 4 // k for v in distinct)
                    and distinct == [j * mu + distinct[0] for j in range(k)] and distinct[0] < mu)
            expected = PromiseClass.EVENLY_DISTRIBUTED if even else PromiseClass.NEITHER
        assert classify_function(f).promise == expected, values


def test_random_table_is_seeded():
    assert make_random(3, 2, seed=9) == make_random(3, 2, seed=9)
    assert all(0 <= v < 4 for v in make_random(3, 2, seed=9).values)


def test_table_validation():
    with pytest.raises(PreconditionError):
        FunctionTable.from_values([0, 1, 2], 2)
    with pytest.raises(PreconditionError):
        FunctionTable.from_values([0, 4], 2)
    with pytest.raises(FormatError):
        FunctionTable.from_dict({"n": 1, "m": 1, "values": [0, 1, 1]})
    with pytest.raises(FormatError):
        FunctionTable.from_dict({"n": 1, "m": 1, "values": ["0", 1]})


def test_table_file_round_trip(tmp_path):
    f = make_evenly_distributed(EvenSpec(n=3, m=2, k=4), seed=1)
    path = f.save(tmp_path / "f.json")
    assert json.loads(path.read_text()) == {"n": 3, "m": 2, "values": list(f.values)}
    assert FunctionTable.load(path) == f


def test_load_reports_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        FunctionTable.load(path)
    with pytest.raises(FormatError):
        FunctionTable.load(tmp_path / "missing.json")


@given(a=st.integers(min_value=0, max_value=2 ** 20), b=st.integers(min_value=0, max_value=2 ** 20))
def test_parity_is_a_homomorphism(a, b):
    assert parity_of(a ^ b) == parity_of(a) ^ parity_of(b)


@given(v=st.integers(min_value=0, max_value=2 ** 30))
def test_popcount_array_matches_scalar(v):
    assert popcount(np.array([v]))[0] == popcount(v) == bin(v).count("1")


def test_parity_rejects_negative():
    with pytest.raises(PreconditionError):
        parity_of(-1)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_shift_parity_check(m):
    M = 1 << m
    k = 2
    while k <= M:
        report = shift_parity_check(k, M // k, M)
        assert report.shifts_match
        assert report.shifted_sum == 0
        k *= 2


def test_shift_parity_check_preconditions():
    with pytest.raises(PreconditionError):
        shift_parity_check(3, 2, 6)
    with pytest.raises(PreconditionError):
        shift_parity_check(2, 2, 8)


def test_shift_parity_check_degenerate_single_value():
    report = shift_parity_check(1, 8, 8)
    assert report.plain_sum == 1
    assert report.shifts_match
