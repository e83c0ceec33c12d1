import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sugenolab import capacity as cap
from sugenolab.capacity import (
    Capacity,
    collapse_null_core,
    counting_dyadic,
    from_additive,
    mask_of,
    members,
    minimal_relaxed_constant,
    power_transform,
    property_report,
    random_capacity,
    replay_witness,
    validate_capacity,
)
from sugenolab.errors import DomainError, EmptySetNonzero, MonotonicityViolation, NegativeValue


def table2(a, b, ab):
    return validate_capacity({(): 0, (0,): a, (1,): b, (0, 1): ab})


def test_validate_accepts_monotone_table():
    mu = table2(0.3, 0.4, 1.0)
    assert mu({0, 1}) == 1.0
    assert mu([1]) == 0.4


def test_validate_rejects_nonzero_empty_set():
    with pytest.raises(EmptySetNonzero):
        validate_capacity({(): 0.1, (0,): 0.3, (1,): 0.4, (0, 1): 1})


def test_validate_reports_monotonicity_pair():
    with pytest.raises(MonotonicityViolation) as exc:
        table2(0.5, 0.2, 0.4)
    assert (members(exc.value.smaller), members(exc.value.larger)) == ([0], [0, 1])


def test_validate_rejects_negative_and_nan():
    with pytest.raises(NegativeValue):
        validate_capacity([0, -1.0])
    with pytest.raises(DomainError):
        validate_capacity([0, math.nan])


def test_validate_missing_subset():
    with pytest.raises(DomainError):
        validate_capacity({(): 0, (0,): 1, (0, 1): 2}, 2)


def test_table_is_read_only():
    mu = from_additive([1, 2])
    with pytest.raises(ValueError):
        mu.values[1] = 5.0


def test_power_transform_examples():
    mu = table2(4.0, 1.0, 9.0)
    assert power_transform(mu, 0.5)({0}) == 2.0
    assert power_transform(mu, 1.0) == mu
    inf = table2(0.0, math.inf, math.inf)
    assert power_transform(inf, 3)({1}) == math.inf
    assert power_transform(inf, 3)({0}) == 0.0


def test_from_additive_examples():
    assert from_additive([1, 2])({0, 1}) == 3
    assert not from_additive([0, 0]).values.any()
    assert from_additive([0.5, 0.25, 0.25])({0, 1, 2}) == 1


def test_counting_dyadic_examples():
    assert counting_dyadic(2)({0}) == 0.5
    for n in range(1, 10):
        assert counting_dyadic(n + 1)({0, n}) == 1 + 2.0**-n
    assert counting_dyadic(3)(0) == 0


def test_counting_dyadic_closed_formula():
    N = 10
    mu = counting_dyadic(N)
    for m in range(1 << N):
        pts = members(m)
        assert mu.values[m] == len(pts) * sum(2.0 ** -(k + 1) for k in pts)


def test_random_capacity_deterministic_and_valid():
    a, b = random_capacity(3, 7, 0.0), random_capacity(3, 7, 0.0)
    assert a == b
    validate_capacity(a.values)
    assert len(a.null_masks()) == 1
    property_report(random_capacity(4, 1, 0.5))


def test_decider_examples():
    for v in property_report(counting_dyadic(5)).verdicts[:5]:
        assert v.holds
    w = cap.is_weakly_null_additive(table2(0, 0, 1))
    assert not w.holds and w.witness_sets() == ([0], [1])
    na = cap.is_null_additive(table2(0, 1, 2))
    assert not na.holds and na.witness_sets() == ([1], [0])


def test_relaxed_constant_examples():
    assert minimal_relaxed_constant(from_additive([0.3, 1.2, 0.7])) == 1.0
    # singletons weigh 1/2 and 1/4 while mu({1, 2}) = 2 * 3/4, so K = 1.5 / 0.75
    mu = counting_dyadic(2)
    brute = max(
        mu.values[a | b] / (mu.values[a] + mu.values[b])
        for a in range(1, 4)
        for b in range(1, 4)
        if not a & b
    )
    assert minimal_relaxed_constant(mu) == brute == 2.0
    assert minimal_relaxed_constant(table2(0, 1, 2)) == 2.0
    # two null singletons with a positive union: no finite K
    assert minimal_relaxed_constant(table2(0, 0, 1)) is None
    assert cap.is_subadditive(from_additive([1, 1])).holds
    assert not cap.is_subadditive(counting_dyadic(3)).holds


def test_property_report_examples():
    rep = property_report(counting_dyadic(8))
    assert not rep.subadditive.holds and rep.minimal_relaxed_K is not None
    assert all(v.holds for v in rep.verdicts[:5])
    rep = property_report(from_additive([0.2, 0.5, 0.1]))
    assert all(v.holds for v in rep.verdicts) and rep.minimal_relaxed_K == 1.0
    assert rep.order_continuous == "holds (finite space)"
    mu = random_capacity(4, 42, 0.7)
    rep = property_report(mu)
    for v in rep.verdicts:
        if not v.holds:
            assert replay_witness(mu, v)


def test_collapse_null_core_is_null_additive():
    mu = collapse_null_core(random_capacity(5, 3), [0, 2])
    assert mu({0, 2}) == 0
    assert cap.is_null_additive(mu).holds


def test_ext_arithmetic():
    assert cap.ext_mul(math.inf, 0.0) == 0.0
    assert cap.ext_mul(0.0, math.inf) == 0.0
    assert cap.ext_mul(2.0, math.inf) == math.inf
    assert cap.ext_pow(math.inf, 0.5) == math.inf
    assert mask_of([0, 3]) == 9 and members(9) == [0, 3]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6), st.floats(0, 1))
def test_random_capacities_are_valid(n, seed, bias):
    mu = random_capacity(n, seed, bias)
    validate_capacity(mu.values)
    assert isinstance(mu, Capacity) and mu.n == n


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6), st.floats(0, 1))
def test_implication_chain(n, seed, bias):
    rep = property_report(random_capacity(n, seed, bias))
    if rep.subadditive.holds:
        assert rep.minimal_relaxed_K <= 1.0
    if rep.relaxed_subadditive:
        assert rep.pgp.holds
    if rep.pgp.holds:
        assert rep.weakly_null_additive.holds
    if rep.null_additive.holds:
        assert rep.weakly_null_additive.holds
    # on a finite space both kinds of autocontinuity reduce to null-additivity
    assert rep.autocontinuous_above.holds == rep.null_additive.holds == rep.autocontinuous_below.holds


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_relaxed_constant_is_tight(n, seed):
    mu = random_capacity(n, seed, 0.0)
    K = minimal_relaxed_constant(mu)
    v = mu.values
    worst = 0.0
    for a in range(1, 1 << n):
        for b in range(1, 1 << n):
            if not a & b:
                worst = max(worst, v[a | b] / (v[a] + v[b]))
    assert K == pytest.approx(max(1.0, worst), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 5), min_size=1, max_size=6))
def test_additive_tables_are_subadditive(w):
    mu = from_additive(w)
    assert cap.is_subadditive(mu).holds
    assert np.allclose(mu.values[[1 << i for i in range(len(w))]], w)
