import math

import numpy as np
import pytest

from qspeedup import reference
from qspeedup.algorithms import (
    backdating_check,
    derive_partitions,
    grover_iterate,
    grover_iterations,
    run_extended,
    run_minute,
    simon_sample_loop,
)
from qspeedup.errors import ModelMismatchError, NonTerminationError
from qspeedup.families import BUILTIN_NAMES, builtin
from qspeedup.families import _perm_unlabeled
from qspeedup.state import VPreparation, conditional_distribution, states_equal_up_to_phase


@pytest.mark.parametrize("name", sorted(reference.REFERENCE_STATES))
def test_runs_reproduce_published_states(name):
    report = run_extended(builtin(name))
    assert report.quantum_queries == 1
    for stage, ref in zip(("prepared", "evaluated", "final"), reference.REFERENCE_STATES[name]):
        assert report.states[stage].is_normalized()
        assert states_equal_up_to_phase(report.states[stage], ref())


def test_dj2_constant_members_read_all_zeroes():
    cond = conditional_distribution(run_extended(builtin("dj2")).states["final"], "K", "X")
    assert cond["0000"] == pytest.approx({"00": 1.0})
    assert cond["1111"] == pytest.approx({"00": 1.0})
    assert all("00" not in cond[k] for k in cond if k not in ("0000", "1111"))


@pytest.mark.parametrize("name", ["deutsch", "dj2", "bv2", "grover2", "minute", "perm"])
def test_specified_readout_correlates(name):
    assert run_extended(builtin(name)).correlated


def test_standard_simon_run_is_not_a_single_query_readout():
    assert not run_extended(builtin("simon2")).correlated
    assert run_extended(builtin("simon2"), VPreparation.antisymmetric()).correlated


def test_grover_iteration_counts():
    assert [grover_iterations(n) for n in (2, 3, 4)] == [1, 2, 3]
    assert grover_iterate(2).probabilities[-1] == pytest.approx(1.0, abs=1e-9)


def test_grover2_one_iteration_is_certain():
    assert grover_iterate(2, 1).probabilities[-1] == pytest.approx(1.0, abs=1e-9)


def test_grover4_probabilities():
    report = grover_iterate(4)
    assert report.quantum_queries == 3
    assert report.probabilities[0] == pytest.approx(1 / 16)
    expected = [math.sin((2 * t + 1) * math.asin(0.25)) ** 2 for t in range(4)]
    assert report.probabilities == pytest.approx(expected, abs=1e-9)
    assert all(b >= a for a, b in zip(report.probabilities, report.probabilities[1:]))


def test_grover_size_bounds():
    with pytest.raises(ValueError):
        grover_iterate(5)


@pytest.mark.parametrize("seed", range(10))
def test_simon2_single_sample(seed):
    res = simon_sample_loop(2, seed)
    assert len(res.samples) == 1
    s = res.samples[0]
    assert s.outcome != "00" and s.orthogonal_to(res.period)
    assert res.period == builtin("simon2").meta[res.k_label]["h"]


def test_simon2_period_01_samples_only_10():
    seeds = [s for s in range(60) if simon_sample_loop(2, s).k_label == "0011"]
    assert seeds
    assert {simon_sample_loop(2, s).samples[0].outcome for s in seeds} == {"10"}


def test_simon3_seeded_runs_are_reproducible():
    a, b = simon_sample_loop(3, 11), simon_sample_loop(3, 11)
    assert a == b
    assert len(a.samples) == 2


def test_simon_iteration_cap():
    with pytest.raises(NonTerminationError):
        simon_sample_loop(3, 0, max_iterations=1)


def test_partition_derivation():
    blocks = derive_partitions(_perm_unlabeled())
    assert sorted(blocks) == ["01", "10", "11"]
    assert [len(b) for b in blocks.values()] == [8, 8, 8]
    identity = "00011011"
    assert sum(identity in b for b in blocks.values()) == 1


def test_partition_derivation_rejects_unclean_blocks():
    with pytest.raises(ModelMismatchError):
        derive_partitions(builtin("grover2"))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_backdating(name):
    assert backdating_check(builtin(name))


def test_minute_run():
    report = run_minute()
    assert report.correlated and report.quantum_queries == 1
    cond = conditional_distribution(report.states["final"], "K", "X")
    family = builtin("minute")
    for k in family.k_labels:
        assert cond[k][family.solution[k]] >= 1 - 1e-9
