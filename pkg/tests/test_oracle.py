import itertools

import pytest

from helpers import TEST_FAMILIES, all_assignments, example_23, make_instance, reference_clean, reference_utilities, uniform_instance
from matroidswap.core import Dominance, Instance, augment, is_clean, lorenz_compare, usw, utility_vector
from matroidswap.oracle import (
    GUARD_ENV,
    EnumerationGuard,
    GuardExceeded,
    brute_force_optimum,
    clean_profiles,
    enumerate_clean_allocations,
)
from matroidswap.valuations import AdditiveOracle


def test_tiny_enumeration_counts():
    one = Instance(["g"], ["a"], [AdditiveOracle(1, [0])])
    assert len(list(enumerate_clean_allocations(one))) == 2
    two = Instance(["g"], ["a", "b"], [AdditiveOracle(1, [0])] * 2)
    assert len(list(enumerate_clean_allocations(two))) == 3


@pytest.mark.parametrize("seed", range(50))
def test_enumeration_matches_naive_filter(seed):
    family = TEST_FAMILIES[seed % len(TEST_FAMILIES)]
    inst = make_instance(family, 1 + seed % 3, 1 + seed % 6, seed)
    fast = sorted(tuple(a.owner) for a in enumerate_clean_allocations(inst))
    naive = sorted(tuple(a.owner) for a in all_assignments(inst) if reference_clean(a, inst))
    assert fast == naive


def test_example_23_optima():
    inst = example_23()
    assert brute_force_optimum(inst, "max_usw").value == 3
    best = brute_force_optimum(inst, "lorenz_augmented")
    assert best.utilities == (2, 1)
    flipped = brute_force_optimum(example_23(priority=("a2", "a1")), "lorenz_augmented")
    assert flipped.utilities == (1, 2)


def test_no_goods():
    inst = uniform_instance(3, 0)
    for objective in ("max_usw", "mnw", "leximin_plain", "lorenz_augmented"):
        assert brute_force_optimum(inst, objective).utilities == (0, 0, 0)


def test_witness_is_clean_and_achieves_value():
    for seed in range(30):
        inst = make_instance(TEST_FAMILIES[seed % len(TEST_FAMILIES)], 3, 5, seed)
        for objective in ("max_usw", "mnw", "leximin_plain", "lorenz_augmented"):
            opt = brute_force_optimum(inst, objective)
            assert is_clean(opt.witness, inst)
            assert tuple(utility_vector(opt.witness, inst)) == opt.utilities
        assert brute_force_optimum(inst, "max_usw").value == usw(brute_force_optimum(inst, "max_usw").witness, inst)


def test_redundant_allocations_never_beat_clean_ones():
    for seed in range(25):
        inst = make_instance(TEST_FAMILIES[seed % len(TEST_FAMILIES)], 2, 4, seed)
        top = tuple(sorted(augment(brute_force_optimum(inst, "lorenz_augmented").utilities, inst)))
        for alloc in all_assignments(inst):
            other = tuple(sorted(augment(reference_utilities(alloc, inst), inst)))
            assert lorenz_compare(top, other) in (Dominance.LEFT, Dominance.EQUAL)


def test_augmented_optimum_is_unique_vector():
    for seed in range(25):
        inst = make_instance("mixed", 3, 5, seed)
        top = tuple(sorted(augment(brute_force_optimum(inst, "lorenz_augmented").utilities, inst)))
        hits = [p for p in clean_profiles(inst) if tuple(sorted(augment(p, inst))) == top]
        assert len(hits) == 1


def test_guard(monkeypatch):
    big = uniform_instance(4, 2)
    with pytest.raises(GuardExceeded):
        list(enumerate_clean_allocations(big))
    with pytest.raises(GuardExceeded):
        list(enumerate_clean_allocations(uniform_instance(2, 9)))
    list(enumerate_clean_allocations(big, EnumerationGuard(max_agents=4)))
    monkeypatch.setenv(GUARD_ENV, "1")
    assert brute_force_optimum(big, "max_usw").value == 2


def test_unknown_objective():
    with pytest.raises(ValueError):
        brute_force_optimum(example_23(), "egalitarian")


def test_optimum_to_dict_uses_ids():
    doc = brute_force_optimum(example_23(), "lorenz_augmented").to_dict(example_23())
    assert doc["utilities"] == {"a1": 2, "a2": 1}
    assert sorted(itertools.chain(*doc["witness"]["allocation"].values())) == ["g1", "g2", "g3"]
