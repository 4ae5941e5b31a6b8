import random

import pytest

from helpers import (
    TEST_FAMILIES,
    make_instance,
    random_clean_allocation,
    reference_clean,
    reference_utilities,
    reference_value,
    transfer_exists_brute,
)
from matroidswap.core import Allocation, Instance, InstanceError, empty_allocation
from matroidswap.exchange import (
    StalePathError,
    TransferPath,
    build_exchange_graph,
    execute_path,
    find_transfer_path,
    gain_set,
)
from matroidswap.valuations import AdditiveOracle, UniformOracle


def running_example():
    """Agent 1 wants only g1; agent 2 takes one of {g1, g2} and holds g1; g2 is unassigned."""
    inst = Instance(["g1", "g2"], ["a1", "a2"], [AdditiveOracle(2, [0]), UniformOracle(2, 1)])
    return inst, Allocation(2, [2, 0])


def reference_edge(alloc, inst, g, h):
    j = alloc.owner[g]
    if h in alloc.bundles[j]:
        return False
    if j == 0:
        return True
    bundle = alloc.bundles[j]
    return reference_value(inst.oracle(j), (bundle - {g}) | {h}) == reference_value(inst.oracle(j), bundle)


def test_gain_set_examples():
    inst = Instance(["g1", "g2"], ["a"], [AdditiveOracle(2, [0])])
    assert gain_set(empty_allocation(inst), inst, 1) == {0}
    inst = Instance(["g1", "g2"], ["a"], [UniformOracle(2, 1)])
    assert gain_set(Allocation(1, [0, 1]), inst, 1) == set()


def test_running_example_graph(backend):
    inst, alloc = running_example()
    graph = build_exchange_graph(alloc, inst)
    assert sorted(graph.edges()) == [(0, 1), (1, 0)]


def test_running_example_path_and_execution(backend):
    inst, alloc = running_example()
    path = find_transfer_path(alloc, inst, 1)
    assert path.goods == (0, 1) and path.terminal == 0
    after = execute_path(alloc, inst, path)
    assert after.bundles == [set(), {0}, {1}]
    assert reference_utilities(after, inst) == [1, 1]
    # the input allocation is untouched
    assert alloc.owner == [2, 0]


def test_everything_unassigned_has_no_edges(backend):
    inst = make_instance("uniform", 2, 4, 0)
    assert build_exchange_graph(empty_allocation(inst), inst).edge_count() == 0


def test_direct_take_from_pile(backend):
    inst = make_instance("uniform", 2, 3, 0)
    path = find_transfer_path(empty_allocation(inst), inst, 1)
    assert len(path) == 1 and path.terminal == 0
    after = execute_path(empty_allocation(inst), inst, path)
    assert len(after.bundles[0]) == 2 and len(after.bundles[1]) == 1


def test_no_gain_means_no_path(backend):
    inst = Instance(["g1"], ["a", "b"], [AdditiveOracle(1, []), UniformOracle(1, 1)])
    assert find_transfer_path(empty_allocation(inst), inst, 1) is None


def test_unclean_allocation_rejected():
    inst = Instance(["g1", "g2"], ["a"], [UniformOracle(2, 1)])
    with pytest.raises(InstanceError):
        build_exchange_graph(Allocation(1, [1, 1]), inst)


def test_stale_path_rejected():
    inst, alloc = running_example()
    path = find_transfer_path(alloc, inst, 1)
    moved = execute_path(alloc, inst, path)
    with pytest.raises(StalePathError):
        execute_path(moved, inst, path)
    with pytest.raises(StalePathError):
        execute_path(alloc, inst, TransferPath(1, (0, 0), (2, 2)))


def test_graph_for_other_allocation_rejected():
    inst, alloc = running_example()
    graph = build_exchange_graph(alloc, inst)
    with pytest.raises(StalePathError):
        find_transfer_path(empty_allocation(inst), inst, 1, graph=graph)


def test_edge_list_dump():
    inst, alloc = running_example()
    graph = build_exchange_graph(alloc, inst)
    find_transfer_path(alloc, inst, 1, graph=graph)
    assert graph.to_edgelist(inst.goods) == "s -> g1\ng1 -> g2\ng2 -> g1\n"


@pytest.mark.parametrize("family", TEST_FAMILIES)
def test_edges_match_predicate(backend, family):
    rng = random.Random(family)
    for seed in range(8):
        n, m = 2 + seed % 2, 3 + seed % 4
        inst = make_instance(family, n, m, seed)
        alloc = random_clean_allocation(inst, rng)
        graph = build_exchange_graph(alloc, inst)
        for g in range(m):
            for h in range(m):
                assert graph.has_edge(g, h) == (g != h and reference_edge(alloc, inst, g, h))
        assert graph.edge_count() <= m * (m - 1)


def test_gain_set_keeps_allocation_clean():
    rng = random.Random(5)
    for seed in range(60):
        inst = make_instance(TEST_FAMILIES[seed % len(TEST_FAMILIES)], 3, 6, seed)
        alloc = random_clean_allocation(inst, rng)
        for i in range(1, 4):
            for g in gain_set(alloc, inst, i):
                trial = alloc.copy()
                trial.move(g, i)
                if alloc.owner[g] == 0:
                    assert reference_clean(trial, inst)
                assert reference_value(inst.oracle(i), trial.bundles[i]) == len(trial.bundles[i])


def fuzz_cases(count, seed=0):
    rng = random.Random(seed)
    for k in range(count):
        family = TEST_FAMILIES[k % len(TEST_FAMILIES)]
        n, m = rng.randint(1, 3), rng.randint(1, 6)
        inst = make_instance(family, n, m, rng.randrange(10**6))
        yield inst, random_clean_allocation(inst, rng), rng.randint(1, n)


def test_path_postconditions_fuzz(backend):
    found = 0
    for inst, alloc, i in fuzz_cases(500):
        before = reference_utilities(alloc, inst)
        path = find_transfer_path(alloc, inst, i)
        if path is None:
            continue
        found += 1
        assert len(set(path.goods)) == len(path.goods)
        assert reference_value(inst.oracle(i), alloc.bundles[i] | {path.goods[0]}) == len(alloc.bundles[i]) + 1
        after = execute_path(alloc, inst, path)
        after.check()
        assert reference_clean(after, inst)
        delta = [b - a for a, b in zip(before, reference_utilities(after, inst))]
        assert delta == [1 if j == i else 0 for j in range(1, inst.n + 1)]
        assert len(after.bundles[0]) == len(alloc.bundles[0]) - 1
        # rebuilding from the new state matches the edge predicate
        graph = build_exchange_graph(after, inst)
        assert all(reference_edge(after, inst, g, h) for g, h in graph.edges())
    assert found > 100


def test_path_is_shortest_and_exists_iff_transfer_exists(backend):
    checked = 0
    for inst, alloc, i in fuzz_cases(120, seed=9):
        if inst.m > 5:
            continue
        path = find_transfer_path(alloc, inst, i)
        assert (path is not None) == transfer_exists_brute(alloc, inst, i)
        checked += 1
    assert checked > 50


def test_path_to_other_agent():
    inst, alloc = running_example()
    # agent 1 can only get g1, which agent 2 holds
    path = find_transfer_path(alloc, inst, 1, target=2)
    assert path.goods == (0,) and path.terminal == 2
    with pytest.raises(ValueError):
        find_transfer_path(alloc, inst, 1, target=1)
