"""Independent reference implementations used as test oracles.

Nothing here calls the kernels' rank code: ranks come from definitions
(enumerating matchings, counting forest components with networkx) and
allocations from plain ``(n + 1)^m`` enumeration.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import networkx as nx

from matroidswap.bench import generate_instance
from matroidswap.core import Allocation, Instance
from matroidswap.valuations import (
    AdditiveOracle,
    ExplicitOracle,
    GraphicOracle,
    PartitionOracle,
    TransversalOracle,
    UniformOracle,
)

TEST_FAMILIES = ("additive", "uniform", "partition", "transversal", "graphic", "mixed", "course", "explicit")


def members(mask, m):
    return [g for g in range(m) if mask >> g & 1]


def max_matching_brute(goods, adjacency):
    """Largest set of goods assignable to distinct slots, by trying every slot choice."""
    options = [list(adjacency.get(g, ())) + [None] for g in goods]
    best = 0
    for choice in itertools.product(*options):
        used = [s for s in choice if s is not None]
        if len(used) == len(set(used)):
            best = max(best, len(used))
    return best


def forest_rank_brute(goods, endpoints):
    graph = nx.MultiGraph()
    for g in goods:
        if g in endpoints and endpoints[g][0] != endpoints[g][1]:
            graph.add_edge(*endpoints[g])
    if graph.number_of_nodes() == 0:
        return 0
    return graph.number_of_nodes() - nx.number_connected_components(graph)


def reference_value(oracle, goods):
    """Rank of ``goods`` computed from the family definition."""
    goods = set(goods)
    if isinstance(oracle, AdditiveOracle):
        return len(goods & oracle.desired)
    if isinstance(oracle, UniformOracle):
        return min(len(goods), oracle.cap)
    if isinstance(oracle, PartitionOracle):
        total = sum(min(len(goods & part), cap) for part, cap in oracle.parts)
        return total if oracle.global_cap is None else min(total, oracle.global_cap)
    if isinstance(oracle, TransversalOracle):
        return max_matching_brute(sorted(goods), oracle.adjacency)
    if isinstance(oracle, GraphicOracle):
        return forest_rank_brute(sorted(goods), oracle.endpoints)
    if isinstance(oracle, ExplicitOracle):
        return oracle.table[sum(1 << g for g in goods)]
    raise TypeError(type(oracle))


def reference_table(oracle):
    return [reference_value(oracle, members(mask, oracle.m)) for mask in range(1 << oracle.m)]


def make_instance(family, n, m, seed, priority=None):
    """Seeded test instance; ``explicit`` tabulates a random built-in family by brute force."""
    if family == "explicit":
        base = generate_instance("mixed", n, m, seed)
        oracles = [ExplicitOracle(m, reference_table(o)) for o in base.oracles]
        instance = Instance(base.goods, base.agents, oracles)
    else:
        instance = generate_instance(family, n, m, seed)
    if priority is not None:
        instance = instance.with_priority(priority)
    return instance


def random_priority(instance, seed):
    order = list(instance.agents)
    random.Random(seed).shuffle(order)
    return order


def all_assignments(instance):
    """Every owner vector in ``{0..n}^m``."""
    for owner in itertools.product(range(instance.n + 1), repeat=instance.m):
        yield Allocation(instance.n, owner)


def reference_utilities(alloc, instance):
    return [reference_value(instance.oracle(i), alloc.bundles[i]) for i in range(1, instance.n + 1)]


def reference_clean(alloc, instance):
    return all(
        reference_value(instance.oracle(i), alloc.bundles[i]) == len(alloc.bundles[i])
        for i in range(1, instance.n + 1)
    )


def exact_augmented(utilities, instance):
    n = instance.n
    return [u + Fraction(instance.rank_of(i), n * n) for i, u in enumerate(utilities, start=1)]


def prefix_dominates(u, w):
    su = sw = 0
    for a, b in zip(u, w):
        su += a
        sw += b
        if su < sw:
            return False
    return True


def transfer_exists_brute(alloc, instance, i, tables=None):
    """Is there a clean Y with |Y_i| = |X_i| + 1 and every other agent's size unchanged?"""
    n, m = instance.n, instance.m
    if tables is None:
        tables = [reference_table(instance.oracle(j)) for j in range(1, n + 1)]
    want = alloc.sizes()
    want[i] += 1
    for owner in itertools.product(range(n + 1), repeat=m):
        masks = [0] * (n + 1)
        for g, j in enumerate(owner):
            masks[j] |= 1 << g
        sizes = [bin(mk).count("1") for mk in masks]
        if sizes[1:] != want[1:]:
            continue
        if all(tables[j - 1][masks[j]] == sizes[j] for j in range(1, n + 1)):
            return True
    return False


def random_clean_allocation(instance, rng):
    """Random clean allocation: goods in random order, each given to a random agent who gains from it."""
    owner = [0] * instance.m
    bundles = {i: [] for i in range(1, instance.n + 1)}
    for g in rng.sample(range(instance.m), instance.m):
        candidates = [0] + [
            i for i in range(1, instance.n + 1)
            if reference_value(instance.oracle(i), bundles[i] + [g]) == len(bundles[i]) + 1
        ]
        who = rng.choice(candidates)
        owner[g] = who
        if who:
            bundles[who].append(g)
    return Allocation(instance.n, owner)


def uniform_instance(n, m, cap=None, priority=None):
    goods = [f"g{k}" for k in range(1, m + 1)]
    agents = [f"a{k}" for k in range(1, n + 1)]
    return Instance(goods, agents, [UniformOracle(m, m if cap is None else cap) for _ in agents], priority)


def example_23(priority=("a1", "a2")):
    """Two agents, three goods, v_i(S) = |S|."""
    return uniform_instance(2, 3, priority=list(priority) if priority is not None else None)
