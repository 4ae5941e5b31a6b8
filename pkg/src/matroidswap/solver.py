"""Yankee Swap main loop."""
from __future__ import annotations

from dataclasses import dataclass, field

from .core import Allocation, Instance, InstanceError, empty_allocation, is_clean
from .exchange import build_exchange_graph, execute_path, find_transfer_path


@dataclass
class IterationRecord:
    agent: int
    sizes_before: list[int]
    found: bool
    path: list[int]
    oracle_calls: int


@dataclass
class SolveTrace:
    iterations: list[IterationRecord] = field(default_factory=list)
    removal_order: list[int] = field(default_factory=list)
    graph_builds: int = 0

    @property
    def total_iterations(self) -> int:
        return len(self.iterations)

    @property
    def oracle_calls(self) -> int:
        return sum(r.oracle_calls for r in self.iterations)

    def to_dict(self, instance: Instance | None = None) -> dict:
        """JSON-ready dict; agent and good indices become ids when ``instance`` is given."""
        def agent(i):
            return instance.agents[i - 1] if instance else i

        def good(g):
            return instance.goods[g] if instance else g

        return {
            "total_iterations": self.total_iterations,
            "graph_builds": self.graph_builds,
            "oracle_calls": self.oracle_calls,
            "removal_order": [agent(i) for i in self.removal_order],
            "iterations": [
                {
                    "agent": agent(r.agent),
                    "sizes_before": r.sizes_before,
                    "found": r.found,
                    "path": [good(g) for g in r.path],
                    "oracle_calls": r.oracle_calls,
                }
                for r in self.iterations
            ],
        }


def select_agent(active, alloc: Allocation, ranks) -> int:
    """Active agent with the smallest bundle, ties to the higher priority (lower rank).

    ``ranks`` maps agent index to rank, either as an Instance or a sequence
    indexed by ``agent - 1``.
    """
    if not active:
        raise ValueError("no active agents")
    rank_of = ranks.rank_of if isinstance(ranks, Instance) else (lambda i: ranks[i - 1])
    return min(active, key=lambda i: (len(alloc.bundles[i]), rank_of(i)))


def yankee_swap(instance: Instance, debug: bool = False) -> tuple[Allocation, SolveTrace]:
    """Prioritized Lorenz dominating, clean allocation for MRF valuations.

    With ``debug`` the allocation is checked for cleanness and partition
    consistency after every iteration.
    """
    alloc = empty_allocation(instance)
    trace = SolveTrace()
    active = set(range(1, instance.n + 1))
    while active:
        i = select_agent(active, alloc, instance)
        calls_before = instance.oracle_calls()
        sizes = alloc.sizes()
        graph = build_exchange_graph(alloc, instance, check=False)
        trace.graph_builds += 1
        path = find_transfer_path(alloc, instance, i, 0, graph=graph)
        if path is not None:
            alloc = execute_path(alloc, instance, path)
        else:
            active.discard(i)
            trace.removal_order.append(i)
        trace.iterations.append(IterationRecord(
            agent=i,
            sizes_before=sizes,
            found=path is not None,
            path=list(path.goods) if path is not None else [],
            oracle_calls=instance.oracle_calls() - calls_before,
        ))
        if debug:
            alloc.check()
            if not is_clean(alloc, instance):
                raise InstanceError(f"allocation not clean after iteration {trace.total_iterations}")
    return alloc, trace


def replay(instance: Instance, trace: SolveTrace) -> list[Allocation]:
    """Allocations at the start of every iteration plus the final one."""
    alloc = empty_allocation(instance)
    states = [alloc]
    for rec in trace.iterations:
        if rec.found:
            alloc = alloc.copy()
            receivers = [rec.agent] + [alloc.owner[g] for g in rec.path[:-1]]
            for g, to in zip(rec.path, receivers):
                alloc.move(g, to)
        states.append(alloc)
    return states

