"""Exchange graphs and transfer paths.

The exchange graph has one node per good. For a good ``g`` held by agent
``j`` there is an edge ``g -> h`` when ``h`` is outside ``X_j`` and
``v_j(X_j - g + h) = v_j(X_j)``; goods in the pile point at every allocated
good. A shortest path from the goods agent ``i`` gains from to a target
bundle is a transfer path.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .core import Allocation, Instance, InstanceError, is_clean


class StalePathError(RuntimeError):
    """The allocation changed since the path was computed."""


@dataclass
class ExchangeGraph:
    """Adjacency matrix over goods plus the owner map it was built from."""

    adjacency: np.ndarray
    owner: tuple[int, ...]
    source: tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.owner)

    def successors(self, g: int) -> list[int]:
        return np.flatnonzero(self.adjacency[g]).tolist()

    def has_edge(self, g: int, h: int) -> bool:
        return bool(self.adjacency[g, h])

    def edges(self):
        for g in range(self.m):
            for h in self.successors(g):
                yield g, h

    def edge_count(self) -> int:
        return int(self.adjacency.sum())

    def to_edgelist(self, names=None) -> str:
        """One ``g -> h`` line per edge, source edges first as ``s -> g``."""
        label = (lambda g: names[g]) if names is not None else str
        lines = [f"s -> {label(g)}" for g in self.source]
        lines += [f"{label(g)} -> {label(h)}" for g, h in self.edges()]
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class TransferPath:
    """Goods ``(g_1, ..., g_k)``: ``g_1`` goes to ``initiator``, ``g_t`` to the holder of ``g_{t-1}``.

    ``owners`` records who held each good when the path was found, so a path
    applied to a different allocation is caught.
    """

    initiator: int
    goods: tuple[int, ...]
    owners: tuple[int, ...]

    @property
    def terminal(self) -> int:
        return self.owners[-1]

    def __len__(self):
        return len(self.goods)


def _encodings(instance: Instance):
    return [o.encoding for o in instance.oracles]


def gain_set(alloc: Allocation, instance: Instance, i: int) -> set[int]:
    """Goods with marginal gain 1 for agent ``i`` on top of ``X_i``."""
    return set(np.flatnonzero(_gain_mask(alloc, instance, i)).tolist())


def _gain_mask(alloc: Allocation, instance: Instance, i: int) -> np.ndarray:
    if i == 0:
        mask = np.ones(alloc.m, dtype=np.uint8)
        mask[list(alloc.bundles[0])] = 0
        return mask
    oracle = instance.oracle(i)
    mask, calls = _backend.gain_mask(oracle.encoding, sorted(alloc.bundles[i]), alloc.m)
    oracle.count_calls(calls)
    return mask


def build_exchange_graph(alloc: Allocation, instance: Instance, check: bool = True) -> ExchangeGraph:
    """Test every ordered pair of goods against the swap predicate.

    Raises InstanceError when ``check`` is set and the allocation is not clean.
    """
    if check and not is_clean(alloc, instance):
        raise InstanceError("exchange graph needs a clean allocation")
    adj, calls = _backend.exchange_adjacency(alloc.owner, instance.n, _encodings(instance))
    for j in range(1, instance.n + 1):
        if calls[j]:
            instance.oracle(j).count_calls(calls[j])
    return ExchangeGraph(adj, tuple(alloc.owner))


def find_transfer_path(
    alloc: Allocation,
    instance: Instance,
    i: int,
    target: int = 0,
    graph: ExchangeGraph | None = None,
    check: bool = True,
) -> TransferPath | None:
    """Shortest transfer path from agent ``i`` into ``X_target``, or None."""
    if i == target:
        raise ValueError("initiator and target must differ")
    if graph is None:
        graph = build_exchange_graph(alloc, instance, check=check)
    elif tuple(alloc.owner) != graph.owner:
        raise StalePathError("exchange graph was built for another allocation")
    sources = _gain_mask(alloc, instance, i)
    graph.source = tuple(np.flatnonzero(sources).tolist())
    targets = np.zeros(alloc.m, dtype=np.uint8)
    targets[list(alloc.bundles[target])] = 1
    goods = _backend.bfs_path(graph.adjacency, sources, targets)
    if goods is None:
        return None
    return TransferPath(i, tuple(goods), tuple(alloc.owner[g] for g in goods))


def execute_path(alloc: Allocation, instance: Instance, path: TransferPath) -> Allocation:
    """Apply ``path`` to a copy of ``alloc`` and return it."""
    if len(set(path.goods)) != len(path.goods):
        raise StalePathError("path repeats a good")
    for g, o in zip(path.goods, path.owners):
        if alloc.owner[g] != o:
            raise StalePathError(f"good {g} is held by {alloc.owner[g]}, path expected {o}")
    out = alloc.copy()
    receivers = (path.initiator,) + path.owners[:-1]
    for g, to in zip(path.goods, receivers):
        out.move(g, to)
    return out
