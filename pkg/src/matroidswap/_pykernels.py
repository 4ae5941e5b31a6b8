"""Pure-Python kernels. Same contract as the compiled ``_kernels`` extension."""
from __future__ import annotations

from collections import deque

import numpy as np

from ._encoding import ADDITIVE, EXPLICIT, GRAPHIC, PARTITION, TRANSVERSAL, UNIFORM, Encoding

NAME = "python"


def _transversal_rank(indptr, slots, goods):
    match: dict[int, int] = {}

    def augment(g, seen):
        for t in range(indptr[g], indptr[g + 1]):
            s = slots[t]
            if s in seen:
                continue
            seen.add(s)
            if s not in match or augment(match[s], seen):
                match[s] = g
                return True
        return False

    return sum(1 for g in goods if augment(g, set()))


def _graphic_rank(us, vs, goods):
    parent: dict[int, int] = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while x != root:
            parent[x], x = root, parent.get(x, x)
        return root

    r = 0
    for g in goods:
        u = us[g]
        if u < 0:
            continue
        ru, rv = find(u), find(vs[g])
        if ru != rv:
            parent[ru] = rv
            r += 1
    return r


def rank(enc: Encoding, goods) -> int:
    """Rank of ``goods`` (a sequence of distinct good indices) under ``enc``."""
    kind = enc.kind
    a, b, c = enc.lists
    if kind == ADDITIVE:
        return sum(1 for g in goods if a[g])
    if kind == UNIFORM:
        return min(len(goods), enc.cap)
    if kind == PARTITION:
        counts: dict[int, int] = {}
        r = 0
        for g in goods:
            p = a[g]
            if p >= 0 and counts.get(p, 0) < c[p]:
                counts[p] = counts.get(p, 0) + 1
                r += 1
        return r if enc.cap < 0 else min(r, enc.cap)
    if kind == TRANSVERSAL:
        return _transversal_rank(a, b, goods)
    if kind == GRAPHIC:
        return _graphic_rank(a, b, goods)
    if kind == EXPLICIT:
        mask = 0
        for g in goods:
            mask |= 1 << g
        return c[mask]
    raise ValueError(f"unknown oracle kind {kind}")


def exchange_adjacency(owner, n: int, encodings) -> tuple[np.ndarray, list[int]]:
    """Adjacency matrix of the exchange graph plus per-agent evaluation counts.

    ``owner`` holds 0..n per good, ``encodings[j - 1]`` belongs to agent j.
    """
    owner = [int(o) for o in owner]
    m = len(owner)
    adj = np.zeros((m, m), dtype=np.uint8)
    calls = [0] * (n + 1)
    bundles: list[list[int]] = [[] for _ in range(n + 1)]
    for g, o in enumerate(owner):
        bundles[o].append(g)

    outside_pile = [g for g in range(m) if owner[g] != 0]
    for g in bundles[0]:
        adj[g, outside_pile] = 1

    for j in range(1, n + 1):
        bundle = bundles[j]
        if not bundle:
            continue
        enc = encodings[j - 1]
        base = rank(enc, bundle)
        calls[j] += 1
        others = [h for h in range(m) if owner[h] != j]
        for pos, g in enumerate(bundle):
            rest = bundle[:pos] + bundle[pos + 1:]
            row = adj[g]
            for h in others:
                rest.append(h)
                if rank(enc, rest) == base:
                    row[h] = 1
                rest.pop()
            calls[j] += len(others)
    return adj, calls


def gain_mask(enc: Encoding, bundle, m: int) -> tuple[np.ndarray, int]:
    bundle = [int(g) for g in bundle]
    inside = set(bundle)
    mask = np.zeros(m, dtype=np.uint8)
    base = rank(enc, bundle)
    calls = 1
    for g in range(m):
        if g in inside:
            continue
        bundle.append(g)
        if rank(enc, bundle) - base == 1:
            mask[g] = 1
        bundle.pop()
        calls += 1
    return mask, calls


def bfs_path(adj: np.ndarray, sources: np.ndarray, targets: np.ndarray):
    """Shortest path from any source to any target, as a list of good indices.

    Sources are enqueued in ascending index order and neighbours are scanned in
    ascending order, so the result is deterministic. Returns None when no
    target is reachable.
    """
    m = adj.shape[0]
    parent = [-2] * m
    queue = deque()
    for g in np.flatnonzero(sources).tolist():
        parent[g] = -1
        queue.append(g)
    while queue:
        u = queue.popleft()
        if targets[u]:
            path = []
            while u != -1:
                path.append(u)
                u = parent[u]
            return path[::-1]
        for w in np.flatnonzero(adj[u]).tolist():
            if parent[w] == -2:
                parent[w] = u
                queue.append(w)
    return None
