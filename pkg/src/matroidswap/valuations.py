"""Matroid rank function oracles.

Every oracle works over good indices ``0..m-1`` and evaluates through the
active kernel backend. Each concrete family is a matroid rank function by
construction; ``ExplicitOracle`` tables are only shape-checked here, the
matroid axioms are checked by :func:`check_mrf`.
"""
from __future__ import annotations

import operator
import random
import threading
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from . import _backend
from ._encoding import ADDITIVE, EXPLICIT, GRAPHIC, PARTITION, TRANSVERSAL, UNIFORM, Encoding
from .core import AugmentedUtility, Instance, InstanceError

EXPLICIT_MAX_GOODS = 16


class ValuationOracle:
    """Base class. Subclasses fill in ``kind`` and build ``encoding``."""

    kind: str = ""

    def __init__(self, m: int):
        if m < 0:
            raise InstanceError("number of goods must be non-negative")
        self.m = m
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def call_counter(self) -> int:
        return self._calls

    def count_calls(self, k: int) -> None:
        with self._lock:
            self._calls += k

    @property
    def encoding(self) -> Encoding:
        raise NotImplementedError

    def _check_goods(self, goods: Iterable[int]) -> list[int]:
        out = []
        seen = set()
        for g in goods:
            try:
                g = operator.index(g)
            except TypeError:
                raise InstanceError(f"unknown good {g!r}") from None
            if not 0 <= g < self.m:
                raise InstanceError(f"unknown good {g!r}")
            if g not in seen:
                seen.add(g)
                out.append(g)
        return out

    def value(self, goods: Iterable[int]) -> int:
        """Rank of the set ``goods``."""
        goods = self._check_goods(goods)
        self.count_calls(1)
        return _backend.rank(self.encoding, goods)

    def marginal(self, goods: Iterable[int], g: int) -> int:
        """``value(goods + g) - value(goods)``; ``g`` must not already be in ``goods``."""
        goods = self._check_goods(goods)
        if g in goods:
            raise ValueError(f"good {g} already in the set")
        return self.value(goods + [g]) - self.value(goods)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_dict()})"


class AdditiveOracle(ValuationOracle):
    """Binary additive: one unit per desired good."""

    kind = "binary_additive"

    def __init__(self, m: int, desired: Iterable[int]):
        super().__init__(m)
        self.desired = frozenset(self._check_goods(desired))
        self._enc = Encoding(ADDITIVE, m, a=[1 if g in self.desired else 0 for g in range(m)])

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        return {"type": self.kind, "desired": sorted(self.desired)}


class UniformOracle(ValuationOracle):
    """``min(|S|, cap)``."""

    kind = "uniform"

    def __init__(self, m: int, cap: int):
        super().__init__(m)
        if cap < 0:
            raise InstanceError("uniform cap must be non-negative")
        self.cap = cap
        self._enc = Encoding(UNIFORM, m, cap=cap)

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        return {"type": self.kind, "cap": self.cap}


class PartitionOracle(ValuationOracle):
    """Sum over parts of ``min(|S & part|, cap)``, optionally truncated at ``global_cap``.

    Goods outside every part are worth nothing.
    """

    kind = "partition"

    def __init__(self, m: int, parts: Sequence[tuple[Iterable[int], int]], global_cap: int | None = None):
        super().__init__(m)
        part_of = [-1] * m
        self.parts: list[tuple[frozenset[int], int]] = []
        for p, (members, cap) in enumerate(parts):
            if cap < 0:
                raise InstanceError("part caps must be non-negative")
            members = frozenset(self._check_goods(members))
            for g in members:
                if part_of[g] != -1:
                    raise InstanceError(f"good {g} appears in two parts")
                part_of[g] = p
            self.parts.append((members, cap))
        if global_cap is not None and global_cap < 0:
            raise InstanceError("global cap must be non-negative")
        self.global_cap = global_cap
        self._enc = Encoding(
            PARTITION, m,
            cap=-1 if global_cap is None else global_cap,
            size=len(self.parts),
            a=part_of,
            c=[cap for _, cap in self.parts],
        )

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        d = {"type": self.kind, "parts": [{"goods": sorted(s), "cap": c} for s, c in self.parts]}
        if self.global_cap is not None:
            d["global_cap"] = self.global_cap
        return d


class TransversalOracle(ValuationOracle):
    """Size of a maximum matching of S into slots; each good lists the slots it may fill."""

    kind = "transversal"

    def __init__(self, m: int, adjacency: Mapping[int, Iterable[Hashable]]):
        super().__init__(m)
        self._check_goods(adjacency)
        self.adjacency = {g: frozenset(slots) for g, slots in adjacency.items()}
        slot_ids: dict[Hashable, int] = {}
        for g in sorted(self.adjacency):
            for s in sorted(self.adjacency[g], key=repr):
                slot_ids.setdefault(s, len(slot_ids))
        indptr, indices = [0], []
        for g in range(m):
            indices.extend(sorted(slot_ids[s] for s in self.adjacency.get(g, ())))
            indptr.append(len(indices))
        self._enc = Encoding(TRANSVERSAL, m, size=len(slot_ids), a=indptr, b=indices)

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        return {
            "type": self.kind,
            "adjacency": {str(g): sorted(map(str, s)) for g, s in sorted(self.adjacency.items())},
        }


class GraphicOracle(ValuationOracle):
    """Each good is an edge between two vertices; value is the size of a spanning forest of S.

    Goods without endpoints, and self-loops, are worth nothing.
    """

    kind = "graphic"

    def __init__(self, m: int, endpoints: Mapping[int, tuple[Hashable, Hashable]]):
        super().__init__(m)
        self._check_goods(endpoints)
        self.endpoints = {g: tuple(uv) for g, uv in endpoints.items()}
        vertex_ids: dict[Hashable, int] = {}
        us, vs = [-1] * m, [-1] * m
        for g in sorted(self.endpoints):
            u, v = self.endpoints[g]
            if u == v:
                continue
            us[g] = vertex_ids.setdefault(u, len(vertex_ids))
            vs[g] = vertex_ids.setdefault(v, len(vertex_ids))
        self._enc = Encoding(GRAPHIC, m, size=len(vertex_ids), a=us, b=vs)

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        return {
            "type": self.kind,
            "endpoints": {str(g): [str(u), str(v)] for g, (u, v) in sorted(self.endpoints.items())},
        }


class ExplicitOracle(ValuationOracle):
    """Lookup table indexed by subset bitmask (bit g set iff good g is in the set)."""

    kind = "explicit"

    def __init__(self, m: int, table: Sequence[int] | Mapping[int, int]):
        super().__init__(m)
        if m > EXPLICIT_MAX_GOODS:
            raise InstanceError(f"explicit tables support at most {EXPLICIT_MAX_GOODS} goods, got {m}")
        size = 1 << m
        if isinstance(table, Mapping):
            missing = [mask for mask in range(size) if mask not in table]
            if missing:
                raise InstanceError(f"explicit table missing subset with bitmask {missing[0]}")
            values = [table[mask] for mask in range(size)]
        else:
            values = list(table)
            if len(values) != size:
                raise InstanceError(f"explicit table needs {size} entries, got {len(values)}")
        if any(not isinstance(v, int) or v < 0 for v in values):
            raise InstanceError("explicit table entries must be non-negative integers")
        self.table = tuple(values)
        self._enc = Encoding(EXPLICIT, m, c=values)

    @property
    def encoding(self):
        return self._enc

    def to_dict(self):
        return {"type": self.kind, "table": list(self.table)}

    @classmethod
    def from_oracle(cls, oracle: ValuationOracle) -> "ExplicitOracle":
        m = oracle.m
        return cls(m, [oracle.value(_members(mask, m)) for mask in range(1 << m)])


def _members(mask: int, m: int) -> list[int]:
    return [g for g in range(m) if mask >> g & 1]


def value(oracle: ValuationOracle, goods: Iterable[int]) -> int:
    return oracle.value(goods)


def marginal(oracle: ValuationOracle, goods: Iterable[int], g: int) -> int:
    return oracle.marginal(goods, g)


def augmented_value(instance: Instance, i: int, goods: Iterable[int]) -> AugmentedUtility:
    """``n^2 * v_i(S) + rank_i``, the exact integer image of ``v_i(S) + rank_i / n^2``."""
    return AugmentedUtility.of(instance.oracle(i).value(goods), instance.rank_of(i), instance.n)


@dataclass
class MRFReport:
    valid: bool
    mode: str
    checks: int = 0
    violation: dict | None = field(default=None)

    def to_dict(self):
        return {"valid": self.valid, "mode": self.mode, "checks": self.checks, "violation": self.violation}


def check_mrf(oracle: ValuationOracle, mode: str = "exhaustive", trials: int = 1000, seed: int = 0) -> MRFReport:
    """Check ``v(empty) = 0``, gains in {0, 1} and diminishing gains.

    ``exhaustive`` tabulates all ``2^m`` subsets and checks every
    ``(S, S + h, g)`` triple, which is equivalent to checking all ``S <= T``.
    ``sampled`` draws random chains ``S <= T`` and a good outside ``T``.
    """
    m = oracle.m
    if mode == "exhaustive":
        if m > EXPLICIT_MAX_GOODS:
            raise ValueError(f"exhaustive check needs m <= {EXPLICIT_MAX_GOODS}")
        table = [oracle.value(_members(mask, m)) for mask in range(1 << m)]
        report = MRFReport(True, mode, checks=0)
        if table[0] != 0:
            report.valid, report.violation = False, {"rule": "empty", "value": table[0]}
            return report
        for mask in range(1 << m):
            for g in range(m):
                if mask >> g & 1:
                    continue
                gain = table[mask | 1 << g] - table[mask]
                report.checks += 1
                if gain not in (0, 1):
                    report.valid = False
                    report.violation = {"rule": "binary_gain", "set": _members(mask, m), "good": g, "gain": gain}
                    return report
        for mask in range(1 << m):
            for g in range(m):
                if mask >> g & 1:
                    continue
                gain = table[mask | 1 << g] - table[mask]
                for h in range(m):
                    if h == g or mask >> h & 1:
                        continue
                    bigger = mask | 1 << h
                    gain_t = table[bigger | 1 << g] - table[bigger]
                    report.checks += 1
                    if gain < gain_t:
                        report.valid = False
                        report.violation = {
                            "rule": "submodular", "small": _members(mask, m), "large": _members(bigger, m),
                            "good": g, "gain_small": gain, "gain_large": gain_t,
                        }
                        return report
        return report
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")

    rng = random.Random(seed)
    report = MRFReport(True, mode)
    empty = oracle.value([])
    if empty != 0:
        report.valid, report.violation = False, {"rule": "empty", "value": empty}
        return report
    if m == 0:
        return report
    for _ in range(trials):
        big = [g for g in range(m) if rng.random() < 0.5]
        outside = [g for g in range(m) if g not in big]
        if not outside:
            big.pop(rng.randrange(len(big)))
            outside = [g for g in range(m) if g not in big]
        small = [g for g in big if rng.random() < 0.5]
        g = rng.choice(outside)
        gain_s = oracle.marginal(small, g)
        gain_t = oracle.marginal(big, g)
        report.checks += 1
        for s, gain in ((small, gain_s), (big, gain_t)):
            if gain not in (0, 1):
                report.valid = False
                report.violation = {"rule": "binary_gain", "set": sorted(s), "good": g, "gain": gain}
                return report
        if gain_s < gain_t:
            report.valid = False
            report.violation = {
                "rule": "submodular", "small": sorted(small), "large": sorted(big),
                "good": g, "gain_small": gain_s, "gain_large": gain_t,
            }
            return report
    return report
