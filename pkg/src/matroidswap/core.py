"""Instances, allocations and the orderings used to compare them.

Agents are indexed ``1..n``; index 0 is the pile of unallocated goods, which
values any set at its size. Goods are indexed ``0..m-1``.
"""
from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

if TYPE_CHECKING:
    from .valuations import ValuationOracle


class InstanceError(ValueError):
    """Malformed instance, allocation or oracle configuration."""


class Instance:
    """Goods, agents, one oracle per agent and a priority order.

    ``priority`` is either a sequence of agent ids, highest priority first, or
    a mapping from agent id to rank ``1..n`` (rank 1 is the highest priority).
    When omitted the agent-list order is used and ``priority_given`` is False.
    """

    def __init__(
        self,
        goods: Sequence[str],
        agents: Sequence[str],
        oracles: Sequence["ValuationOracle"] | Mapping[str, "ValuationOracle"],
        priority: Sequence[str] | Mapping[str, int] | None = None,
    ):
        self.goods = tuple(goods)
        self.agents = tuple(agents)
        if len(set(self.goods)) != len(self.goods):
            raise InstanceError("good identifiers must be unique")
        if len(set(self.agents)) != len(self.agents):
            raise InstanceError("agent identifiers must be unique")
        if not self.agents:
            raise InstanceError("an instance needs at least one agent")
        if isinstance(oracles, Mapping):
            if set(oracles) != set(self.agents):
                raise InstanceError("oracle map must cover exactly the agents")
            oracles = [oracles[a] for a in self.agents]
        self.oracles = tuple(oracles)
        if len(self.oracles) != len(self.agents):
            raise InstanceError("need one oracle per agent")
        for a, o in zip(self.agents, self.oracles):
            if o.m != len(self.goods):
                raise InstanceError(f"oracle of agent {a!r} is over {o.m} goods, instance has {len(self.goods)}")
        self._agent_index = {a: i + 1 for i, a in enumerate(self.agents)}
        self._good_index = {g: k for k, g in enumerate(self.goods)}

        n = len(self.agents)
        self.priority_given = priority is not None
        if priority is None:
            ranks = list(range(1, n + 1))
        elif isinstance(priority, Mapping):
            if set(priority) != set(self.agents):
                raise InstanceError("priority must rank every agent")
            ranks = [priority[a] for a in self.agents]
        else:
            order = list(priority)
            if sorted(order) != sorted(self.agents) or len(order) != n:
                raise InstanceError("priority must be a permutation of the agent ids")
            ranks = [0] * n
            for r, a in enumerate(order, start=1):
                ranks[self._agent_index[a] - 1] = r
        if sorted(ranks) != list(range(1, n + 1)):
            raise InstanceError("priority ranks must be a permutation of 1..n")
        self.ranks = tuple(ranks)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.goods)

    def oracle(self, i: int) -> "ValuationOracle":
        if not 1 <= i <= self.n:
            raise InstanceError(f"agent index {i} out of range 1..{self.n}")
        return self.oracles[i - 1]

    def rank_of(self, i: int) -> int:
        return self.ranks[i - 1]

    def agent_index(self, agent_id: str) -> int:
        try:
            return self._agent_index[agent_id]
        except KeyError:
            raise InstanceError(f"unknown agent {agent_id!r}") from None

    def good_index(self, good_id: str) -> int:
        try:
            return self._good_index[good_id]
        except KeyError:
            raise InstanceError(f"unknown good {good_id!r}") from None

    def priority_order(self) -> list[str]:
        """Agent ids, highest priority first."""
        return [a for _, a in sorted(zip(self.ranks, self.agents))]

    def with_priority(self, priority: Sequence[str] | Mapping[str, int]) -> "Instance":
        return Instance(self.goods, self.agents, self.oracles, priority)

    def value(self, i: int, goods: Iterable[int]) -> int:
        """``v_i(goods)``; agent 0 values a set at its size."""
        if i == 0:
            return len(set(goods))
        return self.oracle(i).value(goods)

    def oracle_calls(self) -> int:
        return sum(o.call_counter for o in self.oracles)

    def __repr__(self):
        return f"Instance(n={self.n}, m={self.m})"


class Allocation:
    """Partition ``(X_0, X_1, ..., X_n)`` of the goods, kept as an owner array."""

    __slots__ = ("n", "owner", "bundles")

    def __init__(self, n: int, owner: Sequence[int]):
        self.n = n
        self.owner = [operator.index(o) for o in owner]
        self.bundles: list[set[int]] = [set() for _ in range(n + 1)]
        for g, o in enumerate(self.owner):
            if not 0 <= o <= n:
                raise InstanceError(f"good {g} owned by unknown agent {o}")
            self.bundles[o].add(g)

    @classmethod
    def from_bundles(cls, n: int, m: int, bundles: Mapping[int, Iterable[int]]) -> "Allocation":
        """Build from agent bundles; goods not mentioned go to the pile."""
        owner = [0] * m
        seen: set[int] = set()
        for i, goods in bundles.items():
            if not 0 <= i <= n:
                raise InstanceError(f"unknown agent index {i}")
            for g in goods:
                if not 0 <= g < m:
                    raise InstanceError(f"unknown good index {g}")
                if g in seen:
                    raise InstanceError(f"good {g} assigned twice")
                seen.add(g)
                owner[g] = i
        return cls(n, owner)

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundle(self, i: int) -> set[int]:
        return self.bundles[i]

    def sizes(self) -> list[int]:
        """Bundle sizes for agents ``0..n``."""
        return [len(b) for b in self.bundles]

    def move(self, g: int, to: int) -> None:
        src = self.owner[g]
        self.bundles[src].discard(g)
        self.bundles[to].add(g)
        self.owner[g] = to

    def copy(self) -> "Allocation":
        new = Allocation.__new__(Allocation)
        new.n = self.n
        new.owner = list(self.owner)
        new.bundles = [set(b) for b in self.bundles]
        return new

    def check(self) -> None:
        """Raise if bundles and owner array disagree."""
        union: set[int] = set()
        for i, b in enumerate(self.bundles):
            if union & b:
                raise InstanceError("bundles overlap")
            union |= b
            for g in b:
                if self.owner[g] != i:
                    raise InstanceError(f"owner of good {g} inconsistent with bundles")
        if union != set(range(self.m)):
            raise InstanceError("bundles do not cover the goods")

    def __eq__(self, other):
        return isinstance(other, Allocation) and self.n == other.n and self.owner == other.owner

    def __hash__(self):
        return hash((self.n, tuple(self.owner)))

    def __repr__(self):
        parts = "; ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.bundles)
        return f"Allocation({parts})"


@dataclass(frozen=True, order=True)
class AugmentedUtility:
    """Integer ``n^2 * v + rank`` standing in for ``v + rank / n^2``.

    Since ``1 <= rank <= n < n^2`` for ``n >= 2`` the integer order is the
    rational order.
    """

    scaled: int

    @classmethod
    def of(cls, value: int, rank: int, n: int) -> "AugmentedUtility":
        return cls(n * n * value + rank)

    def as_fraction(self, n: int) -> Fraction:
        return Fraction(self.scaled, n * n)


@dataclass(frozen=True)
class SortedUtilityVector:
    """Ascending utilities; augmented entries are the scaled integers."""

    entries: tuple[int, ...]
    augmented: bool = False

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


class Dominance(enum.Enum):
    LEFT = "left_dominates"
    RIGHT = "right_dominates"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def empty_allocation(instance: Instance) -> Allocation:
    return Allocation(instance.n, [0] * instance.m)


def is_clean(alloc: Allocation, instance: Instance) -> bool:
    """True iff every agent's bundle value equals its size."""
    return all(
        instance.oracle(i).value(alloc.bundles[i]) == len(alloc.bundles[i])
        for i in range(1, instance.n + 1)
    )


def utility_vector(alloc: Allocation, instance: Instance) -> list[int]:
    """``v_i(X_i)`` for agents ``1..n`` in index order."""
    return [instance.oracle(i).value(alloc.bundles[i]) for i in range(1, instance.n + 1)]


def augment(utilities: Sequence[int], instance: Instance) -> list[int]:
    n = instance.n
    return [AugmentedUtility.of(u, instance.rank_of(i), n).scaled for i, u in enumerate(utilities, start=1)]


def sorted_utility_vector(alloc: Allocation, instance: Instance, augmented: bool = False) -> SortedUtilityVector:
    utilities = utility_vector(alloc, instance)
    if augmented:
        utilities = augment(utilities, instance)
    # ties keep agent-index order; only the multiset matters downstream
    return SortedUtilityVector(tuple(sorted(utilities)), augmented)


def _entries(u) -> tuple[int, ...]:
    return tuple(u.entries) if isinstance(u, SortedUtilityVector) else tuple(u)


def lorenz_compare(u, w) -> Dominance:
    """Compare prefix sums of two ascending vectors."""
    u, w = _entries(u), _entries(w)
    if len(u) != len(w):
        raise ValueError(f"length mismatch: {len(u)} vs {len(w)}")
    if u == w:
        return Dominance.EQUAL
    ge = le = True
    for a, b in zip(accumulate(u), accumulate(w)):
        if a < b:
            ge = False
        elif a > b:
            le = False
    if ge and not le:
        return Dominance.LEFT
    if le and not ge:
        return Dominance.RIGHT
    if ge and le:
        # equal prefix sums force equal vectors
        return Dominance.EQUAL
    return Dominance.INCOMPARABLE


def leximin_compare(u, w) -> int:
    """-1, 0 or 1 as ``u`` is leximin-worse, equal or better than ``w``."""
    u, w = _entries(u), _entries(w)
    if len(u) != len(w):
        raise ValueError(f"length mismatch: {len(u)} vs {len(w)}")
    return (u > w) - (u < w)


def usw(alloc: Allocation, instance: Instance) -> int:
    return sum(utility_vector(alloc, instance))


def nsw_of(utilities: Iterable[int]) -> tuple[int, int]:
    """``(number of zero utilities, product of the positive ones)``."""
    utilities = list(utilities)
    return sum(1 for u in utilities if u == 0), math.prod(u for u in utilities if u > 0)


def nsw(alloc: Allocation, instance: Instance) -> tuple[int, int]:
    return nsw_of(utility_vector(alloc, instance))


def nsw_better(a: tuple[int, int], b: tuple[int, int]) -> bool:
    """Strictly better: fewer zeros, then larger product."""
    return (-a[0], a[1]) > (-b[0], b[1])


def nsw_key(value: tuple[int, int]) -> tuple[int, int]:
    return (-value[0], value[1])
