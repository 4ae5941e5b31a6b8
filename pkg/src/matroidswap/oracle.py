"""Brute-force ground truth over all clean allocations of a small instance."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from .core import (
    Allocation,
    Dominance,
    Instance,
    SortedUtilityVector,
    augment,
    lorenz_compare,
    nsw_key,
    nsw_of,
)

GUARD_ENV = "MATROIDSWAP_GUARD_OVERRIDE"
OBJECTIVES = ("max_usw", "mnw", "leximin_plain", "lorenz_augmented")


class GuardExceeded(ValueError):
    """Instance too large for exhaustive enumeration."""


class DominanceError(AssertionError):
    """The leximin-best augmented vector failed to dominate some clean allocation."""


def guard_overridden() -> bool:
    return os.environ.get(GUARD_ENV, "") not in ("", "0")


@dataclass(frozen=True)
class EnumerationGuard:
    max_agents: int = 3
    max_goods: int = 8
    max_states: int | None = None

    def check(self, instance: Instance) -> None:
        if guard_overridden():
            return
        if instance.n > self.max_agents or instance.m > self.max_goods:
            raise GuardExceeded(
                f"n={instance.n}, m={instance.m} exceeds guard (n <= {self.max_agents}, m <= {self.max_goods}); "
                f"set {GUARD_ENV}=1 to lift it"
            )
        if self.max_states is not None and (instance.n + 1) ** instance.m > self.max_states:
            raise GuardExceeded(f"(n+1)^m exceeds max_states={self.max_states}")


DEFAULT_GUARD = EnumerationGuard()


def _clean_masks(instance: Instance) -> Iterator[tuple[int, ...]]:
    """Bundle bitmasks for agents 1..n of every clean allocation.

    Goods are placed in index order, either into the pile or with an agent
    who gains 1 from them; values are memoised per (agent, mask).
    """
    n, m = instance.n, instance.m
    memo: list[dict[int, int]] = [{0: 0} for _ in range(n)]

    def value(a: int, mask: int) -> int:
        table = memo[a]
        if mask not in table:
            table[mask] = instance.oracles[a].value([g for g in range(m) if mask >> g & 1])
        return table[mask]

    masks = [0] * n
    sizes = [0] * n

    def place(g: int):
        if g == m:
            yield tuple(masks)
            return
        yield from place(g + 1)
        bit = 1 << g
        for a in range(n):
            grown = masks[a] | bit
            if value(a, grown) == sizes[a] + 1:
                masks[a], sizes[a] = grown, sizes[a] + 1
                yield from place(g + 1)
                masks[a], sizes[a] = grown ^ bit, sizes[a] - 1

    yield from place(0)


def _to_allocation(instance: Instance, masks: tuple[int, ...]) -> Allocation:
    owner = [0] * instance.m
    for a, mask in enumerate(masks, start=1):
        for g in range(instance.m):
            if mask >> g & 1:
                owner[g] = a
    return Allocation(instance.n, owner)


def enumerate_clean_allocations(instance: Instance, guard: EnumerationGuard = DEFAULT_GUARD) -> Iterator[Allocation]:
    guard.check(instance)
    for masks in _clean_masks(instance):
        yield _to_allocation(instance, masks)


def clean_profiles(instance: Instance, guard: EnumerationGuard = DEFAULT_GUARD) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Distinct per-agent utility vectors of clean allocations, each with one witness (bundle masks).

    Cached on the instance, since oracles are immutable.
    """
    guard.check(instance)
    cache = instance.__dict__.setdefault("_profile_cache", {})
    if "profiles" not in cache:
        profiles: dict[tuple[int, ...], tuple[int, ...]] = {}
        for masks in _clean_masks(instance):
            profile = tuple(mask.bit_count() for mask in masks)
            profiles.setdefault(profile, masks)
        cache["profiles"] = profiles
    return cache["profiles"]


@dataclass
class Optimum:
    objective: str
    value: object
    utilities: tuple[int, ...]
    witness: Allocation

    def to_dict(self, instance: Instance) -> dict:
        value = self.value
        if isinstance(value, SortedUtilityVector):
            value = list(value.entries)
        elif isinstance(value, tuple):
            value = list(value)
        return {
            "objective": self.objective,
            "value": value,
            "utilities": dict(zip(instance.agents, self.utilities)),
            "witness": {
                "allocation": {
                    a: [instance.goods[g] for g in sorted(self.witness.bundles[i])]
                    for i, a in enumerate(instance.agents, start=1)
                },
                "unallocated": [instance.goods[g] for g in sorted(self.witness.bundles[0])],
            },
        }


def _augmented_sorted(profile, instance):
    return tuple(sorted(augment(profile, instance)))


def brute_force_optimum(instance: Instance, objective: str, guard: EnumerationGuard = DEFAULT_GUARD) -> Optimum:
    """Best clean allocation under ``objective``.

    For ``lorenz_augmented`` the leximin-best augmented vector is also checked
    to Lorenz-dominate (or equal) every enumerated one.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}, expected one of {OBJECTIVES}")
    profiles = clean_profiles(instance, guard)
    if objective == "max_usw":
        best = max(profiles, key=lambda p: (sum(p), p))
        value = sum(best)
    elif objective == "mnw":
        best = max(profiles, key=lambda p: (nsw_key(nsw_of(p)), p))
        value = nsw_of(best)
    elif objective == "leximin_plain":
        best = max(profiles, key=lambda p: (tuple(sorted(p)), p))
        value = SortedUtilityVector(tuple(sorted(best)))
    else:
        best = max(profiles, key=lambda p: _augmented_sorted(p, instance))
        top = _augmented_sorted(best, instance)
        for p in profiles:
            rel = lorenz_compare(top, _augmented_sorted(p, instance))
            if rel not in (Dominance.LEFT, Dominance.EQUAL):
                raise DominanceError(f"augmented vector {top} does not dominate profile {p}")
        value = SortedUtilityVector(top, augmented=True)
    return Optimum(objective, value, best, _to_allocation(instance, profiles[best]))
