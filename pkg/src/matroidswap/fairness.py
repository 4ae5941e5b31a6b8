"""Fairness and efficiency checks with re-checkable failure witnesses.

Envy-based checks compare agents ``1..n`` only; the pile is not an agent.
Optimality checks compare against brute-force enumeration (see ``oracle``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Allocation,
    Dominance,
    Instance,
    augment,
    leximin_compare,
    lorenz_compare,
    nsw_of,
    nsw_key,
    utility_vector,
)
from .oracle import DEFAULT_GUARD, EnumerationGuard, GuardExceeded, brute_force_optimum, clean_profiles, guard_overridden

MMS_MAX_AGENTS = 4
MMS_MAX_GOODS = 10

ALL_CHECKS = ("clean", "ef1", "efx", "max_usw", "mnw", "leximin", "lorenz", "lorenz_augmented", "half_mms")


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None

    def to_dict(self):
        return {"passed": self.passed, "witness": self.witness}


@dataclass
class FairnessReport:
    results: dict[str, CheckResult] = field(default_factory=dict)

    @property
    def checks_run(self) -> list[str]:
        return list(self.results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def add(self, result: CheckResult) -> None:
        self.results[result.name] = result

    def to_dict(self) -> dict:
        return {
            "all_passed": self.passed,
            "checks_run": self.checks_run,
            "results": {k: r.to_dict() for k, r in self.results.items()},
        }


def _value(instance: Instance, i: int, goods) -> int:
    return instance.oracle(i).value(goods)


def check_clean(alloc: Allocation, instance: Instance) -> CheckResult:
    for i in range(1, instance.n + 1):
        v = _value(instance, i, alloc.bundles[i])
        if v != len(alloc.bundles[i]):
            return CheckResult("clean", False, {"agent": i, "value": v, "size": len(alloc.bundles[i])})
    return CheckResult("clean", True)


def check_ef1(alloc: Allocation, instance: Instance) -> CheckResult:
    for i in range(1, instance.n + 1):
        own = _value(instance, i, alloc.bundles[i])
        for j in range(1, instance.n + 1):
            other = alloc.bundles[j]
            if i == j or _value(instance, i, other) <= own:
                continue
            if not any(_value(instance, i, other - {g}) <= own for g in sorted(other)):
                return CheckResult("ef1", False, {
                    "envious": i, "envied": j, "own_value": own,
                    "other_value": _value(instance, i, other),
                })
    return CheckResult("ef1", True)


def check_efx(alloc: Allocation, instance: Instance) -> CheckResult:
    for i in range(1, instance.n + 1):
        own = _value(instance, i, alloc.bundles[i])
        for j in range(1, instance.n + 1):
            if i == j:
                continue
            other = alloc.bundles[j]
            for g in sorted(other):
                reduced = _value(instance, i, other - {g})
                if reduced > own:
                    return CheckResult("efx", False, {
                        "envious": i, "envied": j, "dropped": g,
                        "own_value": own, "reduced_value": reduced,
                    })
    return CheckResult("efx", True)


def _mms_guard(instance: Instance) -> None:
    if guard_overridden():
        return
    if instance.n > MMS_MAX_AGENTS or instance.m > MMS_MAX_GOODS:
        raise GuardExceeded(f"MMS enumeration needs n <= {MMS_MAX_AGENTS} and m <= {MMS_MAX_GOODS}")


def mms_value(instance: Instance, i: int) -> int:
    """Maximin share of agent ``i``: best worst-bundle value over partitions into n bundles.

    Labeled bundles are enumerated with the first occurrence of each label in
    order, which skips relabelings of the same partition.
    """
    _mms_guard(instance)
    n, m = instance.n, instance.m
    oracle = instance.oracle(i)
    table = [oracle.value([g for g in range(m) if mask >> g & 1]) for mask in range(1 << m)]
    if m == 0:
        return 0
    best = 0
    masks = [0] * n

    def place(g: int, used: int):
        nonlocal best
        if g == m:
            worst = min(table[mk] for mk in masks)
            if worst > best:
                best = worst
            return
        for b in range(min(used + 1, n)):
            masks[b] |= 1 << g
            place(g + 1, max(used, b + 1))
            masks[b] ^= 1 << g

    place(0, 0)
    return best


def check_cmms(alloc: Allocation, instance: Instance, c: Fraction | str | float = Fraction(1, 2)) -> CheckResult:
    c = Fraction(c)
    name = "half_mms" if c == Fraction(1, 2) else f"mms_{c}"
    for i in range(1, instance.n + 1):
        share = mms_value(instance, i)
        own = _value(instance, i, alloc.bundles[i])
        if own * c.denominator < c.numerator * share:
            return CheckResult(name, False, {"agent": i, "mms": share, "value": own, "c": str(c)})
    return CheckResult(name, True)


def _guarded(name, fn):
    try:
        return fn()
    except GuardExceeded as exc:
        return CheckResult(name, False, {"error": str(exc)})


def check_max_usw(alloc: Allocation, instance: Instance, guard: EnumerationGuard = DEFAULT_GUARD) -> CheckResult:
    best = brute_force_optimum(instance, "max_usw", guard)
    own = sum(utility_vector(alloc, instance))
    if own < best.value:
        return CheckResult("max_usw", False, {"usw": own, "optimum": best.value, "better": list(best.utilities)})
    return CheckResult("max_usw", True)


def check_mnw(alloc: Allocation, instance: Instance, guard: EnumerationGuard = DEFAULT_GUARD) -> CheckResult:
    best = brute_force_optimum(instance, "mnw", guard)
    own = nsw_of(utility_vector(alloc, instance))
    if nsw_key(own) < nsw_key(best.value):
        return CheckResult("mnw", False, {
            "nsw": list(own), "optimum": list(best.value), "better": list(best.utilities),
        })
    return CheckResult("mnw", True)


def check_leximin(alloc: Allocation, instance: Instance, guard: EnumerationGuard = DEFAULT_GUARD) -> CheckResult:
    best = brute_force_optimum(instance, "leximin_plain", guard)
    own = tuple(sorted(utility_vector(alloc, instance)))
    if leximin_compare(own, best.value) < 0:
        return CheckResult("leximin", False, {"sorted": list(own), "better": list(best.value.entries)})
    return CheckResult("leximin", True)


def check_lorenz_dominating(
    alloc: Allocation, instance: Instance, augmented: bool = False, guard: EnumerationGuard = DEFAULT_GUARD
) -> CheckResult:
    """Sorted vector must dominate or equal that of every clean allocation."""
    name = "lorenz_augmented" if augmented else "lorenz"

    def vec(profile):
        return tuple(sorted(augment(profile, instance) if augmented else profile))

    own = vec(utility_vector(alloc, instance))
    for profile in clean_profiles(instance, guard):
        other = vec(profile)
        if lorenz_compare(own, other) not in (Dominance.LEFT, Dominance.EQUAL):
            return CheckResult(name, False, {"sorted": list(own), "not_dominated": list(other), "profile": list(profile)})
    return CheckResult(name, True)


CHECKS = {
    "clean": check_clean,
    "ef1": check_ef1,
    "efx": check_efx,
    "max_usw": check_max_usw,
    "mnw": check_mnw,
    "leximin": check_leximin,
    "lorenz": lambda a, inst: check_lorenz_dominating(a, inst, augmented=False),
    "lorenz_augmented": lambda a, inst: check_lorenz_dominating(a, inst, augmented=True),
    "half_mms": lambda a, inst: check_cmms(a, inst, Fraction(1, 2)),
}


def verify(alloc: Allocation, instance: Instance, checks=ALL_CHECKS) -> FairnessReport:
    """Run ``checks`` (names from ``ALL_CHECKS``); guard overruns are reported as failures."""
    checks = list(checks)
    if not checks:
        raise ValueError("no checks requested")
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {list(ALL_CHECKS)}")
    report = FairnessReport()
    for name in checks:
        report.add(_guarded(name, lambda: CHECKS[name](alloc, instance)))
    return report


def revalidate(result: CheckResult, alloc: Allocation, instance: Instance) -> bool:
    """True iff a failing result's witness really shows a violation."""
    if result.passed or result.witness is None:
        return False
    w = result.witness
    if "error" in w:
        return False
    name = result.name
    if name == "clean":
        return _value(instance, w["agent"], alloc.bundles[w["agent"]]) < len(alloc.bundles[w["agent"]])
    if name == "ef1":
        i, j = w["envious"], w["envied"]
        own = _value(instance, i, alloc.bundles[i])
        other = alloc.bundles[j]
        return _value(instance, i, other) > own and all(_value(instance, i, other - {g}) > own for g in other)
    if name == "efx":
        i, j, g = w["envious"], w["envied"], w["dropped"]
        return g in alloc.bundles[j] and _value(instance, i, alloc.bundles[j] - {g}) > _value(instance, i, alloc.bundles[i])
    if name.startswith("mms") or name == "half_mms":
        i = w["agent"]
        c = Fraction(w["c"])
        return _value(instance, i, alloc.bundles[i]) < c * mms_value(instance, i)
    own = utility_vector(alloc, instance)
    if name == "max_usw":
        better = w["better"]
        return tuple(better) in clean_profiles(instance) and sum(better) > sum(own)
    if name == "mnw":
        better = w["better"]
        return tuple(better) in clean_profiles(instance) and nsw_key(nsw_of(better)) > nsw_key(nsw_of(own))
    if name == "leximin":
        better = tuple(w["better"])
        profiles = {tuple(sorted(p)) for p in clean_profiles(instance)}
        return better in profiles and leximin_compare(sorted(own), better) < 0
    if name in ("lorenz", "lorenz_augmented"):
        profile = tuple(w["profile"])
        if profile not in clean_profiles(instance):
            return False
        if name == "lorenz_augmented":
            own, profile = augment(own, instance), augment(profile, instance)
        return lorenz_compare(sorted(own), sorted(profile)) not in (Dominance.LEFT, Dominance.EQUAL)
    return False
