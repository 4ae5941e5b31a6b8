"""Seeded instance generators, scaling runs and RPE Monte Carlo."""
from __future__ import annotations

import csv
import io
import math
import random
import time
from dataclasses import asdict, dataclass, fields

from . import _backend
from .core import Instance, is_clean, utility_vector
from .solver import yankee_swap
from .valuations import (
    AdditiveOracle,
    GraphicOracle,
    PartitionOracle,
    TransversalOracle,
    UniformOracle,
    ValuationOracle,
    check_mrf,
)

FAMILIES = ("additive", "uniform", "partition", "transversal", "graphic", "mixed", "course")
_BASIC = ("additive", "uniform", "partition", "transversal", "graphic")
CSV_COLUMNS = ("n", "m", "family", "seed", "iterations", "oracle_calls", "graph_builds", "wall_time_ns", "usw")


def _additive(rng, m, n):
    p = rng.uniform(0.2, 0.8)
    return AdditiveOracle(m, [g for g in range(m) if rng.random() < p])


def _uniform(rng, m, n):
    return UniformOracle(m, rng.randint(1, max(1, math.ceil(2 * m / n))))


def _partition(rng, m, n):
    k = rng.randint(1, max(1, m // 2))
    members: list[list[int]] = [[] for _ in range(k)]
    for g in range(m):
        if rng.random() < 0.8:
            members[rng.randrange(k)].append(g)
    parts = [(mem, rng.randint(1, 2)) for mem in members if mem]
    global_cap = rng.randint(1, max(1, m)) if rng.random() < 0.5 else None
    return PartitionOracle(m, parts, global_cap)


def _transversal(rng, m, n):
    slots = rng.randint(1, max(1, m // 2))
    adjacency = {}
    for g in range(m):
        k = rng.choice((0, 1, 1, 2))
        adjacency[g] = rng.sample(range(slots), min(k, slots))
    return TransversalOracle(m, adjacency)


def _graphic(rng, m, n):
    vertices = max(2, m // 2 + 1)
    endpoints = {}
    for g in range(m):
        if rng.random() < 0.1:
            continue
        u, v = rng.sample(range(vertices), 2)
        endpoints[g] = (u, v)
    return GraphicOracle(m, endpoints)


_MAKERS = {
    "additive": _additive,
    "uniform": _uniform,
    "partition": _partition,
    "transversal": _transversal,
    "graphic": _graphic,
}


def _course_oracles(rng, m, n):
    # seats dealt round-robin to courses; courses share time slots; one seat per slot
    courses = max(1, m // 3)
    slot_count = max(1, courses // 2)
    course_of = [g % courses for g in range(m)]
    slot_of = [rng.randrange(slot_count) for _ in range(courses)]
    oracles = []
    for _ in range(n):
        wanted = {c for c in range(courses) if rng.random() < 0.5}
        by_slot: dict[int, list[int]] = {}
        for g in range(m):
            if course_of[g] in wanted:
                by_slot.setdefault(slot_of[course_of[g]], []).append(g)
        parts = [(by_slot[s], 1) for s in sorted(by_slot)]
        oracles.append(PartitionOracle(m, parts, global_cap=rng.randint(1, 4)))
    return oracles


def generate_instance(family: str, n: int, m: int, seed: int) -> Instance:
    """Random instance with goods ``g1..gm`` and agents ``a1..an``; deterministic in ``seed``."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    rng = random.Random(f"{family}:{n}:{m}:{seed}")
    goods = [f"g{k}" for k in range(1, m + 1)]
    agents = [f"a{k}" for k in range(1, n + 1)]
    if family == "course":
        oracles = _course_oracles(rng, m, n)
    elif family == "mixed":
        oracles = [_MAKERS[rng.choice(_BASIC)](rng, m, n) for _ in range(n)]
    else:
        oracles = [_MAKERS[family](rng, m, n) for _ in range(n)]
    return Instance(goods, agents, oracles)


@dataclass
class BenchRecord:
    n: int
    m: int
    family: str
    seed: int
    iterations: int
    oracle_calls: int
    graph_builds: int
    wall_time_ns: int
    usw: int

    @property
    def call_ratio(self) -> float:
        """Oracle calls over ``m^2 (m + n)``."""
        denom = self.m * self.m * (self.m + self.n)
        return self.oracle_calls / denom if denom else 0.0


@dataclass
class BenchConfig:
    sizes: list[tuple[int, int]]
    families: list[str]
    trials: int = 1
    seed: int = 0
    timing: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "BenchConfig":
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown bench config keys {sorted(unknown)}")
        return cls(
            sizes=[tuple(s) for s in d.get("sizes", [(10, 10)])],
            families=list(d.get("families", ["partition"])),
            trials=int(d.get("trials", 1)),
            seed=int(d.get("seed", 0)),
            timing=bool(d.get("timing", True)),
        )


def bench_one(family: str, n: int, m: int, seed: int, timing: bool = True) -> BenchRecord:
    instance = generate_instance(family, n, m, seed)
    start = time.perf_counter_ns()
    alloc, trace = yankee_swap(instance)
    elapsed = time.perf_counter_ns() - start
    if trace.total_iterations > n + m:
        raise AssertionError(f"{trace.total_iterations} iterations exceed n + m = {n + m}")
    record = BenchRecord(
        n=n, m=m, family=family, seed=seed,
        iterations=trace.total_iterations,
        oracle_calls=trace.oracle_calls,
        graph_builds=trace.graph_builds,
        wall_time_ns=elapsed if timing else 0,
        usw=sum(utility_vector(alloc, instance)),
    )
    if not is_clean(alloc, instance):
        raise AssertionError(f"unclean output for {family} n={n} m={m} seed={seed}")
    return record


def run_bench(config: BenchConfig) -> list[BenchRecord]:
    records = []
    for family in config.families:
        for n, m in config.sizes:
            for t in range(config.trials):
                records.append(bench_one(family, n, m, config.seed + t, config.timing))
    return records


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        row = asdict(r)
        writer.writerow([row[c] for c in CSV_COLUMNS])
    return buf.getvalue()


def scaling_report(records) -> list[dict]:
    """Mean ``oracle_calls / (m^2 (m + n))`` per (family, n, m), plus drift across sizes."""
    groups: dict[tuple[str, int, int], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.family, r.n, r.m), []).append(r)
    rows = []
    for (family, n, m), rs in sorted(groups.items()):
        rows.append({
            "family": family, "n": n, "m": m, "trials": len(rs),
            "mean_iterations": sum(r.iterations for r in rs) / len(rs),
            "max_iterations": max(r.iterations for r in rs),
            "mean_call_ratio": sum(r.call_ratio for r in rs) / len(rs),
        })
    by_family: dict[str, list[float]] = {}
    for row in rows:
        by_family.setdefault(row["family"], []).append(row["mean_call_ratio"])
    for row in rows:
        ratios = [x for x in by_family[row["family"]] if x > 0]
        row["ratio_drift"] = max(ratios) / min(ratios) if ratios else 1.0
    return rows


@dataclass
class RPEResult:
    samples: int
    mean_utility: list[float]
    std_error: list[float]
    envy_matrix: list[list[float]]
    envy_margins: list[list[float]]
    proportionality_margins: list[float]
    zeroed_agents: list[int]

    def to_dict(self, instance: Instance) -> dict:
        ids = instance.agents
        return {
            "samples": self.samples,
            "mean_utility": dict(zip(ids, self.mean_utility)),
            "std_error": dict(zip(ids, self.std_error)),
            "envy_matrix": {a: dict(zip(ids, row)) for a, row in zip(ids, self.envy_matrix)},
            "envy_margins": {a: dict(zip(ids, row)) for a, row in zip(ids, self.envy_margins)},
            "proportionality_margins": dict(zip(ids, self.proportionality_margins)),
            "zeroed_agents": [ids[i - 1] for i in self.zeroed_agents],
        }


def zero_invalid_oracles(instance: Instance, trials: int = 1000, seed: int = 0) -> tuple[Instance, list[int]]:
    """Replace non-MRF oracles by the all-zero valuation, as the RPE mechanism prescribes."""
    oracles: list[ValuationOracle] = []
    zeroed = []
    for i, oracle in enumerate(instance.oracles, start=1):
        mode = "exhaustive" if instance.m <= 10 else "sampled"
        if check_mrf(oracle, mode, trials=trials, seed=seed).valid:
            oracles.append(oracle)
        else:
            oracles.append(UniformOracle(instance.m, 0))
            zeroed.append(i)
    if not zeroed:
        return instance, zeroed
    return Instance(instance.goods, instance.agents, oracles), zeroed


def rpe_simulate(instance: Instance, samples: int, seed: int = 0) -> RPEResult:
    """Average Yankee Swap outcomes over uniformly random priority orders."""
    if samples < 1:
        raise ValueError("samples must be positive")
    instance, zeroed = zero_invalid_oracles(instance, seed=seed)
    n = instance.n
    rng = random.Random(seed)
    total = [0.0] * n
    total_sq = [0.0] * n
    cross = [[0.0] * n for _ in range(n)]
    for _ in range(samples):
        order = list(instance.agents)
        rng.shuffle(order)
        alloc, _ = yankee_swap(instance.with_priority(order))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                v = instance.oracle(i).value(alloc.bundles[j])
                cross[i - 1][j - 1] += v
                if i == j:
                    total[i - 1] += v
                    total_sq[i - 1] += v * v
    mean = [t / samples for t in total]
    if samples > 1:
        var = [(sq - samples * mu * mu) / (samples - 1) for sq, mu in zip(total_sq, mean)]
        se = [math.sqrt(max(v, 0.0) / samples) for v in var]
    else:
        se = [0.0] * n
    envy = [[c / samples for c in row] for row in cross]
    margins = [[mean[i] - envy[i][j] for j in range(n)] for i in range(n)]
    full = list(range(instance.m))
    prop = [mean[i - 1] - instance.oracle(i).value(full) / n for i in range(1, n + 1)]
    return RPEResult(samples, mean, se, envy, margins, prop, zeroed)


def compare_backends(family: str, n: int, m: int, seed: int = 0, repeats: int = 3) -> dict:
    """Best-of-``repeats`` solve time per available backend; outputs must agree."""
    timings = {}
    outputs = {}
    for name in _backend.available():
        with _backend.use_backend(name):
            best = None
            for _ in range(repeats):
                instance = generate_instance(family, n, m, seed)
                start = time.perf_counter_ns()
                alloc, _ = yankee_swap(instance)
                elapsed = time.perf_counter_ns() - start
                best = elapsed if best is None else min(best, elapsed)
            timings[name] = best
            outputs[name] = tuple(alloc.owner)
    if len(set(outputs.values())) != 1:
        raise AssertionError("backends disagree on the allocation")
    return {"family": family, "n": n, "m": m, "seed": seed, "wall_time_ns": timings}
