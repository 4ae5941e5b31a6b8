"""JSON instance files and allocation documents.

Instance file::

    {
      "goods": ["g1", "g2", ...],
      "agents": [{"id": "a1", "valuation": {"type": "uniform", "cap": 2}}, ...],
      "priority": ["a2", "a1"]          # optional, highest priority first
    }

Valuation objects by ``type``:

* ``binary_additive``: ``desired`` (good ids)
* ``uniform``: ``cap``
* ``partition``: ``parts`` (list of ``{"goods": [...], "cap": k}``), optional ``global_cap``
* ``transversal``: ``adjacency`` (good id -> list of slot ids)
* ``graphic``: ``endpoints`` (good id -> ``[u, v]``)
* ``explicit``: ``table`` (``2^m`` values indexed by bitmask; bit k is the k-th good)
"""
from __future__ import annotations

import json
from pathlib import Path

from .core import Allocation, Instance, InstanceError
from .valuations import (
    AdditiveOracle,
    ExplicitOracle,
    GraphicOracle,
    PartitionOracle,
    TransversalOracle,
    UniformOracle,
    ValuationOracle,
)

_VALUATION_FIELDS = {
    "binary_additive": ({"desired"}, set()),
    "uniform": ({"cap"}, set()),
    "partition": ({"parts"}, {"global_cap"}),
    "transversal": ({"adjacency"}, set()),
    "graphic": ({"endpoints"}, set()),
    "explicit": ({"table"}, set()),
}


def _require_keys(obj, required, optional, where):
    if not isinstance(obj, dict):
        raise InstanceError(f"{where}: expected an object")
    missing = required - set(obj)
    if missing:
        raise InstanceError(f"{where}: missing {sorted(missing)}")
    extra = set(obj) - required - optional
    if extra:
        raise InstanceError(f"{where}: unknown fields {sorted(extra)}")


def _int(value, where) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InstanceError(f"{where}: expected a non-negative integer, got {value!r}")
    return value


def parse_valuation(spec: dict, good_index: dict[str, int], where: str = "valuation") -> ValuationOracle:
    if not isinstance(spec, dict) or "type" not in spec:
        raise InstanceError(f"{where}: needs a 'type'")
    kind = spec["type"]
    if kind not in _VALUATION_FIELDS:
        raise InstanceError(f"{where}: unknown valuation type {kind!r}")
    required, optional = _VALUATION_FIELDS[kind]
    _require_keys(spec, required | {"type"}, optional, where)
    m = len(good_index)

    def goods(ids, ctx):
        if not isinstance(ids, list):
            raise InstanceError(f"{ctx}: expected a list of good ids")
        try:
            return [good_index[g] for g in ids]
        except (KeyError, TypeError):
            raise InstanceError(f"{ctx}: unknown good in {ids!r}") from None

    def good(gid, ctx):
        if gid not in good_index:
            raise InstanceError(f"{ctx}: unknown good {gid!r}")
        return good_index[gid]

    if kind == "binary_additive":
        return AdditiveOracle(m, goods(spec["desired"], f"{where}.desired"))
    if kind == "uniform":
        return UniformOracle(m, _int(spec["cap"], f"{where}.cap"))
    if kind == "partition":
        parts = []
        if not isinstance(spec["parts"], list):
            raise InstanceError(f"{where}.parts: expected a list")
        for k, part in enumerate(spec["parts"]):
            ctx = f"{where}.parts[{k}]"
            _require_keys(part, {"goods", "cap"}, set(), ctx)
            parts.append((goods(part["goods"], ctx), _int(part["cap"], ctx + ".cap")))
        global_cap = spec.get("global_cap")
        if global_cap is not None:
            global_cap = _int(global_cap, f"{where}.global_cap")
        return PartitionOracle(m, parts, global_cap)
    if kind == "transversal":
        adjacency = spec["adjacency"]
        if not isinstance(adjacency, dict):
            raise InstanceError(f"{where}.adjacency: expected an object")
        return TransversalOracle(m, {good(g, f"{where}.adjacency"): list(s) for g, s in adjacency.items()})
    if kind == "graphic":
        endpoints = spec["endpoints"]
        if not isinstance(endpoints, dict):
            raise InstanceError(f"{where}.endpoints: expected an object")
        parsed = {}
        for g, uv in endpoints.items():
            if not isinstance(uv, list) or len(uv) != 2:
                raise InstanceError(f"{where}.endpoints[{g!r}]: expected [u, v]")
            parsed[good(g, f"{where}.endpoints")] = (uv[0], uv[1])
        return GraphicOracle(m, parsed)
    table = spec["table"]
    if not isinstance(table, list):
        raise InstanceError(f"{where}.table: expected a list indexed by bitmask")
    return ExplicitOracle(m, [_int(v, f"{where}.table") for v in table])


def instance_from_dict(doc: dict) -> Instance:
    _require_keys(doc, {"goods", "agents"}, {"priority"}, "instance")
    goods = doc["goods"]
    if not isinstance(goods, list) or not all(isinstance(g, str) for g in goods):
        raise InstanceError("instance.goods: expected a list of strings")
    if len(set(goods)) != len(goods):
        raise InstanceError("instance.goods: ids must be unique")
    good_index = {g: k for k, g in enumerate(goods)}
    agents, oracles = [], []
    if not isinstance(doc["agents"], list):
        raise InstanceError("instance.agents: expected a list")
    for k, entry in enumerate(doc["agents"]):
        _require_keys(entry, {"id", "valuation"}, set(), f"agents[{k}]")
        if not isinstance(entry["id"], str):
            raise InstanceError(f"agents[{k}].id: expected a string")
        agents.append(entry["id"])
        oracles.append(parse_valuation(entry["valuation"], good_index, f"agents[{k}].valuation"))
    priority = doc.get("priority")
    if priority is not None and not isinstance(priority, list):
        raise InstanceError("instance.priority: expected a list of agent ids")
    return Instance(goods, agents, oracles, priority)


def load_instance(path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InstanceError(f"{path}: {exc.strerror}") from None
    return instance_from_dict(doc)


def valuation_to_dict(oracle: ValuationOracle, goods: tuple[str, ...]) -> dict:
    d = oracle.to_dict()
    kind = d["type"]
    if kind == "binary_additive":
        d["desired"] = [goods[g] for g in d["desired"]]
    elif kind == "partition":
        d["parts"] = [{"goods": [goods[g] for g in p["goods"]], "cap": p["cap"]} for p in d["parts"]]
    elif kind == "transversal":
        d["adjacency"] = {goods[g]: sorted(map(str, s)) for g, s in sorted(oracle.adjacency.items())}
    elif kind == "graphic":
        d["endpoints"] = {goods[g]: [str(u), str(v)] for g, (u, v) in sorted(oracle.endpoints.items())}
    return d


def instance_to_dict(instance: Instance, with_priority: bool | None = None) -> dict:
    doc = {
        "goods": list(instance.goods),
        "agents": [
            {"id": a, "valuation": valuation_to_dict(o, instance.goods)}
            for a, o in zip(instance.agents, instance.oracles)
        ],
    }
    if with_priority if with_priority is not None else instance.priority_given:
        doc["priority"] = instance.priority_order()
    return doc


def allocation_to_dict(alloc: Allocation, instance: Instance) -> dict:
    return {
        "allocation": {
            a: [instance.goods[g] for g in sorted(alloc.bundles[i])]
            for i, a in enumerate(instance.agents, start=1)
        },
        "unallocated": [instance.goods[g] for g in sorted(alloc.bundles[0])],
    }


def allocation_from_dict(doc: dict, instance: Instance) -> Allocation:
    """Read the ``allocation`` map of a solve output (extra keys are ignored)."""
    if not isinstance(doc, dict) or not isinstance(doc.get("allocation"), dict):
        raise InstanceError("allocation document needs an 'allocation' object")
    bundles = {}
    for agent_id, goods in doc["allocation"].items():
        if not isinstance(goods, list):
            raise InstanceError(f"allocation[{agent_id!r}]: expected a list of good ids")
        bundles[instance.agent_index(agent_id)] = [instance.good_index(g) for g in goods]
    return Allocation.from_bundles(instance.n, instance.m, bundles)


def load_allocation(path, instance: Instance) -> Allocation:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InstanceError(f"{path}: {exc.strerror}") from None
    return allocation_from_dict(doc, instance)
