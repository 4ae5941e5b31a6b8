"""The compiled kernels and the pure-Python fallback must agree exactly."""
import random

import numpy as np
import pytest

from helpers import TEST_FAMILIES, make_instance, random_clean_allocation
from matroidswap import _backend, _pykernels
from matroidswap.solver import yankee_swap

pytestmark = pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled kernels not built")


def compiled():
    from matroidswap import _kernels
    return _kernels


def test_default_backend_is_compiled():
    import os
    if os.environ.get("MATROIDSWAP_PURE_PYTHON") == "1":
        assert _backend.name() == "python"
    else:
        assert _backend.name() == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        with _backend.use_backend("fortran"):
            pass


@pytest.mark.parametrize("family", TEST_FAMILIES)
def test_rank_agrees(family):
    rng = random.Random(family)
    for seed in range(10):
        m = rng.randint(0, 12)
        inst = make_instance(family, 2, m, seed) if family != "explicit" or m <= 10 else make_instance("mixed", 2, m, seed)
        for o in inst.oracles:
            for _ in range(30):
                goods = sorted(rng.sample(range(m), rng.randint(0, m)))
                assert compiled().rank(o.encoding, goods) == _pykernels.rank(o.encoding, goods)


@pytest.mark.parametrize("family", TEST_FAMILIES)
def test_graph_gain_and_bfs_agree(family):
    rng = random.Random(family + "g")
    for seed in range(10):
        inst = make_instance(family, 3, 6, seed)
        alloc = random_clean_allocation(inst, rng)
        encs = [o.encoding for o in inst.oracles]
        adj_c, calls_c = compiled().exchange_adjacency(alloc.owner, inst.n, encs)
        adj_p, calls_p = _pykernels.exchange_adjacency(alloc.owner, inst.n, encs)
        assert np.array_equal(np.asarray(adj_c), np.asarray(adj_p))
        assert list(calls_c) == list(calls_p)
        for i in range(1, inst.n + 1):
            mc, cc = compiled().gain_mask(encs[i - 1], sorted(alloc.bundles[i]), inst.m)
            mp, cp = _pykernels.gain_mask(encs[i - 1], sorted(alloc.bundles[i]), inst.m)
            assert np.array_equal(np.asarray(mc), np.asarray(mp)) and cc == cp
            targets = np.zeros(inst.m, dtype=np.uint8)
            targets[list(alloc.bundles[0])] = 1
            assert compiled().bfs_path(adj_p, mp, targets) == _pykernels.bfs_path(adj_p, mp, targets)


@pytest.mark.parametrize("family", ("partition", "transversal", "graphic", "course", "mixed"))
def test_solves_agree_at_moderate_size(family):
    outputs = {}
    calls = {}
    for name in _backend.available():
        with _backend.use_backend(name):
            inst = make_instance(family, 12, 24, 3)
            alloc, trace = yankee_swap(inst)
            outputs[name] = alloc.owner
            calls[name] = trace.oracle_calls
    assert outputs["python"] == outputs["cython"]
    assert calls["python"] == calls["cython"]
