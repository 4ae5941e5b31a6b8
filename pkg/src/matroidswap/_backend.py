"""Kernel backend selection.

The compiled extension is used when it imports; ``MATROIDSWAP_PURE_PYTHON=1``
forces the pure-Python kernels. ``use_backend`` switches at runtime (tests and
the backend benchmark rely on it).
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from types import ModuleType

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _pykernels
if _compiled is not None and os.environ.get("MATROIDSWAP_PURE_PYTHON") != "1":
    _active = _compiled


def available() -> list[str]:
    names = [_pykernels.NAME]
    if _compiled is not None:
        names.append(_compiled.NAME)
    return names


def current() -> ModuleType:
    return _active


def name() -> str:
    return _active.NAME


def _lookup(which: str) -> ModuleType:
    if which == _pykernels.NAME:
        return _pykernels
    if _compiled is not None and which == _compiled.NAME:
        return _compiled
    raise ValueError(f"backend {which!r} not available (have {available()})")


@contextmanager
def use_backend(which: str):
    global _active
    previous = _active
    _active = _lookup(which)
    try:
        yield _active
    finally:
        _active = previous


def rank(enc, goods):
    return _active.rank(enc, goods)


def exchange_adjacency(owner, n, encodings):
    return _active.exchange_adjacency(owner, n, encodings)


def gain_mask(enc, bundle, m):
    return _active.gain_mask(enc, bundle, m)


def bfs_path(adj, sources, targets):
    return _active.bfs_path(adj, sources, targets)
