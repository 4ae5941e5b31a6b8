"""Flat integer encoding of valuation oracles shared by both kernel backends."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

ADDITIVE = 0
UNIFORM = 1
PARTITION = 2
TRANSVERSAL = 3
GRAPHIC = 4
EXPLICIT = 5


def _arr(values) -> np.ndarray:
    out = np.asarray(list(values), dtype=np.int64)
    if out.size == 0:
        # kernels take &a[0]; keep one dummy slot
        out = np.zeros(1, dtype=np.int64)
    return np.ascontiguousarray(out)


@dataclass(frozen=True, eq=False)
class Encoding:
    """Family tag plus three integer arrays; meaning of each array depends on ``kind``.

    ============  =====================  ====================  ==================
    kind          a                      b                     c
    ============  =====================  ====================  ==================
    ADDITIVE      1 if good desired      unused                unused
    UNIFORM       unused                 unused                unused
    PARTITION     part id or -1          unused                cap per part
    TRANSVERSAL   CSR indptr (m + 1)     slot ids              unused
    GRAPHIC       first endpoint or -1   second endpoint       unused
    EXPLICIT      unused                 unused                table by bitmask
    ============  =====================  ====================  ==================

    ``cap`` is the uniform cap or partition global cap (-1 when absent) and
    ``size`` the number of parts, slots or vertices.
    """

    kind: int
    m: int
    cap: int = -1
    size: int = 0
    a: np.ndarray = None
    b: np.ndarray = None
    c: np.ndarray = None

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            object.__setattr__(self, name, _arr(() if value is None else value))

    @cached_property
    def lists(self) -> tuple[list[int], list[int], list[int]]:
        return self.a.tolist(), self.b.tolist(), self.c.tolist()
