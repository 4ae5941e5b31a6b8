# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free


cnp.import_array()

NAME = "cython"

ctypedef long long i64

cdef enum:
    K_ADDITIVE = 0
    K_UNIFORM = 1
    K_PARTITION = 2
    K_TRANSVERSAL = 3
    K_GRAPHIC = 4
    K_EXPLICIT = 5


cdef class _Enc:
    cdef int kind
    cdef i64 cap
    cdef i64 size
    cdef i64[::1] a
    cdef i64[::1] b
    cdef i64[::1] c
    # scratch, one slot per part / slot / vertex
    cdef i64* cnt
    cdef i64* stamp
    cdef i64 epoch

    def __cinit__(self, enc):
        self.kind = enc.kind
        self.cap = enc.cap
        self.size = enc.size
        self.a = enc.a
        self.b = enc.b
        self.c = enc.c
        cdef i64 width = self.size if self.size > 0 else 1
        self.cnt = <i64*> malloc(width * sizeof(i64))
        self.stamp = <i64*> malloc(width * sizeof(i64))
        if self.cnt == NULL or self.stamp == NULL:
            raise MemoryError()
        cdef i64 s
        for s in range(width):
            self.cnt[s] = -1
            self.stamp[s] = 0
        self.epoch = 0

    def __dealloc__(self):
        free(self.cnt)
        free(self.stamp)


cdef bint _augment(_Enc e, i64 g):
    # cnt[s] = good matched to slot s, or -1
    cdef i64 t, s
    for t in range(e.a[g], e.a[g + 1]):
        s = e.b[t]
        if e.stamp[s] == e.epoch:
            continue
        e.stamp[s] = e.epoch
        if e.cnt[s] < 0 or _augment(e, e.cnt[s]):
            e.cnt[s] = g
            return True
    return False


cdef i64 _find(i64* parent, i64 x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef i64 _rank(_Enc e, i64* goods, i64 k):
    cdef i64 r = 0, t, g, p, s, u, v
    cdef i64 mask
    if e.kind == K_ADDITIVE:
        for t in range(k):
            if e.a[goods[t]] != 0:
                r += 1
        return r
    if e.kind == K_UNIFORM:
        return k if k < e.cap else e.cap
    if e.kind == K_PARTITION:
        for t in range(k):
            p = e.a[goods[t]]
            if p >= 0:
                e.cnt[p] = 0
        for t in range(k):
            p = e.a[goods[t]]
            if p >= 0 and e.cnt[p] < e.c[p]:
                e.cnt[p] += 1
                r += 1
        if e.cap >= 0 and r > e.cap:
            r = e.cap
        return r
    if e.kind == K_TRANSVERSAL:
        for t in range(k):
            g = goods[t]
            for s in range(e.a[g], e.a[g + 1]):
                e.cnt[e.b[s]] = -1
        for t in range(k):
            e.epoch += 1
            if _augment(e, goods[t]):
                r += 1
        return r
    if e.kind == K_GRAPHIC:
        for t in range(k):
            g = goods[t]
            if e.a[g] >= 0:
                e.cnt[e.a[g]] = e.a[g]
                e.cnt[e.b[g]] = e.b[g]
        for t in range(k):
            g = goods[t]
            if e.a[g] < 0:
                continue
            u = _find(e.cnt, e.a[g])
            v = _find(e.cnt, e.b[g])
            if u != v:
                e.cnt[u] = v
                r += 1
        return r
    if e.kind == K_EXPLICIT:
        mask = 0
        for t in range(k):
            mask |= (<i64> 1) << goods[t]
        return e.c[mask]
    return -1


def rank(enc, goods):
    """Rank of ``goods`` (a sequence of distinct good indices) under ``enc``."""
    cdef _Enc e = _Enc(enc)
    cdef i64[::1] buf = np.ascontiguousarray(np.asarray(list(goods), dtype=np.int64).reshape(-1))
    cdef i64 k = buf.shape[0]
    cdef i64 dummy = 0
    cdef i64 r
    if k == 0:
        r = _rank(e, &dummy, 0)
    else:
        r = _rank(e, &buf[0], k)
    if r < 0:
        raise ValueError(f"unknown oracle kind {enc.kind}")
    return r


def exchange_adjacency(owner, int n, encodings):
    """Adjacency matrix of the exchange graph plus per-agent evaluation counts."""
    cdef i64[::1] own = np.ascontiguousarray(np.asarray(owner, dtype=np.int64))
    cdef i64 m = own.shape[0]
    adj_arr = np.zeros((m, m), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] adj = adj_arr
    calls = [0] * (n + 1)
    if m == 0:
        return adj_arr, calls

    cdef i64* buf = <i64*> malloc((m + 1) * sizeof(i64))
    cdef i64* bundle = <i64*> malloc((m + 1) * sizeof(i64))
    if buf == NULL or bundle == NULL:
        free(buf)
        free(bundle)
        raise MemoryError()

    cdef i64 g, h, j, k, pos, t, base, count
    cdef _Enc e
    try:
        for g in range(m):
            if own[g] == 0:
                for h in range(m):
                    if own[h] != 0:
                        adj[g, h] = 1
        for j in range(1, n + 1):
            k = 0
            for g in range(m):
                if own[g] == j:
                    bundle[k] = g
                    k += 1
            if k == 0:
                continue
            e = _Enc(encodings[j - 1])
            base = _rank(e, bundle, k)
            count = 1
            for pos in range(k):
                g = bundle[pos]
                t = 0
                for h in range(k):
                    if h != pos:
                        buf[t] = bundle[h]
                        t += 1
                for h in range(m):
                    if own[h] == j:
                        continue
                    buf[k - 1] = h
                    if _rank(e, buf, k) == base:
                        adj[g, h] = 1
                    count += 1
            calls[j] = count
    finally:
        free(buf)
        free(bundle)
    return adj_arr, calls


def gain_mask(enc, bundle, i64 m):
    cdef _Enc e = _Enc(enc)
    cdef i64[::1] own = np.asarray(list(bundle), dtype=np.int64).reshape(-1)
    cdef i64 k = own.shape[0]
    mask_arr = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint8_t[::1] mask = mask_arr
    cdef i64* buf = <i64*> malloc((k + 1) * sizeof(i64))
    cdef cnp.uint8_t* inside = <cnp.uint8_t*> malloc((m + 1) * sizeof(cnp.uint8_t))
    cdef i64 g, t, base, calls = 1
    if buf == NULL or inside == NULL:
        free(buf)
        free(inside)
        raise MemoryError()
    try:
        for g in range(m):
            inside[g] = 0
        for t in range(k):
            buf[t] = own[t]
            inside[own[t]] = 1
        base = _rank(e, buf, k)
        for g in range(m):
            if inside[g]:
                continue
            buf[k] = g
            if _rank(e, buf, k + 1) - base == 1:
                mask[g] = 1
            calls += 1
    finally:
        free(buf)
        free(inside)
    return mask_arr, calls


def bfs_path(adj_in, sources_in, targets_in):
    """Shortest path from any source to any target; ascending-index tie-breaking."""
    cdef cnp.uint8_t[:, ::1] adj = np.ascontiguousarray(adj_in, dtype=np.uint8)
    cdef cnp.uint8_t[::1] src = np.ascontiguousarray(sources_in, dtype=np.uint8)
    cdef cnp.uint8_t[::1] tgt = np.ascontiguousarray(targets_in, dtype=np.uint8)
    cdef i64 m = adj.shape[0]
    if m == 0:
        return None
    parent_arr = np.full(m, -2, dtype=np.int64)
    queue_arr = np.empty(m, dtype=np.int64)
    cdef i64[::1] parent = parent_arr
    cdef i64[::1] queue = queue_arr
    cdef i64 head = 0, tail = 0, u, w, found = -1
    for u in range(m):
        if src[u]:
            parent[u] = -1
            queue[tail] = u
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        if tgt[u]:
            found = u
            break
        for w in range(m):
            if adj[u, w] and parent[w] == -2:
                parent[w] = u
                queue[tail] = w
                tail += 1
    if found < 0:
        return None
    path = []
    u = found
    while u != -1:
        path.append(u)
        u = parent[u]
    path.reverse()
    return path
