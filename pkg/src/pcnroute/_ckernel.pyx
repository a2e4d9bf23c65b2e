# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel; same contract as ``_pykernel.search`` (linear fees only)."""
import numpy as np

from libc.stdlib cimport malloc, realloc, free
from libc.math cimport INFINITY
from libc.stdint cimport int64_t


cdef struct Heap:
    double *key
    int64_t *vert
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint _less(double k1, int64_t v1, double k2, int64_t v2) nogil:
    return k1 < k2 or (k1 == k2 and v1 < v2)


cdef int _push(Heap *h, double k, int64_t v) nogil:
    cdef Py_ssize_t i, parent
    cdef double *nk
    cdef int64_t *nv
    if h.size == h.cap:
        h.cap = h.cap * 2 + 16
        nk = <double *> realloc(h.key, h.cap * sizeof(double))
        if nk == NULL:
            return -1
        h.key = nk
        nv = <int64_t *> realloc(h.vert, h.cap * sizeof(int64_t))
        if nv == NULL:
            return -1
        h.vert = nv
    i = h.size
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if not _less(k, v, h.key[parent], h.vert[parent]):
            break
        h.key[i] = h.key[parent]
        h.vert[i] = h.vert[parent]
        i = parent
    h.key[i] = k
    h.vert[i] = v
    return 0


cdef void _pop(Heap *h, double *k, int64_t *v) nogil:
    cdef Py_ssize_t i = 0, child, n
    cdef double lk
    cdef int64_t lv
    k[0] = h.key[0]
    v[0] = h.vert[0]
    h.size -= 1
    n = h.size
    if n == 0:
        return
    lk = h.key[n]
    lv = h.vert[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and _less(h.key[child + 1], h.vert[child + 1], h.key[child], h.vert[child]):
            child += 1
        if not _less(h.key[child], h.vert[child], lk, lv):
            break
        h.key[i] = h.key[child]
        h.vert[i] = h.vert[child]
        i = child
    h.key[i] = lk
    h.vert[i] = lv


def search(const int64_t[::1] in_indptr, const int64_t[::1] in_arcs,
           const int64_t[::1] out_indptr, const int64_t[::1] out_arcs,
           const int64_t[::1] source, const int64_t[::1] target,
           const double[::1] base_fee, const double[::1] fee_rate, const double[::1] balance,
           Py_ssize_t n, int64_t s, int64_t t, double amount, int mode=0,
           bint early_exit=False, fee_fn=None, bint trace=False):
    if fee_fn is not None:
        raise TypeError("compiled kernel supports linear fees only")
    cost_arr = np.full(n, np.inf, dtype=np.float64)
    pred_arr = np.full(n, -1, dtype=np.int64)
    mark_arr = np.zeros(n, dtype=np.uint8)
    cdef double[::1] cost = cost_arr
    cdef int64_t[::1] pred = pred_arr
    cdef unsigned char[::1] mark = mark_arr
    cdef Heap h
    cdef Py_ssize_t k
    cdef int64_t v, u, e, exit_arc = -1
    cdef long long relaxations = 0, pops = 0
    cdef double cv, fwd, f, cu
    cdef list popped = [] if trace else None
    cdef int err = 0

    if early_exit:
        for k in range(out_indptr[s], out_indptr[s + 1]):
            mark[target[out_arcs[k]]] = 1

    h.key = NULL
    h.vert = NULL
    h.size = 0
    h.cap = 0
    try:
        cost[t] = 0.0
        if _push(&h, 0.0, t) != 0:
            raise MemoryError()
        while h.size > 0:
            _pop(&h, &cv, &v)
            if cv > cost[v]:
                continue
            pops += 1
            if trace:
                popped.append((cv, v))
            if v == s:
                break
            if mark[v]:
                for k in range(out_indptr[s], out_indptr[s + 1]):
                    e = out_arcs[k]
                    if target[e] == v and cv + amount <= balance[e]:
                        exit_arc = e
                        break
                if exit_arc >= 0:
                    cost[s] = cv
                    pred[s] = exit_arc
                    break
            fwd = cv + amount
            with nogil:
                for k in range(in_indptr[v], in_indptr[v + 1]):
                    e = in_arcs[k]
                    relaxations += 1
                    u = source[e]
                    if fwd > balance[e]:
                        if mode == 0:
                            continue
                        f = INFINITY
                    else:
                        f = base_fee[e] + fee_rate[e] * fwd
                    cu = cv + f
                    if cu < cost[u]:
                        cost[u] = cu
                        pred[u] = e
                        if _push(&h, cu, u) != 0:
                            err = 1
                            break
            if err:
                raise MemoryError()
    finally:
        free(h.key)
        free(h.vert)
    return cost_arr, pred_arr, relaxations, pops, exit_arc, popped
