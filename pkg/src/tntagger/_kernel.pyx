# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled lattice kernels; same contract as ``_kernel_py``.

The token columns are copied once into malloc'd buffers, so a call costs
little more than the search itself.
"""
import numpy as np
from libc.math cimport INFINITY
from libc.stdlib cimport free, malloc


def prepare(trans):
    return np.ascontiguousarray(trans, dtype=np.float64).ravel()


cdef struct Lattice:
    Py_ssize_t T
    Py_ssize_t n
    Py_ssize_t *st
    double *em
    Py_ssize_t *off
    Py_ssize_t *slab      # start of each position's pair block
    Py_ssize_t total      # number of (prev, cur) pairs over all positions


cdef int _load(Lattice *lat, columns) except -1:
    cdef Py_ssize_t i, j, n_prev, w
    cdef tuple col, ids, sc
    cols = columns if type(columns) is list else list(columns)
    lat.T = len(cols)
    lat.n = 0
    for i in range(lat.T):
        lat.n += len(<tuple> (<tuple> cols[i])[1])
    lat.st = <Py_ssize_t *> malloc(lat.n * sizeof(Py_ssize_t))
    lat.em = <double *> malloc(lat.n * sizeof(double))
    lat.off = <Py_ssize_t *> malloc((lat.T + 1) * sizeof(Py_ssize_t))
    lat.slab = <Py_ssize_t *> malloc((lat.T + 1) * sizeof(Py_ssize_t))
    if not lat.st or not lat.em or not lat.off or not lat.slab:
        _release(lat)
        raise MemoryError()
    lat.off[0] = 0
    for i in range(lat.T):
        col = <tuple> cols[i]
        ids = <tuple> col[1]
        sc = <tuple> col[2]
        w = len(ids)
        for j in range(w):
            lat.st[lat.off[i] + j] = <Py_ssize_t> ids[j]
            lat.em[lat.off[i] + j] = <double> sc[j]
        lat.off[i + 1] = lat.off[i] + w
    lat.total = 0
    for i in range(lat.T):
        lat.slab[i] = lat.total
        n_prev = 1 if i == 0 else lat.off[i] - lat.off[i - 1]
        lat.total += n_prev * (lat.off[i + 1] - lat.off[i])
    lat.slab[lat.T] = lat.total
    return 0


cdef void _release(Lattice *lat):
    free(lat.st)
    free(lat.em)
    free(lat.off)
    free(lat.slab)


cdef inline Py_ssize_t _width(Lattice *lat, Py_ssize_t i):
    # number of candidates at position i; the two virtual positions before
    # the sentence hold a single <BOS>
    return 1 if i < 0 else lat.off[i + 1] - lat.off[i]


cdef inline Py_ssize_t _state(Lattice *lat, Py_ssize_t i, Py_ssize_t k, Py_ssize_t bos):
    return bos if i < 0 else lat.st[lat.off[i] + k]


def viterbi(const double[::1] trans, Py_ssize_t K, columns, Py_ssize_t bos, Py_ssize_t eos, double log_beam):
    cdef Lattice lat
    _load(&lat, columns)
    cdef Py_ssize_t T = lat.T
    cdef Py_ssize_t maxw = 1, i, a, b, c, n_pp, n_prev, n_cur, row, sa, sb, pos, prev_pos = 0
    cdef Py_ssize_t arg, n_alive, best_a = 0, best_b = 0
    cdef double v, best, top, floor, d
    cdef bint prune = log_beam != INFINITY
    cdef const double *tr = &trans[0]
    for i in range(T):
        if _width(&lat, i) > maxw:
            maxw = _width(&lat, i)
    cdef double *delta = <double *> malloc(lat.total * sizeof(double))
    cdef Py_ssize_t *bp = <Py_ssize_t *> malloc(lat.total * sizeof(Py_ssize_t))
    cdef Py_ssize_t *alive_c = <Py_ssize_t *> malloc(maxw * sizeof(Py_ssize_t))
    cdef Py_ssize_t *alive_base = <Py_ssize_t *> malloc(maxw * sizeof(Py_ssize_t))
    cdef double *alive_d = <double *> malloc(maxw * sizeof(double))
    try:
        if not delta or not bp or not alive_c or not alive_base or not alive_d:
            raise MemoryError()
        for i in range(T):
            n_cur = _width(&lat, i)
            n_prev = _width(&lat, i - 1)
            n_pp = _width(&lat, i - 2)
            pos = lat.slab[i]
            if i > 0:
                prev_pos = lat.slab[i - 1]
            for a in range(n_prev):
                sa = _state(&lat, i - 1, a, bos)
                # predecessors of (a, .) that survived; scanned in index order
                # (written unconditionally and counted with a comparison: the
                # survival pattern is data dependent, so branching mispredicts)
                n_alive = 0
                for c in range(n_pp):
                    d = 0.0 if i == 0 else delta[prev_pos + c * n_prev + a]
                    alive_c[n_alive] = c
                    alive_d[n_alive] = d
                    alive_base[n_alive] = (_state(&lat, i - 2, c, bos) * K + sa) * K
                    n_alive += d != -INFINITY
                row = pos + a * n_cur
                if n_alive == 0:
                    for b in range(n_cur):
                        delta[row + b] = -INFINITY
                        bp[row + b] = 0
                    continue
                for b in range(n_cur):
                    sb = lat.st[lat.off[i] + b]
                    best = -INFINITY
                    arg = 0
                    for c in range(n_alive):
                        v = alive_d[c] + tr[alive_base[c] + sb]
                        if v > best:
                            best = v
                            arg = alive_c[c]
                    delta[row + b] = best + lat.em[lat.off[i] + b]
                    bp[row + b] = arg
            if prune:
                top = -INFINITY
                for c in range(pos, pos + n_prev * n_cur):
                    top = delta[c] if delta[c] > top else top
                floor = top - log_beam
                if top != -INFINITY:
                    for c in range(pos, pos + n_prev * n_cur):
                        delta[c] = delta[c] if delta[c] >= floor else -INFINITY

        # closing <EOS> transition
        n_cur = _width(&lat, T - 1)
        n_prev = _width(&lat, T - 2)
        pos = lat.slab[T - 1]
        best = -INFINITY
        for a in range(n_prev):
            sa = _state(&lat, T - 2, a, bos)
            for b in range(n_cur):
                v = delta[pos + a * n_cur + b] + tr[(sa * K + lat.st[lat.off[T - 1] + b]) * K + eos]
                if v > best:
                    best = v
                    best_a = a
                    best_b = b

        choice = [0] * T
        a = best_a
        b = best_b
        choice[T - 1] = b
        if T >= 2:
            choice[T - 2] = a
        for i in range(T - 1, 1, -1):
            c = bp[lat.slab[i] + a * _width(&lat, i) + b]
            choice[i - 2] = c
            b = a
            a = c
        return choice, best
    finally:
        free(delta)
        free(bp)
        free(alive_c)
        free(alive_base)
        free(alive_d)
        _release(&lat)


def max_marginals(const double[::1] trans, Py_ssize_t K, columns, Py_ssize_t bos, Py_ssize_t eos):
    cdef Lattice lat
    _load(&lat, columns)
    cdef Py_ssize_t T = lat.T
    cdef Py_ssize_t i, a, b, c, n_pp, n_prev, n_nxt, n_cur, pos, sa, sb, sc
    cdef double v, best
    cdef const double *tr = &trans[0]
    cdef double *fwd = <double *> malloc(lat.total * sizeof(double))
    cdef double *bwd = <double *> malloc(lat.total * sizeof(double))
    try:
        if not fwd or not bwd:
            raise MemoryError()
        for i in range(T):
            n_cur = _width(&lat, i)
            n_prev = _width(&lat, i - 1)
            n_pp = _width(&lat, i - 2)
            pos = lat.slab[i]
            for a in range(n_prev):
                sa = _state(&lat, i - 1, a, bos)
                for b in range(n_cur):
                    sb = lat.st[lat.off[i] + b]
                    best = -INFINITY
                    for c in range(n_pp):
                        sc = _state(&lat, i - 2, c, bos)
                        v = (0.0 if i == 0 else fwd[lat.slab[i - 1] + c * n_prev + a]) \
                            + tr[(sc * K + sa) * K + sb]
                        if v > best:
                            best = v
                    fwd[pos + a * n_cur + b] = best + lat.em[lat.off[i] + b]

        for i in range(T - 1, -1, -1):
            n_cur = _width(&lat, i)
            n_prev = _width(&lat, i - 1)
            pos = lat.slab[i]
            for a in range(n_prev):
                sa = _state(&lat, i - 1, a, bos)
                for b in range(n_cur):
                    sb = lat.st[lat.off[i] + b]
                    if i == T - 1:
                        bwd[pos + a * n_cur + b] = tr[(sa * K + sb) * K + eos]
                        continue
                    n_nxt = _width(&lat, i + 1)
                    best = -INFINITY
                    for c in range(n_nxt):
                        sc = lat.st[lat.off[i + 1] + c]
                        v = tr[(sa * K + sb) * K + sc] + lat.em[lat.off[i + 1] + c] \
                            + bwd[lat.slab[i + 1] + b * n_nxt + c]
                        if v > best:
                            best = v
                    bwd[pos + a * n_cur + b] = best

        scores = [0.0] * lat.n
        overall = -INFINITY
        for i in range(T):
            n_cur = _width(&lat, i)
            n_prev = _width(&lat, i - 1)
            pos = lat.slab[i]
            for b in range(n_cur):
                best = -INFINITY
                for a in range(n_prev):
                    v = fwd[pos + a * n_cur + b] + bwd[pos + a * n_cur + b]
                    if v > best:
                        best = v
                scores[lat.off[i] + b] = best
                if i == T - 1 and best > overall:
                    overall = best
        return scores, overall
    finally:
        free(fwd)
        free(bwd)
        _release(&lat)
