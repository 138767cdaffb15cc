# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-location kernel: per-point neighbor walk.

Mirrors lgfem._walk_py operation for operation: the same hop rule (cross
the edge with the most negative barycentric coordinate, first index on
ties), the same boundary handling, the same exhaustive-scan fallback past
max_hops, and the same lowest-id resolution for points on edges and
vertices. The build keeps floating-point contraction off, so both backends
return bit-identical coordinates.
"""

from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.float64_t f64


cdef inline void _bary_one(const f64[:, ::1] v0, const f64[:, :, ::1] binv,
                           Py_ssize_t e, f64 x, f64 y, f64* lam) noexcept nogil:
    cdef f64 dx = x - v0[e, 0]
    cdef f64 dy = y - v0[e, 1]
    cdef f64 l1 = binv[e, 0, 0] * dx + binv[e, 0, 1] * dy
    cdef f64 l2 = binv[e, 1, 0] * dx + binv[e, 1, 1] * dy
    lam[0] = 1.0 - l1 - l2
    lam[1] = l1
    lam[2] = l2


cdef Py_ssize_t _scan_one(const f64[:, ::1] v0, const f64[:, :, ::1] binv,
                          f64 x, f64 y, f64 tol, f64* lam) except -1:
    cdef Py_ssize_t k
    for k in range(v0.shape[0]):
        _bary_one(v0, binv, k, x, y, lam)
        if lam[0] >= -tol and lam[1] >= -tol and lam[2] >= -tol:
            return k
    raise RuntimeError(f"point ({x}, {y}) not contained in any element")


cdef inline void _sort3_stable(const f64* lam, Py_ssize_t* order) noexcept nogil:
    # ascending by value, original index order on ties
    cdef Py_ssize_t tmp
    order[0] = 0
    order[1] = 1
    order[2] = 2
    if lam[order[1]] < lam[order[0]]:
        tmp = order[0]; order[0] = order[1]; order[1] = tmp
    if lam[order[2]] < lam[order[1]]:
        tmp = order[1]; order[1] = order[2]; order[2] = tmp
        if lam[order[1]] < lam[order[0]]:
            tmp = order[0]; order[0] = order[1]; order[1] = tmp


cdef Py_ssize_t _locate_one(const i32[:, ::1] neighbors,
                            const f64[:, ::1] v0, const f64[:, :, ::1] binv,
                            Py_ssize_t start, f64 x, f64 y, f64 tol,
                            Py_ssize_t max_hops, f64* lam) except -1:
    cdef Py_ssize_t e = start
    cdef Py_ssize_t hops = 0
    cdef Py_ssize_t imin, i, nxt, chosen
    cdef Py_ssize_t order[3]
    while True:
        _bary_one(v0, binv, e, x, y, lam)
        imin = 0
        if lam[1] < lam[imin]:
            imin = 1
        if lam[2] < lam[imin]:
            imin = 2
        if lam[imin] >= -tol:
            return e
        if hops >= max_hops:
            return _scan_one(v0, binv, x, y, tol, lam)
        nxt = neighbors[e, imin]
        if nxt < 0:
            # most negative coordinate faces a boundary edge; cross the most
            # negative crossable one instead, else scan (clamped corner case)
            _sort3_stable(lam, order)
            chosen = -1
            for i in range(3):
                if lam[order[i]] < -tol and neighbors[e, order[i]] >= 0:
                    chosen = neighbors[e, order[i]]
                    break
            if chosen < 0:
                return _scan_one(v0, binv, x, y, tol, lam)
            nxt = chosen
        e = nxt
        hops += 1


cdef Py_ssize_t _resolve_tie(const i32[:, ::1] tri, const i32[:, ::1] neighbors,
                             const i32[::1] star_off, const i32[::1] star_el,
                             const f64[:, ::1] v0, const f64[:, :, ::1] binv,
                             f64 x, f64 y, Py_ssize_t e, f64 tol,
                             f64* lam) except -1:
    cdef Py_ssize_t n_low = 0, i, j, iv, v, count, c, tmp
    cdef Py_ssize_t ilow = -1
    cdef Py_ssize_t* cand
    cdef f64 lamc[3]
    for i in range(3):
        if lam[i] <= tol:
            n_low += 1
            ilow = i
    if n_low == 0:
        return e
    if n_low == 1:
        count = 1 if neighbors[e, ilow] < 0 else 2
        cand = <Py_ssize_t*> malloc(count * sizeof(Py_ssize_t))
        if cand == NULL:
            raise MemoryError()
        cand[0] = e
        if count == 2:
            cand[1] = neighbors[e, ilow]
    else:
        # near a vertex: the local vertex with the largest coordinate
        iv = 0
        if lam[1] > lam[iv]:
            iv = 1
        if lam[2] > lam[iv]:
            iv = 2
        v = tri[e, iv]
        count = star_off[v + 1] - star_off[v]
        cand = <Py_ssize_t*> malloc(count * sizeof(Py_ssize_t))
        if cand == NULL:
            raise MemoryError()
        for i in range(count):
            cand[i] = star_el[star_off[v] + i]
    # insertion sort: candidates tried in ascending element id
    for i in range(1, count):
        tmp = cand[i]
        j = i
        while j > 0 and cand[j - 1] > tmp:
            cand[j] = cand[j - 1]
            j -= 1
        cand[j] = tmp
    for i in range(count):
        c = cand[i]
        _bary_one(v0, binv, c, x, y, lamc)
        if lamc[0] >= -tol and lamc[1] >= -tol and lamc[2] >= -tol:
            free(cand)
            lam[0] = lamc[0]
            lam[1] = lamc[1]
            lam[2] = lamc[2]
            return c
    free(cand)
    return e  # unreachable for consistent tolerances


def walk(tri, neighbors, v0, binv, star_off, star_el, points, hints,
         f64 tol, Py_ssize_t max_hops):
    """Locate each point; returns (element ids int32, barycentric (n, 3))."""
    cdef const i32[:, ::1] tri_mv = np.ascontiguousarray(tri, dtype=np.int32)
    cdef const i32[:, ::1] nb_mv = np.ascontiguousarray(neighbors, dtype=np.int32)
    cdef const f64[:, ::1] v0_mv = np.ascontiguousarray(v0, dtype=np.float64)
    cdef const f64[:, :, ::1] binv_mv = np.ascontiguousarray(binv, dtype=np.float64)
    cdef const i32[::1] soff = np.ascontiguousarray(star_off, dtype=np.int32)
    cdef const i32[::1] sel = np.ascontiguousarray(star_el, dtype=np.int32)
    cdef const f64[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)

    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t nt = tri_mv.shape[0]
    elem_arr = np.array(hints, dtype=np.int32)
    bary_arr = np.empty((n, 3), dtype=np.float64)
    cdef i32[::1] elem = elem_arr
    cdef f64[:, ::1] bary = bary_arr

    cdef Py_ssize_t p, e
    cdef f64 lam[3]
    cdef f64 lmin
    for p in range(n):
        e = elem[p]
        if e < 0 or e >= nt:
            e = 0
        e = _locate_one(nb_mv, v0_mv, binv_mv, e, pts[p, 0], pts[p, 1],
                        tol, max_hops, lam)
        lmin = lam[0]
        if lam[1] < lmin:
            lmin = lam[1]
        if lam[2] < lmin:
            lmin = lam[2]
        if lmin <= tol:
            # edge/vertex ties: match the exhaustive scan's lowest-id pick
            e = _resolve_tie(tri_mv, nb_mv, soff, sel, v0_mv, binv_mv,
                             pts[p, 0], pts[p, 1], e, tol, lam)
        elem[p] = <i32> e
        bary[p, 0] = lam[0]
        bary[p, 1] = lam[1]
        bary[p, 2] = lam[2]
    return elem_arr, bary_arr
