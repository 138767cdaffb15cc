"""Pure-numpy point-location kernel: vectorized neighbor walk.

Same hop and tie-break rules as the compiled kernel in _walk.pyx: from the
current element, move across the edge with the most negative barycentric
coordinate until all coordinates exceed -tol; if the containing element
touches the point with a coordinate <= +tol (edge/vertex case), re-resolve
to the lowest-id containing element so results match an exhaustive scan.
"""

from __future__ import annotations

import numpy as np


def _bary_one(v0, binv, e, x):
    dx = x[0] - v0[e, 0]
    dy = x[1] - v0[e, 1]
    l1 = binv[e, 0, 0] * dx + binv[e, 0, 1] * dy
    l2 = binv[e, 1, 0] * dx + binv[e, 1, 1] * dy
    return np.array([1.0 - l1 - l2, l1, l2])


def _scan_one(v0, binv, x, tol):
    dx = x[0] - v0[:, 0]
    dy = x[1] - v0[:, 1]
    l1 = binv[:, 0, 0] * dx + binv[:, 0, 1] * dy
    l2 = binv[:, 1, 0] * dx + binv[:, 1, 1] * dy
    l0 = 1.0 - l1 - l2
    ok = (l0 >= -tol) & (l1 >= -tol) & (l2 >= -tol)
    k = int(np.argmax(ok))
    if not ok[k]:
        raise RuntimeError(f"point {x} not contained in any element")
    return k, np.array([l0[k], l1[k], l2[k]])


def _resolve_tie(tri, neighbors, star_off, star_el, v0, binv, x, e, lam, tol):
    low = [i for i in range(3) if lam[i] <= tol]
    if not low:
        return e, lam
    if len(low) == 1:
        cand = [e]
        nb = neighbors[e, low[0]]
        if nb >= 0:
            cand.append(int(nb))
    else:
        # near a vertex: the local vertex with the largest coordinate
        iv = int(np.argmax(lam))
        v = tri[e, iv]
        cand = [int(c) for c in star_el[star_off[v]:star_off[v + 1]]]
    for c in sorted(cand):
        lamc = _bary_one(v0, binv, c, x)
        if lamc.min() >= -tol:
            return c, lamc
    return e, lam  # unreachable for consistent tolerances


def walk(tri, neighbors, v0, binv, star_off, star_el, points, hints, tol, max_hops):
    """Locate each point; returns (element ids int32, barycentric (n, 3))."""
    n = len(points)
    nt = len(tri)
    elem = hints.astype(np.int32, copy=True)
    elem[(elem < 0) | (elem >= nt)] = 0
    bary = np.empty((n, 3), dtype=np.float64)
    active = np.arange(n)
    hops = 0
    while len(active):
        e = elem[active]
        d = points[active] - v0[e]
        l1 = binv[e, 0, 0] * d[:, 0] + binv[e, 0, 1] * d[:, 1]
        l2 = binv[e, 1, 0] * d[:, 0] + binv[e, 1, 1] * d[:, 1]
        l0 = 1.0 - l1 - l2
        lam = np.stack([l0, l1, l2], axis=1)
        imin = lam.argmin(axis=1)
        rows = np.arange(len(e))
        done = lam[rows, imin] >= -tol
        if done.any():
            sel = active[done]
            bary[sel] = lam[done]
        walking = ~done
        if not walking.any():
            break
        if hops >= max_hops:
            for gi in active[walking]:
                elem[gi], bary[gi] = _scan_one(v0, binv, points[gi], tol)
            break
        wrows = rows[walking]
        nxt = neighbors[e[wrows], imin[wrows]]
        blocked = nxt < 0
        if blocked.any():
            # most negative coordinate faces a boundary edge; cross the most
            # negative crossable one instead, else scan (clamped corner case)
            for bi in np.flatnonzero(blocked):
                r = wrows[bi]
                gi = active[r]
                chosen = -1
                for i in np.argsort(lam[r], kind="stable"):
                    if lam[r, i] < -tol and neighbors[e[r], i] >= 0:
                        chosen = neighbors[e[r], i]
                        break
                if chosen >= 0:
                    nxt[bi] = chosen
                else:
                    elem[gi], bary[gi] = _scan_one(v0, binv, points[gi], tol)
                    nxt[bi] = -2  # handled
        live = nxt >= 0
        elem[active[wrows[live]]] = nxt[live]
        active = active[wrows[live]]
        hops += 1
    # edge/vertex ties: match the exhaustive scan's lowest-id convention
    near = np.flatnonzero(bary.min(axis=1) <= tol)
    for gi in near:
        elem[gi], bary[gi] = _resolve_tie(
            tri, neighbors, star_off, star_el, v0, binv, points[gi],
            int(elem[gi]), bary[gi], tol,
        )
    return elem, bary
