"""Triangulations of rectangles: construction, refinement, macro partitions,
and robust point location.

Conventions:
  - triangles are counterclockwise (det B_K > 0);
  - neighbors[k, i] is the element across the edge opposite local vertex i
    (the edge joining local vertices (i+1)%3 and (i+2)%3), or -1 on the
    boundary;
  - h_K is the element diameter (longest edge); for the uniform generator
    h = leg * sqrt(2);
  - points outside the domain are clamped to its boundary before location,
    and location ties on shared edges/vertices resolve to the lowest
    element id (tol_bary = 1e-10 containment band).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

TOL_BARY = 1e-10


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x0: float
    y0: float
    x1: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


def _frozen(a):
    a.setflags(write=False)
    return a


class Mesh:
    """Immutable triangulation with precomputed affine-map data.

    Attributes
    ----------
    vertices : (NV, 2) float
    triangles : (NT, 3) int32, counterclockwise
    neighbors : (NT, 3) int32, -1 marks a boundary edge
    boundary_vertex : (NV,) bool
    b_mat, b_inv : (NT, 2, 2) affine map matrix B_K and its inverse
    b_off : (NT, 2) affine offsets (first vertex)
    det_b : (NT,) determinants (= 2 * element area)
    h_k : (NT,) element diameters; h = h_k.max()
    domain : Rect
    leg : float or None (uniform generator only)
    parent, parent_split, parent_h : refinement provenance (or None)
    """

    def __init__(self, vertices, triangles, domain, leg=None,
                 parent=None, parent_split=None, parent_h=None):
        self.vertices = _frozen(np.ascontiguousarray(vertices, dtype=np.float64))
        self.triangles = _frozen(np.ascontiguousarray(triangles, dtype=np.int32))
        self.domain = domain
        self.leg = leg
        self.parent = None if parent is None else _frozen(np.asarray(parent, dtype=np.int32))
        self.parent_split = parent_split
        self.parent_h = None if parent_h is None else _frozen(np.asarray(parent_h, dtype=np.float64))

        v = self.vertices[self.triangles]  # (NT, 3, 2)
        e1 = v[:, 1] - v[:, 0]
        e2 = v[:, 2] - v[:, 0]
        det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        if not (det > 0).all():
            raise ValueError("triangle orientation must be counterclockwise")
        b = np.empty((len(det), 2, 2))
        b[:, :, 0] = e1
        b[:, :, 1] = e2
        binv = np.empty_like(b)
        binv[:, 0, 0] = b[:, 1, 1] / det
        binv[:, 0, 1] = -b[:, 0, 1] / det
        binv[:, 1, 0] = -b[:, 1, 0] / det
        binv[:, 1, 1] = b[:, 0, 0] / det
        self.b_mat = _frozen(b)
        self.b_inv = _frozen(np.ascontiguousarray(binv))
        self.b_off = _frozen(np.ascontiguousarray(v[:, 0]))
        self.det_b = _frozen(det)
        edge_len = np.stack([
            np.linalg.norm(v[:, 1] - v[:, 2], axis=1),
            np.linalg.norm(v[:, 2] - v[:, 0], axis=1),
            np.linalg.norm(v[:, 0] - v[:, 1], axis=1),
        ])
        self.h_k = _frozen(edge_len.max(axis=0))
        self.h = float(self.h_k.max())

        self._build_adjacency()

    def _build_adjacency(self):
        nt = len(self.triangles)
        nv = len(self.vertices)
        # edge i of element k joins local vertices (i+1)%3, (i+2)%3
        a = self.triangles[:, [1, 2, 0]].ravel()
        b = self.triangles[:, [2, 0, 1]].ravel()
        key = np.minimum(a, b).astype(np.int64) * nv + np.maximum(a, b)
        order = np.argsort(key, kind="stable")
        skey = key[order]
        neighbors = np.full((nt, 3), -1, dtype=np.int32)
        same = np.flatnonzero(skey[:-1] == skey[1:])
        for s in same:
            i, j = order[s], order[s + 1]
            neighbors[i // 3, i % 3] = j // 3
            neighbors[j // 3, j % 3] = i // 3
        self.neighbors = _frozen(neighbors)
        boundary = np.zeros(nv, dtype=bool)
        bd_edges = np.flatnonzero(neighbors.ravel() < 0)
        boundary[a[bd_edges]] = True
        boundary[b[bd_edges]] = True
        self.boundary_vertex = _frozen(boundary)
        # vertex -> incident elements, sorted by element id
        flat = self.triangles.ravel()
        vorder = np.argsort(flat, kind="stable")
        self.star_el = _frozen((vorder // 3).astype(np.int32))
        counts = np.bincount(flat, minlength=nv)
        self.star_off = _frozen(np.concatenate([[0], np.cumsum(counts)]).astype(np.int32))


def build_uniform_mesh(domain: Rect, n: int, split: str = "ne") -> Mesh:
    """Uniform right-triangle mesh of a rectangle: 2*n^2 elements.

    split selects the diagonal direction: "ne" (lower-left to upper-right,
    default) or "nw".
    """
    if n < 1:
        raise ValueError(f"need at least one subdivision per axis, got {n}")
    if split not in ("ne", "nw"):
        raise ValueError(f"unknown split pattern {split!r}")
    xs = np.linspace(domain.x0, domain.x1, n + 1)
    ys = np.linspace(domain.y0, domain.y1, n + 1)
    X, Y = np.meshgrid(xs, ys)
    vertices = np.stack([X.ravel(), Y.ravel()], axis=1)
    jj, ii = np.divmod(np.arange(n * n), n)
    ll = jj * (n + 1) + ii
    lr, ul = ll + 1, ll + n + 1
    ur = ul + 1
    if split == "ne":
        t1 = np.stack([ll, lr, ur], axis=1)
        t2 = np.stack([ll, ur, ul], axis=1)
    else:
        t1 = np.stack([ll, lr, ul], axis=1)
        t2 = np.stack([lr, ur, ul], axis=1)
    triangles = np.stack([t1, t2], axis=1).reshape(-1, 3)
    leg = min((domain.x1 - domain.x0) / n, (domain.y1 - domain.y0) / n)
    return Mesh(vertices, triangles, domain, leg=leg)


def refine_3split(mesh: Mesh) -> Mesh:
    """Barycentric 3-split: each triangle splits at its centroid."""
    nv = len(mesh.vertices)
    nt = len(mesh.triangles)
    centroids = mesh.vertices[mesh.triangles].mean(axis=1)
    vertices = np.vstack([mesh.vertices, centroids])
    g = nv + np.arange(nt)
    t = mesh.triangles
    children = np.empty((nt, 3, 3), dtype=np.int64)
    children[:, 0] = np.stack([t[:, 0], t[:, 1], g], axis=1)
    children[:, 1] = np.stack([t[:, 1], t[:, 2], g], axis=1)
    children[:, 2] = np.stack([t[:, 2], t[:, 0], g], axis=1)
    return Mesh(vertices, children.reshape(-1, 3), mesh.domain,
                parent=np.repeat(np.arange(nt), 3), parent_split=3,
                parent_h=mesh.h_k.copy())


def refine_4split(mesh: Mesh) -> Mesh:
    """Uniform 4-split: each triangle splits at its edge midpoints."""
    nv = len(mesh.vertices)
    nt = len(mesh.triangles)
    t = mesh.triangles.astype(np.int64)
    a = t[:, [1, 2, 0]].ravel()
    b = t[:, [2, 0, 1]].ravel()
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    key = lo * nv + hi
    uniq, inverse = np.unique(key, return_inverse=True)
    mid_ids = (nv + inverse).reshape(nt, 3)  # midpoint opposite local vertex i
    mids = 0.5 * (mesh.vertices[uniq // nv] + mesh.vertices[uniq % nv])
    vertices = np.vstack([mesh.vertices, mids])
    m0, m1, m2 = mid_ids[:, 0], mid_ids[:, 1], mid_ids[:, 2]  # m_i opposite v_i
    children = np.empty((nt, 4, 3), dtype=np.int64)
    children[:, 0] = np.stack([t[:, 0], m2, m1], axis=1)
    children[:, 1] = np.stack([t[:, 1], m0, m2], axis=1)
    children[:, 2] = np.stack([t[:, 2], m1, m0], axis=1)
    children[:, 3] = np.stack([m0, m1, m2], axis=1)
    return Mesh(vertices, children.reshape(-1, 3), mesh.domain,
                parent=np.repeat(np.arange(nt), 4), parent_split=4,
                parent_h=mesh.h_k.copy())


@dataclass(frozen=True)
class MacroPartition:
    """Disjoint grouping of elements into macros with stabilization weights."""

    children: np.ndarray  # (n_macro, n_child) element ids
    h_m: np.ndarray       # (n_macro,) macro diameters
    tau: np.ndarray       # (n_macro,) stabilization weights
    level: str            # "one" | "two"
    split: int | None
    gamma1: float         # min h_K / h_M over the partition
    gamma2: float         # max h_K / h_M


def build_macro_partition(mesh: Mesh, level: str, tau_rule, split: int | None = None
                          ) -> MacroPartition:
    """Group elements into macros and attach tau_M = tau_rule(h_M).

    One-level: each element is its own macro.  Two-level: macros are the
    parents of a mesh produced by refine_3split/refine_4split; `split` must
    match the refinement actually used.
    """
    if level == "one":
        nt = len(mesh.triangles)
        children = np.arange(nt, dtype=np.int32).reshape(-1, 1)
        h_m = mesh.h_k.copy()
        g1 = g2 = 1.0
    elif level == "two":
        if mesh.parent is None:
            raise ValueError("two-level macros need a mesh produced by refinement")
        if split is not None and mesh.parent_split != split:
            raise ValueError(
                f"mesh was refined with a {mesh.parent_split}-split, requested {split}")
        nchild = mesh.parent_split
        ncoarse = len(mesh.triangles) // nchild
        children = np.arange(len(mesh.triangles), dtype=np.int32).reshape(ncoarse, nchild)
        if not (mesh.parent[children] == np.arange(ncoarse)[:, None]).all():
            raise ValueError("refined mesh does not group children contiguously")
        h_m = mesh.parent_h.copy()
        ratio = mesh.h_k / h_m[mesh.parent]
        g1, g2 = float(ratio.min()), float(ratio.max())
    else:
        raise ValueError(f"unknown macro level {level!r}")
    try:
        tau = np.asarray(tau_rule(h_m), dtype=np.float64)
        if tau.shape != h_m.shape:
            raise TypeError
    except TypeError:
        tau = np.array([float(tau_rule(h)) for h in h_m])
    if (tau < 0).any():
        raise ValueError("tau_M must be nonnegative")
    return MacroPartition(_frozen(children), _frozen(h_m), _frozen(tau),
                          level, mesh.parent_split if level == "two" else None, g1, g2)


def clamp_to_domain(domain: Rect, points: np.ndarray) -> np.ndarray:
    return np.clip(points, [domain.x0, domain.y0], [domain.x1, domain.y1])


def locate_batch(mesh: Mesh, points, hints=None, tol: float = TOL_BARY):
    """Locate many points; returns (element ids (n,) int32, barycentric (n, 3)).

    Points outside the domain are clamped to its boundary.  Results match an
    exhaustive lowest-id scan regardless of hints.
    """
    pts = np.ascontiguousarray(clamp_to_domain(mesh.domain, np.atleast_2d(points)),
                               dtype=np.float64)
    if hints is None:
        hints = np.zeros(len(pts), dtype=np.int32)
    else:
        hints = np.ascontiguousarray(hints, dtype=np.int32)
    max_hops = 2 * len(mesh.triangles) + 8
    return kernels.walk(mesh.triangles, mesh.neighbors, mesh.b_off, mesh.b_inv,
                        mesh.star_off, mesh.star_el, pts, hints, tol, max_hops)


def locate_point(mesh: Mesh, x, hint: int | None = None, tol: float = TOL_BARY):
    """Locate a single point; returns (element id, barycentric (3,))."""
    hints = None if hint is None else np.array([hint], dtype=np.int32)
    elems, bary = locate_batch(mesh, np.asarray(x, dtype=np.float64)[None, :]
                               if np.ndim(x) == 1 else x, hints, tol)
    return int(elems[0]), bary[0]


def dump_mesh(mesh: Mesh, path) -> None:
    """Plain-text mesh dump: `NV NT` header, vertex lines, triangle lines."""
    with open(path, "w") as f:
        f.write(f"{len(mesh.vertices)} {len(mesh.triangles)}\n")
        for x, y in mesh.vertices:
            f.write(f"{x:.16e} {y:.16e}\n")
        for v0, v1, v2 in mesh.triangles:
            f.write(f"{v0} {v1} {v2}\n")
