"""Global degree-of-freedom management.

DoF numbering: vertex dofs first (vertex id = dof id), then edge midpoint
dofs (quadratic space) or per-element bubble dofs (enriched linear space).
Local dof order matches the reference basis: vertices 0..2, then for the
quadratic space the midpoints of edges (v0,v1), (v1,v2), (v2,v0), and for
the enriched space the single bubble.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elements import ElementKind
from .mesh import Mesh


def _frozen(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FemSpace:
    """A scalar finite element space on a mesh.

    n_nodal counts the dofs that carry function values at points (vertices,
    edge midpoints); enrichment dofs (bubbles) follow them. With
    dirichlet=True the space is constrained to vanish on the domain
    boundary and `free` masks the unconstrained dofs.
    """

    mesh: Mesh
    kind: ElementKind
    dirichlet: bool
    ndof: int
    n_nodal: int
    element_dofs: np.ndarray  # (NT, ndof_local) int32
    dof_coords: np.ndarray    # (ndof, 2)
    boundary_dof: np.ndarray  # (ndof,) bool
    free: np.ndarray          # (ndof,) bool


def _edge_numbering(mesh: Mesh):
    """Global edge ids keyed opposite each local vertex, plus midpoints and
    a boundary-edge mask."""
    t = mesh.triangles.astype(np.int64)
    nv = len(mesh.vertices)
    a = t[:, [1, 2, 0]]
    b = t[:, [2, 0, 1]]
    key = np.minimum(a, b) * nv + np.maximum(a, b)
    uniq, inv = np.unique(key.ravel(), return_inverse=True)
    eid = inv.reshape(-1, 3).astype(np.int64)  # edge opposite local vertex i
    mids = 0.5 * (mesh.vertices[uniq // nv] + mesh.vertices[uniq % nv])
    on_boundary = np.zeros(len(uniq), dtype=bool)
    on_boundary[eid[mesh.neighbors == -1]] = True
    return eid, mids, on_boundary


def build_space(mesh: Mesh, kind: ElementKind, dirichlet: bool = True) -> FemSpace:
    nv = len(mesh.vertices)
    nt = len(mesh.triangles)
    if kind.tag == "p1":
        element_dofs = mesh.triangles.astype(np.int32)
        coords = mesh.vertices.copy()
        boundary = mesh.boundary_vertex.copy()
        n_nodal = nv
    elif kind.tag == "p2":
        eid, mids, edge_bnd = _edge_numbering(mesh)
        # local dofs 3,4,5 are midpoints of (v0,v1),(v1,v2),(v2,v0), i.e. the
        # edges opposite local vertices 2,0,1
        element_dofs = np.hstack([mesh.triangles,
                                  (nv + eid[:, [2, 0, 1]]).astype(np.int32)])
        coords = np.vstack([mesh.vertices, mids])
        boundary = np.concatenate([mesh.boundary_vertex, edge_bnd])
        n_nodal = nv + len(mids)
    elif kind.tag == "p1bubble":
        element_dofs = np.hstack([mesh.triangles,
                                  (nv + np.arange(nt)).astype(np.int32)[:, None]])
        coords = np.vstack([mesh.vertices, mesh.vertices[mesh.triangles].mean(axis=1)])
        # bubbles vanish on all element edges, so they are never constrained
        boundary = np.concatenate([mesh.boundary_vertex, np.zeros(nt, dtype=bool)])
        n_nodal = nv
    else:
        raise ValueError(f"no global space for element kind {kind.tag!r}")
    free = ~boundary if dirichlet else np.ones(len(coords), dtype=bool)
    return FemSpace(mesh, kind, dirichlet, len(coords), n_nodal,
                    _frozen(np.ascontiguousarray(element_dofs, dtype=np.int32)),
                    _frozen(coords), _frozen(boundary), _frozen(free))
