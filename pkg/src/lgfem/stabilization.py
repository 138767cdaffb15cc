"""Local-projection stabilization.

The fluctuation operator kappa_M = id - pi_M subtracts, macro by macro, the
L2-best approximation of a quadrature-sampled field in a low-order
discontinuous space. The stabilization matrix integrates products of
fluctuations of basis gradients, weighted by tau_M, and the stabilized step
solves (M + dt S) against the transported right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._assemble import block_scatter_indices, scatter_symmetric
from .elements import P0DISC, P1DISC, ElementKind, basis_gradients
from .transport import Field, assemble_transport_rhs, solve_spd

_VARIANT_SPACES = {"one_level": ("p1", "p1bubble"), "two_level": ("p2",)}
_VARIANT_ORDER = {"one_level": 1, "two_level": 2}
_VARIANT_LEVEL = {"one_level": "one", "two_level": "two"}


@dataclass(frozen=True)
class LpsConfig:
    """Pairing of a stabilization variant with its projection space.

    One-level projects onto per-element spaces (order-1 scheme, bubble
    enrichment carries the stabilized modes); two-level projects onto
    per-macro spaces over 3-split children (order-2 scheme).
    """

    variant: str
    proj: ElementKind

    def __post_init__(self):
        if self.variant not in _VARIANT_SPACES:
            raise ValueError(f"unknown LPS variant {self.variant!r}")
        if self.proj.tag not in ("p0disc", "p1disc"):
            raise ValueError("projection space must be p0disc or p1disc")
        if self.proj.degree > _VARIANT_ORDER[self.variant] - 1:
            raise ValueError(
                f"projection degree {self.proj.degree} exceeds m-1 for {self.variant}")


def _check_setup(space, partition, cfg, rule):
    if space.kind.tag not in _VARIANT_SPACES[cfg.variant]:
        raise ValueError(
            f"{cfg.variant} stabilization does not pair with {space.kind.tag}")
    if partition.level != _VARIANT_LEVEL[cfg.variant]:
        raise ValueError(
            f"{cfg.variant} needs a {_VARIANT_LEVEL[cfg.variant]}-level partition")
    if partition.children.size != len(space.mesh.triangles):
        raise ValueError("partition does not cover the space's mesh")
    grad_deg = max(space.kind.degree - 1, 0)
    if rule.degree < 2 * max(grad_deg, cfg.proj.degree):
        raise ValueError(
            f"rule degree {rule.degree} too low for gradient products")


def _macro_geometry(mesh, partition, rule):
    """Physical quadrature points and weights grouped by macro.

    Returns points (n_macro, n_child*nq, 2) and weights of the same leading
    shape; weights include the element Jacobians.
    """
    ch = partition.children
    nmac, nc = ch.shape
    nq = len(rule.weights)
    phys = mesh.b_off[ch][:, :, None, :] + np.einsum(
        "qd,mced->mcqe", rule.points_ref, mesh.b_mat[ch])
    w = mesh.det_b[ch][:, :, None] * rule.weights[None, None, :]
    return phys.reshape(nmac, nc * nq, 2), w.reshape(nmac, nc * nq)


def _proj_basis(proj, pts, w, h_m):
    """Projection-space basis at the macro quadrature points, (nmac, P, nb).

    The affine basis is centered at the quadrature barycenter and scaled by
    the macro diameter so the Gram systems stay well conditioned.
    """
    if proj.tag == "p0disc":
        return np.ones(pts.shape[:2] + (1,))
    center = (w[..., None] * pts).sum(axis=1) / w.sum(axis=1)[:, None]
    scaled = (pts - center[:, None, :]) / h_m[:, None, None]
    return np.concatenate([np.ones(pts.shape[:2] + (1,)), scaled], axis=2)


def local_project(mesh, partition, proj, rule, g):
    """Macro-wise L2 projection of quadrature-point samples.

    g has shape (nt, nq) or (nt, nq, k); each trailing component is
    projected onto the macro-local space and returned at the same points.
    """
    g = np.asarray(g, dtype=np.float64)
    scalar = g.ndim == 2
    if scalar:
        g = g[..., None]
    ch = partition.children
    nmac, nc = ch.shape
    nq = len(rule.weights)
    k = g.shape[2]
    pts, w = _macro_geometry(mesh, partition, rule)
    basis = _proj_basis(proj, pts, w, partition.h_m)
    gm = g[ch].reshape(nmac, nc * nq, k)
    gram = np.einsum("mpa,mp,mpb->mab", basis, w, basis)
    rhs = np.einsum("mpa,mp,mpk->mak", basis, w, gm)
    coef = np.linalg.solve(gram, rhs)
    pm = np.einsum("mpa,mak->mpk", basis, coef)
    out = np.empty_like(g)
    out[ch.ravel()] = pm.reshape(nmac * nc, nq, k)
    return out[..., 0] if scalar else out


def field_gradients(space, coeffs, rule):
    """Physical gradients of a coefficient field at every quadrature point,
    shape (nt, nq, 2)."""
    mesh = space.mesh
    grads_ref = basis_gradients(space.kind, rule.points_ref)  # (nl, nq, 2)
    local = np.asarray(coeffs)[space.element_dofs]  # (nt, nl)
    ref = np.einsum("kl,lqd->kqd", local, grads_ref)
    return np.einsum("kqd,kde->kqe", ref, mesh.b_inv)


def assemble_lps(space, partition, cfg: LpsConfig, rule):
    """Stabilization matrix S_ij = sum_M tau_M int_M kappa grad phi_j . kappa
    grad phi_i, masked to the free dofs for constrained spaces."""
    _check_setup(space, partition, cfg, rule)
    mesh = space.mesh
    ch = partition.children
    nmac, nc = ch.shape
    nq = len(rule.weights)
    nl = space.kind.ndof
    ns = nc * nl

    grads_ref = basis_gradients(space.kind, rule.points_ref)  # (nl, nq, 2)
    phys_g = np.einsum("lqd,kde->klqe", grads_ref, mesh.b_inv)  # (nt, nl, nq, 2)

    # slot (c, l) is basis function l of child c, supported on that child only
    g_slots = np.zeros((nmac, nc, nq, ns, 2))
    for c in range(nc):
        block = phys_g[ch[:, c]]  # (nmac, nl, nq, 2)
        g_slots[:, c, :, c * nl:(c + 1) * nl, :] = np.moveaxis(block, 1, 2)
    g_slots = g_slots.reshape(nmac, nc * nq, ns, 2)

    pts, w = _macro_geometry(mesh, partition, rule)
    basis = _proj_basis(cfg.proj, pts, w, partition.h_m)
    gram = np.einsum("mpa,mp,mpb->mab", basis, w, basis)
    rhs = np.einsum("mpa,mp,mpse->mase", basis, w, g_slots)
    nb = basis.shape[2]
    coef = np.linalg.solve(gram, rhs.reshape(nmac, nb, ns * 2))
    kg = g_slots - np.einsum("mpa,mase->mpse", basis, coef.reshape(nmac, nb, ns, 2))

    s_loc = np.einsum("mp,mpse,mpte->mst", w, kg, kg)
    s_loc = 0.5 * (s_loc + s_loc.transpose(0, 2, 1))  # exact local symmetry
    s_loc *= partition.tau[:, None, None]

    dofs = space.element_dofs[ch].reshape(nmac, ns)
    rows, cols, mac, pair = block_scatter_indices(nmac, ns, dofs)
    return scatter_symmetric(rows, cols, s_loc.ravel(), mac, pair, space.ndof,
                             space.free if space.dirichlet else None)


def nu_add(c: Field, partition, cfg: LpsConfig, rule) -> float:
    """Ratio of stabilization energy to gradient energy.

    sum_M tau_M ||kappa_M grad c||^2_M / ||grad c||^2, or 0 for a field with
    no gradient energy.
    """
    space = c.space
    mesh = space.mesh
    g = field_gradients(space, c.coeffs, rule)
    wq = mesh.det_b[:, None] * rule.weights[None]
    den = float(np.einsum("kq,kqd,kqd->", wq, g, g))
    if den == 0.0:
        return 0.0
    kg = g - local_project(mesh, partition, cfg.proj, rule, g)
    per_el = np.einsum("kq,kqd,kqd->k", wq, kg, kg)
    num = float(np.sum(partition.tau * per_el[partition.children].sum(axis=1)))
    return num / den


def lps_step(c_prev: Field, velocity, dt: float, rule, M, S, solver=None) -> Field:
    """One stabilized transport step: solve (M + dt S) C = b_transported."""
    space = c_prev.space
    b = assemble_transport_rhs(c_prev, velocity, dt, rule, space.mesh)
    if solver is not None:
        coeffs = solver(b)
    else:
        coeffs = solve_spd((M + dt * S).tocsr(), b)
    return Field(space, coeffs, c_prev.t + dt)
