"""Mass matrices, transported right-hand sides, and the Lagrange-Galerkin
step.

One step of the scheme: trace the destination quadrature points one time
step backward along the characteristics, evaluate the previous solution
there, and L2-project (M C^n = b, b_i = sum_q w_q |det B| c*(x_q)
phi_i(x_q)). For a stationary velocity the traced points never change, so
the evaluation operators are cached as sparse matrices and each step costs
two sparse matrix-vector products; time-dependent fields rebuild the source
evaluation every step through the same code path.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sparse

from .characteristics import RIGID_ROTATION, VelocityField, trace_back
from .elements import QuadratureRule, basis_values
from .mesh import Mesh, locate_batch
from .space import FemSpace


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance within the cap."""


class Field:
    """Coefficients of a finite element function at one time level."""

    __slots__ = ("space", "coeffs", "t")

    def __init__(self, space: FemSpace, coeffs, t: float):
        coeffs = np.asarray(coeffs, dtype=np.float64)
        if coeffs.shape != (space.ndof,):
            raise ValueError(
                f"expected {space.ndof} coefficients, got shape {coeffs.shape}")
        if space.dirichlet and np.any(coeffs[space.boundary_dof] != 0.0):
            raise ValueError("constrained space requires zero boundary coefficients")
        self.space = space
        self.coeffs = coeffs
        self.t = float(t)


def interpolate(space: FemSpace, f) -> Field:
    """Nodal interpolant: function values at nodal dofs, zero enrichment."""
    coeffs = np.zeros(space.ndof)
    coeffs[: space.n_nodal] = np.asarray(f(space.dof_coords[: space.n_nodal]),
                                         dtype=np.float64)
    if space.dirichlet:
        coeffs[space.boundary_dof] = 0.0
    return Field(space, coeffs, 0.0)


def evaluate_field(c: Field, points, hints=None) -> np.ndarray:
    """Point values of the finite element function at arbitrary points."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    el, bary = locate_batch(c.space.mesh, pts, hints)
    vals = basis_values(c.space.kind, bary[:, 1:])  # (nl, npts)
    return np.einsum("ip,pi->p", vals, c.coeffs[c.space.element_dofs[el]])


def assemble_mass(space: FemSpace, rule: QuadratureRule):
    """Mass matrix M_ij = integral of phi_j phi_i, Dirichlet rows/cols
    reduced to identity.

    Refuses rules that cannot integrate basis products exactly; the matrix
    is then independent of the rule choice up to rounding.
    """
    if rule.degree < 2 * space.kind.degree:
        raise ValueError(
            f"mass matrix needs quadrature exactness >= {2 * space.kind.degree}, "
            f"the {rule.n}-point rule has degree {rule.degree}")
    vals = basis_values(space.kind, rule.points_ref)  # (nl, nq)
    m_ref = (vals * rule.weights) @ vals.T
    local = space.mesh.det_b[:, None, None] * m_ref[None]
    ed = space.element_dofs
    rows = np.broadcast_to(ed[:, :, None], local.shape)
    cols = np.broadcast_to(ed[:, None, :], local.shape)
    if space.dirichlet:
        local = np.where(space.free[rows] & space.free[cols], local, 0.0)
    M = sparse.coo_matrix((local.ravel(), (rows.ravel(), cols.ravel())),
                          shape=(space.ndof, space.ndof)).tocsr()
    if space.dirichlet:
        M = (M + sparse.diags(space.boundary_dof.astype(np.float64))).tocsr()
    M.eliminate_zeros()
    return M


def quad_norm_sq(mesh: Mesh, rule: QuadratureRule, values) -> float:
    """Quadrature-consistent squared L2 norm of per-quadrature-point values
    (shape (NT, nq))."""
    qw = mesh.det_b[:, None] * rule.weights[None, :]
    return float(np.sum(qw * np.asarray(values) ** 2))


class TransportAssembler:
    """Per-run transported-RHS builder.

    Caches the destination quadrature geometry and, for stationary velocity
    fields, the source-evaluation matrix E (E[p, j] = phi_j at the traced
    foot of quadrature point p), so rhs() is E and W applications only:
    b = W (E C), with W[i, p] = w_p |det B| phi_i(x_p) gathered per element.
    """

    def __init__(self, space: FemSpace, velocity: VelocityField, dt: float,
                 rule: QuadratureRule):
        self.space = space
        self.velocity = velocity
        self.dt = float(dt)
        self.rule = rule
        mesh = space.mesh
        self.mesh = mesh
        nt = len(mesh.triangles)
        self.vals_ref = basis_values(space.kind, rule.points_ref)  # (nl, nq)
        self.dest_points = (mesh.b_off[:, None, :]
                            + rule.points_ref[None] @ np.swapaxes(mesh.b_mat, 1, 2)
                            ).reshape(-1, 2)
        self.qweights = mesh.det_b[:, None] * rule.weights[None, :]  # (NT, nq)
        data = self.qweights[:, None, :] * self.vals_ref[None, :, :]  # (NT, nl, nq)
        rows = np.broadcast_to(space.element_dofs[:, :, None], data.shape)
        cols = np.broadcast_to(np.arange(nt * rule.n).reshape(nt, 1, rule.n), data.shape)
        self._W = sparse.coo_matrix(
            (data.ravel(), (rows.ravel(), cols.ravel())),
            shape=(space.ndof, nt * rule.n)).tocsr()
        self._E = None

    def _source_matrix(self, t_n: float):
        feet = trace_back(self.velocity, self.dest_points, t_n, self.dt)
        nt = len(self.mesh.triangles)
        hints = np.repeat(np.arange(nt, dtype=np.int32), self.rule.n)
        el, bary = locate_batch(self.mesh, feet, hints)
        vals = basis_values(self.space.kind, bary[:, 1:])  # (nl, P)
        nl, npts = vals.shape
        rows = np.repeat(np.arange(npts), nl)
        cols = self.space.element_dofs[el].ravel()
        return sparse.coo_matrix((vals.T.ravel(), (rows, cols)),
                                 shape=(npts, self.space.ndof)).tocsr()

    def source_matrix(self, t_n: float):
        if self.velocity.tag == RIGID_ROTATION:
            if self._E is None:
                self._E = self._source_matrix(t_n)
            return self._E
        return self._source_matrix(t_n)

    def rhs(self, coeffs: np.ndarray, t_n: float):
        """Transported right-hand side and the traced-source values
        c*(x_q) (shape (NT, nq)) reused by diagnostics and the nonlinear
        schemes."""
        cstar = self.source_matrix(t_n) @ coeffs
        b = self._W @ cstar
        if self.space.dirichlet:
            b[self.space.boundary_dof] = 0.0
        return b, cstar.reshape(len(self.mesh.triangles), self.rule.n)

    def dest_values(self, coeffs: np.ndarray) -> np.ndarray:
        """Values of the coefficient field at the destination quadrature
        points, shape (NT, nq)."""
        return coeffs[self.space.element_dofs] @ self.vals_ref


def assemble_transport_rhs(c_prev: Field, velocity: VelocityField, dt: float,
                           rule: QuadratureRule, mesh: Mesh) -> np.ndarray:
    """b_i = sum_K sum_q w_q |det B_K| c_prev(X(x_q)) phi_i(x_q)."""
    if mesh is not c_prev.space.mesh:
        raise ValueError("field and mesh disagree")
    asm = TransportAssembler(c_prev.space, velocity, dt, rule)
    b, _ = asm.rhs(c_prev.coeffs, c_prev.t + dt)
    return b


def solve_spd(A, b: np.ndarray, tol: float = 1e-12, x0=None) -> np.ndarray:
    """Conjugate gradients with diagonal preconditioning.

    Stops at relative residual tol; raises ConvergenceError past 10*dim
    iterations. x0, when given, seeds the iteration (the caller's array is
    not modified).
    """
    b = np.asarray(b, dtype=np.float64)
    if not b.any():
        return np.zeros_like(b)
    dinv = 1.0 / A.diagonal()
    bnorm = np.linalg.norm(b)
    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = np.array(x0, dtype=np.float64)
        r = b - A @ x
    z = dinv * r
    p = z.copy()
    rz = r @ z
    for _ in range(10 * len(b)):
        if np.linalg.norm(r) <= tol * bnorm:
            return x
        Ap = A @ p
        alpha = rz / (p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        z = dinv * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    if np.linalg.norm(r) <= tol * bnorm:
        return x
    raise ConvergenceError(
        f"conjugate gradients stalled at relative residual "
        f"{np.linalg.norm(r) / bnorm:.3e} (target {tol:.1e})")


def project_l2(space: FemSpace, f, rule: QuadratureRule) -> Field:
    """L2 projection of a callable onto the space, with the given rule on
    both sides of the normal equations."""
    mesh = space.mesh
    vals = basis_values(space.kind, rule.points_ref)  # (nl, nq)
    pts = (mesh.b_off[:, None, :]
           + rule.points_ref[None] @ np.swapaxes(mesh.b_mat, 1, 2))
    fv = np.asarray(f(pts.reshape(-1, 2)), dtype=np.float64).reshape(pts.shape[:2])
    qw = mesh.det_b[:, None] * rule.weights[None, :]
    b_loc = (qw * fv) @ vals.T  # (NT, nl)
    b = np.zeros(space.ndof)
    np.add.at(b, space.element_dofs, b_loc)
    if space.dirichlet:
        b[space.boundary_dof] = 0.0
    coeffs = solve_spd(assemble_mass(space, rule), b)
    if space.dirichlet:
        coeffs[space.boundary_dof] = 0.0
    return Field(space, coeffs, 0.0)


def lg_step(c_prev: Field, velocity: VelocityField, dt: float,
            rule: QuadratureRule, M, solver=None) -> Field:
    """One Lagrange-Galerkin step: M C^n = transported RHS.

    solver overrides the default conjugate-gradient solve (the run harness
    passes a cached factorization); it must meet the same residual
    tolerance.
    """
    b = assemble_transport_rhs(c_prev, velocity, dt, rule, c_prev.space.mesh)
    coeffs = solver(b) if solver is not None else solve_spd(M, b)
    if c_prev.space.dirichlet:
        coeffs[c_prev.space.boundary_dof] = 0.0
    return Field(c_prev.space, coeffs, c_prev.t + dt)
