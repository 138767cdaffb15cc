"""Nonlinear artificial-viscosity transport step.

Each time step solves (M + dt A(eps)) C = b, where b is the transported
right-hand side of the plain scheme and A(eps) a piecewise-constant
viscosity stiffness matrix. The per-element viscosity is driven by the
discrete time residual |c_new(x_q) - c_prev(X(x_q))| / dt, so it switches
itself off where the solution is transported smoothly and grows near
interior layers. The coupled system is solved by fixed-point iteration
started from the plain transported projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._assemble import ScatterPlan, block_scatter_indices
from .characteristics import VelocityField
from .elements import QuadratureRule, basis_gradients, basis_values
from .space import FemSpace
from .transport import Field, TransportAssembler, solve_spd

_MODES = ("mean", "max")


@dataclass(frozen=True)
class DcConfig:
    """Viscosity scaling and fixed-point controls.

    eps_K = c_eps * h_K**alpha * reduce(residual samples on K), with reduce
    the per-element mean (default) or max. tol is relative on the coefficient
    vector between successive iterates.
    """

    c_eps: float
    alpha: float
    tol: float = 1e-8
    max_iter: int = 50
    mode: str = "mean"

    def __post_init__(self):
        if not 0.0 <= self.c_eps < 1.0:
            raise ValueError(f"c_eps must lie in [0, 1), got {self.c_eps}")
        if not 1.0 <= self.alpha < 2.0:
            raise ValueError(f"alpha must lie in [1, 2), got {self.alpha}")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class DcResult:
    """Outcome of one nonlinear step.

    eps is the per-element viscosity used in the final solve and stab_energy
    the quadratic form of the returned coefficients with the stiffness
    matrix actually solved with, so the step's energy accounting is exact
    whether or not the iteration converged.
    """

    field: Field
    iterations: int
    eps: np.ndarray
    converged: bool
    stab_energy: float


def residual_viscosity(c_new: Field, c_star_values, dt: float, cfg: DcConfig,
                       rule: QuadratureRule) -> np.ndarray:
    """Per-element viscosity c_eps * h_K**alpha * reduce_q |r_q|, with
    r_q = (c_new(x_q) - c_prev(X(x_q))) / dt sampled at the rule's points."""
    space = c_new.space
    mesh = space.mesh
    nt = len(mesh.triangles)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    cstar = np.asarray(c_star_values, dtype=np.float64)
    if cstar.shape != (nt, rule.n):
        raise ValueError(
            f"expected traced values of shape {(nt, rule.n)}, got {cstar.shape}")
    if cfg.c_eps == 0.0:
        return np.zeros(nt)
    vals_ref = basis_values(space.kind, rule.points_ref)  # (nl, nq)
    r = np.abs(c_new.coeffs[space.element_dofs] @ vals_ref - cstar) / dt
    red = r.mean(axis=1) if cfg.mode == "mean" else r.max(axis=1)
    return cfg.c_eps * mesh.h_k**cfg.alpha * red


class EpsStiffnessAssembler:
    """Viscosity stiffness assembly with the eps-independent work cached.

    The symmetrized element gradient blocks and the scatter plan depend only
    on the space and rule, so each assemble(eps) reduces to a scale and a
    segmented sum. A fixed-point loop then pays for the geometry products
    and the index sort once per step instead of once per iterate.
    """

    def __init__(self, space: FemSpace, rule: QuadratureRule):
        mesh = space.mesh
        grad_deg = max(space.kind.degree - 1, 0)
        if rule.degree < 2 * grad_deg:
            raise ValueError(
                f"viscosity stiffness needs quadrature exactness >= {2 * grad_deg}, "
                f"the {rule.n}-point rule has degree {rule.degree}")
        self.space = space
        self.rule = rule
        self._nt = len(mesh.triangles)
        grads_ref = basis_gradients(space.kind, rule.points_ref)  # (nl, nq, 2)
        phys = np.einsum("lqd,kde->klqe", grads_ref, mesh.b_inv)
        wq = mesh.det_b[:, None] * rule.weights[None]
        s_loc = np.einsum("kq,kaqe,kbqe->kab", wq, phys, phys)
        self._unit = 0.5 * (s_loc + s_loc.transpose(0, 2, 1))
        rows, cols, block, pair = block_scatter_indices(
            self._nt, space.kind.ndof, space.element_dofs)
        self._plan = ScatterPlan(rows, cols, block, pair, space.ndof,
                                 space.free if space.dirichlet else None)

    def assemble(self, eps):
        """CSR matrix A_ij = sum_K eps_K int_K grad phi_j . grad phi_i."""
        eps = np.asarray(eps, dtype=np.float64)
        if eps.shape != (self._nt,):
            raise ValueError(
                f"expected {self._nt} element viscosities, got {eps.shape}")
        if np.any(eps < 0.0):
            raise ValueError("element viscosities must be nonnegative")
        if not eps.any():
            return sp.csr_matrix((self.space.ndof, self.space.ndof))
        return self._plan.apply((self._unit * eps[:, None, None]).ravel())


def assemble_eps_stiffness(space: FemSpace, eps, rule: QuadratureRule):
    """Stiffness matrix A_ij = sum_K eps_K int_K grad phi_j . grad phi_i,
    exactly symmetric, masked to the free dofs for constrained spaces."""
    return EpsStiffnessAssembler(space, rule).assemble(eps)


def dc_step(c_prev: Field, velocity: VelocityField, dt: float,
            rule: QuadratureRule, M, cfg: DcConfig,
            assembler: TransportAssembler | None = None) -> DcResult:
    """One nonlinear step by fixed-point iteration.

    The transported right-hand side is fixed for the step; each iterate
    recomputes the viscosity from the previous solution and re-solves. The
    first iterate starts from the plain transported projection (M alone).
    Non-convergence within cfg.max_iter returns the last iterate with
    converged=False rather than raising; callers flag the step.
    """
    space = c_prev.space
    if assembler is None:
        assembler = TransportAssembler(space, velocity, dt, rule)
    elif (assembler.space is not space or assembler.rule is not rule
          or assembler.dt != float(dt)):
        raise ValueError("assembler was built for a different discretization")
    t_n = c_prev.t + dt
    b, cstar = assembler.rhs(c_prev.coeffs, t_n)
    stiff = EpsStiffnessAssembler(space, rule)
    prev = solve_spd(M, b)
    if space.dirichlet:
        prev[space.boundary_dof] = 0.0
    nt = len(space.mesh.triangles)
    eps = np.zeros(nt)
    stab_energy = 0.0
    iterations = 0
    converged = False
    for k in range(1, cfg.max_iter + 1):
        eps = residual_viscosity(Field(space, prev, t_n), cstar, dt, cfg, rule)
        A = stiff.assemble(eps)
        cur = solve_spd((M + dt * A).tocsr(), b, x0=prev)
        if space.dirichlet:
            cur[space.boundary_dof] = 0.0
        iterations = k
        stab_energy = float(cur @ (A @ cur))
        diff = np.linalg.norm(cur - prev)
        prev = cur
        if diff <= cfg.tol * np.linalg.norm(cur):
            converged = True
            break
    return DcResult(Field(space, prev, t_n), iterations, eps, converged,
                    stab_energy)
