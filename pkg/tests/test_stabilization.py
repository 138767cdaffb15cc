"""Local-projection stabilization: macro-local fluctuation operator,
stabilization matrix, the stabilized step, and the added-diffusion ratio.

Oracles:
  - dense normal-equations solve of the macro least-squares problem for the
    local projector;
  - pointwise recomputation of x'Sx as sum_M tau_M ||kappa_M grad v||^2 from
    projector outputs;
  - hand-built global linear fields, whose gradients every projection space
    here reproduces macro-wise (fluctuation must vanish).
"""

import numpy as np
import pytest
import scipy.sparse as sp

from lgfem.characteristics import rigid_rotation
from lgfem.elements import (P0DISC, P1, P1BUBBLE, P1DISC, P2, basis_gradients,
                            get_rule)
from lgfem.mesh import Rect, build_macro_partition, build_uniform_mesh, refine_3split
from lgfem.problems import hump_ic
from lgfem.space import build_space
from lgfem.stabilization import (LpsConfig, assemble_lps, field_gradients,
                                 local_project, lps_step, nu_add)
from lgfem.transport import (TransportAssembler, assemble_mass, interpolate,
                             lg_step, project_l2, quad_norm_sq, solve_spd)


def one_level_setup(n=4, tau=0.1, kind=P1BUBBLE, points=16):
    mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), n)
    part = build_macro_partition(mesh, level="one", tau_rule=lambda h: tau * h)
    space = build_space(mesh, kind, dirichlet=True)
    return mesh, part, space, get_rule(points)


def two_level_setup(n=3, tau=0.1, points=16):
    coarse = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), n)
    mesh = refine_3split(coarse)
    part = build_macro_partition(mesh, level="two", tau_rule=lambda h: tau * h, split=3)
    space = build_space(mesh, P2, dirichlet=True)
    return mesh, part, space, get_rule(points)


def quad_points_weights(mesh, rule, els):
    phys = mesh.b_off[els, None, :] + rule.points_ref[None] @ np.swapaxes(
        mesh.b_mat[els], 1, 2
    )
    w = mesh.det_b[els, None] * rule.weights[None]
    return phys.reshape(-1, 2), w.ravel()


class TestLpsConfig:
    def test_valid_pairings(self):
        LpsConfig("one_level", P0DISC)
        LpsConfig("two_level", P1DISC)
        LpsConfig("two_level", P0DISC)  # s=0 <= m-1=1 is allowed

    def test_projection_degree_cap(self):
        with pytest.raises(ValueError):
            LpsConfig("one_level", P1DISC)  # s=1 > m-1=0

    def test_projection_space_must_be_discontinuous(self):
        with pytest.raises(ValueError):
            LpsConfig("one_level", P1)
        with pytest.raises(ValueError):
            LpsConfig("two_level", P2)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            LpsConfig("three_level", P0DISC)

    def test_variant_space_mismatch_at_assembly(self):
        mesh, part, space, rule = one_level_setup(kind=P2)
        with pytest.raises(ValueError):
            assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)

    def test_variant_partition_mismatch_at_assembly(self):
        mesh, part, space, rule = one_level_setup()
        with pytest.raises(ValueError):
            assemble_lps(space, part, LpsConfig("two_level", P1DISC), rule)


class TestLocalProject:
    def test_constant_is_reproduced_s0(self):
        mesh, part, space, rule = one_level_setup()
        g = np.full((len(mesh.triangles), len(rule.weights)), 0.7)
        pg = local_project(mesh, part, P0DISC, rule, g)
        assert np.abs(pg - g).max() <= 1e-14

    def test_linear_is_reproduced_s1(self):
        mesh, part, space, rule = two_level_setup()
        nq = len(rule.weights)
        pts, _ = quad_points_weights(mesh, rule, np.arange(len(mesh.triangles)))
        g = (0.3 - 1.2 * pts[:, 0] + 0.8 * pts[:, 1]).reshape(-1, nq)
        pg = local_project(mesh, part, P1DISC, rule, g)
        assert np.abs(pg - g).max() <= 1e-12

    def test_macrowise_affine_annihilated(self):
        # kappa_M q = 0 for any q in the projection space, even when q jumps
        # between macros
        mesh, part, space, rule = two_level_setup()
        rng = np.random.default_rng(8)
        nq = len(rule.weights)
        coefs = rng.standard_normal((len(part.children), 3))
        g = np.zeros((len(mesh.triangles), nq))
        for m, childs in enumerate(part.children):
            pts, _ = quad_points_weights(mesh, rule, childs)
            a, b, c = coefs[m]
            g[childs] = (a + b * pts[:, 0] + c * pts[:, 1]).reshape(len(childs), nq)
        pg = local_project(mesh, part, P1DISC, rule, g)
        assert np.abs(pg - g).max() <= 1e-12

    def test_idempotent(self):
        mesh, part, space, rule = two_level_setup()
        rng = np.random.default_rng(3)
        g = rng.standard_normal((len(mesh.triangles), len(rule.weights), 2))
        p1 = local_project(mesh, part, P1DISC, rule, g)
        p2 = local_project(mesh, part, P1DISC, rule, p1)
        assert np.abs(p2 - p1).max() <= 1e-12

    def test_against_dense_normal_equations_oracle(self):
        # project the gradient of one P2 basis function on a single 3-child
        # macro and compare with an independent dense least-squares solve
        mesh, part, space, rule = two_level_setup()
        childs = part.children[5]
        dof = space.element_dofs[childs[0], 4]  # an edge dof of the macro
        coeffs = np.zeros(space.ndof)
        coeffs[dof] = 1.0
        g = field_gradients(space, coeffs, rule)  # (nt, nq, 2)
        pg = local_project(mesh, part, P1DISC, rule, g)

        pts, w = quad_points_weights(mesh, rule, childs)
        A = np.column_stack([np.ones(len(pts)), pts[:, 0], pts[:, 1]])
        nq = len(rule.weights)
        for comp in range(2):
            rhs = g[childs, :, comp].ravel()
            z = np.linalg.solve(A.T @ (w[:, None] * A), A.T @ (w * rhs))
            want = (A @ z).reshape(len(childs), nq)
            assert np.abs(pg[childs, :, comp] - want).max() <= 1e-10


class TestAssembleLps:
    def test_pure_p1_one_level_is_zero(self):
        # element-constant gradients are killed by the P0 projector; this is
        # why the bubble enrichment exists
        mesh, part, space, rule = one_level_setup(kind=P1)
        S = assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)
        assert S.nnz == 0 or np.abs(S.data).max() <= 1e-28

    def test_bubble_gives_nonzero_bubble_block(self):
        mesh, part, space, rule = one_level_setup()
        S = assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)
        bubble = np.arange(space.n_nodal, space.ndof)
        assert np.abs(S.diagonal()[bubble]).max() > 1e-6

    @pytest.mark.parametrize("setup,cfg", [
        (one_level_setup, LpsConfig("one_level", P0DISC)),
        (two_level_setup, LpsConfig("two_level", P1DISC)),
    ])
    def test_global_linear_in_kernel(self, setup, cfg):
        mesh, part, space, rule = setup()
        f = lambda p: 0.4 - 0.9 * p[:, 0] + 0.35 * p[:, 1]
        space_free = build_space(mesh, space.kind, dirichlet=False)
        c = interpolate(space_free, f)
        S_free = assemble_lps(space_free, part, cfg, rule)
        r = S_free @ c.coeffs
        assert np.abs(r).max() <= 1e-12

    def test_exactly_symmetric(self):
        mesh, part, space, rule = two_level_setup()
        S = assemble_lps(space, part, LpsConfig("two_level", P1DISC), rule)
        d = (S - S.T).tocoo()
        assert d.nnz == 0 or np.abs(d.data).max() == 0.0

    def test_psd_and_pointwise_recomputation(self):
        mesh, part, space, rule = two_level_setup()
        cfg = LpsConfig("two_level", P1DISC)
        S = assemble_lps(space, part, cfg, rule)
        rng = np.random.default_rng(12)
        scale = np.abs(S.data).max()
        for _ in range(100):
            x = rng.standard_normal(space.ndof)
            x[space.boundary_dof] = 0.0
            q = x @ (S @ x)
            assert q >= -1e-12 * scale
            g = field_gradients(space, x, rule)
            kg = g - local_project(mesh, part, P1DISC, rule, g)
            per_el = np.einsum("kq,kqd,kqd->k",
                               mesh.det_b[:, None] * rule.weights[None], kg, kg)
            want = float(np.sum(part.tau * per_el[part.children].sum(axis=1)))
            assert q == pytest.approx(want, rel=1e-11, abs=1e-13)

    def test_dirichlet_rows_masked(self):
        mesh, part, space, rule = one_level_setup()
        S = assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)
        bd = np.flatnonzero(space.boundary_dof)
        assert np.abs(S[bd].toarray()).max() == 0.0
        assert np.abs(S[:, bd].toarray()).max() == 0.0


class TestNuAdd:
    def test_zero_field(self):
        mesh, part, space, rule = one_level_setup()
        c = interpolate(space, lambda p: np.zeros(len(p)))
        assert nu_add(c, part, LpsConfig("one_level", P0DISC), rule) == 0.0

    def test_global_linear(self):
        mesh, part, _, rule = one_level_setup()
        space = build_space(mesh, P1BUBBLE, dirichlet=False)
        c = interpolate(space, lambda p: 1.0 + 2.0 * p[:, 0] - 3.0 * p[:, 1])
        assert nu_add(c, part, LpsConfig("one_level", P0DISC), rule) <= 1e-13

    def test_matches_recomputation(self):
        mesh, part, space, rule = two_level_setup()
        cfg = LpsConfig("two_level", P1DISC)
        rng = np.random.default_rng(21)
        coeffs = rng.standard_normal(space.ndof)
        coeffs[space.boundary_dof] = 0.0
        from lgfem.transport import Field
        c = Field(space, coeffs, 0.0)
        got = nu_add(c, part, cfg, rule)
        g = field_gradients(space, coeffs, rule)
        kg = g - local_project(mesh, part, P1DISC, rule, g)
        wq = mesh.det_b[:, None] * rule.weights[None]
        num = float(np.sum(part.tau
                           * np.einsum("kq,kqd,kqd->k", wq, kg, kg)[part.children].sum(axis=1)))
        den = float(np.einsum("kq,kqd,kqd->", wq, g, g))
        assert got == pytest.approx(num / den, rel=1e-11)


class TestLpsStep:
    def test_tau_zero_reduces_to_plain_step(self):
        # ten transported steps with tau = 0 must match the unstabilized
        # scheme to solver tolerance
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 8)
        part = build_macro_partition(mesh, level="one", tau_rule=lambda h: 0.0 * h)
        space = build_space(mesh, P1BUBBLE, dirichlet=True)
        rule = get_rule(16)
        M = assemble_mass(space, rule)
        S = assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)
        vel = rigid_rotation(2 * np.pi)
        c_lg = c_lps = project_l2(space, hump_ic, rule)
        for _ in range(10):
            c_lg = lg_step(c_lg, vel, 0.01, rule, M)
            c_lps = lps_step(c_lps, vel, 0.01, rule, M, S)
        denom = np.linalg.norm(c_lg.coeffs)
        assert np.linalg.norm(c_lps.coeffs - c_lg.coeffs) <= 1e-10 * denom

    def test_zero_velocity_never_grows(self):
        from lgfem.characteristics import custom_field
        mesh, part, space, rule = one_level_setup(n=8)
        M = assemble_mass(space, rule)
        S = assemble_lps(space, part, LpsConfig("one_level", P0DISC), rule)
        vel = custom_field(lambda pts, t: np.zeros_like(pts), divergence_free=True)
        c0 = project_l2(space, hump_ic, rule)
        c1 = lps_step(c0, vel, 0.01, rule, M, S)
        n0 = np.sqrt(c0.coeffs @ (M @ c0.coeffs))
        n1 = np.sqrt(c1.coeffs @ (M @ c1.coeffs))
        assert n1 <= n0 + 1e-10

    @pytest.mark.parametrize("variant", ["one_level", "two_level"])
    def test_hundred_step_triple_norm_inequality(self, variant):
        # ||c^N||^2 + dt sum S(c^j,c^j) + sum ||c^j - c*||_q^2 <= ||c^0||^2
        # up to tiny slack: stabilization only adds dissipation
        if variant == "one_level":
            mesh, part, space, rule = one_level_setup(n=10)
            cfg = LpsConfig("one_level", P0DISC)
        else:
            mesh, part, space, rule = two_level_setup(n=6)
            cfg = LpsConfig("two_level", P1DISC)
        M = assemble_mass(space, rule)
        S = assemble_lps(space, part, cfg, rule)
        dt = 1e-3
        asm = TransportAssembler(space, rigid_rotation(2 * np.pi), dt, rule)
        c0 = project_l2(space, hump_ic, rule)
        norm0_sq = c0.coeffs @ (M @ c0.coeffs)
        A = (M + dt * S).tocsr()
        coeffs = c0.coeffs
        diss_sum = stab_sum = 0.0
        for n in range(1, 101):
            b, cstar = asm.rhs(coeffs, n * dt)
            coeffs = solve_spd(A, b)
            diss_sum += quad_norm_sq(mesh, rule, asm.dest_values(coeffs) - cstar)
            stab_sum += dt * (coeffs @ (S @ coeffs))
        lhs = coeffs @ (M @ coeffs) + stab_sum + diss_sum
        assert lhs <= norm0_sq * (1.0 + 1e-8)
