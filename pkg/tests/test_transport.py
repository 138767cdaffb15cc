"""Transport machinery: mass matrices, transported right-hand sides, the CG
solver, and single Lagrange-Galerkin steps.

Oracles:
  - closed-form P1 local mass |K|/12 [[2,1,1],[1,2,1],[1,1,2]] assembled
    globally by hand;
  - composite-quadrature ground truth for the transported right-hand side
    (each element split into 256 congruent sub-triangles, 42-point rule on
    each; good to ~1e-6 of itself on smooth data);
  - dense numpy factorization for the CG solver.
"""

import numpy as np
import pytest
import scipy.sparse as sp

from lgfem.characteristics import custom_field, rigid_rotation, trace_back
from lgfem.elements import P1, P1BUBBLE, P2, basis_values, get_rule
from lgfem.mesh import Rect, build_uniform_mesh, locate_batch
from lgfem.problems import hump_ic
from lgfem.space import build_space
from lgfem.transport import (
    ConvergenceError,
    Field,
    TransportAssembler,
    assemble_mass,
    assemble_transport_rhs,
    evaluate_field,
    interpolate,
    lg_step,
    project_l2,
    quad_norm_sq,
    solve_spd,
)


def zero_velocity():
    return custom_field(lambda pts, t: np.zeros_like(pts), divergence_free=True)


def rel_l2(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


@pytest.fixture
def unit_square_2():
    return build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 2)


class TestField:
    def test_coefficient_count_enforced(self, unit_square_2):
        space = build_space(unit_square_2, P1)
        with pytest.raises(ValueError):
            Field(space, np.zeros(5), 0.0)

    def test_dirichlet_boundary_must_vanish(self, unit_square_2):
        space = build_space(unit_square_2, P1, dirichlet=True)
        with pytest.raises(ValueError):
            Field(space, np.ones(space.ndof), 0.0)
        Field(space, np.where(space.free, 1.0, 0.0), 0.0)  # fine

    def test_unconstrained_allows_any_values(self, unit_square_2):
        space = build_space(unit_square_2, P1, dirichlet=False)
        Field(space, np.ones(space.ndof), 0.0)


class TestAssembleMass:
    def test_partition_of_unity_sum(self):
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 1)
        space = build_space(mesh, P1, dirichlet=False)
        M = assemble_mass(space, get_rule(7))
        assert abs(M.sum() - 1.0) <= 1e-14

    def test_p2_sum_is_area(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 3)
        space = build_space(mesh, P2, dirichlet=False)
        M = assemble_mass(space, get_rule(12))
        assert abs(M.sum() - 4.0) <= 1e-13

    def test_hand_assembled_p1_oracle(self):
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 1)
        space = build_space(mesh, P1, dirichlet=False)
        M = assemble_mass(space, get_rule(7)).toarray()
        local = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])
        hand = np.zeros((space.ndof, space.ndof))
        for k, tri in enumerate(mesh.triangles):
            area = 0.5 * mesh.det_b[k]
            hand[np.ix_(tri, tri)] += area / 12.0 * local
        assert np.abs(M - hand).max() <= 1e-15

    def test_symmetry(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 4)
        space = build_space(mesh, P2, dirichlet=False)
        M = assemble_mass(space, get_rule(12))
        d = np.abs((M - M.T).toarray()).max()
        assert d <= 1e-13 * np.abs(M.toarray()).max()

    def test_dirichlet_rows_are_identity(self, unit_square_2):
        space = build_space(unit_square_2, P1, dirichlet=True)
        M = assemble_mass(space, get_rule(7)).toarray()
        for i in np.flatnonzero(space.boundary_dof):
            expect = np.zeros(space.ndof)
            expect[i] = 1.0
            assert np.array_equal(M[i], expect)
            assert np.array_equal(M[:, i], expect)
        assert np.linalg.eigvalsh(M).min() > 0

    def test_exactness_refusal(self, unit_square_2):
        bubble = build_space(unit_square_2, P1BUBBLE, dirichlet=False)
        with pytest.raises(ValueError):
            assemble_mass(bubble, get_rule(7))  # bubble products are degree 6
        assemble_mass(bubble, get_rule(12))
        assemble_mass(build_space(unit_square_2, P2, dirichlet=False), get_rule(7))


class TestFieldOps:
    def linear(self, pts):
        pts = np.atleast_2d(pts)
        return 2.0 * pts[:, 0] - 3.0 * pts[:, 1] + 0.5

    @pytest.mark.parametrize("kind", [P1, P2, P1BUBBLE])
    def test_interpolate_linear_exact(self, kind):
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 3)
        space = build_space(mesh, kind, dirichlet=False)
        c = interpolate(space, self.linear)
        pts = np.random.default_rng(1).uniform(0, 1, size=(100, 2))
        assert np.abs(evaluate_field(c, pts) - self.linear(pts)).max() <= 1e-13

    def test_interpolate_p2_quadratic_exact(self):
        f = lambda p: np.atleast_2d(p)[:, 0] ** 2 - np.atleast_2d(p)[:, 0] * np.atleast_2d(p)[:, 1]
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 3)
        space = build_space(mesh, P2, dirichlet=False)
        c = interpolate(space, f)
        pts = np.random.default_rng(2).uniform(0, 1, size=(100, 2))
        assert np.abs(evaluate_field(c, pts) - f(pts)).max() <= 1e-13

    def test_evaluate_at_dof_coords(self):
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 3)
        space = build_space(mesh, P2, dirichlet=False)
        rng = np.random.default_rng(3)
        c = Field(space, rng.standard_normal(space.ndof), 0.0)
        got = evaluate_field(c, space.dof_coords)
        assert np.abs(got - c.coeffs).max() <= 1e-12

    def test_project_reproduces_member(self):
        mesh = build_uniform_mesh(Rect(0.0, 0.0, 1.0, 1.0), 3)
        space = build_space(mesh, P1, dirichlet=False)
        ci = interpolate(space, self.linear)
        cp = project_l2(space, self.linear, get_rule(7))
        assert np.abs(cp.coeffs - ci.coeffs).max() <= 1e-10

    def test_project_dirichlet_boundary_zero(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 8)
        space = build_space(mesh, P1, dirichlet=True)
        c = project_l2(space, hump_ic, get_rule(12))
        assert not c.coeffs[space.boundary_dof].any()

    def test_quad_norm_matches_mass_quadratic_form(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 4)
        space = build_space(mesh, P2, dirichlet=False)
        rule = get_rule(12)
        M = assemble_mass(space, rule)
        rng = np.random.default_rng(4)
        coeffs = rng.standard_normal(space.ndof)
        asm = TransportAssembler(space, rigid_rotation(2 * np.pi), 0.01, rule)
        vals = asm.dest_values(coeffs)
        got = quad_norm_sq(mesh, rule, vals)
        want = coeffs @ (M @ coeffs)
        assert abs(got - want) <= 1e-13 * abs(want)


class TestTransportRhs:
    def test_zero_velocity_is_mass_apply(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 8)
        rule = get_rule(12)
        space = build_space(mesh, P1, dirichlet=True)
        c = project_l2(space, hump_ic, rule)
        M = assemble_mass(space, rule)
        b = assemble_transport_rhs(c, zero_velocity(), 0.01, rule, mesh)
        assert rel_l2(b, M @ c.coeffs) <= 1e-13

    def test_zero_velocity_unconstrained(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 6)
        rule = get_rule(12)
        space = build_space(mesh, P2, dirichlet=False)
        f = lambda p: np.sin(np.atleast_2d(p)[:, 0]) * np.cos(np.atleast_2d(p)[:, 1])
        c = interpolate(space, f)
        M = assemble_mass(space, rule)
        b = assemble_transport_rhs(c, zero_velocity(), 0.02, rule, mesh)
        assert rel_l2(b, M @ c.coeffs) <= 1e-13

    def test_constant_gives_basis_integrals(self, unit_square_2):
        space = build_space(unit_square_2, P1, dirichlet=False)
        c = Field(space, np.ones(space.ndof), 0.0)
        b = assemble_transport_rhs(c, zero_velocity(), 0.01, get_rule(7), unit_square_2)
        # integral of each P1 hat = (area of its vertex star) / 3
        star_areas = np.zeros(space.ndof)
        for k, tri in enumerate(unit_square_2.triangles):
            star_areas[tri] += 0.5 * unit_square_2.det_b[k] / 3.0
        assert np.abs(b - star_areas).max() <= 1e-15

    # The single-rule rhs differs from ground truth only inside destination
    # elements cut by preimages of source-element edges, where the composed
    # integrand has gradient kinks. The cut fraction scales with the
    # displacement, so the smooth-field bound is checked at a one-step
    # displacement; the quarter-turn hump case is recorded, not bounded.

    def test_smooth_field_matches_composite_oracle(self):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 16)  # 512 elements
        vel = rigid_rotation(2 * np.pi)
        f = lambda p: np.sin(0.5 * np.pi * p[:, 0]) * np.sin(0.5 * np.pi * p[:, 1])
        for kind in (P1, P2):
            space = build_space(mesh, kind, dirichlet=False)
            c = interpolate(space, f)
            oracle = composite_rhs_oracle(c, vel, 0.01, mesh, space)
            b42 = assemble_transport_rhs(c, vel, 0.01, get_rule(42), mesh)
            d = rel_l2(b42, oracle)
            print(f"42-point rhs vs composite oracle, {kind.tag}: rel l2 {d:.3e}")
            assert d <= 1e-4

    def test_affinely_composed_polynomial_is_exact(self):
        # rotation is affine, so a global polynomial of the element degree
        # composes to another representable polynomial: every quadrature
        # in sight is exact and the rhs must match ground truth to roundoff
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 16)
        vel = rigid_rotation(2 * np.pi)  # dt=0.25 is a quarter turn: the
        cases = [                        # square maps onto itself, no clamping
            (P1, lambda p: 0.3 + 0.7 * p[:, 0] - 0.4 * p[:, 1]),
            (P2, lambda p: 0.2 + 0.5 * p[:, 0] - 0.3 * p[:, 1]
                 + 0.8 * p[:, 0] * p[:, 1] + 0.6 * p[:, 0] ** 2 - 0.2 * p[:, 1] ** 2),
        ]
        for kind, f in cases:
            space = build_space(mesh, kind, dirichlet=False)
            c = interpolate(space, f)
            oracle = composite_rhs_oracle(c, vel, 0.25, mesh, space)
            b42 = assemble_transport_rhs(c, vel, 0.25, get_rule(42), mesh)
            assert rel_l2(b42, oracle) <= 1e-12

    def test_oracle_self_consistency(self):
        # halving the subdivision moves the oracle by less than 1e-6 of
        # itself, so the 256-subdivision value is ground truth at that level
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 16)
        vel = rigid_rotation(2 * np.pi)
        space = build_space(mesh, P1, dirichlet=False)
        f = lambda p: np.sin(0.5 * np.pi * p[:, 0]) * np.sin(0.5 * np.pi * p[:, 1])
        c = interpolate(space, f)
        o16 = composite_rhs_oracle(c, vel, 0.01, mesh, space, nsub=16)
        o8 = composite_rhs_oracle(c, vel, 0.01, mesh, space, nsub=8)
        d = rel_l2(o16, o8)
        print(f"oracle nsub=16 vs nsub=8: rel l2 {d:.3e}")
        assert d <= 1e-6

    def test_hump_quarter_turn_recorded(self):
        # kinked interpolant at a quarter-turn displacement: single-rule
        # quadrature error is recorded for both rules, bounded only loosely
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 16)
        space = build_space(mesh, P1, dirichlet=True)
        c = interpolate(space, hump_ic)
        vel = rigid_rotation(2 * np.pi)
        oracle = composite_rhs_oracle(c, vel, 0.25, mesh, space)
        b42 = assemble_transport_rhs(c, vel, 0.25, get_rule(42), mesh)
        b7 = assemble_transport_rhs(c, vel, 0.25, get_rule(7), mesh)
        d42, d7 = rel_l2(b42, oracle), rel_l2(b7, oracle)
        print(f"hump quarter turn vs oracle: 42-point {d42:.3e}, 7-point {d7:.3e}")
        assert np.isfinite(d42) and d42 < 0.1
        assert np.isfinite(d7) and d7 < 0.1


def composite_rhs_oracle(c_prev, vel, dt, mesh, space, nsub=16):
    """Ground-truth transported RHS: 256 congruent sub-triangles per element,
    42-point rule on each."""
    rule = get_rule(42)
    base = rule.points_ref
    sub_pts, sub_w = [], []
    for i in range(nsub):
        for j in range(nsub - i):
            sub_pts.append(np.array([i, j]) / nsub + base / nsub)
            sub_w.append(rule.weights / nsub**2)
            if i + j <= nsub - 2:
                sub_pts.append(np.array([i + 1, j + 1]) / nsub - base / nsub)
                sub_w.append(rule.weights / nsub**2)
    ref = np.vstack(sub_pts)          # (256*42, 2) reference coords
    w = np.concatenate(sub_w)         # (256*42,)
    phi = basis_values(space.kind, ref)  # (nl, npts)
    nl, npts = phi.shape
    b = np.zeros(space.ndof)
    t_n = dt
    chunk = 32
    for k0 in range(0, len(mesh.triangles), chunk):
        ks = np.arange(k0, min(k0 + chunk, len(mesh.triangles)))
        phys = mesh.b_off[ks, None, :] + ref[None] @ np.swapaxes(mesh.b_mat[ks], 1, 2)
        feet = trace_back(vel, phys.reshape(-1, 2), t_n, dt)
        el, bary = locate_batch(mesh, feet)
        vals = basis_values(space.kind, bary[:, 1:])  # (nl, chunk*npts)
        cstar = np.einsum("ip,pi->p", vals, c_prev.coeffs[space.element_dofs[el]])
        cstar = cstar.reshape(len(ks), npts)
        b_loc = mesh.det_b[ks, None] * ((w[None] * cstar) @ phi.T)  # (chunk, nl)
        np.add.at(b, space.element_dofs[ks], b_loc)
    if space.dirichlet:
        b[space.boundary_dof] = 0.0
    return b


class TestSolveSpd:
    def test_identity(self):
        rng = np.random.default_rng(5)
        b = rng.standard_normal(30)
        x = solve_spd(sp.identity(30, format="csr"), b)
        assert np.abs(x - b).max() <= 1e-14

    def test_zero_rhs(self):
        A = sp.identity(10, format="csr")
        assert np.array_equal(solve_spd(A, np.zeros(10)), np.zeros(10))

    def test_random_spd_against_dense_oracle(self):
        rng = np.random.default_rng(6)
        G = rng.standard_normal((50, 50))
        A = G.T @ G + np.eye(50)
        b = rng.standard_normal(50)
        want = np.linalg.solve(A, b)
        got = solve_spd(sp.csr_matrix(A), b)
        assert np.abs(got - want).max() <= 1e-9

    def test_iteration_cap(self):
        # condition number ~1e12 pins the attainable residual far above the
        # requested 1e-30, so the iteration cap must trip
        rng = np.random.default_rng(7)
        Q, _ = np.linalg.qr(rng.standard_normal((40, 40)))
        A = sp.csr_matrix((Q * np.logspace(0, -12, 40)) @ Q.T)
        with pytest.raises(ConvergenceError):
            solve_spd(A, rng.standard_normal(40), tol=1e-30)


class TestLgStep:
    def setup_hump(self, n=8, kind=P1, points=12):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), n)
        rule = get_rule(points)
        space = build_space(mesh, kind, dirichlet=True)
        c0 = project_l2(space, hump_ic, rule)
        M = assemble_mass(space, rule)
        return mesh, rule, space, c0, M

    def test_zero_velocity_identity(self):
        _, rule, _, c0, M = self.setup_hump()
        c1 = lg_step(c0, zero_velocity(), 0.01, rule, M)
        assert rel_l2(c1.coeffs, c0.coeffs) <= 1e-10
        assert c1.t == pytest.approx(0.01)

    def test_projector_idempotent(self):
        _, rule, _, c0, M = self.setup_hump()
        c1 = lg_step(c0, zero_velocity(), 0.01, rule, M)
        c2 = lg_step(c1, zero_velocity(), 0.01, rule, M)
        assert rel_l2(c2.coeffs, c1.coeffs) <= 1e-9

    def test_galerkin_residual(self):
        mesh, rule, space, c0, M = self.setup_hump()
        vel = rigid_rotation(2 * np.pi)
        c1 = lg_step(c0, vel, 0.01, rule, M)
        b = assemble_transport_rhs(c0, vel, 0.01, rule, mesh)
        assert np.linalg.norm(M @ c1.coeffs - b) <= 1e-12 * np.linalg.norm(b)

    @pytest.mark.parametrize("kind,points", [(P1, 7), (P2, 12)])
    def test_constant_preserved_globally(self, kind, points):
        # an unconstrained space represents 1 exactly; feet that leave the
        # domain are clamped, where the field is still 1
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 8)
        rule = get_rule(points)
        space = build_space(mesh, kind, dirichlet=False)
        coeffs = np.zeros(space.ndof)
        coeffs[: space.n_nodal] = 1.0  # nodal dofs 1, enrichment dofs 0
        c0 = Field(space, coeffs, 0.0)
        M = assemble_mass(space, rule)
        c1 = lg_step(c0, rigid_rotation(2 * np.pi), 0.005, rule, M)
        assert np.abs(c1.coeffs - c0.coeffs).max() <= 1e-10


class TestStabilityIdentity:
    # Each step satisfies ||c^n||^2 + ||c^n - c*||_q^2 = ||c*||_q^2 by
    # Galerkin orthogonality (take v = c^n), with every term built from the
    # same quadrature values used in assembly; this holds to roundoff at any
    # step size. Telescoping additionally needs ||c*||_q^2 = ||c^{n-1}||^2,
    # which is a quadrature statement about the composed field: it is exact
    # only while no quadrature-point foot crosses an element edge, i.e. for
    # displacements below the smallest point-to-edge distance of the rule.

    def run_steps(self, kind, dt, nsteps=100):
        mesh = build_uniform_mesh(Rect(-1.0, -1.0, 1.0, 1.0), 20)
        rule = get_rule(42)
        space = build_space(mesh, kind, dirichlet=True)
        c0 = project_l2(space, hump_ic, rule)
        M = assemble_mass(space, rule)
        asm = TransportAssembler(space, rigid_rotation(2 * np.pi), dt, rule)
        norm0_sq = c0.coeffs @ (M @ c0.coeffs)
        coeffs = c0.coeffs
        diss_sum, alg_max = 0.0, 0.0
        for n in range(1, nsteps + 1):
            b, cstar = asm.rhs(coeffs, n * dt)
            star_sq = quad_norm_sq(mesh, rule, cstar)
            coeffs = solve_spd(M, b)
            norm_sq = coeffs @ (M @ coeffs)
            diss = quad_norm_sq(mesh, rule, asm.dest_values(coeffs) - cstar)
            diss_sum += diss
            alg_max = max(alg_max, abs(norm_sq + diss - star_sq))
        defect = abs(norm_sq + diss_sum - norm0_sq)
        return norm0_sq, alg_max, defect

    def test_per_step_identity_machine_precision(self):
        # large steps (feet cross many elements): the per-step identity is
        # algebraic and must still hold to roundoff
        norm0_sq, alg_max, _ = self.run_steps(P1, 1e-3)
        print(f"max per-step identity residual: {alg_max:.3e}")
        assert alg_max <= 1e-13 * norm0_sq

    @pytest.mark.parametrize("kind", [P1, P2])
    def test_telescoped_identity_small_steps(self, kind):
        # displacement ~8.9e-7 per step stays below the rule's point-to-edge
        # clearance (~7.7e-4 here), so the telescoped sum closes too
        norm0_sq, _, defect = self.run_steps(kind, 1e-7)
        print(f"telescoped defect: {defect:.3e} vs budget {1e-8 * norm0_sq:.3e}")
        assert defect <= 1e-8 * norm0_sq
