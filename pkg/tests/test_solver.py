import numpy as np
import pytest

from fraktur.anisotropy import AnisotropyParams
from fraktur.assembly import FemSpace, SimState, assemble_displacement_system, energy
from fraktur.materials import ModelFamily, ModelSpec
from fraktur.mesh import BoundaryTag, DomainSpec, boundary_nodes, build_slit_domain, single_slit
from fraktur.solver import (
    LoadProgram,
    SolverError,
    StaggeredParams,
    TrustRegionParams,
    crack_tip_estimate,
    penalty_lambda_hat,
    run_load_program,
    solve_alpha_convex,
    solve_displacement,
    staggered_solve,
    tr_radius_update,
    trust_region_alpha,
)


@pytest.fixture(scope="module")
def coarse_square():
    mesh = build_slit_domain(DomainSpec(a=0.5, h_min=0.0625, h_max=0.0625))
    return mesh, FemSpace(mesh)


@pytest.fixture(scope="module")
def small_slit():
    mesh = build_slit_domain(single_slit(a=1.0, ell=0.2, h_min=0.05, h_max=0.2))
    return mesh, FemSpace(mesh)


class TestPenaltyLambda:
    def test_at2_value(self):
        assert penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.04, 0.01) == pytest.approx(249975.0)

    def test_at1_value(self):
        assert penalty_lambda_hat(ModelFamily.AT1, 1.0, 0.04, 0.01) == pytest.approx(105468.75)

    def test_focardi_families_share_at2_estimate(self):
        for fam in (ModelFamily.FOC2, ModelFamily.FOC4):
            assert penalty_lambda_hat(fam, 1.0, 0.04, 0.01) == pytest.approx(249975.0)

    def test_tolerance_one_limit(self):
        assert penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.04, 0.999999999) == pytest.approx(0.0, abs=1e-6)

    def test_range_checked(self):
        with pytest.raises(ValueError):
            penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.04, 0.0)


class TestSolveDisplacement:
    def test_identity_like_system(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        bc = {i: 0.0 for i in range(n) if mesh.vertices[i, 1] == 0.0}
        bc.update({i: 1.0 for i in range(n) if mesh.vertices[i, 1] == 1.0})
        system = assemble_displacement_system(space, np.zeros(n), ModelSpec.at2(0.1), 1.0, bc)
        u = solve_displacement(system)
        # linear ramp is the exact solution
        np.testing.assert_allclose(u, mesh.vertices[:, 1], atol=1e-10)

    def test_zero_rhs_zero_solution(self, coarse_square):
        mesh, space = coarse_square
        bc = {i: 0.0 for i in range(mesh.n_vertices) if mesh.vertices[i, 1] in (0.0, 1.0)}
        system = assemble_displacement_system(space, np.zeros(mesh.n_vertices), ModelSpec.at2(0.1), 1.0, bc)
        np.testing.assert_array_equal(solve_displacement(system), np.zeros(mesh.n_vertices))

    def test_antisymmetric_field_on_slit_square(self):
        # symmetric uniform mesh + antisymmetric data => antisymmetric field
        mesh = build_slit_domain(
            DomainSpec(
                a=1.0,
                h_min=0.125,
                h_max=0.125,
                slits=(((1.0, 1.5), (1.0, 2.0)),),
                dirichlet_segments=(
                    (BoundaryTag.DIRICHLET_MINUS, ((0.0, 2.0), (1.0, 2.0))),
                    (BoundaryTag.DIRICHLET_PLUS, ((1.0, 2.0), (2.0, 2.0))),
                ),
            )
        )
        space = FemSpace(mesh)
        bc = {i: -0.1 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS)}
        bc.update({i: +0.1 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_PLUS)})
        u = solve_displacement(
            assemble_displacement_system(space, np.zeros(mesh.n_vertices), ModelSpec.at2(0.1), 1.0, bc)
        )
        coord_to_node = {}
        for i, (x, y) in enumerate(mesh.vertices):
            coord_to_node.setdefault((round(x, 12), round(y, 12)), []).append(i)
        worst = 0.0
        for (x, y), nodes in coord_to_node.items():
            mirror = coord_to_node.get((round(2.0 - x, 12), y))
            if mirror is None:
                continue
            vals = sorted(u[i] for i in nodes)
            mvals = sorted(-u[j] for j in mirror)
            worst = max(worst, max(abs(a - b) for a, b in zip(vals, mvals)))
        assert worst <= 1e-8


class TestSolveAlphaConvex:
    def test_unloaded_stays_zero(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        state = SimState.zero(n)
        alpha = solve_alpha_convex(space, state, ModelSpec.at2(0.1), 1.0, 1e4)
        np.testing.assert_array_equal(alpha, np.zeros(n))

    def test_uniform_strain_matches_homogeneous_relation(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        model = ModelSpec.at2(0.1)
        s = 1.2
        state = SimState(s * mesh.vertices[:, 0], np.zeros(n), np.zeros(n))
        lam = penalty_lambda_hat(ModelFamily.AT2, 1.0, model.ell, 0.01)
        alpha = solve_alpha_convex(space, state, model, 1.0, lam)
        eps_bar_sq = 2.0 * (0.5 * s * s) * model.ell / model.g0
        expected = eps_bar_sq / (1.0 + eps_bar_sq)
        # uniform solution solves the discrete problem exactly (natural BCs)
        np.testing.assert_allclose(alpha, expected, rtol=1e-2)
        assert abs(np.median(alpha) - expected) <= 0.01 * expected

    def test_unique_solution_from_different_guesses(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        rng = np.random.default_rng(0)
        state = SimState(rng.normal(0, 0.5, n), np.zeros(n), np.zeros(n))
        model = ModelSpec.foc2(0.1, anisotropy=AnisotropyParams(2, 0.7, 0.3))
        lam = 1e4
        a1 = solve_alpha_convex(space, state, model, 1.0, lam)
        a2 = solve_alpha_convex(space, state, model, 1.0, lam, initial=np.full(n, 0.9))
        assert np.abs(a1 - a2).max() <= 1e-8

    def test_foc2_tau_zero_matches_at2(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        rng = np.random.default_rng(1)
        state = SimState(rng.normal(0, 0.6, n), np.zeros(n), np.zeros(n))
        lam = 1e4
        a_at2 = solve_alpha_convex(space, state, ModelSpec.at2(0.1), 1.0, lam)
        a_foc2 = solve_alpha_convex(space, state, ModelSpec.foc2(0.1), 1.0, lam)
        assert np.abs(a_at2 - a_foc2).max() <= 1e-10

    def test_energy_never_increases(self, coarse_square):
        mesh, space = coarse_square
        n = mesh.n_vertices
        rng = np.random.default_rng(2)
        state = SimState(rng.normal(0, 0.5, n), rng.uniform(0, 0.5, n), np.zeros(n))
        model = ModelSpec.at2(0.1)
        e0 = energy(space, state, model, 1.0, 1e4).total
        alpha = solve_alpha_convex(space, state, model, 1.0, 1e4)
        e1 = energy(space, SimState(state.u, alpha, state.alpha_prev), model, 1.0, 1e4).total
        assert e1 <= e0 + 1e-12

    def test_foc4_rejected(self, coarse_square):
        _, space = coarse_square
        with pytest.raises(ValueError):
            solve_alpha_convex(space, SimState.zero(space.n_nodes), ModelSpec.foc4(0.1), 1.0, 1e4)


class TestTrustRegion:
    def test_radius_update_rule(self):
        tr = TrustRegionParams()
        assert tr_radius_update(0.1, 0.01, tr) == (False, 0.005)
        assert tr_radius_update(0.5, 0.01, tr) == (True, 0.01)
        assert tr_radius_update(0.9, 0.01, tr) == (True, 0.02)
        assert tr_radius_update(-2.0, 0.01, tr) == (False, 0.005)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            TrustRegionParams(eta1=0.8, eta2=0.75)
        with pytest.raises(ValueError):
            TrustRegionParams(shrink=1.5)

    def test_exactly_quadratic_model_gives_unit_ratio(self, coarse_square):
        # AT2 energy is quadratic in alpha; with the penalty off the first
        # step from a near-minimum start has rho = 1 and grows the radius
        mesh, space = coarse_square
        n = mesh.n_vertices
        model = ModelSpec.at2(0.1)
        state0 = SimState(1.2 * mesh.vertices[:, 0], np.zeros(n), np.full(n, -10.0))
        alpha_star = solve_alpha_convex(space, state0, model, 1.0, 0.0)
        rng = np.random.default_rng(3)
        start = np.clip(alpha_star + rng.uniform(-4e-4, 4e-4, n), 0.0, 1.0)
        res = trust_region_alpha(
            space, SimState(state0.u, start, state0.alpha_prev), model, 1.0, 0.0, TrustRegionParams()
        )
        rho0, radius_after, accepted = res.log[0]
        assert accepted
        assert rho0 == pytest.approx(1.0, abs=1e-6)
        assert radius_after == pytest.approx(0.02)
        assert np.abs(res.alpha - alpha_star).max() <= 1e-8

    def test_descent_on_loaded_slit(self, small_slit):
        mesh, space = small_slit
        n = mesh.n_vertices
        model = ModelSpec.foc4(0.2)
        lam = penalty_lambda_hat(ModelFamily.FOC4, 1.0, 0.2, 0.01)
        bc = {i: -1.8 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS)}
        bc.update({i: +1.8 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_PLUS)})
        u = solve_displacement(assemble_displacement_system(space, np.zeros(n), model, 1.0, bc))
        res = trust_region_alpha(space, SimState(u, np.zeros(n), np.zeros(n)), model, 1.0, lam, TrustRegionParams())
        assert res.n_accepted > 0, "expected nucleation at this load"
        diffs = np.diff(res.energies)
        assert np.all(diffs <= 0.0)
        assert res.alpha.max() > 0.5
        assert res.alpha.min() >= -1e-6

    def test_unloaded_flat_state_returns_unchanged(self, small_slit):
        mesh, space = small_slit
        n = mesh.n_vertices
        model = ModelSpec.foc4(0.2)
        res = trust_region_alpha(space, SimState.zero(n), model, 1.0, 1e4, TrustRegionParams())
        assert res.converged
        np.testing.assert_array_equal(res.alpha, np.zeros(n))


class TestStaggered:
    def test_zero_load_converges_in_one_iteration(self, small_slit):
        mesh, space = small_slit
        model = ModelSpec.at2(0.2)
        stag = StaggeredParams(
            tol_stag=1e-5,
            lambda_hat=penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.2, 0.01),
        )
        bc = {i: 0.0 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS)}
        bc.update({i: 0.0 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_PLUS)})
        state, report = staggered_solve(space, SimState.zero(mesh.n_vertices), model, 1.0, bc, stag)
        assert report.converged
        assert report.iterations == 1
        assert state.alpha.max() == 0.0

    def test_energy_trace_non_increasing(self, small_slit):
        mesh, space = small_slit
        model = ModelSpec.at2(0.2)
        stag = StaggeredParams(
            tol_stag=1e-5,
            lambda_hat=penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.2, 0.01),
        )
        bc = {i: -0.9 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS)}
        bc.update({i: +0.9 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_PLUS)})
        state, report = staggered_solve(space, SimState.zero(mesh.n_vertices), model, 1.0, bc, stag)
        totals = [e.total for e in report.energies]
        assert all(b <= a + 1e-12 for a, b in zip(totals, totals[1:]))
        assert report.converged

    def test_unresolved_params_rejected(self, small_slit):
        mesh, space = small_slit
        with pytest.raises(ValueError):
            staggered_solve(space, SimState.zero(mesh.n_vertices), ModelSpec.at2(0.2), 1.0, {0: 0.0}, StaggeredParams())

    def test_order_validation(self):
        with pytest.raises(ValueError):
            StaggeredParams(order="sideways")

    def test_abort_flag_raises_on_nonconvergence(self, small_slit):
        mesh, space = small_slit
        model = ModelSpec.at2(0.2)
        stag = StaggeredParams(
            tol_stag=1e-14,  # unreachable
            max_iters=3,
            lambda_hat=penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.2, 0.01),
            abort_on_nonconverged=True,
        )
        bc = {i: -0.9 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_MINUS)}
        bc.update({i: +0.9 for i in boundary_nodes(mesh, BoundaryTag.DIRICHLET_PLUS)})
        with pytest.raises(SolverError):
            staggered_solve(space, SimState.zero(mesh.n_vertices), model, 1.0, bc, stag)
        # same setup without the flag returns a non-converged report
        stag_soft = StaggeredParams(
            tol_stag=1e-14,
            max_iters=3,
            lambda_hat=penalty_lambda_hat(ModelFamily.AT2, 1.0, 0.2, 0.01),
        )
        _, report = staggered_solve(space, SimState.zero(mesh.n_vertices), model, 1.0, bc, stag_soft)
        assert not report.converged


class TestLoadProgram:
    def test_validation(self):
        with pytest.raises(ValueError):
            LoadProgram(delta_u=0.0, n_steps=3)

    def test_applied_displacement_schedule(self, small_slit):
        mesh, _ = small_slit
        model = ModelSpec.at2(0.2)
        hist = run_load_program(mesh, model, LoadProgram(0.1, 4), StaggeredParams(), notch_tip=(1.0, 1.5))
        assert [r.u_bar for r in hist.records] == pytest.approx([0.1, 0.2, 0.3, 0.4])
        assert all(r.converged for r in hist.records)
        # monotone load: accumulated surface energy never decreases
        surf = [r.energies.surface for r in hist.records]
        assert all(b >= a - 1e-9 for a, b in zip(surf, surf[1:]))

    def test_irreversibility_enforced(self, small_slit):
        mesh, _ = small_slit
        hist = run_load_program(mesh, ModelSpec.at2(0.2), LoadProgram(0.2, 5), StaggeredParams(), notch_tip=(1.0, 1.5))
        assert all(r.irreversibility_violation <= 0.01 + 1e-12 for r in hist.records if r.converged)

    def test_determinism(self, small_slit):
        mesh, _ = small_slit
        model = ModelSpec.foc2(0.2, anisotropy=AnisotropyParams(2, 0.5, 0.7))
        h1 = run_load_program(mesh, model, LoadProgram(0.3, 3), StaggeredParams(), notch_tip=(1.0, 1.5))
        h2 = run_load_program(mesh, model, LoadProgram(0.3, 3), StaggeredParams(), notch_tip=(1.0, 1.5))
        np.testing.assert_array_equal(h1.state.alpha, h2.state.alpha)
        np.testing.assert_array_equal(h1.state.u, h2.state.u)
        assert [r.energies.total for r in h1.records] == [r.energies.total for r in h2.records]


class TestCrackTip:
    def test_no_crack_returns_notch(self, small_slit):
        mesh, _ = small_slit
        tip = crack_tip_estimate(mesh, np.zeros(mesh.n_vertices), (1.0, 1.5))
        assert tip == (1.0, 1.5)

    def test_synthetic_path(self, small_slit):
        mesh, _ = small_slit
        # paint a vertical high-alpha path from the notch tip downward
        alpha = np.zeros(mesh.n_vertices)
        on_path = (np.abs(mesh.vertices[:, 0] - 1.0) < 0.08) & (mesh.vertices[:, 1] <= 1.5) & (
            mesh.vertices[:, 1] >= 0.7
        )
        alpha[on_path] = 1.0
        x, y = crack_tip_estimate(mesh, alpha, (1.0, 1.5))
        assert y == pytest.approx(0.7, abs=0.1)
        assert abs(x - 1.0) <= 0.1
