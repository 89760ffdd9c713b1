import numpy as np
import pytest

from lindblad_pc import (
    LindbladModel,
    assemble,
    compare,
    expm,
    fedorov_residual,
    generator_at,
    jump_operator,
    ode_oracle,
    parse_rate_expr,
    phase_state,
    propagate_closed_form,
    trace_distance,
    unvec,
    vec,
)
from lindblad_pc.model import Jump
from lindblad_pc.errors import GridMismatchError

from conftest import admissible_bank, diag_state, make_generator

GRID = np.linspace(0.0, 10.0, 201)


def constant_rate_model():
    jumps = [
        Jump(jump_operator(3, 2, 3), parse_rate_expr("0.4", {}), 3, 2),
        Jump(jump_operator(3, 1, 2), parse_rate_expr("0.9", {}), 2, 1),
    ]
    return assemble(LindbladModel(3, np.diag([-1.0, 0.0, 1.0]).astype(complex), jumps))


class TestClosedForm:
    def test_initial_state_is_returned_at_zero(self):
        g = make_generator("cascade3")
        rho0 = phase_state(3, [1, 2], [0.4])
        tr = propagate_closed_form(g, rho0, GRID)
        assert np.abs(tr.states[0] - rho0).max() == 0.0

    def test_v3_populations(self):
        g = make_generator("v3")
        tr = propagate_closed_form(g, diag_state(0.5, 0, 0.5), GRID)
        t = GRID
        p1 = 0.5 * np.exp((-2 * t + np.sin(2 * t)) / 4)
        p2 = 1 - np.exp(-t / 2) * np.cosh(np.sin(2 * t) / 4)
        p3 = 0.5 * np.exp(-(2 * t + np.sin(2 * t)) / 4)
        assert np.abs(tr.states[:, 0, 0].real - p1).max() <= 1e-12
        assert np.abs(tr.states[:, 1, 1].real - p2).max() <= 1e-12
        assert np.abs(tr.states[:, 2, 2].real - p3).max() <= 1e-12

    def test_cascade3_middle_level_decay(self):
        g = make_generator("cascade3")
        for p in (0.0, 0.35):
            tr = propagate_closed_form(g, diag_state(p, 1 - p, 0), GRID)
            xi = (1 - p) * np.exp(-(2 * GRID + np.sin(2 * GRID)) / 4)
            assert np.abs(tr.states[:, 1, 1].real - xi).max() <= 1e-12
            assert np.abs(tr.states[:, 0, 0].real - (1 - xi)).max() <= 1e-12
            assert np.abs(tr.states[:, 2, 2]).max() <= 1e-12

    def test_grid_must_start_at_zero(self):
        g = make_generator("v3")
        with pytest.raises(ValueError):
            propagate_closed_form(g, diag_state(1, 0, 0), np.linspace(1.0, 2.0, 5))


class TestOracle:
    def test_constant_generator_matches_semigroup(self):
        g = constant_rate_model()
        rho0 = diag_state(0.2, 0.5, 0.3)
        tr = ode_oracle(g, rho0, GRID)
        gen = generator_at(g, 0.0)
        for i in (50, 120, 200):
            expected = unvec(expm(GRID[i] * gen) @ vec(rho0), 3)
            assert np.abs(tr.states[i] - expected).max() <= 1e-8

    def test_matches_closed_form_for_commutative_model(self):
        g = make_generator("v3")
        rho0 = phase_state(3, [1, 3], [np.pi])
        closed = propagate_closed_form(g, rho0, GRID)
        oracle = ode_oracle(g, rho0, GRID)
        assert compare(closed, oracle) <= 1e-7

    def test_lambda3_lower_mixture_is_stationary(self):
        g = make_generator("lambda3")
        rho0 = diag_state(0.35, 0.0, 0.65)
        tr = ode_oracle(g, rho0, GRID)
        assert max(np.abs(tr.states[i] - rho0).max() for i in range(GRID.size)) <= 1e-9


class TestFedorovResidual:
    def test_small_on_admissible_vector(self):
        g = make_generator("cascade3")
        alpha = vec(diag_state(0.5, 0.5, 0.0))
        assert fedorov_residual(g, alpha, np.linspace(0, 5, 51)) <= 1e-6

    def test_large_on_inadmissible_vector(self):
        g = make_generator("cascade3")
        alpha = vec(diag_state(0.0, 0.0, 1.0))
        assert fedorov_residual(g, alpha, np.linspace(0, 5, 51)) > 1e-2

    def test_small_for_functionally_commutative_generator(self):
        g = make_generator("v3")
        rng = np.random.default_rng(30)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = a @ a.conj().T
        alpha = vec(rho / np.trace(rho))
        assert fedorov_residual(g, alpha, np.linspace(0, 5, 51)) <= 1e-6


class TestCompare:
    def test_identical_trajectories(self):
        g = make_generator("v3")
        tr = propagate_closed_form(g, diag_state(0.5, 0, 0.5), GRID)
        assert compare(tr, tr) == 0.0

    def test_orthogonal_pure_states(self):
        assert trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(1.0)

    def test_grid_mismatch(self):
        g = make_generator("v3")
        a = propagate_closed_form(g, diag_state(1, 0, 0), np.linspace(0, 5, 11))
        b = propagate_closed_form(g, diag_state(1, 0, 0), np.linspace(0, 5, 21))
        with pytest.raises(GridMismatchError):
            compare(a, b)


class TestSemigroupSanity:
    def test_constant_rates_compose(self):
        g = constant_rate_model()
        rho0 = diag_state(0.1, 0.6, 0.3)
        t1, t2 = 1.3, 2.4
        step1 = propagate_closed_form(g, rho0, np.array([0.0, t1]))
        step2 = propagate_closed_form(g, step1.states[1], np.array([0.0, t2]))
        direct = propagate_closed_form(g, rho0, np.array([0.0, t1 + t2]))
        assert np.abs(step2.states[1] - direct.states[1]).max() <= 1e-9


class TestTrajectoryInvariants:
    @pytest.mark.parametrize("name", ["v3", "cascade3", "lambda3", "cascade4"])
    def test_trace_hermiticity_positivity(self, name):
        g = make_generator(name)
        grid = np.linspace(0.0, 10.0, 51)
        for rho0 in admissible_bank(name)[:4]:
            for tr in (propagate_closed_form(g, rho0, grid),
                       ode_oracle(g, rho0, grid)):
                for state in tr.states:
                    assert abs(np.trace(state) - 1.0) <= 1e-9
                    assert np.abs(state - state.conj().T).max() <= 1e-9
                    herm = 0.5 * (state + state.conj().T)
                    assert np.linalg.eigvalsh(herm).min() >= -1e-7


class TestNegativeControl:
    def test_cascade3_top_level_is_not_solved_by_closed_form(self):
        g = make_generator("cascade3")
        rho0 = diag_state(0, 0, 1)
        grid = np.linspace(0.0, 5.0, 51)
        closed = propagate_closed_form(g, rho0, grid)
        oracle = ode_oracle(g, rho0, grid)
        assert compare(closed, oracle) > 1e-3
