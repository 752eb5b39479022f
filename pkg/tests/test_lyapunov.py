import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from damperopt.errors import DegenerateSystemError
from damperopt.models import (
    ModalModel,
    ModelKind,
    DamperVector,
    chain_model,
    chain_damper,
    string_model,
    string_damper,
)
from damperopt.lyapunov import (
    assemble_phase_matrix,
    solve_lyapunov,
    dual_trace_pair,
    solution_positive_definite,
    simulated_displacement_integral,
    energy_norm_pair,
    _rk4_step,
)
from damperopt.trace_formula import energy_weights, displacement_weights


def one_dof(m, k):
    """Modal reduction of m x'' + c x' + k x = 0: omega = sqrt(k/m),
    modal damper 1/sqrt(m), viscosity = physical damping coefficient."""
    model = ModalModel(n=1, omegas=np.array([math.sqrt(k / m)]),
                       kind=ModelKind.STRING)
    damper = DamperVector(entries=np.array([1.0 / math.sqrt(m)]),
                          position_label=0.5)
    return model, damper


class TestAssemble:
    def test_blocks_explicit(self):
        model = ModalModel(n=1, omegas=np.array([math.sqrt(2.0)]),
                           kind=ModelKind.STRING)
        damper = DamperVector(entries=np.array([1.0]), position_label=0.5)
        phase = assemble_phase_matrix(model, damper, 2.0)
        expected = np.array([[0.0, math.sqrt(2.0)],
                             [-math.sqrt(2.0), -2.0]])
        np.testing.assert_allclose(phase.A, expected, rtol=1e-15)

    def test_symmetric_part_is_damping_block(self):
        model = chain_model(4)
        damper = chain_damper(2, 4)
        v = 1.7
        phase = assemble_phase_matrix(model, damper, v)
        S = phase.A + phase.A.T
        np.testing.assert_allclose(S[:4, :4], 0.0, atol=1e-15)
        np.testing.assert_allclose(S[:4, 4:], 0.0, atol=1e-15)
        np.testing.assert_allclose(
            S[4:, 4:], -2 * v * np.outer(damper.entries, damper.entries),
            atol=1e-15)

    def test_trace_is_minus_v_norm(self):
        # chain dampers are unit eigenvectors, so trace(A) = -v
        model = chain_model(3)
        damper = chain_damper(2, 3)
        phase = assemble_phase_matrix(model, damper, 1.0)
        assert np.trace(phase.A) == pytest.approx(-1.0, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            assemble_phase_matrix(chain_model(3), chain_damper(1, 4), 1.0)

    def test_nonpositive_viscosity(self):
        with pytest.raises(ValueError):
            assemble_phase_matrix(chain_model(3), chain_damper(1, 3), 0.0)


class TestSolveLyapunov:
    def test_scalar_system(self):
        sol = solve_lyapunov(-np.eye(2), np.eye(2))
        np.testing.assert_allclose(sol.X, 0.5 * np.eye(2), rtol=1e-14)

    @pytest.mark.parametrize("m,k,c", [(1.0, 1.0, 2.0), (1.0, 4.0, 1.3),
                                       (2.0, 3.0, 0.9)])
    def test_one_dof_energy_trace(self, m, k, c):
        model, damper = one_dof(m, k)
        phase = assemble_phase_matrix(model, damper, c)
        sol = solve_lyapunov(phase, np.eye(2))
        assert np.trace(sol.X) == pytest.approx(2 * m / c + c / (2 * k),
                                                rel=1e-12)

    @pytest.mark.parametrize("m,k,c", [(1.0, 1.0, 2.0), (1.0, 4.0, 1.3),
                                       (2.0, 3.0, 0.9)])
    def test_one_dof_displacement_trace(self, m, k, c):
        model, damper = one_dof(m, k)
        phase = assemble_phase_matrix(model, damper, c)
        sol = solve_lyapunov(phase, np.diag([1.0 / k, 0.0]))
        assert np.trace(sol.X) == pytest.approx(m / (k * c) + c / (2 * k * k),
                                                rel=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(data=st.data())
    def test_residual_and_symmetry(self, data):
        n = data.draw(st.integers(3, 10))
        k = data.draw(st.integers(1, n))
        damper = chain_damper(k, n)
        if damper.zero_modes.any():
            return  # undamped mode: solver correctly refuses these
        v = data.draw(st.floats(0.2, 3.0))
        phase = assemble_phase_matrix(chain_model(n), damper, v)
        sol = solve_lyapunov(phase, np.eye(2 * n))
        A = phase.A
        resid = np.max(np.abs(A.T @ sol.X + sol.X @ A + np.eye(2 * n)))
        assert resid <= 1e-9
        assert np.max(np.abs(sol.X - sol.X.T)) <= 1e-11 * np.max(np.abs(sol.X))

    def test_undamped_mode_raises(self):
        # position 2 of the 3-chain leaves mode 2 exactly undamped
        damper = chain_damper(2, 3)
        assert damper.zero_modes[1]
        phase = assemble_phase_matrix(chain_model(3), damper, 1.0)
        with pytest.raises(DegenerateSystemError):
            solve_lyapunov(phase, np.eye(6))

    def test_asymmetric_rhs_rejected(self):
        with pytest.raises(ValueError):
            solve_lyapunov(-np.eye(2), np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_size_cap(self):
        with pytest.raises(ValueError):
            solve_lyapunov(-np.eye(70), np.eye(70))


class TestDualTrace:
    def test_identity_weighting(self):
        model, damper = chain_model(4), chain_damper(2, 4)
        phase = assemble_phase_matrix(model, damper, 1.0)
        t1, t2 = dual_trace_pair(phase, np.eye(8))
        sol = solve_lyapunov(phase, np.eye(8))
        assert t1 == pytest.approx(np.trace(sol.X), rel=1e-12)
        assert t2 == pytest.approx(t1, rel=1e-8)

    def test_energy_band_agreement(self):
        model = chain_model(4)
        weights = energy_weights(0, 2, model)
        phase = assemble_phase_matrix(model, chain_damper(2, 4), 1.0)
        t1, t2 = dual_trace_pair(phase, np.diag(weights.full_diagonal()))
        assert t2 == pytest.approx(t1, rel=1e-8)

    def test_zero_weighting(self):
        phase = assemble_phase_matrix(chain_model(3), chain_damper(1, 3), 1.0)
        t1, t2 = dual_trace_pair(phase, np.zeros((6, 6)))
        assert t1 == pytest.approx(0.0, abs=1e-12)
        assert t2 == pytest.approx(0.0, abs=1e-12)


class TestDefiniteness:
    def test_clean_chain_is_spd(self):
        # all modes damped: the displacement-weighted solution is SPD
        model = chain_model(3)
        damper = chain_damper(1, 3)
        assert not damper.zero_modes.any()
        weights = displacement_weights(0, 3, model)
        phase = assemble_phase_matrix(model, damper, 1.0)
        assert solution_positive_definite(phase, np.diag(weights.full_diagonal()))

    def test_one_dof_is_spd(self):
        model, damper = one_dof(1.0, 1.0)
        phase = assemble_phase_matrix(model, damper, 1.0)
        assert solution_positive_definite(phase, np.diag([1.0, 0.0]))

    def test_node_damper_degenerate(self):
        # damper at y=1/3 sits on the node of mode 3; weighting it diverges
        model = string_model(3)
        damper = string_damper(1 / 3, 3)
        phase = assemble_phase_matrix(model, damper, 1.0)
        weights = displacement_weights(0, 3, model)
        with pytest.raises(DegenerateSystemError):
            solution_positive_definite(phase, np.diag(weights.full_diagonal()))


class TestSimulatedIntegral:
    def test_zero_initial_state(self):
        phase = assemble_phase_matrix(chain_model(2), chain_damper(1, 2), 1.0)
        assert simulated_displacement_integral(phase, np.zeros(4)) == 0.0

    def test_one_dof_critical_damping(self):
        # x(t) = e^{-t}(1+t): integral of x^2 is 5/4
        model, damper = one_dof(1.0, 1.0)
        phase = assemble_phase_matrix(model, damper, 2.0)
        sol = solve_lyapunov(phase, np.diag([1.0, 0.0]))
        assert sol.X[0, 0] == pytest.approx(1.25, rel=1e-12)
        integral = simulated_displacement_integral(phase, np.array([1.0, 0.0]))
        assert integral == pytest.approx(1.25, rel=1e-4)

    def test_chain_quadratic_form(self):
        rng = np.random.default_rng(7)
        model = chain_model(4)
        damper = chain_damper(2, 4)
        phase = assemble_phase_matrix(model, damper, 1.0)
        weights = displacement_weights(0, 4, model)
        Xhat = solve_lyapunov(phase, np.diag(weights.full_diagonal())).X
        for _ in range(2):
            y0 = rng.standard_normal(8)
            quad = float(y0 @ Xhat @ y0)
            sim = simulated_displacement_integral(phase, y0)
            assert sim == pytest.approx(quad, rel=1e-4)

    def test_phase_norm_monotone_decay(self):
        phase = assemble_phase_matrix(chain_model(4), chain_damper(2, 4), 1.0)
        y = np.array([1.0, -0.3, 0.2, 0.5, 0.0, 0.1, -0.2, 0.4])
        dt = 0.01
        prev = float(y @ y)
        for _ in range(2000):
            y = _rk4_step(phase.A, y, dt)
            cur = float(y @ y)
            assert cur <= prev + 1e-6
            prev = cur


class TestEnergyNormPair:
    def test_zero_data(self):
        lhs, rhs = energy_norm_pair(chain_model(3), np.zeros(3), np.zeros(3))
        assert lhs == 0.0 and rhs == 0.0

    def test_unit_displacement(self):
        lhs, rhs = energy_norm_pair(chain_model(3), np.array([1.0, 0, 0]),
                                    np.zeros(3))
        assert rhs == pytest.approx(2.0, rel=1e-14)  # K[0,0]
        assert lhs == pytest.approx(2.0, rel=1e-10)

    @settings(max_examples=25, deadline=None)
    @given(data=st.data())
    def test_random_equality(self, data):
        n = 6
        x0 = np.array(data.draw(st.lists(
            st.floats(-2, 2, allow_nan=False), min_size=n, max_size=n)))
        v0 = np.array(data.draw(st.lists(
            st.floats(-2, 2, allow_nan=False), min_size=n, max_size=n)))
        lhs, rhs = energy_norm_pair(chain_model(n), x0, v0)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_spectral_model(self):
        model = string_model(4)
        x0 = np.array([0.3, -0.1, 0.2, 0.05])
        v0 = np.array([1.0, 0.0, -0.5, 0.2])
        lhs, rhs = energy_norm_pair(model, x0, v0)
        assert lhs == pytest.approx(rhs, rel=1e-12)
