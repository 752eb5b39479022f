import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from damperopt.models import (
    chain_model,
    string_model,
    rod_model,
    chain_damper,
    chain_damper_continuous,
    string_damper,
    damper_norm_closed_form,
    assemble_chain_matrices,
    chain_eigenvector_matrix,
    sturm_chain_eigenvalues,
)


class TestChainModel:
    def test_single_mass(self):
        m = chain_model(1)
        assert m.omegas[0] == pytest.approx(math.sqrt(2.0), rel=1e-15)

    def test_n3_squared_spectrum(self):
        # eigenvalues of tridiag(-1, 2, -1) at n=3 are 2-sqrt2, 2, 2+sqrt2
        m = chain_model(3)
        expected = np.array([2 - math.sqrt(2), 2.0, 2 + math.sqrt(2)])
        np.testing.assert_allclose(m.omegas**2, expected, rtol=1e-14)

    def test_n600_ascending_below_two(self):
        m = chain_model(600)
        assert m.n == 600
        assert np.all(np.diff(m.omegas) > 0)
        assert m.omegas[-1] < 2.0

    def test_zero_dimension_rejected(self):
        with pytest.raises(ValueError):
            chain_model(0)


class TestSpectralModels:
    def test_string_spectrum(self):
        m = string_model(3)
        np.testing.assert_allclose(m.omegas, [np.pi, 2 * np.pi, 3 * np.pi],
                                   rtol=1e-15)

    def test_degenerate_rod_equals_string(self):
        rod = rod_model(5, a0=0.0, k0=1.0)
        string = string_model(5)
        np.testing.assert_allclose(rod.omegas, string.omegas, rtol=1e-15)

    def test_rod_first_frequency(self):
        m = rod_model(1, a0=1.0, k0=1.0)
        assert m.omegas[0] == pytest.approx(np.pi * math.sqrt(np.pi**2 + 1),
                                            rel=1e-14)

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            rod_model(3, a0=-0.5)
        with pytest.raises(ValueError):
            rod_model(3, k0=0.0)
        with pytest.raises(ValueError):
            string_model(0)

    @given(n=st.integers(1, 40))
    def test_spectrum_strictly_increasing(self, n):
        for model in (chain_model(n), string_model(n), rod_model(n, 0.7, 2.0)):
            assert np.all(np.diff(model.omegas) > 0)
            assert np.all(model.omegas > 0)


class TestChainDamper:
    def test_trivial_single(self):
        d = chain_damper(1, 1)
        assert d.entries[0] == pytest.approx(1.0, abs=1e-15)

    def test_mirror_position_signs(self):
        for (k, n) in [(2, 7), (3, 10), (5, 12)]:
            d1 = chain_damper(k, n)
            d2 = chain_damper(n + 1 - k, n)
            # squared entries must be bitwise identical; signs may flip
            assert np.array_equal(d1.entries**2, d2.entries**2)
            assert np.all(np.abs(np.abs(d1.entries) - np.abs(d2.entries)) == 0)

    def test_unit_norm(self):
        d = chain_damper(2, 5)
        assert abs(d.entries @ d.entries - 1.0) < 1e-14

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            chain_damper(0, 5)
        with pytest.raises(ValueError):
            chain_damper(6, 5)

    def test_exact_zero_at_node(self):
        # j*k divisible by n+1 puts mode j on a node of position k
        d = chain_damper(2, 5)   # mode 3: 2*3 = 6 = n+1
        assert d.entries[2] == 0.0
        assert d.zero_modes[2]
        assert not d.zero_modes[[0, 1, 3, 4]].any()

    def test_orthonormal_eigenvector_matrix(self):
        for n in (5, 23, 50):
            Q = chain_eigenvector_matrix(n)
            assert np.max(np.abs(Q.T @ Q - np.eye(n))) <= 1e-10
            assert np.max(np.abs(Q - Q.T)) <= 1e-12


class TestChainDamperContinuous:
    def test_grid_points_reproduce_exactly(self):
        for (k, n) in [(1, 3), (2, 5), (7, 49), (13, 100)]:
            d_cont = chain_damper_continuous(k / n, n)
            d_grid = chain_damper(k, n)
            assert np.array_equal(d_cont.entries, d_grid.entries)

    def test_endpoint(self):
        d = chain_damper_continuous(1.0, 2)
        j = np.arange(1, 3)
        np.testing.assert_allclose(
            d.entries, math.sqrt(2 / 3) * np.sin(2 * j * np.pi / 3),
            rtol=0, atol=1e-15)

    def test_off_grid_formula(self):
        n = 4
        z = 0.37
        d = chain_damper_continuous(z, n)
        j = np.arange(1, n + 1)
        expected = math.sqrt(2 / (n + 1)) * np.sin(j * z * n * np.pi / (n + 1))
        np.testing.assert_allclose(d.entries, expected, rtol=0, atol=1e-15)

    def test_half_position_even_n(self):
        # z*n integral: collapses to the grid damper, which equals the formula
        n = 4
        d = chain_damper_continuous(0.5, n)
        j = np.arange(1, n + 1)
        expected = math.sqrt(2 / 5) * np.sin(2 * j * np.pi / 5)
        np.testing.assert_allclose(d.entries, expected, rtol=0, atol=1e-15)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            chain_damper_continuous(0.0, 4)
        with pytest.raises(ValueError):
            chain_damper_continuous(1.2, 4)


class TestStringDamper:
    def test_midpoint_pattern(self):
        d = string_damper(0.5, 4)
        r = 1 / math.sqrt(2)
        np.testing.assert_allclose(d.entries, [r, 0.0, -r, 0.0],
                                   rtol=0, atol=1e-15)
        assert d.entries[1] == 0.0 and d.entries[3] == 0.0

    def test_node_mode_three(self):
        d = string_damper(1 / 3, 3)
        assert d.entries[2] == 0.0
        assert d.zero_modes[2]

    def test_norm_matches_closed_form(self):
        for (y, n) in [(0.321, 7), (0.5, 12), (0.87, 40)]:
            d = string_damper(y, n)
            assert d.entries @ d.entries == pytest.approx(
                damper_norm_closed_form(y, n), abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            string_damper(0.0, 3)
        with pytest.raises(ValueError):
            string_damper(1.0, 3)


class TestDamperNormClosedForm:
    def test_half(self):
        assert damper_norm_closed_form(0.5, 2) == pytest.approx(0.5, abs=1e-14)

    def test_quarter(self):
        # (1/2)(1/2 + 1 + 1/2 + 0) = 1
        assert damper_norm_closed_form(0.25, 4) == pytest.approx(1.0, abs=1e-13)

    @settings(max_examples=100, deadline=None)
    @given(y=st.floats(0.005, 0.995), n=st.integers(1, 200))
    def test_matches_direct_summation(self, y, n):
        k = np.arange(1, n + 1)
        direct = float(np.sum(0.5 * np.sin(k * np.pi * y) ** 2))
        assert damper_norm_closed_form(y, n) == pytest.approx(direct, abs=1e-12)


class TestChainMatrices:
    def test_n2_explicit(self):
        cm = assemble_chain_matrices(2)
        np.testing.assert_array_equal(cm.stiffness, [[2, -1], [-1, 2]])
        np.testing.assert_array_equal(cm.mass, np.eye(2))
        eigs = sturm_chain_eigenvalues(2)
        np.testing.assert_allclose(sorted(eigs), [1.0, 3.0], atol=1e-10)

    def test_eigenvectors_diagonalize(self):
        n = 5
        cm = assemble_chain_matrices(n)
        Q = chain_eigenvector_matrix(n)
        D = Q.T @ cm.stiffness @ Q
        off = D - np.diag(np.diag(D))
        assert np.max(np.abs(off)) < 1e-12
        np.testing.assert_allclose(np.sort(np.diag(D)),
                                   chain_model(n).omegas**2, rtol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 8, 12])
    def test_sturm_oracle_matches_closed_form(self, n):
        eigs = sturm_chain_eigenvalues(n)
        np.testing.assert_allclose(eigs, chain_model(n).omegas**2, atol=1e-10)
