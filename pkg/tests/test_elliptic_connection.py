from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from elliptic_connection import (
    A_cm,
    B_cm,
    C_dual_fn,
    C_fn,
    ConnectionContext,
    K_cm,
    M_cm,
    M_cm_generator,
    M_cm_word,
    R_cm,
    beta_cm,
    cocycle_law_residual,
    connection_coeffs_general,
    connection_matrix_from_general,
    dynamical_unitarity_residual,
    dynamical_ybe_residual,
    e_dual_fn,
    e_fn,
    equilibrate,
    extract_connection,
    extraction_point,
    frame_condition,
    ice_rule_residual,
    K_unitarity_residual,
    left_from_right,
    left_reflection_residual,
    p_dual_fn,
    p_fn,
    p_symmetry_residual,
    resonance_distance,
    right_reflection_residual,
    theta_link_residuals,
    word_independence_residual,
)
from errors import CocycleMismatchError, IllConditionedError, NonGenericError, PoleError
from principal_series import MultiplicityFunction
from qkz_series import solve_basis
from weylc import WeylElement, w_epsilon

Z = 0.31 + 0.17j
XI = 0.43 - 0.12j


@pytest.fixture
def ctx(params):
    return ConnectionContext(params)


@pytest.fixture
def m(params):
    return MultiplicityFunction.from_params(params)


class TestThetaBlocks:

    def test_C_periodic_in_z(self, params):
        assert_allclose(C_fn(Z + 1, XI, params), C_fn(Z, XI, params), rtol=1e-10)

    def test_C_periodic_in_xi(self, params):
        assert_allclose(C_fn(Z, XI + 1, params), C_fn(Z, XI, params), rtol=1e-10)

    def test_C_dual(self, params):
        assert_allclose(C_dual_fn(Z, XI, params), C_fn(Z, XI, params.dual()))

    def test_C_is_short_root_e(self, params, m):
        assert_allclose(e_fn((0, 1), Z, XI, m), C_fn(Z, XI, params), rtol=1e-12)

    def test_A_on_diagonal(self, params):
        assert_allclose(A_cm(Z, Z, params), 1.0, rtol=1e-12)

    def test_B_vanishes(self, params):
        assert abs(B_cm(Z, -Z, params)) < 1e-14

    def test_pole(self, params):
        with pytest.raises(PoleError):
            C_fn(Z, 0.0, params)
        with pytest.raises(PoleError):
            A_cm(Z, 0.0, params)


class TestDynamicalMatrices:

    def test_unitarity(self, ctx):
        assert dynamical_unitarity_residual(ctx.R, Z, XI) < 1e-11
        assert K_unitarity_residual(ctx.K, Z, XI) < 1e-11

    def test_ice_rule(self, ctx):
        assert ice_rule_residual(ctx.R, Z, XI) == 0.0

    @pytest.mark.parametrize("shift", [(1, 0), (0, 1)])
    def test_periodicity(self, params, shift):
        dz, dxi = shift
        assert_allclose(R_cm(Z + dz, XI + dxi, params), R_cm(Z, XI, params), rtol=1e-9, atol=1e-12)
        assert_allclose(K_cm(Z + dz, XI + dxi, params), K_cm(Z, XI, params), rtol=1e-9, atol=1e-12)

    def test_p_symmetry(self, ctx, params):
        assert p_symmetry_residual(ctx.R, Z, XI, params.kappa) < 1e-12

    def test_dynamical_ybe(self, ctx, params, rng):
        for _ in range(3):
            z1, z2, z3 = 0.4 * rng.normal(size=3) + 0.2j * rng.normal(size=3)
            assert dynamical_ybe_residual(ctx.R, z1, z2, z3, XI, params.kappa) < 1e-11

    def test_right_reflection(self, ctx, params, rng):
        z1, z2 = 0.4 * rng.normal(size=2) + 0.2j * rng.normal(size=2)
        assert right_reflection_residual(ctx.R, ctx.K, z1, z2, XI, params.kappa) < 1e-10

    def test_left_reflection(self, ctx, params, rng):
        z1, z2 = 0.4 * rng.normal(size=2) + 0.2j * rng.normal(size=2)
        assert left_reflection_residual(ctx.R, left_from_right(ctx.K), z1, z2, XI,
                                        params.kappa) < 1e-10


class TestRootFunctions:

    def test_theta_links(self, params):
        for key, value in theta_link_residuals(Z, XI, params).items():
            assert value < 1e-10, key

    @pytest.mark.parametrize("alpha", [(1, -1), (0, 1)])
    def test_decoupling(self, m, alpha):
        x, y = Z, XI
        coeff = e_fn(alpha, x, -y, m) / e_dual_fn(alpha, y, -x, m)
        assert_allclose(coeff, p_dual_fn(alpha, -y, m) / p_fn(alpha, -x, m), rtol=1e-10)

    def test_beta_decouples(self, params, m):
        assert_allclose(beta_cm(Z, XI, params), p_dual_fn((0, 1), XI, m) / p_fn((0, 1), -Z, m),
                        rtol=1e-10)

    def test_diagonal_at_parabolic_point(self, m):
        alpha = (1, -1)
        y = 2 * m.kappa
        for x in (0.21 + 0.3j, -0.6 + 0.05j):
            diag = (e_fn(alpha, x, y, m) - e_dual_fn(alpha, y, x, m)) / e_dual_fn(alpha, y, -x, m)
            assert_allclose(diag, 1.0, rtol=1e-10)

    def test_context_binds_parameters(self, ctx, params, m):
        assert_allclose(ctx.beta(Z, XI), beta_cm(Z, XI, params))
        assert_allclose(ctx.p((1, -1), Z), p_fn((1, -1), Z, m))


class TestCocycle:

    ZV = np.array([0.23 + 0.1j, -0.37 + 0.05j])

    def test_identity(self, params):
        assert_allclose(M_cm(WeylElement.identity(2), self.ZV, XI, params), np.eye(4))

    @pytest.mark.parametrize("u_word, v_word", [([1], [2]), ([2, 1], [2]), ([1, 2], [1, 2, 1])])
    def test_cocycle_law(self, params, u_word, v_word):
        u = WeylElement.from_word(u_word, 2)
        v = WeylElement.from_word(v_word, 2)
        assert cocycle_law_residual(u, v, self.ZV, XI, params) < 1e-10

    def test_longest_word_independence(self, params):
        assert word_independence_residual([[1, 2, 1, 2], [2, 1, 2, 1]], self.ZV, XI, params) < 1e-10

    def test_generator_unitarity(self, params):
        for i in (1, 2):
            y = WeylElement.simple(i, 2).act(self.ZV)
            product = M_cm_generator(i, self.ZV, XI, params) @ M_cm_generator(i, y, XI, params)
            assert_allclose(product, np.eye(4), atol=1e-11)

    def test_mismatch_raises(self, params):
        with pytest.raises(CocycleMismatchError):
            word_independence_residual([[1, 2], [2, 1]], self.ZV, XI, params, tol=1e-10)

    def test_bad_generator(self, params):
        with pytest.raises(ValueError):
            M_cm_generator(3, self.ZV, XI, params)

    @pytest.mark.slow
    def test_rank_three_braids(self, params3):
        z = np.array([0.2 + 0.1j, -0.3, 0.45 - 0.2j])
        assert word_independence_residual([[1, 2, 1], [2, 1, 2]], z, XI, params3) < 1e-10
        assert word_independence_residual([[2, 3, 2, 3], [3, 2, 3, 2]], z, XI, params3) < 1e-10


class TestGeneralCoefficients:

    ZV = np.array([0.23 + 0.1j, -0.37 + 0.05j])

    def test_trivial_case(self, params, m):
        tau2 = WeylElement.identity(2)
        assert connection_coeffs_general(1, tau2, self.ZV, params.gamma(), m) == (1.0, 0.0)

    @pytest.mark.parametrize("i", [1, 2])
    def test_assembles_into_spin_cocycle(self, params, i):
        assert_allclose(connection_matrix_from_general(i, self.ZV, params),
                        M_cm_generator(i, self.ZV, params.xi, params), rtol=1e-9, atol=1e-12)

    def test_resonance_rejected(self, m):
        gamma = np.array([1.01, 0.3])
        assert resonance_distance(gamma, m) < 0.05
        with pytest.raises(NonGenericError):
            connection_coeffs_general(2, w_epsilon((1, 1)), self.ZV, gamma, m)

    def test_rejects_non_representative(self, params, m):
        with pytest.raises(ValueError):
            connection_coeffs_general(2, WeylElement.simple(1, 2), self.ZV, params.gamma(), m)


@pytest.fixture(scope="module")
def connection_params(params):
    return replace(params, q=0.25)


@pytest.fixture(scope="module")
def extraction_basis(connection_params):
    return solve_basis(connection_params, height_cap=8)


def test_equilibrate_unit_columns():
    phi = np.array([[3.0, 0.0], [4.0, 2e-8]])
    frame, scales = equilibrate(phi)
    assert_allclose(np.linalg.norm(frame, axis=0), [1.0, 1.0])
    assert_allclose(frame * scales, phi)


def test_equilibrate_rejects_zero_column():
    with pytest.raises(IllConditionedError):
        equilibrate(np.array([[1.0, 0.0], [0.0, 0.0]]))


@pytest.mark.slow
class TestExtraction:

    def test_identity(self, extraction_basis):
        z = extraction_point(2)
        assert_allclose(extract_connection(WeylElement.identity(2), z, extraction_basis), np.eye(4),
                        atol=1e-9)

    def test_frame_is_well_conditioned(self, extraction_basis):
        assert frame_condition(extraction_basis, extraction_point(2)) < 1e6

    @pytest.mark.parametrize("i", [1, 2])
    def test_matches_explicit_cocycle(self, extraction_basis, connection_params, i):
        z = extraction_point(2)
        extracted = extract_connection(WeylElement.simple(i, 2), z, extraction_basis)
        assert_allclose(extracted, M_cm_generator(i, z, connection_params.xi, connection_params),
                        atol=1e-5)

    @pytest.mark.parametrize("i", [1, 2])
    def test_vanishing_entries_stay_zero(self, extraction_basis, connection_params, i):
        z = extraction_point(2)
        extracted = extract_connection(WeylElement.simple(i, 2), z, extraction_basis)
        explicit = M_cm_generator(i, z, connection_params.xi, connection_params)
        zeros = np.abs(explicit) < 1e-14
        assert zeros.any()
        assert np.max(np.abs(extracted[zeros])) < 1e-5

    def test_periodic(self, extraction_basis):
        z = extraction_point(2)
        s = WeylElement.simple(2, 2)
        here = extract_connection(s, z, extraction_basis)
        there = extract_connection(s, z + np.array([1.0, 0.0]), extraction_basis)
        assert_allclose(here, there, atol=1e-5)

    def test_longest_element(self, extraction_basis, connection_params):
        z = extraction_point(2)
        w0 = WeylElement.longest(2)
        assert_allclose(extract_connection(w0, z, extraction_basis),
                        M_cm_word(w0.reduced_word(), z, connection_params.xi, connection_params),
                        atol=1e-5)
