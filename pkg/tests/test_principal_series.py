from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import NonGenericError, PoleError
from principal_series import (
    MultiplicityFunction,
    T_M,
    Y_M,
    A,
    A_unn,
    A_unn_word,
    D_alpha,
    D_sigma,
    b_I,
    b_I_basis,
    b_I_leading,
    b_I_unn,
    bzl_residual,
    c_function,
    cocycle_M,
    cocycle_M_residual,
    composition_residual,
    genericity,
    in_parabolic_space,
    intertwining_residual,
    phi_I,
    phi_intertwining_residual,
    principal_cocycle,
    principal_vector,
    vacuum_eigen_residual,
    w0_basis,
)
from spin_rep import Y_op, b_basis, basis_vector, eigenvalues, index_of_epsilon, pi_T
from trig_cocycle import spin_generator
from weylc import WeylElement, epsilons, is_positive, w_epsilon

Z2 = np.array([0.13 + 0.07j, -0.21 + 0.11j])


@pytest.fixture
def m(params):
    return MultiplicityFunction.from_params(params)


@pytest.fixture
def gamma_random(rng):
    return 0.4 * rng.normal(size=2) + 0.25j * rng.normal(size=2)


class TestMultiplicity:

    def test_long_root_askey_wilson(self, m):
        q, k = m.q, m.kappa
        assert_allclose(m.askey_wilson((1, -1)), [q ** (2 * k), -1, q ** (1 + 2 * k), -q])

    def test_short_root_matches_spin_parameters(self, params, m):
        assert_allclose(m.askey_wilson((0, 1)), params.askey_wilson())
        assert_allclose(m.dual_askey_wilson((1, 0)), params.dual_askey_wilson())

    def test_dual_swaps(self, m):
        assert m.dual().upsilon == m.zeta_p
        assert m.dual().dual() == m

    def test_D_alpha_zeros(self, m):
        a, b, _, _ = m.dual_askey_wilson((1, 0))
        gamma_a = np.array([np.log(a) / np.log(m.q), 0.3])
        gamma_b = np.array([np.log(b + 0j) / np.log(m.q), 0.3])
        assert abs(D_alpha((1, 0), gamma_a, m)) < 1e-12
        assert abs(D_alpha((1, 0), gamma_b, m)) < 1e-12


class TestModule:

    def test_dimension(self, m):
        assert T_M(1, [0.3, 0.1], m).shape == (8, 8)
        assert len(w0_basis(3)) == 48

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_hecke_relation(self, m, gamma_random, j):
        k = m.hecke_kappa(j, 2)
        t = T_M(j, gamma_random, m)
        one = np.eye(8)
        assert_allclose((t - m.qp(-k) * one) @ (t + m.qp(k) * one), 0, atol=1e-11)

    @pytest.mark.parametrize("i, j, order", [(0, 1, 4), (1, 2, 4), (0, 2, 2)])
    def test_braid(self, m, gamma_random, i, j, order):
        left = np.eye(8, dtype=complex)
        right = np.eye(8, dtype=complex)
        for k in range(order):
            left = left @ T_M(i if k % 2 == 0 else j, gamma_random, m)
            right = right @ T_M(j if k % 2 == 0 else i, gamma_random, m)
        assert_allclose(left, right, atol=1e-11)

    def test_bzl(self, m, gamma_random):
        assert bzl_residual(gamma_random, m) < 1e-10

    def test_bzl_rank3(self, params3):
        m3 = MultiplicityFunction.from_params(params3)
        assert bzl_residual(np.array([0.31 + 0.1j, -0.17, 0.44 - 0.05j]), m3) < 1e-9

    def test_vacuum_eigenvalues(self, m, gamma_random):
        assert vacuum_eigen_residual(gamma_random, m) < 1e-11

    def test_y_commute(self, m, gamma_random):
        y1, y2 = Y_M(1, gamma_random, m), Y_M(2, gamma_random, m)
        assert_allclose(y1 @ y2, y2 @ y1, atol=1e-10)

    def test_y_power(self, m, gamma_random):
        expected = Y_M(1, gamma_random, m) @ np.linalg.inv(Y_M(2, gamma_random, m))
        assert_allclose(Y_M([1, -1], gamma_random, m), expected, atol=1e-10)

    def test_rejects_bad_generator(self, m):
        with pytest.raises(ValueError):
            T_M(3, [0.1, 0.2], m)


class TestIntertwiners:

    def test_identity(self, m, gamma_random):
        assert_allclose(A_unn(WeylElement.identity(2), gamma_random, m), np.eye(8))

    @pytest.mark.parametrize("i", [1, 2])
    def test_intertwining(self, m, gamma_random, i):
        assert intertwining_residual(i, gamma_random, m) < 1e-9

    @pytest.mark.parametrize("images", [(2, 1), (1, -2), (-2, 1), (-1, -2)])
    def test_composition(self, m, gamma_random, images):
        assert composition_residual(WeylElement(images), gamma_random, m) < 1e-9

    def test_word_independence(self, m, gamma_random):
        # s1 s2 s1 s2 = s2 s1 s2 s1
        assert_allclose(A_unn_word([1, 2, 1, 2], gamma_random, m),
                        A_unn_word([2, 1, 2, 1], gamma_random, m), atol=1e-10)

    def test_normalized_simple(self, m, gamma_random):
        s = WeylElement.simple(2, 2)
        assert_allclose(A(s, gamma_random, m) * D_sigma(s, gamma_random, m),
                        A_unn(s, gamma_random, m))

    def test_normalized_intertwiner_maps_vacuum_eigenvector(self, m, gamma_random):
        # l'image de v_e(σ^{-1}γ) garde les valeurs propres q^{-(σ^{-1}γ)_i}
        sigma = WeylElement((-2, 1))
        v = A(sigma, gamma_random, m) @ principal_vector(WeylElement.identity(2))
        shifted = sigma.inverse().act(np.asarray(gamma_random, dtype=complex))
        for i in (1, 2):
            assert_allclose(Y_M(i, gamma_random, m) @ v, m.qp(-shifted[i - 1]) * v, atol=1e-9)


class TestParabolic:

    def test_gamma_in_space(self, params, m):
        assert in_parabolic_space(params.gamma(), m)
        assert not in_parabolic_space(np.array([0.3, 0.1]), m)

    def test_phi_rejects(self, m):
        with pytest.raises(NonGenericError):
            phi_I(np.array([0.3, 0.1]), m)

    def test_phi_vacuum_and_s1(self, params, m):
        phi = phi_I(params.gamma(), m)
        assert_allclose(phi @ principal_vector(WeylElement.identity(2)), basis_vector((1, 1)))
        assert_allclose(phi @ principal_vector(WeylElement.simple(1, 2)),
                        m.qp(-m.kappa) * basis_vector((1, 1)))

    def test_phi_intertwines(self, params, params3):
        assert phi_intertwining_residual(params) < 1e-12
        assert phi_intertwining_residual(params3) < 1e-11

    def test_b_identity_is_vacuum(self, params, m):
        assert_allclose(b_I(WeylElement.identity(2), params.gamma(), m), basis_vector((1, 1)))

    @pytest.mark.parametrize("eps", list(epsilons(2)))
    def test_b_matches_spin_eigenbasis(self, params, m, eps):
        assert_allclose(b_I(w_epsilon(eps), params.gamma(), m), b_basis(eps, params),
                        atol=1e-9)

    def test_b_matches_spin_eigenbasis_rank3(self, params3):
        basis = np.column_stack([b_basis(eps, params3) for eps in epsilons(3)])
        assert_allclose(b_I_basis(params3), basis, atol=1e-8)

    def test_b_vanishes_off_coset_reps(self, params, m):
        for sigma in w0_basis(2):
            if is_positive(sigma.act_root((1, -1))):
                continue
            assert_allclose(b_I_unn(sigma, params.gamma(), m), 0, atol=1e-11)

    @pytest.mark.parametrize("eps", list(epsilons(2)))
    def test_leading_coefficient(self, params, m, eps):
        w = w_epsilon(eps)
        b = b_I_unn(w, params.gamma(), m)
        assert_allclose(b[index_of_epsilon(eps)], b_I_leading(w, params.gamma(), m))

    @pytest.mark.parametrize("eps", list(epsilons(2)))
    def test_eigenvalues(self, params, m, eps):
        b = b_I(w_epsilon(eps), params.gamma(), m)
        for i, lam in enumerate(eigenvalues(eps, params), start=1):
            assert_allclose(Y_op(i, params) @ b, lam * b, atol=1e-10)


class TestGenericity:

    def test_default_point_is_generic(self, params, m):
        assert genericity(params.gamma(), m, height=8)

    def test_resonant_root(self, m):
        # (e_1 + e_2, γ) = 0
        assert not genericity(np.array([m.kappa, -m.kappa]), m, height=4)

    def test_rational_kappa(self, params):
        p = replace(params, kappa=0.5)
        m_half = MultiplicityFunction.from_params(p)
        assert not genericity(p.gamma(), m_half, height=4)

    def test_perturbed_point(self, params, m, rng):
        xi = params.xi + 0.01 * (rng.normal() + 1j * rng.normal())
        assert genericity(params.with_xi(xi).gamma(), m, height=6)


class TestCocycle:

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_explicit_matches_baxterization(self, m, gamma_random, j):
        assert cocycle_M_residual(j, Z2, gamma_random, m) < 1e-10

    def test_c_function_pole(self, m):
        with pytest.raises(PoleError):
            c_function(2, np.array([0.1, 0.0]), m)

    @pytest.mark.parametrize("i, j", [(0, 1), (1, 2)])
    def test_braid(self, m, gamma_random, i, j):
        cocycle = principal_cocycle(gamma_random, m)
        word_a = [i, j, i, j]
        word_b = [j, i, j, i]
        assert_allclose(cocycle.word_value(word_a, Z2), cocycle.word_value(word_b, Z2),
                        atol=1e-9)

    def test_identity(self, m, gamma_random):
        assert_allclose(principal_cocycle(gamma_random, m).word_value([], Z2), np.eye(8))

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_projects_to_spin_cocycle(self, params, m, j):
        gamma = params.gamma()
        phi = phi_I(gamma, m)
        assert_allclose(phi @ cocycle_M(j, Z2, gamma, m), spin_generator(j, Z2, params) @ phi,
                        atol=1e-10)

    def test_generators_project(self, params, m):
        phi = phi_I(params.gamma(), m)
        for j in range(3):
            assert_allclose(phi @ T_M(j, params.gamma(), m), pi_T(j, params) @ phi, atol=1e-12)
