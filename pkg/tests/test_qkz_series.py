import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import NonGenericError
from principal_series import MultiplicityFunction, S_root_product
from qkz_series import (
    S_sp_eval,
    U_dual_eval,
    U_eval,
    U_eval_factored,
    chamber_point,
    chamber_shift,
    cross_route_check,
    cross_route_ratios,
    eval_anywhere,
    eval_holomorphic,
    eval_solution,
    from_document,
    plane_wave,
    rho,
    rho_shifted,
    rho_tilde,
    solution_matrix,
    solve_basis,
    solve_coefficients,
    solve_gamma,
    to_document,
    transport_residual,
)
from spin_rep import b_basis, pi_Tw
from trig_cocycle import spin_cocycle
from weylc import WeylElement, epsilons, w_epsilon


@pytest.fixture(scope="module")
def basis(params):
    return solve_basis(params, height_cap=6)


class TestNormalisations:

    def test_plane_wave_at_rho(self, params):
        z = np.array([0.3 + 0.2j, -1.1])
        assert_allclose(plane_wave(z, rho(params), params), 1.0)

    def test_plane_wave_shift(self, params):
        z = np.array([0.3 + 0.2j, -1.1])
        w = np.array([0.7, -0.2 + 0.1j])
        lam = np.array([2, -1])
        ratio = plane_wave(z - lam, w, params) / plane_wave(z, w, params)
        assert_allclose(ratio, params.qp(np.dot(rho(params) - w, lam)))

    def test_plane_wave_origin(self, params):
        w = np.array([0.7, -0.2 + 0.1j])
        assert_allclose(plane_wave(np.zeros(2), w, params),
                        params.qp(np.dot(rho(params) - w, rho_tilde(params))))

    def test_rho_offset(self, params, params3):
        assert_allclose(rho(params) - rho_shifted(params), params.kappa)
        assert_allclose(rho(params3) - rho_shifted(params3), 2 * params3.kappa)

    def test_S_sp_zero(self, params):
        z = np.array([1 - (params.zeta + params.upsilon), 0.37])
        assert abs(S_sp_eval(z, params)) < 1e-12

    def test_S_sp_matches_root_product(self, params, rng):
        m = MultiplicityFunction.from_params(params)
        for _ in range(3):
            z = rng.normal(size=2) + 0.3j * rng.normal(size=2)
            assert_allclose(S_sp_eval(z, params), S_root_product(z, m), rtol=1e-12)

    def test_U_two_forms(self, params, rng):
        z = rng.normal(size=2) + 0.2j * rng.normal(size=2)
        assert_allclose(U_eval(z, params), U_eval_factored(z, params), rtol=1e-11)

    def test_U_dual(self, params):
        g = params.gamma()
        assert_allclose(U_dual_eval(g, params), U_eval(g, params.dual()))


class TestSolve:

    @pytest.mark.parametrize("eps", list(epsilons(2)))
    def test_leading_coefficient(self, params, basis, eps):
        sol = basis[list(epsilons(2)).index(eps)]
        expected = pi_Tw(WeylElement.longest(2), params) @ b_basis(eps, params)
        assert_allclose(sol.leading(), expected)

    def test_consistency(self, basis):
        for sol in basis:
            assert sol.consistency() < 1e-9

    def test_spectral_point(self, params, basis):
        for sol, eps in zip(basis, epsilons(2)):
            assert_allclose(sol.spectral, w_epsilon(eps).act(params.gamma()))

    def test_transport_residual(self, basis):
        z = chamber_point(2, depth=4.0, wobble=0.1)
        for sol in basis:
            assert transport_residual(sol, z) < 1e-6

    def test_residual_decreases_with_height(self, params):
        z = chamber_point(2, depth=3.0, wobble=0.1)
        low = transport_residual(solve_gamma((1, -1), 2, params), z)
        high = transport_residual(solve_gamma((1, -1), 4, params), z)
        assert high < low

    def test_height_zero_is_first_order(self, params):
        sol = solve_gamma((1, 1), 0, params)
        near = transport_residual(sol, chamber_point(2, depth=3.0))
        deep = transport_residual(sol, chamber_point(2, depth=5.0))
        assert deep < near
        assert deep < 0.1

    def test_residual_decreases_with_depth(self, basis):
        sol = basis[1]
        residuals = [transport_residual(sol, chamber_point(2, depth=d, wobble=0.05))
                     for d in (2.0, 3.0, 4.0)]
        assert residuals[0] > residuals[1] > residuals[2]

    def test_bad_seed_rejected(self, params):
        seed = np.array([1.0, 2.0, -1.0, 0.5], dtype=complex)
        with pytest.raises(NonGenericError) as exc:
            solve_coefficients(spin_cocycle(params), seed, params.gamma(), params, 2)
        assert exc.value.height == 0


class TestEvaluation:

    def test_independent_solutions(self, basis):
        mat = solution_matrix(basis, chamber_point(2, depth=3.0, wobble=0.2))
        assert np.linalg.matrix_rank(mat) == 4

    def test_holomorphic_part(self, basis, params):
        z = chamber_point(2, depth=3.0, wobble=0.1)
        sol = basis[2]
        assert_allclose(eval_holomorphic(sol, z), S_sp_eval(z, params) * eval_solution(sol, z))

    def test_eval_anywhere_in_chamber(self, basis):
        z = chamber_point(2, depth=3.5, wobble=0.1)
        sol = basis[0]
        assert_allclose(eval_anywhere(sol, z, depth=3.0), eval_solution(sol, z))

    def test_eval_anywhere_continues(self, basis):
        z = chamber_point(2, depth=2.0, wobble=0.1)
        sol = basis[3]
        direct = eval_solution(sol, z)
        continued = eval_anywhere(sol, z, depth=4.0)
        assert np.linalg.norm(continued - direct) < 1e-5 * np.linalg.norm(direct)

    def test_document_round_trip(self, basis):
        sol = basis[1]
        restored = from_document(json.loads(json.dumps(to_document(sol))))
        z = chamber_point(2, depth=3.0, wobble=0.1)
        assert restored.label == sol.label
        assert_allclose(eval_solution(restored, z), eval_solution(sol, z))


@pytest.mark.slow
class TestCrossRoute:

    @pytest.mark.parametrize("eps", [(1, 1), (-1, 1), (-1, -1)])
    def test_ratio_is_one(self, params, eps):
        zs = [chamber_point(2, depth=3.0, wobble=0.1), chamber_point(2, depth=3.5, wobble=-0.2)]
        ratios = cross_route_ratios(eps, params, zs, height_cap=4)
        assert_allclose(ratios, [1.0, 1.0], rtol=1e-7)

    @pytest.mark.parametrize("eps", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    def test_solutions_are_proportional(self, params, eps):
        zs = [chamber_point(2, depth=3.0, wobble=0.1), chamber_point(2, depth=3.5, wobble=-0.2)]
        ratios, misfits = cross_route_check(eps, params, zs, height_cap=4)
        assert max(abs(r - 1) for r in ratios) < 1e-7
        assert max(misfits) < 1e-7

    def test_rank_three_transport(self, params3):
        sol = solve_gamma((1, -1, 1), 4, params3)
        assert transport_residual(sol, chamber_point(3, depth=4.0, wobble=0.1)) < 1e-5


class TestChamberShift:

    def test_minimal(self):
        assert list(chamber_shift(np.array([-3.0, -6.0]), 3.0)) == [6, 0]
        assert list(chamber_shift(np.array([-4.0, -2.0]), 4.0)) == [4, 2]

    def test_zero_inside_chamber(self):
        z = chamber_point(2, depth=3.5, wobble=0.1)
        assert list(chamber_shift(z, 3.0)) == [0, 0]

    def test_lands_in_chamber(self):
        z = np.array([1.3 + 0.2j, -0.4 - 0.1j, 2.2])
        shifted = np.real(z - chamber_shift(z, 4.0))
        assert np.all(shifted[:-1] - shifted[1:] <= -4.0 + 1e-9)
        assert shifted[-1] <= -4.0 + 1e-9
