from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose

from baxter_face import (
    FaceWeightTable,
    K_Ba,
    R_8vSOS,
    R_Ba,
    W_8vSOS_standard,
    admissible_boundary_tuples,
    admissible_hexagons,
    alpha_Ba,
    antidiagonal_predicate,
    beta_Ba,
    crossing_residual,
    crossing_residual_coords,
    face_scale,
    gauge_i,
    gauged_Ba,
    mu_dual_fn,
    mu_fn,
    perturbed_R,
    root_row_sign,
    spin_reversal_residual,
    u_8v,
)
from elliptic_connection import (
    K_unitarity_residual,
    dynamical_unitarity_residual,
    dynamical_ybe_residual,
    left_from_right,
    left_reflection_residual,
    p_symmetry_residual,
    right_reflection_residual,
)
from errors import PoleError

Z = 0.31 + 0.17j
XI = 0.43 - 0.12j
SAMPLE_POINTS = [(0.21 + 0.08j, 0.37 - 0.2j), (-0.44 + 0.13j, 0.52 + 0.05j)]


@pytest.fixture
def R(params):
    return lambda z, xi: R_Ba(z, xi, params)


@pytest.fixture
def K(params):
    return lambda z, xi: K_Ba(z, xi, params)


@pytest.fixture(params=["8vsos", "baxter"])
def table(request, params):
    if request.param == "8vsos":
        return FaceWeightTable.for_8vsos(params)
    return FaceWeightTable.for_baxter(params)


class TestGauges:

    def test_trivial_gauge(self, R, K):
        R_g, K_g = gauge_i(R, K, lambda xi: 1.0)
        assert_allclose(R_g(Z, XI), R(Z, XI))
        assert K_g is K

    def test_invalid_gauge(self, R, K):
        with pytest.raises(ValueError):
            gauge_i(R, K, lambda xi: 2.0)

    @pytest.mark.parametrize("z, xi", SAMPLE_POINTS)
    def test_composition_gives_baxter(self, params, z, xi):
        R_g, K_g = gauged_Ba(params)
        assert_allclose(R_g(z, xi), R_Ba(z, xi, params), rtol=1e-9, atol=1e-12)
        assert_allclose(K_g(z, xi), K_Ba(z, xi, params), rtol=1e-9, atol=1e-12)

    def test_u_8v_reciprocal(self, params):
        for xi in (XI, -XI, 0.2j, -0.58 + 0.03j):
            assert_allclose(u_8v(xi, params) * u_8v(-xi, params), 1.0, rtol=1e-12)

    def test_u_8v_pole_at_minus_two_kappa(self, params):
        k2 = 2 * params.kappa
        assert u_8v(k2, params) == 0
        with pytest.raises(PoleError):
            u_8v(-k2, params)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_8vsos_pole_at_two_kappa(self, params, sign):
        with pytest.raises(PoleError):
            R_8vSOS(Z, sign * 2 * params.kappa, params)


class TestBaxterMatrices:

    def test_permutation_at_zero(self, params):
        perm = np.eye(4)[[0, 2, 1, 3]]
        assert_allclose(R_Ba(0.0, XI, params), perm, atol=1e-12)

    def test_identity_without_bulk_coupling(self, params):
        free = replace(params, kappa=0.0)
        assert_allclose(R_Ba(Z, XI, free), np.eye(4), atol=1e-12)

    def test_unitarity(self, R, K):
        assert dynamical_unitarity_residual(R, Z, XI) < 1e-11
        assert K_unitarity_residual(K, Z, XI) < 1e-11

    def test_p_symmetry(self, R, params):
        assert p_symmetry_residual(R, Z, XI, params.kappa) < 1e-12

    def test_dynamical_ybe(self, R, params, rng):
        for _ in range(3):
            z1, z2, z3 = 0.4 * rng.normal(size=3) + 0.2j * rng.normal(size=3)
            assert dynamical_ybe_residual(R, z1, z2, z3, XI, params.kappa) < 1e-10

    def test_reflection(self, R, K, params, rng):
        z1, z2 = 0.4 * rng.normal(size=2) + 0.2j * rng.normal(size=2)
        assert right_reflection_residual(R, K, z1, z2, XI, params.kappa) < 1e-9
        assert left_reflection_residual(R, left_from_right(K), z1, z2, XI, params.kappa) < 1e-9

    def test_spin_reversal(self, params):
        assert spin_reversal_residual(Z, XI, params) < 1e-14

    def test_beta_factorises(self, params):
        assert_allclose(beta_Ba(Z, XI, params),
                        mu_dual_fn(XI, params) / mu_fn(-Z, params), rtol=1e-10)

    def test_antidiagonal_predicate_is_boolean(self, params):
        assert antidiagonal_predicate(Z, XI, params) in (True, False)


class TestCrossing:

    @pytest.mark.parametrize("z, xi", SAMPLE_POINTS)
    def test_matrix_form(self, params, z, xi):
        assert crossing_residual(z, xi, params) < 1e-10

    @pytest.mark.parametrize("z, xi", SAMPLE_POINTS)
    def test_coordinate_form(self, params, z, xi):
        assert crossing_residual_coords(z, xi, params) < 1e-10


class TestFaceWeights:

    def test_diagonal_rows_match_standard_table(self, params):
        table = FaceWeightTable.for_8vsos(params)
        for a in range(-2, 3):
            for s in (1, -1):
                for heights in [(a, a + s, a + s, a), (a, a + s, a + s, a + 2 * s)]:
                    assert_allclose(table.W(*heights, Z, XI),
                                    W_8vSOS_standard(*heights, Z, XI, params), rtol=1e-10)

    def test_square_root_row_with_branch_sign(self, params):
        table = FaceWeightTable.for_8vsos(params)
        for a in range(-2, 3):
            for s in (1, -1):
                heights = (a, a + s, a - s, a)
                signed = root_row_sign(a, s, XI, params) * W_8vSOS_standard(*heights, Z, XI, params)
                assert_allclose(table.W(*heights, Z, XI), signed, rtol=1e-10)

    def test_square_root_row_detects_sign_flip(self, params):
        table = FaceWeightTable.for_8vsos(params)
        heights = (0, 1, -1, 0)
        signed = root_row_sign(0, 1, XI, params) * W_8vSOS_standard(*heights, Z, XI, params)
        assert abs(table.W(*heights, Z, XI) + signed) > 1e-3 * abs(signed)

    def test_inadmissible_vanishes(self, table):
        assert table.W(0, 2, 1, 1, Z, XI) == 0
        assert table.W(0, 1, 1, 3, Z, XI) == 0
        assert table.B(0, 2, 1, Z, XI) == 0

    @pytest.mark.parametrize("s", [1, -1])
    def test_boundary_diagonal(self, params, s):
        table = FaceWeightTable.for_8vsos(params)
        a = 1
        assert_allclose(table.B(a, a + s, a + s, Z, XI),
                        alpha_Ba(Z, s * XI / 2 - s * params.kappa * a, params), rtol=1e-12)

    def test_weight_table_rows(self, params):
        rows = FaceWeightTable.for_baxter(params).weight_table(range(-1, 2), Z, XI)
        kinds = {row["kind"] for row in rows}
        assert kinds == {"W", "B"}
        assert all(set(row) == {"kind", "heights", "re", "im"} for row in rows)

    def test_star_triangle(self, table, rng):
        hexagons = list(admissible_hexagons(range(-2, 3)))
        z1, z2, z3 = 0.4 * rng.normal(size=3) + 0.2j * rng.normal(size=3)
        for heights in hexagons[::7]:
            assert table.star_triangle_residual(heights, z1, z2, z3, XI) < 1e-9, heights

    @pytest.mark.slow
    def test_star_triangle_full_window(self, table):
        for heights in admissible_hexagons(range(-3, 4)):
            assert table.star_triangle_residual(heights, 0.2 + 0.1j, -0.35, 0.1 - 0.3j, XI) < 1e-9

    def test_boundary_ybe(self, table):
        for heights in list(admissible_boundary_tuples(range(-2, 3)))[::5]:
            assert table.boundary_ybe_residual(heights, 0.27 + 0.1j, -0.41 + 0.06j, XI) < 1e-9

    def test_inversion(self, params):
        table = FaceWeightTable.for_8vsos(params)
        scale = face_scale(Z, params) * face_scale(-Z, params)
        for a, b, c, d in [(0, 1, 0, 1), (0, 1, 2, 1), (0, -1, 0, 1), (2, 1, 0, 1)]:
            assert table.inversion_residual(a, b, c, d, Z, XI, scale=scale) < 1e-10

    def test_inversion_baxter(self, params):
        table = FaceWeightTable.for_baxter(params)
        assert table.inversion_residual(0, 1, 0, 1, Z, XI) < 1e-10

    def test_boundary_inversion(self, table):
        for a, b, c in [(0, 1, 0), (2, 1, 0), (0, -1, 0)]:
            assert table.boundary_inversion_residual(a, b, c, Z, XI) < 1e-10

    def test_scaled_matrix(self, params):
        assert_allclose(R_8vSOS(0.0, XI, params)[0, 0], face_scale(0.0, params))


class TestPerturbation:

    def test_breaks_dynamical_ybe(self, R, params):
        broken = perturbed_R(R, 1e-3)
        assert dynamical_ybe_residual(broken, 0.2 + 0.1j, -0.35, 0.1 - 0.3j, XI, params.kappa) > 1e-7

    def test_breaks_star_triangle(self, params):
        table = FaceWeightTable.for_baxter(params)
        broken = FaceWeightTable(perturbed_R(table.R_fn, 1e-3), table.K_fn, table.kappa)
        worst = max(broken.star_triangle_residual(h, 0.2 + 0.1j, -0.35, 0.1 - 0.3j, XI)
                    for h in admissible_hexagons(range(-2, 3)))
        assert worst > 1e-7
