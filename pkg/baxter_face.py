#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Jauges vers la matrice R dynamique de Baxter (modèle de faces à huit sommets),
matrice K elliptique à quatre paramètres, symétries de croisement et de
renversement de spin, poids de Boltzmann de faces et de bord.
"""

import cmath
from dataclasses import dataclass
from itertools import product

import numpy as np

from elliptic_connection import (
    C_dual_fn,
    C_fn,
    R_cm,
    K_cm,
    alpha_cm,
    beta_cm,
    shifted_local_backward,
)
from numerics import checked_ratio, theta, thetas

GAUGE_POINTS = (0.37 + 0.11j, -0.52 + 0.23j, 1.3 - 0.4j)
STEP_TOL = 1e-12

_PERM = np.eye(4)[[0, 2, 1, 3]]


# ===== JAUGES =====

def _middle(r):
    """(A(z,ξ), B(z,ξ), B(z,-ξ), A(z,-ξ)) lus sur le bloc central"""
    return r[1, 1], r[1, 2], r[2, 1], r[2, 2]


def _assemble_R(a_plus, b_plus, b_minus, a_minus):
    return np.array([[1, 0, 0, 0],
                     [0, a_plus, b_plus, 0],
                     [0, b_minus, a_minus, 0],
                     [0, 0, 0, 1]], dtype=complex)


def gauge_i(R_fn, K_fn, u):
    """A ↦ u(ξ) A ; B et K inchangés. Exige u(ξ)u(-ξ) = 1"""
    for xi in GAUGE_POINTS:
        if abs(u(xi) * u(-xi) - 1) > 1e-10:
            raise ValueError(f"jauge invalide : u(ξ)u(-ξ) = {u(xi) * u(-xi)} en ξ={xi}")

    def R_g(z, xi):
        a_p, b_p, b_m, a_m = _middle(R_fn(z, xi))
        return _assemble_R(u(xi) * a_p, b_p, b_m, u(-xi) * a_m)

    return R_g, K_fn


def gauge_ii(R_fn, K_fn, p):
    """A ↦ q^{2κ(ξ-z)} A, B ↦ q^{-z(2κ+ξ)} B, α ↦ q^{2zξ} α, β inchangé"""
    k2 = 2 * p.kappa

    def R_g(z, xi):
        a_p, b_p, b_m, a_m = _middle(R_fn(z, xi))
        return _assemble_R(p.qp(k2 * (xi - z)) * a_p, p.qp(-z * (k2 + xi)) * b_p,
                           p.qp(-z * (k2 - xi)) * b_m, p.qp(k2 * (-xi - z)) * a_m)

    def K_g(z, xi):
        k = np.array(K_fn(z, xi), dtype=complex)
        k[0, 0] *= p.qp(2 * z * xi)
        k[1, 1] *= p.qp(-2 * z * xi)
        return k

    return R_g, K_g


def u_cm_to_Ba(xi, p):
    """u(ξ) = θ(q^{2κ+ξ}, q^{-ξ}) / θ(q^{2κ-ξ}, q^ξ)"""
    k2 = 2 * p.kappa
    num = thetas([p.qp(k2 + xi), p.qp(-xi)], p.q)
    den = thetas([p.qp(k2 - xi), p.qp(xi)], p.q)
    return checked_ratio(num, den, "u_cm_to_Ba", xi)


def gauged_Ba(p):
    """(R_cm, K_cm) → jauge (i) puis jauge (ii)"""
    R_1, K_1 = gauge_i(lambda z, xi: R_cm(z, xi, p), lambda z, xi: K_cm(z, xi, p),
                       lambda xi: u_cm_to_Ba(xi, p))
    return gauge_ii(R_1, K_1, p)


# ===== MATRICES DE BAXTER =====

def A_Ba(z, xi, p):
    k2 = 2 * p.kappa
    num = thetas([p.qp(-z), p.qp(k2 + xi)], p.q)
    den = thetas([p.qp(k2 - z), p.qp(xi)], p.q)
    return checked_ratio(num, den, "A_Ba", (z, xi))


def B_Ba(z, xi, p):
    k2 = 2 * p.kappa
    num = thetas([p.qp(-z - xi), p.qp(k2)], p.q)
    den = thetas([p.qp(k2 - z), p.qp(-xi)], p.q)
    return checked_ratio(num, den, "B_Ba", (z, xi))


def R_Ba(z, xi, p):
    return _assemble_R(A_Ba(z, xi, p), B_Ba(z, xi, p), B_Ba(z, -xi, p), A_Ba(z, -xi, p))


def alpha_Ba(z, xi, p):
    return alpha_cm(z, xi, p) * p.qp(2 * z * xi)


def beta_Ba(z, xi, p):
    return beta_cm(z, xi, p)


def K_Ba(z, xi, p):
    """Matrice K dynamique à quatre paramètres de bord (ζ, ζ', υ, υ')"""
    return np.array([[alpha_Ba(z, xi, p), beta_Ba(z, xi, p)],
                     [beta_Ba(z, -xi, p), alpha_Ba(z, -xi, p)]], dtype=complex)


def mu_fn(z, p):
    """μ(z) = θ(a q^z, b q^z, c q^z, d q^z ; q) / θ(q^{2z} ; q) · q^{2(ζ+ζ')z}"""
    num = thetas([t * p.qp(z) for t in p.askey_wilson()], p.q)
    return checked_ratio(num, theta(p.qp(2 * z), p.q), "mu", z) * p.qp(2 * (p.zeta + p.zeta_p) * z)


def mu_dual_fn(z, p):
    return mu_fn(z, p.dual())


def antidiagonal_predicate(z, xi, p, tol=1e-10):
    """K_Ba(z,ξ) est anti-diagonale ssi C(z,ξ) = C̃(ξ,z)"""
    c, ct = C_fn(z, xi, p), C_dual_fn(xi, z, p)
    return abs(c - ct) <= tol * max(1.0, abs(c))


SPIN_REVERSAL = np.array([[0, 1], [1, 0]], dtype=complex)


def spin_reversal_residual(z, xi, p):
    """S K_Ba(z,ξ) S^{-1} = K_Ba(z,-ξ)"""
    lhs = SPIN_REVERSAL @ K_Ba(z, xi, p) @ SPIN_REVERSAL
    return float(np.max(np.abs(lhs - K_Ba(z, -xi, p))))


# ===== CROISEMENT =====

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def _idx(e1, e2):
    return 2 * (e1 == -1) + (e2 == -1)


def _crossing_factor(h2, z, xi, p):
    k2 = 2 * p.kappa
    num = thetas([p.qp(xi + k2 * h2), p.qp(z)], p.q)
    den = thetas([p.qp(xi), p.qp(z - k2)], p.q)
    return p.qp(-p.kappa * (1 + h2)) * checked_ratio(num, den, "crossing", (z, xi))


def partial_transpose_first(r):
    """R^{T_1} : transposition dans le premier facteur"""
    return r.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)


def crossing_residual(z, xi, p):
    """σ^y_2 R_Ba(z,ξ)^{T_1} σ^y_2 = q^{-κ(1+h_2)} θ(q^{ξ+2κh_2}, q^z)/θ(q^ξ, q^{z-2κ}) R_Ba(2κ-z, ξ+2κ h̲_2)"""
    s2 = np.kron(np.eye(2), SIGMA_Y)
    lhs = s2 @ partial_transpose_first(R_Ba(z, xi, p)) @ s2
    k2 = 2 * p.kappa
    shifted = shifted_local_backward(lambda s: R_Ba(k2 - z, s, p), (1, 2), 2,
                                     lambda w: xi + k2 * w[1])
    factor = np.diag([_crossing_factor(h2, z, xi, p) for _, h2 in product((1, -1), repeat=2)])
    return float(np.max(np.abs(lhs - factor @ shifted)))


def crossing_residual_coords(z, xi, p):
    """Forme en coordonnées, R v_δ1⊗v_δ2 = Σ R^{ε1ε2}_{δ1δ2} v_ε1⊗v_ε2"""
    k2 = 2 * p.kappa
    worst = 0.0
    base = R_Ba(z, xi, p)
    for d1, d2, e1, e2 in product((1, -1), repeat=4):
        lhs = d2 * e2 * base[_idx(d1, -e2), _idx(e1, -d2)]
        rhs = _crossing_factor(e2, z, xi, p) * R_Ba(k2 - z, xi + k2 * e2, p)[_idx(e1, e2), _idx(d1, d2)]
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


# ===== MODÈLE À HUIT SOMMETS EN FACES =====

def u_8v(xi, p):
    """
    u(ξ) = q^{-κ} (θ(q^{-ξ+2κ}) / θ(q^{-ξ-2κ}))^{1/2}, branche principale sur le
    demi-plan (Re ξ, Im ξ) > 0 lexicographiquement, u(ξ) = 1/u(-ξ) ailleurs
    """
    xi = complex(xi)
    if (xi.real, xi.imag) < (0.0, 0.0):
        return checked_ratio(1.0, u_8v(-xi, p), "u_8v", xi)
    k2 = 2 * p.kappa
    ratio = checked_ratio(theta(p.qp(-xi + k2), p.q), theta(p.qp(-xi - k2), p.q), "u_8v", xi)
    return p.qp(-p.kappa) * cmath.sqrt(ratio)


def face_scale(z, p):
    """f(z) = q^{z/2} θ(q^{2κ-z}) / θ(q^{2κ})"""
    k2 = 2 * p.kappa
    return p.qp(z / 2) * checked_ratio(theta(p.qp(k2 - z), p.q), theta(p.qp(k2), p.q), "f", z)


def R_8vSOS(z, xi, p):
    inner = _assemble_R(u_8v(xi, p) * A_Ba(z, xi, p), B_Ba(z, xi, p),
                        B_Ba(z, -xi, p), u_8v(-xi, p) * A_Ba(z, -xi, p))
    return face_scale(z, p) * inner


def perturbed_R(R_fn, eps):
    """B(z,ξ) ↦ (1+ε) B(z,ξ), règle de la glace préservée"""
    def R_eps(z, xi):
        r = np.array(R_fn(z, xi), dtype=complex)
        r[1, 2] *= 1 + eps
        return r
    return R_eps


def _step(x):
    """±1 si x est un pas admissible, None sinon"""
    x = complex(x)
    for s in (1, -1):
        if abs(x - s) < STEP_TOL:
            return s
    return None


def adjacent(a, b):
    return _step(b - a) is not None


@dataclass
class FaceWeightTable:
    """Poids W(a b ; c d | z,ξ) et B(b ; c, a | z,ξ) associés à (R, K)"""

    R_fn: object
    K_fn: object
    kappa: complex

    @classmethod
    def for_8vsos(cls, p):
        return cls(lambda z, xi: R_8vSOS(z, xi, p), lambda z, xi: K_Ba(z, xi, p), p.kappa)

    @classmethod
    def for_baxter(cls, p):
        return cls(lambda z, xi: R_Ba(z, xi, p), lambda z, xi: K_Ba(z, xi, p), p.kappa)

    def W(self, a, b, c, d, z, xi):
        """R^{d-c, c-a}_{b-a, d-b}(z, ξ - 2κa)"""
        steps = [_step(d - c), _step(c - a), _step(b - a), _step(d - b)]
        if None in steps:
            return 0.0j
        out1, out2, in1, in2 = steps
        r = self.R_fn(z, xi - 2 * self.kappa * a)
        return complex(r[_idx(out1, out2), _idx(in1, in2)])

    def B(self, b, c, a, z, xi):
        """K^{a-b}_{c-b}(z, ξ/2 - κb)"""
        out, inp = _step(a - b), _step(c - b)
        if out is None or inp is None:
            return 0.0j
        k = self.K_fn(z, xi / 2 - self.kappa * b)
        return complex(k[int(out == -1), int(inp == -1)])

    def star_triangle_residual(self, heights, z1, z2, z3, xi):
        a, b, c, d, e, f = heights
        W = self.W
        lhs = sum(W(f, g, a, b, z1 - z2, xi) * W(g, d, b, c, z1 - z3, xi) * W(f, e, g, d, z2 - z3, xi)
                  for g in (f - 1, f + 1))
        rhs = sum(W(a, g, b, c, z2 - z3, xi) * W(f, e, a, g, z1 - z3, xi) * W(e, d, g, c, z1 - z2, xi)
                  for g in (a - 1, a + 1))
        return float(abs(lhs - rhs))

    def boundary_ybe_residual(self, heights, z1, z2, xi):
        a, b, c, d, e = heights
        W, B = self.W, self.B
        fs = (c - 1, c + 1)
        gs = [c + k for k in range(-3, 4)]
        lhs = sum(W(c, f, d, e, z1 - z2, xi) * B(f, g, e, z1, xi)
                  * W(c, b, f, g, z1 + z2, xi) * B(b, a, g, z2, xi)
                  for f in fs for g in gs)
        rhs = sum(B(d, g, e, z2, xi) * W(c, f, d, g, z1 + z2, xi)
                  * B(f, a, g, z1, xi) * W(c, b, f, a, z1 - z2, xi)
                  for f in fs for g in gs)
        return float(abs(lhs - rhs))

    def inversion_residual(self, a, b, c, d, z, xi, scale=1.0):
        """Σ_e W(d e ; a b | z) W(d c ; e b | -z) = scale · δ_ac"""
        total = sum(self.W(d, e, a, b, z, xi) * self.W(d, c, e, b, -z, xi) for e in (d - 1, d + 1))
        target = scale if a == c else 0.0
        return float(abs(total - target))

    def boundary_inversion_residual(self, a, b, c, z, xi):
        """Σ_d B(b ; d, c | z) B(b ; a, d | -z) = δ_ac"""
        total = sum(self.B(b, d, c, z, xi) * self.B(b, a, d, -z, xi) for d in (b - 1, b + 1))
        return float(abs(total - (1.0 if a == c else 0.0)))

    def weight_table(self, heights, z, xi):
        """Poids non nuls pour des hauteurs dans `heights`, triés"""
        rows = []
        for a, b, c, d in product(heights, repeat=4):
            value = self.W(a, b, c, d, z, xi)
            if value != 0:
                rows.append({"kind": "W", "heights": [a, b, c, d], "re": value.real, "im": value.imag})
        for b, c, a in product(heights, repeat=3):
            value = self.B(b, c, a, z, xi)
            if value != 0:
                rows.append({"kind": "B", "heights": [b, c, a], "re": value.real, "im": value.imag})
        return rows


def W_8vSOS_standard(a, b, c, d, z, xi, p):
    """Poids standard du modèle de faces à huit sommets, racine carrée principale"""
    q, k2 = p.q, 2 * p.kappa
    if not (adjacent(a, b) and adjacent(a, c) and adjacent(b, d) and adjacent(c, d)):
        return 0.0j
    s = _step(b - a)
    if b == c and a == d:
        return p.qp(-s * z / 2) * theta(p.qp(s * z - xi + k2 * a), q) / theta(p.qp(-xi + k2 * a), q)
    if b == c:
        return face_scale(z, p)
    num = thetas([p.qp(-xi + k2 * (a - 1)), p.qp(-xi + k2 * (a + 1))], q)
    root = cmath.sqrt(num / theta(p.qp(-xi + k2 * a), q) ** 2)
    return p.qp(p.kappa) * root * p.qp(z / 2) * theta(p.qp(-z), q) / theta(p.qp(k2), q)


def root_row_sign(a, s, xi, p):
    """
    Signe ±1 reliant W(a, a+s, a-s, a) de la table 8vSOS à la racine principale :
    q^κ u(sξ') θ(q^{-sξ'-2κ}) / θ(q^{-sξ'}) = ± (θ(q^{-ξ'-2κ}) θ(q^{-ξ'+2κ}) / θ(q^{-ξ'})²)^{1/2}
    avec ξ' = ξ - 2κa
    """
    q, k2 = p.q, 2 * p.kappa
    shifted = complex(xi) - k2 * a
    branch = p.qp(p.kappa) * u_8v(s * shifted, p) * checked_ratio(
        theta(p.qp(-s * shifted - k2), q), theta(p.qp(-s * shifted), q), "root_row_sign", xi)
    principal = cmath.sqrt(thetas([p.qp(-shifted - k2), p.qp(-shifted + k2)], q)
                           / theta(p.qp(-shifted), q) ** 2)
    return 1 if abs(branch - principal) <= abs(branch + principal) else -1


def admissible_hexagons(window):
    """(a,b,c,d,e,f) avec A_ab A_bc A_dc A_ed A_fe A_fa = 1"""
    window = list(window)
    inside = set(window)
    for a in window:
        for sb, sc, sd, se in product((1, -1), repeat=4):
            b = a + sb
            c = b + sc
            d = c - sd
            e = d - se
            for sf in (1, -1):
                f = e - sf
                if adjacent(f, a) and {b, c, d, e, f} <= inside:
                    yield a, b, c, d, e, f


def admissible_boundary_tuples(window):
    """(a,b,c,d,e) avec A_cb A_ba A_cd A_de"""
    window = list(window)
    inside = set(window)
    for c in window:
        for sb, sa, sd, se in product((1, -1), repeat=4):
            b, d = c + sb, c + sd
            a, e = b + sa, d + se
            if {a, b, d, e} <= inside:
                yield a, b, c, d, e
