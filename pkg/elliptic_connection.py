#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Cocycle de connexion des équations qKZ de bord.

Briques thêta C(z,ξ), C̃(z,ξ), e_α, ẽ_α, p_α, p̃_α ; matrices R_cm, K_cm ;
cocycle M_cm^v(z,ξ) ; coefficients de connexion généraux ; extraction
numérique des matrices de connexion à partir de la base de séries.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve, svdvals

import config
from errors import CocycleMismatchError, IllConditionedError, NonGenericError
from numerics import checked_ratio, thetas
from principal_series import MultiplicityFunction
from qkz_series import chamber_point, eval_anywhere
from spin_rep import embed_local, index_of_epsilon, swap
from trig_cocycle import spin_cocycle
from weylc import (
    WeylElement,
    all_roots,
    epsilon_of,
    epsilons,
    minimal_coset_reps,
    pairing,
    parabolic_subset,
    simple_root,
    w_epsilon,
)

COND_LIMIT = 1e12
# Re(α_j, z) au point d'extraction ; au-delà l'écart entre solutions dominantes
# et sous-dominantes dépasse la précision double
EXTRACTION_DEPTH = 3.0


# ===== FONCTIONS THÊTA DE BASE =====

def C_fn(z, xi, p):
    """
    C(z,ξ) = θ(ã q^ξ, b̃ q^ξ, c̃ q^ξ, d q^{ξ-z}/ã ; q) / θ(q^{2ξ}, d q^{-z} ; q)
             · q^{-(ζ+υ-z)(ζ+ζ'-ξ)}
    """
    _, _, _, d = p.askey_wilson()
    at, bt, ct, _ = p.dual_askey_wilson()
    num = thetas([at * p.qp(xi), bt * p.qp(xi), ct * p.qp(xi), d * p.qp(xi - z) / at], p.q)
    den = thetas([p.qp(2 * xi), d * p.qp(-z)], p.q)
    weight = p.qp(-(p.zeta + p.upsilon - z) * (p.zeta + p.zeta_p - xi))
    return checked_ratio(num, den, "C", (z, xi)) * weight


def C_dual_fn(z, xi, p):
    """C̃ : υ et ζ' échangés"""
    return C_fn(z, xi, p.dual())


def A_cm(z, xi, p):
    k2 = 2 * p.kappa
    num = thetas([p.qp(k2 - xi), p.qp(-z)], p.q)
    den = thetas([p.qp(k2 - z), p.qp(-xi)], p.q)
    return checked_ratio(num, den, "A_cm", (z, xi)) * p.qp(k2 * (z - xi))


def B_cm(z, xi, p):
    k2 = 2 * p.kappa
    num = thetas([p.qp(k2), p.qp(-z - xi)], p.q)
    den = thetas([p.qp(-xi), p.qp(k2 - z)], p.q)
    return checked_ratio(num, den, "B_cm", (z, xi)) * p.qp((k2 + xi) * z)


def alpha_cm(z, xi, p):
    num = C_fn(z, xi, p) - C_dual_fn(xi, z, p)
    return checked_ratio(num, C_dual_fn(xi, -z, p), "alpha_cm", (z, xi))


def beta_cm(z, xi, p):
    return checked_ratio(C_fn(z, xi, p), C_dual_fn(-xi, -z, p), "beta_cm", (z, xi))


def R_cm(z, xi, p):
    """Matrice R dynamique unitaire sur C² ⊗ C², base v_{++}, v_{+-}, v_{-+}, v_{--}"""
    return np.array([[1, 0, 0, 0],
                     [0, A_cm(z, xi, p), B_cm(z, xi, p), 0],
                     [0, B_cm(z, -xi, p), A_cm(z, -xi, p), 0],
                     [0, 0, 0, 1]], dtype=complex)


def K_cm(z, xi, p):
    return np.array([[alpha_cm(z, xi, p), beta_cm(z, xi, p)],
                     [beta_cm(z, -xi, p), alpha_cm(z, -xi, p)]], dtype=complex)


# ===== VERSIONS PAR RACINE =====

def e_fn(alpha, x, y, m):
    """
    e_α(x,y) = q^{-(κ_α+κ_{2α}-x)(κ_α+κ_{α⁽¹⁾}-y)/(2μ_α)}
               · θ(ã_α q^y, b̃_α q^y, c̃_α q^y, d_α q^{y-x}/ã_α ; q_α²) / θ(q^{2y}, d_α q^{-x} ; q_α²)
    """
    ka, k2a, ka1, _ = m.root_multiplicities(alpha)
    q2 = m.q_alpha(alpha) ** 2
    _, _, _, d = m.askey_wilson(alpha)
    at, bt, ct, _ = m.dual_askey_wilson(alpha)
    num = thetas([at * m.qp(y), bt * m.qp(y), ct * m.qp(y), d * m.qp(y - x) / at], q2)
    den = thetas([m.qp(2 * y), d * m.qp(-x)], q2)
    weight = m.qp(-(ka + k2a - x) * (ka + ka1 - y) / (2 * m.mu(alpha)))
    return checked_ratio(num, den, "e", (alpha, x, y)) * weight


def e_dual_fn(alpha, x, y, m):
    return e_fn(alpha, x, y, m.dual())


def p_fn(alpha, x, m):
    """p_α(x) = θ(a_α q^x, b_α q^x, c_α q^x, d_α q^x ; q_α²) / θ(q^{2x} ; q_α²) · q^{(κ_α+κ_{α⁽¹⁾})x/μ_α}"""
    ka, _, ka1, _ = m.root_multiplicities(alpha)
    q2 = m.q_alpha(alpha) ** 2
    num = thetas([t * m.qp(x) for t in m.askey_wilson(alpha)], q2)
    den = thetas([m.qp(2 * x)], q2)
    return checked_ratio(num, den, "p", (alpha, x)) * m.qp((ka + ka1) * x / m.mu(alpha))


def p_dual_fn(alpha, x, m):
    return p_fn(alpha, x, m.dual())


@dataclass(frozen=True)
class ConnectionContext:
    """Évaluateurs liés à un jeu de paramètres"""

    params: object

    @property
    def multiplicity(self):
        return MultiplicityFunction.from_params(self.params)

    def C(self, z, xi):
        return C_fn(z, xi, self.params)

    def C_dual(self, z, xi):
        return C_dual_fn(z, xi, self.params)

    def A(self, z, xi):
        return A_cm(z, xi, self.params)

    def B(self, z, xi):
        return B_cm(z, xi, self.params)

    def alpha(self, z, xi):
        return alpha_cm(z, xi, self.params)

    def beta(self, z, xi):
        return beta_cm(z, xi, self.params)

    def R(self, z, xi):
        return R_cm(z, xi, self.params)

    def K(self, z, xi):
        return K_cm(z, xi, self.params)

    def e(self, alpha, x, y):
        return e_fn(alpha, x, y, self.multiplicity)

    def e_dual(self, alpha, x, y):
        return e_dual_fn(alpha, x, y, self.multiplicity)

    def p(self, alpha, x):
        return p_fn(alpha, x, self.multiplicity)

    def p_dual(self, alpha, x):
        return p_dual_fn(alpha, x, self.multiplicity)


# ===== DÉCALAGES DE POIDS =====

def shifted_local(op_fn, legs, n, shift):
    """
    Opérateur S(ξ + décalage(h)) : op_fn(ξ_eff) agit sur `legs`,
    ξ_eff = shift(poids du vecteur d'entrée).
    """
    return embed_local(op_fn, legs, n, xi_fn=lambda w_in, _w_out: complex(shift(w_in)))


def shifted_local_backward(op_fn, legs, n, shift):
    """S(ξ + α h̲_i) : projection sur le poids de sortie après évaluation"""
    return embed_local(op_fn, legs, n, xi_fn=lambda _w_in, w_out: complex(shift(w_out)))


# ===== COCYCLE DE CONNEXION =====

def M_cm_generator(i, z, xi, p):
    """
    M^{s_i} = P_{i,i+1} R_cm(z_i - z_{i+1}, 2ξ - 2κ(h_1+...+h_{i-1}))_{i,i+1},
    M^{s_n} = K_cm(z_n, ξ - κ(h_1+...+h_{n-1}))_n
    """
    n = p.n
    z = np.asarray(z, dtype=complex)
    if i == n:
        return shifted_local(lambda s: K_cm(z[n - 1], s, p), (n,), n,
                             lambda w: xi - p.kappa * sum(w[:n - 1]))
    if not 1 <= i < n:
        raise ValueError(f"générateur s_{i} hors de 1..{n}")
    r = shifted_local(lambda s: R_cm(z[i - 1] - z[i], s, p), (i, i + 1), n,
                      lambda w: 2 * xi - 2 * p.kappa * sum(w[:i - 1]))
    return swap(n, i, i + 1) @ r


def M_cm_word(word, z, xi, p):
    """M^{s_{j1}}(z) M^{s_{j2}}(s_{j1} z) ..."""
    n = p.n
    out = np.eye(2 ** n, dtype=complex)
    y = np.asarray(z, dtype=complex)
    for j in word:
        out = out @ M_cm_generator(j, y, xi, p)
        y = WeylElement.simple(j, n).act(y)
    return out


def M_cm(v, z, xi, p):
    return M_cm_word(v.reduced_word(), z, xi, p)


def cocycle_law_residual(u, v, z, xi, p):
    """‖M(uv)(z) - M(u)(z) M(v)(u^{-1}z)‖"""
    z = np.asarray(z, dtype=complex)
    lhs = M_cm(u * v, z, xi, p)
    rhs = M_cm(u, z, xi, p) @ M_cm(v, u.inverse().act(z), xi, p)
    return float(np.max(np.abs(lhs - rhs)))


def word_independence_residual(words, z, xi, p, tol=None):
    """Écart maximal entre les valeurs de plusieurs mots réduits du même élément"""
    values = [M_cm_word(w, z, xi, p) for w in words]
    worst = max(float(np.max(np.abs(values[0] - other))) for other in values[1:])
    if tol is not None and worst > tol:
        raise CocycleMismatchError(f"mots {words} incompatibles", worst)
    return worst


# ===== ÉQUATIONS DYNAMIQUES =====

def _on(R_fn, legs, n, z, shift):
    return shifted_local(lambda s: R_fn(z, s), legs, n, shift)


def _max_abs(m):
    return float(np.max(np.abs(m)))


def dynamical_ybe_residual(R_fn, z1, z2, z3, xi, kappa):
    """
    R_12(z_12, ξ-2κh_3) R_13(z_13, ξ) R_23(z_23, ξ-2κh_1)
      = R_23(z_23, ξ) R_13(z_13, ξ-2κh_2) R_12(z_12, ξ)
    """
    lhs = (_on(R_fn, (1, 2), 3, z1 - z2, lambda w: xi - 2 * kappa * w[2])
           @ _on(R_fn, (1, 3), 3, z1 - z3, lambda w: xi)
           @ _on(R_fn, (2, 3), 3, z2 - z3, lambda w: xi - 2 * kappa * w[0]))
    rhs = (_on(R_fn, (2, 3), 3, z2 - z3, lambda w: xi)
           @ _on(R_fn, (1, 3), 3, z1 - z3, lambda w: xi - 2 * kappa * w[1])
           @ _on(R_fn, (1, 2), 3, z1 - z2, lambda w: xi))
    return _max_abs(lhs - rhs)


def ice_rule_residual(R_fn, z, xi):
    """[R(z,ξ), h_1 + h_2]"""
    delta = np.diag([2.0, 0.0, 0.0, -2.0])
    r = R_fn(z, xi)
    return _max_abs(r @ delta - delta @ r)


def dynamical_unitarity_residual(R_fn, z, xi):
    """R_21(z,ξ) R(-z,ξ) = Id"""
    perm = np.eye(4)[[0, 2, 1, 3]]
    return _max_abs(perm @ R_fn(z, xi) @ perm @ R_fn(-z, xi) - np.eye(4))


def K_unitarity_residual(K_fn, z, xi):
    return _max_abs(K_fn(z, xi) @ K_fn(-z, xi) - np.eye(2))


def p_symmetry_residual(R_fn, z, xi, kappa):
    """R_21(z,ξ) = R(z, -ξ + 2κΔ(h))"""
    perm = np.eye(4)[[0, 2, 1, 3]]
    lhs = perm @ R_fn(z, xi) @ perm
    rhs = shifted_local(lambda s: R_fn(z, s), (1, 2), 2, lambda w: -xi + 2 * kappa * (w[0] + w[1]))
    return _max_abs(lhs - rhs)


def right_reflection_residual(R_fn, K_fn, z1, z2, xi, kappa):
    """
    R_21(z_1-z_2, 2ξ) K_1(z_1, ξ-κh_2) R_12(z_1+z_2, 2ξ) K_2(z_2, ξ-κh_1)
      = K_2(z_2, ξ-κh_1) R_21(z_1+z_2, 2ξ) K_1(z_1, ξ-κh_2) R_12(z_1-z_2, 2ξ)
    """
    def r12(z):
        return _on(R_fn, (1, 2), 2, z, lambda w: 2 * xi)

    def r21(z):
        return _on(R_fn, (2, 1), 2, z, lambda w: 2 * xi)

    k1 = shifted_local(lambda s: K_fn(z1, s), (1,), 2, lambda w: xi - kappa * w[1])
    k2 = shifted_local(lambda s: K_fn(z2, s), (2,), 2, lambda w: xi - kappa * w[0])
    lhs = r21(z1 - z2) @ k1 @ r12(z1 + z2) @ k2
    rhs = k2 @ r21(z1 + z2) @ k1 @ r12(z1 - z2)
    return _max_abs(lhs - rhs)


def left_reflection_residual(R_fn, K_left_fn, z1, z2, xi, kappa):
    """Équation de réflexion gauche, décalages 2ξ + 2κΔ(h) et ξ + κh_j"""
    def big(w):
        return 2 * xi + 2 * kappa * (w[0] + w[1])

    def r12(z):
        return _on(R_fn, (1, 2), 2, z, big)

    def r21(z):
        return _on(R_fn, (2, 1), 2, z, big)

    k1 = shifted_local(lambda s: K_left_fn(z1, s), (1,), 2, lambda w: xi + kappa * w[1])
    k2 = shifted_local(lambda s: K_left_fn(z2, s), (2,), 2, lambda w: xi + kappa * w[0])
    lhs = r12(z1 - z2) @ k1 @ r21(z1 + z2) @ k2
    rhs = k2 @ r12(z1 + z2) @ k1 @ r21(z1 - z2)
    return _max_abs(lhs - rhs)


def left_from_right(K_fn):
    """K̲(z,ξ) = K(z,-ξ) pour R dynamiquement P-symétrique"""
    return lambda z, xi: K_fn(z, -xi)


def theta_link_residuals(x, y, p):
    """Écarts relatifs des identités reliant R_cm, C et e_α"""
    m = MultiplicityFunction.from_params(p)
    long_root, short_root = (1, -1), (1,)

    def rel(a, b):
        return float(abs(a - b) / max(1.0, abs(b)))

    diag = (e_fn(long_root, x, y, m) - e_dual_fn(long_root, y, x, m)) / e_dual_fn(long_root, y, -x, m)
    off = e_fn(long_root, x, -y, m) / e_dual_fn(long_root, y, -x, m)
    return {
        "B": rel(diag, B_cm(x, -y, p)),
        "A": rel(off, A_cm(x, y, p)),
        "C": rel(e_fn(short_root, x, y, m), C_fn(x, y, p)),
    }


# ===== COEFFICIENTS DE CONNEXION GÉNÉRAUX =====

def resonance_distance(gamma, m):
    """min_β distance de (β,γ)/μ_β à Z : mesure de q^{2(β,γ)} ∉ q_β^{2Z}"""
    n = len(gamma)
    worst = np.inf
    for beta in all_roots(n):
        t = complex(pairing(beta, gamma)) / m.mu(beta)
        worst = min(worst, abs(t - round(t.real)))
    return float(worst)


def _coset_reps(n):
    return set(minimal_coset_reps(parabolic_subset(n), n))


def connection_coeffs_general(i, tau2, z, gamma, m, margin=None):
    """
    (m_{τ2,τ2}, m_{s_i τ2,τ2}) pour τ2 ∈ W_0^I ; (1, 0) si s_i τ2 ∉ W_0^I.
    x = (α_i, z), y = (α_i, τ2 γ).
    """
    n = tau2.n
    margin = config.MARGIN if margin is None else margin
    gamma = np.asarray(gamma, dtype=complex)
    if resonance_distance(gamma, m) < margin:
        raise NonGenericError(f"γ={gamma} à moins de {margin} d'une résonance")
    reps = _coset_reps(n)
    if tau2 not in reps:
        raise ValueError(f"{tau2} n'est pas un représentant minimal")
    if WeylElement.simple(i, n) * tau2 not in reps:
        return 1.0 + 0.0j, 0.0j
    alpha = simple_root(i, n)
    x = pairing(alpha, np.asarray(z, dtype=complex))
    y = pairing(alpha, tau2.act(gamma))
    den = e_dual_fn(alpha, y, -x, m)
    diag = checked_ratio(e_fn(alpha, x, y, m) - e_dual_fn(alpha, y, x, m), den, "m_diag", (x, y))
    off = checked_ratio(e_fn(alpha, x, -y, m), den, "m_off", (x, y))
    return diag, off


def connection_matrix_from_general(i, z, p):
    """Matrice de M_cm^{s_i}(z,ξ) assemblée colonne par colonne à partir des coefficients généraux"""
    n = p.n
    m = MultiplicityFunction.from_params(p)
    gamma = p.gamma()
    out = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for eps in epsilons(n):
        tau2 = w_epsilon(eps)
        col = index_of_epsilon(eps)
        diag, off = connection_coeffs_general(i, tau2, z, gamma, m)
        out[col, col] = diag
        if off != 0:
            out[index_of_epsilon(epsilon_of(WeylElement.simple(i, n) * tau2)), col] = off
    return out


# ===== EXTRACTION NUMÉRIQUE =====

def extraction_point(n, wobble=0.1):
    return chamber_point(n, depth=EXTRACTION_DEPTH, wobble=wobble)


def basis_matrix(basis, z, depth=EXTRACTION_DEPTH):
    """Colonnes Φ_ε(z), prolongées hors de la chambre par transport"""
    return np.column_stack([eval_anywhere(sol, z, depth=depth) for sol in basis])


def equilibrate(phi):
    """Φ = Ψ · diag(s) avec des colonnes Ψ de norme 1"""
    scales = np.linalg.norm(phi, axis=0)
    if np.any(scales == 0):
        raise IllConditionedError("colonne nulle dans Φ(z)", np.inf)
    return phi / scales, scales


def _condition(frame):
    singular = svdvals(frame)
    return float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf


def frame_condition(basis, z, depth=EXTRACTION_DEPTH):
    """Conditionnement de Φ(z) après équilibrage des colonnes"""
    return _condition(equilibrate(basis_matrix(basis, z, depth))[0])


def extract_connection(v, z, basis, depth=EXTRACTION_DEPTH):
    """Φ(z)^{-1} · C^v(z) Φ(v^{-1} z) dans la base {Φ_ε}"""
    p = basis[0].params
    z = np.asarray(z, dtype=complex)
    frame, scales = equilibrate(basis_matrix(basis, z, depth))
    cond = _condition(frame)
    if cond > COND_LIMIT:
        raise IllConditionedError(f"Φ(z) non inversible en z={z}", cond)
    moved = basis_matrix(basis, v.inverse().act(z), depth)
    return solve(frame, spin_cocycle(p).value(v, z) @ moved) / scales[:, None]
