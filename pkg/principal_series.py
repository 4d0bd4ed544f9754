#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Série principale minimale M(γ) de l'algèbre de Hecke affine C∨C_n.

Base {v_σ(γ)}_{σ ∈ W_0} (ordre de enumerate_w0), action des T_j et Y_i,
entrelaceurs A_σ(γ), facteurs D, projection φ_I vers la représentation de spin,
vecteurs b_I, fonctions c et cocycle de M(γ).
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from errors import NonGenericError, PoleError
from numerics import qpoch, qpow
from spin_rep import ParameterSet, index_of_epsilon, pi_T
from trig_cocycle import HeckeCocycle
from weylc import (
    WeylElement,
    all_roots,
    enumerate_w0,
    epsilon_of,
    epsilons,
    is_long,
    is_positive,
    pairing,
    parabolic_subset,
    positive_roots,
    simple_coordinates,
    simple_root,
    w_epsilon,
)

E_TOL = 1e-9


# ===== MULTIPLICITÉS =====

@dataclass(frozen=True)
class MultiplicityFunction:
    """
    Valeurs (ζ, υ, ζ', υ', κ) de la fonction de multiplicité sur les cinq orbites
    (α_n, 2α_n, α_0, 2α_0, α_1).
    """

    q: float
    kappa: complex
    zeta: complex
    zeta_p: complex
    upsilon: complex
    upsilon_p: complex

    @classmethod
    def from_params(cls, p):
        return cls(q=p.q, kappa=p.kappa, zeta=p.zeta, zeta_p=p.zeta_p,
                   upsilon=p.upsilon, upsilon_p=p.upsilon_p)

    def to_params(self, xi, n):
        return ParameterSet(q=self.q, kappa=self.kappa, zeta=self.zeta, zeta_p=self.zeta_p,
                            upsilon=self.upsilon, upsilon_p=self.upsilon_p, xi=xi, n=n)

    def qp(self, x):
        return qpow(self.q, x)

    def dual(self):
        return replace(self, upsilon=self.zeta_p, zeta_p=self.upsilon)

    def root_multiplicities(self, alpha):
        """(κ_α, κ_{2α}, κ_{α^{(1)}}, κ_{2α^{(1)}})"""
        if is_long(alpha):
            return (self.kappa,) * 4
        return self.zeta, self.upsilon, self.zeta_p, self.upsilon_p

    def q_alpha(self, alpha):
        return self.q if is_long(alpha) else np.sqrt(self.q)

    @staticmethod
    def mu(alpha):
        return 1.0 if is_long(alpha) else 0.5

    def askey_wilson(self, alpha):
        ka, k2a, ka1, k2a1 = self.root_multiplicities(alpha)
        qa = self.q_alpha(alpha)
        return (self.qp(ka + k2a), -self.qp(ka - k2a),
                qa * self.qp(ka1 + k2a1), -qa * self.qp(ka1 - k2a1))

    def dual_askey_wilson(self, alpha):
        return self.dual().askey_wilson(alpha)

    def kappa_tilde(self, alpha):
        return self.dual().root_multiplicities(alpha)[0]

    def hecke_kappa(self, j, n):
        """κ_j du générateur T_j"""
        if j == 0:
            return self.zeta_p
        if j == n:
            return self.zeta
        return self.kappa

    def pair(self, j, n):
        """(κ_a, κ_{2a}) de la racine affine simple a_j"""
        if j == 0:
            return self.zeta_p, self.upsilon_p
        if j == n:
            return self.zeta, self.upsilon
        return self.kappa, self.kappa


def _unit(k, n):
    return tuple(1 if r == k else 0 for r in range(n))


def _gamma_key(gamma):
    return tuple(complex(c) for c in gamma)


@lru_cache(maxsize=None)
def _basis(n):
    elements = enumerate_w0(n)
    return elements, {w: k for k, w in enumerate(elements)}


def w0_basis(n):
    """Éléments de W_0 indexant la base de M(γ)"""
    return _basis(n)[0]


def basis_position(w):
    return _basis(w.n)[1][w]


def principal_vector(w):
    """v_w(γ) comme vecteur de coordonnées"""
    v = np.zeros(len(w0_basis(w.n)), dtype=complex)
    v[basis_position(w)] = 1.0
    return v


# ===== ACTION DE H(κ) =====

@lru_cache(maxsize=512)
def _T_M(j, gamma, m):
    n = len(gamma)
    elements, position = _basis(n)
    g = np.asarray(gamma, dtype=complex)
    k = m.hecke_kappa(j, n)
    diag = m.qp(-k) - m.qp(k)
    out = np.zeros((len(elements), len(elements)), dtype=complex)
    if j == 0:
        flip = WeylElement.sign_change(1, n)
        e1 = _unit(0, n)
        for col, sigma in enumerate(elements):
            out[position[flip * sigma], col] += m.qp(sigma.act(g)[0])
            if is_positive(sigma.inverse().act_root(e1)):
                out[col, col] += diag
        return out
    s = WeylElement.simple(j, n)
    alpha = simple_root(j, n)
    for col, sigma in enumerate(elements):
        out[position[s * sigma], col] += 1.0
        if not is_positive(sigma.inverse().act_root(alpha)):
            out[col, col] += diag
    return out


def T_M(j, gamma, m):
    """Matrice de T_j sur M(γ)"""
    n = len(gamma)
    if not 0 <= j <= n:
        raise ValueError(f"générateur T_{j} inexistant pour n={n}")
    return _T_M(j, _gamma_key(gamma), m)


def T_M_inverse(j, gamma, m):
    k = m.hecke_kappa(j, len(gamma))
    if abs(m.qp(-k) + m.qp(k)) < 1e-14:
        raise PoleError("T_M_inverse", j)
    t = T_M(j, gamma, m)
    return t + (m.qp(k) - m.qp(-k)) * np.eye(t.shape[0])


def _word(word, gamma, m, inverse=False):
    dim = len(w0_basis(len(gamma)))
    out = np.eye(dim, dtype=complex)
    for j in word:
        out = out @ (T_M_inverse(j, gamma, m) if inverse else T_M(j, gamma, m))
    return out


@lru_cache(maxsize=256)
def _Y_M(i, gamma, m):
    n = len(gamma)
    left = _word(range(i - 1, 0, -1), gamma, m, inverse=True)
    right = _word([0] + list(range(1, n + 1)) + list(range(n - 1, i - 1, -1)), gamma, m)
    return left @ right


def Y_M(nu, gamma, m):
    """
    Y^ν sur M(γ). ν est soit un indice i (Y_i = Y^{e_i}), soit un vecteur entier.
    """
    if np.isscalar(nu):
        return _Y_M(int(nu), _gamma_key(gamma), m)
    dim = len(w0_basis(len(gamma)))
    out = np.eye(dim, dtype=complex)
    for i, k in enumerate(nu, start=1):
        base = _Y_M(i, _gamma_key(gamma), m)
        if k < 0:
            base = np.linalg.inv(base)
        out = out @ np.linalg.matrix_power(base, abs(int(k)))
    return out


def bzl_residual(gamma, m):
    """
    Relations de Bernstein-Zelevinsky-Lusztig pour ν = e_k et i = 1..n,
    avec c_x = q^x - q^{-x}.
    """
    n = len(gamma)
    cx = lambda x: m.qp(x) - m.qp(-x)
    dim = len(w0_basis(n))
    one = np.eye(dim)
    worst = 0.0

    def check(lhs, rhs):
        nonlocal worst
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))

    for i in range(1, n + 1):
        t = T_M(i, gamma, m)
        for k in range(1, n + 1):
            y = Y_M(k, gamma, m)
            if i < n and k == i:
                check(y @ t, t @ Y_M(i + 1, gamma, m) - cx(m.kappa) * y)
            elif i < n and k == i + 1:
                check(y @ t, t @ Y_M(i, gamma, m) + cx(m.kappa) * Y_M(i, gamma, m))
            elif i == n and k == n:
                y_inv = np.linalg.inv(y)
                check(y @ t, t @ y_inv - cx(m.zeta) * y - cx(m.zeta_p) * one)
                check(y_inv @ t, t @ y + cx(m.zeta) * y + cx(m.zeta_p) * one)
            else:
                check(y @ t, t @ y)
    return worst


def vacuum_eigen_residual(gamma, m):
    """Y_i v_e(γ) = q^{-γ_i} v_e(γ)"""
    n = len(gamma)
    e = principal_vector(WeylElement.identity(n))
    return max(float(np.max(np.abs(Y_M(i, gamma, m) @ e - m.qp(-gamma[i - 1]) * e)))
               for i in range(1, n + 1))


# ===== FACTEURS D ET ENTRELACEURS =====

def D_alpha(alpha, gamma, m):
    """(1 - ã_α^{-1} q^{(α,γ)})(1 - b̃_α^{-1} q^{(α,γ)})"""
    a, b, _, _ = m.dual_askey_wilson(alpha)
    x = m.qp(pairing(alpha, gamma))
    return (1 - x / a) * (1 - x / b)


def D_sigma(sigma, gamma, m):
    """Produit des D_α(γ) sur R_0^+ ∩ σR_0^-"""
    out = 1.0 + 0.0j
    for alpha in sigma.inverse().inversions():
        out *= D_alpha(alpha, gamma, m)
    return out


def _chi(root):
    return 0 if is_positive(root) else 1


@lru_cache(maxsize=512)
def _A_simple(i, gamma, m):
    n = len(gamma)
    elements, position = _basis(n)
    alpha = simple_root(i, n)
    s = WeylElement.simple(i, n)
    kt = m.kappa_tilde(alpha)
    x = pairing(alpha, gamma)
    lead = 1 - m.qp(2 * x)
    d = D_alpha(alpha, gamma, m)
    out = np.zeros((len(elements), len(elements)), dtype=complex)
    for col, sigma in enumerate(elements):
        out[position[sigma * s], col] += m.qp(-kt) * lead
        neg = tuple(-c for c in sigma.act_root(alpha))
        out[col, col] += d - m.qp(-2 * _chi(neg) * kt) * lead
    return out


def A_unn(sigma, gamma, m):
    """A^unn_σ(γ) : M(σ^{-1}γ) → M(γ), produit le long d'un mot réduit de σ"""
    return A_unn_word(sigma.reduced_word(), gamma, m)


def A_unn_word(word, gamma, m):
    """Produit A_{s_{i1}}(γ) A_{s_{i2}}(s_{i1}γ) ... le long de `word`"""
    n = len(gamma)
    g = np.asarray(gamma, dtype=complex)
    out = np.eye(len(w0_basis(n)), dtype=complex)
    for i in word:
        out = out @ _A_simple(i, _gamma_key(g), m)
        g = WeylElement.simple(i, n).act(g)
    return out


def A(sigma, gamma, m):
    """Entrelaceur normalisé A_σ(γ) = A^unn_σ(γ) / D_σ(γ)"""
    d = D_sigma(sigma, gamma, m)
    if abs(d) < 1e-300:
        raise PoleError("D_sigma", sigma)
    return A_unn(sigma, gamma, m) / d


def composition_residual(sigma, gamma, m):
    """A^unn_σ(γ) A^unn_{σ^{-1}}(σ^{-1}γ) = D_σ(γ) D_{σ^{-1}}(σ^{-1}γ) Id"""
    inv = sigma.inverse()
    shifted = inv.act(np.asarray(gamma, dtype=complex))
    lhs = A_unn(sigma, gamma, m) @ A_unn(inv, shifted, m)
    scalar = D_sigma(sigma, gamma, m) * D_sigma(inv, shifted, m)
    return float(np.max(np.abs(lhs - scalar * np.eye(lhs.shape[0]))))


def intertwining_residual(i, gamma, m):
    """A^unn_{s_i}(γ) π_{s_iγ}(h) = π_γ(h) A^unn_{s_i}(γ) pour h = T_j et Y_k"""
    n = len(gamma)
    g = np.asarray(gamma, dtype=complex)
    shifted = WeylElement.simple(i, n).act(g)
    a = A_unn(WeylElement.simple(i, n), g, m)
    worst = 0.0
    for j in range(n + 1):
        worst = max(worst, float(np.max(np.abs(a @ T_M(j, shifted, m) - T_M(j, g, m) @ a))))
    for k in range(1, n + 1):
        worst = max(worst, float(np.max(np.abs(a @ Y_M(k, shifted, m) - Y_M(k, g, m) @ a))))
    return worst


# ===== PROJECTION φ_I =====

def in_parabolic_space(gamma, m, subset=None):
    """γ ∈ E_{C,I}^κ : (α_i, γ) = κ̃_{α_i} + κ̃_{2α_i} pour i ∈ I"""
    n = len(gamma)
    subset = parabolic_subset(n) if subset is None else subset
    dual = m.dual()
    for i in subset:
        alpha = simple_root(i, n)
        ka, k2a = dual.root_multiplicities(alpha)[:2]
        if abs(pairing(alpha, gamma) - (ka + k2a)) > E_TOL:
            return False
    return True


@lru_cache(maxsize=64)
def _phi_matrix(n, m):
    elements = w0_basis(n)
    out = np.zeros((2 ** n, len(elements)), dtype=complex)
    for col, w in enumerate(elements):
        eps = epsilon_of(w)
        shift = w.length() - w_epsilon(eps).length()
        out[index_of_epsilon(eps), col] = m.qp(-m.kappa * shift)
    return out


def phi_I(gamma, m):
    """Matrice de φ_I : M(γ) → (C²)^{⊗n}, v_w ↦ q^{-κ(l(w)-l(w_ε))} v_ε"""
    if not in_parabolic_space(gamma, m):
        raise NonGenericError(f"γ={np.round(np.asarray(gamma), 6)} hors de E_(C,I)")
    return _phi_matrix(len(gamma), m)


def phi_intertwining_residual(p):
    """φ_I π_γ(T_j) = π^sp(T_j) φ_I sur tous les générateurs"""
    m = MultiplicityFunction.from_params(p)
    gamma = p.gamma()
    phi = phi_I(gamma, m)
    return max(float(np.max(np.abs(phi @ T_M(j, gamma, m) - pi_T(j, p) @ phi)))
               for j in range(p.n + 1))


def b_I_unn(sigma, gamma, m):
    """φ_I(A^unn_{σ^{-1}}(γ) v_e(σγ))"""
    e = principal_vector(WeylElement.identity(sigma.n))
    return phi_I(gamma, m) @ A_unn(sigma.inverse(), gamma, m) @ e


def b_I(sigma, gamma, m):
    """Vecteur b^I_{σ^{-1}}(γ) normalisé par D_{σ^{-1}}(γ)"""
    d = D_sigma(sigma.inverse(), gamma, m)
    if abs(d) < 1e-300:
        raise PoleError("D_sigma", sigma.inverse())
    return b_I_unn(sigma, gamma, m) / d


def b_I_leading(sigma, gamma, m):
    """Coefficient dominant ∏ q^{-κ̃_α}(1 - q^{2(α,γ)}) de b^{unn,I}_{σ^{-1}}"""
    out = 1.0 + 0.0j
    for alpha in sigma.inversions():
        out *= m.qp(-m.kappa_tilde(alpha)) * (1 - m.qp(2 * pairing(alpha, gamma)))
    return out


def b_I_basis(p):
    """Colonnes b^I_{w_ε^{-1}} dans l'ordre de epsilons(n)"""
    m = MultiplicityFunction.from_params(p)
    return np.column_stack([b_I(w_epsilon(eps), p.gamma(), m) for eps in epsilons(p.n)])


# ===== GÉNÉRICITÉ =====

def _hits(value, targets):
    return any(abs(value - t) <= E_TOL * max(1.0, abs(t)) for t in targets)


def genericity(gamma, m, height, subset=None, extra=True):
    """
    Conditions (1)-(4) de généricité de γ ∈ E_{C,I}^κ, exposants testés jusqu'à
    `height`, plus q^{2(β,γ)} ∉ q_β^{2Z} pour toute racine β si extra.
    """
    n = len(gamma)
    subset = tuple(parabolic_subset(n) if subset is None else subset)
    outside = [j - 1 for j in range(1, n + 1) if j not in subset]
    parabolic = {a for a in all_roots(n)
                 if not any(simple_coordinates(a)[j] for j in outside)}
    for alpha in positive_roots(n):
        if alpha in parabolic:
            continue
        x = m.qp(pairing(alpha, gamma))
        if _hits(x * x, [1.0]):
            return False
        a, b, _, _ = m.dual_askey_wilson(alpha)
        if _hits(x, [a, b]):
            return False
    for alpha in all_roots(n):
        if alpha in parabolic and not is_positive(alpha):
            continue
        x = m.qp(pairing(alpha, gamma))
        q2 = m.q_alpha(alpha) ** 2
        shifts = [q2 ** k for k in range(1, height + 1)]
        if _hits(x * x, shifts):
            return False
        dual = m.dual_askey_wilson(alpha)
        if _hits(x, [s / t for t in dual for s in shifts]):
            return False
    if extra:
        for beta in all_roots(n):
            x2 = m.qp(2 * pairing(beta, gamma))
            q2 = m.q_alpha(beta) ** 2
            if _hits(x2, [q2 ** k for k in range(-height, height + 1)]):
                return False
    return True


# ===== COCYCLE DE M(γ) =====

def _affine_argument(j, z):
    z = np.asarray(z, dtype=complex)
    if j == 0:
        return 0.5 - z[0]
    if j == len(z):
        return z[-1]
    return z[j - 1] - z[j]


def c_function(j, z, m):
    """c_j(z) = (1 - q^{-κa-κ2a+a})(1 + q^{-κa+κ2a+a}) / (1 - q^{2a}), a = a_j(z)"""
    n = len(z)
    ka, k2a = m.pair(j, n)
    a = _affine_argument(j, z)
    den = 1 - m.qp(2 * a)
    if abs(den) < 1e-14:
        raise PoleError(f"c_{j}", a)
    return (1 - m.qp(-ka - k2a + a)) * (1 + m.qp(-ka + k2a + a)) / den


def cocycle_M(j, z, gamma, m):
    """C^{M(γ)}_{s_j}(z) par les formules explicites sur la base v_σ(γ)"""
    n = len(gamma)
    elements, position = _basis(n)
    c = c_function(j, z, m)
    if abs(c) < 1e-14:
        raise PoleError(f"C^M_s{j}", z)
    k = m.hecke_kappa(j, n)
    g = np.asarray(gamma, dtype=complex)
    out = np.zeros((len(elements), len(elements)), dtype=complex)
    for col, sigma in enumerate(elements):
        if j == 0:
            target = WeylElement.sign_change(1, n) * sigma
            out[position[target], col] += m.qp(sigma.act(g)[0]) / (m.qp(k) * c)
            target = sigma.inverse().act_root(_unit(0, n))
        else:
            target = WeylElement.simple(j, n) * sigma
            out[position[target], col] += 1.0 / (m.qp(k) * c)
            target = tuple(-r for r in sigma.inverse().act_root(simple_root(j, n)))
        out[col, col] += (c - m.qp(-2 * _chi(target) * k)) / c
    return out


def principal_cocycle(gamma, m):
    """Cocycle de M(γ) par baxtérisation de T_M"""
    n = len(gamma)
    return HeckeCocycle([T_M(j, gamma, m) for j in range(n + 1)],
                        [m.pair(j, n) for j in range(n + 1)], m.q,
                        [m.hecke_kappa(j, n) for j in range(n + 1)])


def cocycle_M_residual(j, z, gamma, m):
    """Formule explicite contre baxtérisation"""
    return float(np.max(np.abs(cocycle_M(j, z, gamma, m)
                               - principal_cocycle(gamma, m).generator(j, z))))


# ===== PRODUIT S(z) =====

def S_root_product(z, m):
    """∏_{α>0} (q_α² a_α^{-1} q^{-(α,z)}, b, c, d ; q_α²)_∞"""
    out = 1.0 + 0.0j
    for alpha in positive_roots(len(z)):
        q2 = m.q_alpha(alpha) ** 2
        y = m.qp(-pairing(alpha, z))
        for t in m.askey_wilson(alpha):
            out *= qpoch(q2 * y / t, q2)
    return out


