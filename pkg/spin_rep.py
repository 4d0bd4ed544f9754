#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Représentation de spin de l'algèbre de Hecke affine de type C_n sur (C²)^{⊗n}.
Base v_ε (jambe 1 la plus significative, + avant -), opérateurs T_j et Y_i,
base propre b_ε.
"""

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

import config
from errors import ConfigError, NonGenericError, PoleError
from numerics import qpow
from weylc import (
    as_affine,
    epsilons,
    is_long,
    pairing,
    w_epsilon,
    bruhat_leq,
    right_reduced_word,
)

NULL_RCOND = 1e-10


# ===== PARAMÈTRES =====

@dataclass(frozen=True)
class ParameterSet:
    """Couplages (q, κ, ζ, ζ', υ, υ') et paramètre de représentation ξ"""

    q: float
    kappa: complex
    zeta: complex
    zeta_p: complex
    upsilon: complex
    upsilon_p: complex
    xi: complex
    n: int = 2

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ConfigError("q", f"doit appartenir à ]0,1[, reçu {self.q}")
        if self.n < 1:
            raise ConfigError("n", f"rang invalide {self.n}")

    @classmethod
    def from_config(cls, n=None):
        return cls(q=config.Q, kappa=config.KAPPA, zeta=config.ZETA,
                   zeta_p=config.ZETA_PRIME, upsilon=config.UPSILON,
                   upsilon_p=config.UPSILON_PRIME, xi=config.XI,
                   n=config.N if n is None else n)

    def with_rank(self, n):
        return replace(self, n=n)

    def with_xi(self, xi):
        return replace(self, xi=xi)

    def qp(self, x):
        return qpow(self.q, x)

    def askey_wilson(self):
        """(a, b, c, d)"""
        return (self.qp(self.zeta + self.upsilon),
                -self.qp(self.zeta - self.upsilon),
                self.qp(0.5 + self.zeta_p + self.upsilon_p),
                -self.qp(0.5 + self.zeta_p - self.upsilon_p))

    def dual(self):
        """Involution de dualité : échange υ et ζ'"""
        return replace(self, upsilon=self.zeta_p, zeta_p=self.upsilon)

    def dual_askey_wilson(self):
        return self.dual().askey_wilson()

    def gamma(self):
        """γ_i = ξ + (n+1-2i)κ"""
        return np.array([self.xi + (self.n + 1 - 2 * i) * self.kappa
                         for i in range(1, self.n + 1)], dtype=complex)

    def kappa_j(self, j):
        if j == 0:
            return self.zeta_p
        if j == self.n:
            return self.zeta
        return self.kappa

    def as_dict(self):
        return {"q": self.q, "kappa": self.kappa, "zeta": self.zeta, "zeta_p": self.zeta_p,
                "upsilon": self.upsilon, "upsilon_p": self.upsilon_p, "xi": self.xi, "n": self.n}


# ===== PLONGEMENTS TENSORIELS =====

def basis_bits(index, n):
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def basis_index(bits):
    index = 0
    for b in bits:
        index = 2 * index + b
    return index


def weights(index, n):
    """Poids h_k = ±1 du vecteur de base v_index"""
    return tuple(1 - 2 * b for b in basis_bits(index, n))


def index_of_epsilon(eps):
    return basis_index([0 if e == 1 else 1 for e in eps])


def basis_vector(eps):
    v = np.zeros(2 ** len(eps), dtype=complex)
    v[index_of_epsilon(eps)] = 1.0
    return v


def embed_local(op_fn, legs, n, xi_fn=None):
    """
    Plonge un opérateur local sur les jambes `legs` (première jambe la plus significative).
    Si xi_fn est donné, op_fn dépend du paramètre dynamique xi_fn(poids entrée, poids sortie).
    """
    k = len(legs)
    dim = 2 ** n
    out = np.zeros((dim, dim), dtype=complex)
    cache = {}
    for col in range(dim):
        bits = list(basis_bits(col, n))
        local_in = basis_index([bits[leg - 1] for leg in legs])
        for local_out in range(2 ** k):
            out_bits = list(bits)
            for leg, b in zip(legs, basis_bits(local_out, k)):
                out_bits[leg - 1] = b
            row = basis_index(out_bits)
            if xi_fn is None:
                key = None
            else:
                key = xi_fn(weights(col, n), weights(row, n))
            if key not in cache:
                cache[key] = np.asarray(op_fn() if xi_fn is None else op_fn(key), dtype=complex)
            value = cache[key][local_out, local_in]
            if value != 0:
                out[row, col] += value
    return out


def embed(op, legs, n):
    return embed_local(lambda: op, legs, n)


def swap(n, i, j):
    """Permutation P_{ij} des jambes i et j"""
    p = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    return embed(p, (i, j), n)


# ===== GÉNÉRATEURS =====

def _local_T(j, p):
    if j == 0:
        return np.array([[p.qp(-p.zeta_p) - p.qp(p.zeta_p), p.qp(-p.xi)],
                         [p.qp(p.xi), 0.0]], dtype=complex)
    if j == p.n:
        return np.array([[0.0, 1.0],
                         [1.0, p.qp(-p.zeta) - p.qp(p.zeta)]], dtype=complex)
    a = p.qp(-p.kappa)
    return np.array([[a, 0, 0, 0],
                     [0, 0, 1, 0],
                     [0, 1, a - p.qp(p.kappa), 0],
                     [0, 0, 0, a]], dtype=complex)


@lru_cache(maxsize=256)
def pi_T(j, p):
    if not 0 <= j <= p.n:
        raise ValueError(f"générateur T_{j} inexistant pour n={p.n}")
    if j == 0:
        return embed(_local_T(0, p), (1,), p.n)
    if j == p.n:
        return embed(_local_T(j, p), (p.n,), p.n)
    return embed(_local_T(j, p), (j, j + 1), p.n)


@lru_cache(maxsize=256)
def pi_T_inverse(j, p):
    """T_j^{-1} = T_j + (q^{κ_j} - q^{-κ_j}) par la relation de Hecke"""
    k = p.kappa_j(j)
    if abs(p.qp(-k) + p.qp(k)) < 1e-14:
        raise PoleError("pi_T_inverse", j)
    return pi_T(j, p) + (p.qp(k) - p.qp(-k)) * np.eye(2 ** p.n)


def pi_word(word, p, inverse=False):
    out = np.eye(2 ** p.n, dtype=complex)
    for j in word:
        out = out @ (pi_T_inverse(j, p) if inverse else pi_T(j, p))
    return out


def pi_Tw(w, p):
    return pi_word(as_affine(w).reduced_word(), p)


@lru_cache(maxsize=256)
def Y_op(i, p):
    """Y_i = T_{i-1}^{-1}...T_1^{-1} T_0 T_1...T_n...T_i"""
    n = p.n
    left = pi_word(range(i - 1, 0, -1), p, inverse=True)
    right = pi_word([0] + list(range(1, n + 1)) + list(range(n - 1, i - 1, -1)), p)
    return left @ right


def Y_power(nu, p):
    """Y^ν pour ν ∈ Z^n"""
    out = np.eye(2 ** p.n, dtype=complex)
    for i, k in enumerate(nu, start=1):
        base = Y_op(i, p) if k >= 0 else np.linalg.inv(Y_op(i, p))
        out = out @ np.linalg.matrix_power(base, abs(int(k)))
    return out


# ===== BASE PROPRE =====

def N_alpha(alpha, z, p):
    x = pairing(alpha, z)
    if is_long(alpha):
        den = p.qp(p.kappa) * (1 - p.qp(-2 * p.kappa + x))
        num = 1 - p.qp(x)
    else:
        den = (p.qp(p.zeta) * (1 - p.qp(-p.zeta - p.zeta_p + x))
               * (1 + p.qp(-p.zeta + p.zeta_p + x)))
        num = 1 - p.qp(2 * x)
    if abs(den) < 1e-300:
        raise PoleError("N_alpha", alpha)
    return num / den


def N_epsilon(eps, p):
    gamma = p.gamma()
    out = 1.0 + 0.0j
    for alpha in w_epsilon(eps).inversions():
        out *= N_alpha(alpha, gamma, p)
    return out


def eigenvalues(eps, p):
    """q^{-(w_ε γ)_i}, i = 1..n"""
    return p.qp(-w_epsilon(eps).act(p.gamma()))


@lru_cache(maxsize=256)
def b_basis(eps, p):
    eps = tuple(int(e) for e in eps)
    dim = 2 ** p.n
    stacked = np.vstack([Y_op(i, p) - lam * np.eye(dim)
                         for i, lam in enumerate(eigenvalues(eps, p), start=1)])
    space = null_space(stacked, rcond=NULL_RCOND)
    if space.shape[1] != 1:
        raise NonGenericError(f"espace propre de dimension {space.shape[1]} pour ε={eps}")
    v = space[:, 0]
    lead = v[index_of_epsilon(eps)]
    if abs(lead) < NULL_RCOND:
        raise NonGenericError(f"coefficient de v_ε nul pour ε={eps}")
    return v * (N_epsilon(eps, p) / lead)


def b_change_of_basis(p):
    """Matrice dont les colonnes sont les b_ε"""
    return np.column_stack([b_basis(eps, p) for eps in epsilons(p.n)])


def triangularity_residual(p):
    """Plus grand coefficient de b_ε sur un v_ε' avec w_ε' non ≤ w_ε"""
    basis = b_change_of_basis(p)
    worst = 0.0
    for col, eps in enumerate(epsilons(p.n)):
        for row, eps_row in enumerate(epsilons(p.n)):
            if not bruhat_leq(w_epsilon(eps_row), w_epsilon(eps)):
                worst = max(worst, abs(basis[row, col]))
    return worst


# ===== RELATIONS =====

def hecke_residual(j, p):
    k = p.kappa_j(j)
    t = pi_T(j, p)
    one = np.eye(2 ** p.n)
    return float(np.max(np.abs((t - p.qp(-k) * one) @ (t + p.qp(k) * one))))


def braid_order(i, j, n):
    i, j = sorted((i, j))
    if j - i >= 2:
        return 2
    if (i, j) == (0, 1) or (i, j) == (n - 1, n):
        return 4
    return 3


def braid_residual(i, j, p):
    m = braid_order(i, j, p.n)
    word_a = [i if k % 2 == 0 else j for k in range(m)]
    word_b = [j if k % 2 == 0 else i for k in range(m)]
    return float(np.max(np.abs(pi_word(word_a, p) - pi_word(word_b, p))))


def all_braid_residuals(p):
    return {(i, j): braid_residual(i, j, p)
            for i in range(p.n + 1) for j in range(i + 1, p.n + 1)}


def y_commutator_residual(p):
    worst = 0.0
    for i in range(1, p.n + 1):
        for j in range(i + 1, p.n + 1):
            a, b = Y_op(i, p), Y_op(j, p)
            worst = max(worst, float(np.max(np.abs(a @ b - b @ a))))
    return worst


def y_eigen_residual(p):
    worst = 0.0
    for eps in epsilons(p.n):
        b = b_basis(eps, p)
        for i, lam in enumerate(eigenvalues(eps, p), start=1):
            worst = max(worst, float(np.max(np.abs(Y_op(i, p) @ b - lam * b))))
    return worst


def v_epsilon_residual(p):
    """π(T_{w_ε}) v_+^{⊗n} = v_ε"""
    plus = basis_vector((1,) * p.n)
    return max(float(np.max(np.abs(pi_Tw(w_epsilon(eps), p) @ plus - basis_vector(eps))))
               for eps in epsilons(p.n))


def word_independence_residual(w, p):
    """Compare le mot glouton à un second mot réduit obtenu par descentes à droite"""
    g = as_affine(w)
    return float(np.max(np.abs(pi_word(right_reduced_word(g), p) - pi_Tw(g, p))))
