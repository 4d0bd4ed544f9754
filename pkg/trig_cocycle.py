#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Données d'intégrabilité trigonométriques R(z), K(z), K̲(z),
cocycle C^u(z) du groupe de Weyl affine et opérateurs de transport.
"""

from functools import lru_cache

import numpy as np

from errors import PoleError
from spin_rep import braid_order, embed, pi_T, swap
from weylc import AffineElement, as_affine, right_reduced_word, tau_word


# ===== MATRICES R ET K =====

def R_trig(z, p):
    """
    R(z) = (N_0 + q^z N_1)/(1 - q^{-2κ+z}), unitaire, R(0) = P.
    Bloc central : (1-q^{-2κ}) q^z en (+-, -+), (1-q^{-2κ}) en (-+, +-)
    """
    t = p.qp(-2 * p.kappa)
    x = p.qp(z)
    den = 1 - t * x
    if abs(den) < 1e-14:
        raise PoleError("R_trig", z)
    a = p.qp(-p.kappa) * (1 - x)
    return np.array([[den, 0, 0, 0],
                     [0, a, (1 - t) * x, 0],
                     [0, 1 - t, a, 0],
                     [0, 0, 0, den]], dtype=complex) / den


def _k_scalar(z, kappa_a, kappa_2a, p, where):
    den = (1 - p.qp(-kappa_a - kappa_2a + z)) * (1 + p.qp(-kappa_a + kappa_2a + z))
    if abs(den) < 1e-14:
        raise PoleError(where, z)
    return p.qp(-kappa_a) / den


def K_right(z, p):
    """K(z), paramètres (ζ, υ)"""
    c_zeta = p.qp(p.zeta) - p.qp(-p.zeta)
    c_ups = p.qp(p.upsilon) - p.qp(-p.upsilon)
    x = p.qp(z)
    k = _k_scalar(z, p.zeta, p.upsilon, p, "K_right")
    return k * np.array([[c_zeta + c_ups * x, 1 - x * x],
                         [1 - x * x, c_zeta * x * x + c_ups * x]], dtype=complex)


def K_left(z, p):
    """K̲(z), paramètres (ζ', υ') et ξ"""
    c_zeta = p.qp(p.zeta_p) - p.qp(-p.zeta_p)
    c_ups = p.qp(p.upsilon_p) - p.qp(-p.upsilon_p)
    x = p.qp(z)
    k = _k_scalar(z, p.zeta_p, p.upsilon_p, p, "K_left")
    return k * np.array([[c_zeta * x * x + c_ups * x, p.qp(-p.xi) * (1 - x * x)],
                         [p.qp(p.xi) * (1 - x * x), c_zeta + c_ups * x]], dtype=complex)


def R_on(i, j, z, p):
    """R_{ij}(z) plongé dans (C²)^{⊗n}"""
    return embed(R_trig(z, p), (i, j), p.n)


# ===== COCYCLE DE BAXTÉRISATION =====

class HeckeCocycle:
    """
    Cocycle de W obtenu par baxtérisation de générateurs T_0..T_n vérifiant
    (T_j - q^{-κ_j})(T_j + q^{κ_j}) = 0 :

        C^{s_j}(z) = [N_j(X) + (q^{-κ_j} T_j - q^{-2κ_j})(1 - X²)] / N_j(X)

    avec X = q^{a_j(z)}, a_0 = 1/2 - z_1, a_i = z_i - z_{i+1}, a_n = z_n et
    N_j(X) = (1 - q^{-κa-κ2a} X)(1 + q^{-κa+κ2a} X).
    """

    def __init__(self, generators, pairs, q, hecke):
        self.generators = [np.asarray(t, dtype=complex) for t in generators]
        self.pairs = list(pairs)
        self.hecke = list(hecke)
        self.q = q
        self.n = len(self.generators) - 1
        self.dim = self.generators[0].shape[0]

    def qp(self, x):
        return np.exp(np.log(self.q) * complex(x))

    def argument_form(self, j):
        """a_j(y) = (β_j, y) + c_j, retourne (β_j, c_j)"""
        beta = np.zeros(self.n, dtype=int)
        if j == 0:
            beta[0] = -1
            return beta, 0.5
        beta[j - 1] = 1
        if j < self.n:
            beta[j] = -1
        return beta, 0.0

    def argument(self, j, y):
        beta, const = self.argument_form(j)
        return complex(np.dot(beta, y) + const)

    def denominator_roots(self, j):
        """(u_1, u_2) avec N_j(X) = (1 - u_1 X)(1 + u_2 X)"""
        ka, k2a = self.pairs[j]
        return self.qp(-ka - k2a), self.qp(-ka + k2a)

    def polynomial(self, j):
        """Numérateur A_0 + A_1 X + A_2 X² et racines du dénominateur"""
        u1, u2 = self.denominator_roots(j)
        kj = self.hecke[j]
        b = self.qp(-kj) * self.generators[j] - self.qp(-2 * kj) * np.eye(self.dim)
        one = np.eye(self.dim, dtype=complex)
        return [one + b, (u2 - u1) * one, -u1 * u2 * one - b], (u1, u2)

    def generator_at_x(self, j, x):
        (a0, a1, a2), (u1, u2) = self.polynomial(j)
        den = (1 - u1 * x) * (1 + u2 * x)
        if abs(den) < 1e-14:
            raise PoleError(f"C^s{j}", x)
        return (a0 + a1 * x + a2 * x * x) / den

    def generator(self, j, y):
        return self.generator_at_x(j, self.qp(self.argument(j, y)))

    def word_points(self, word, z):
        """Points y_k = s_{j_{k-1}}...s_{j_1} z auxquels chaque facteur est évalué"""
        points = []
        y = np.asarray(z, dtype=complex)
        for j in word:
            points.append(y)
            y = AffineElement.simple(j, self.n).act(y)
        return points

    def word_value(self, word, z):
        out = np.eye(self.dim, dtype=complex)
        for j, y in zip(word, self.word_points(word, z)):
            out = out @ self.generator(j, y)
        return out

    def value(self, u, z):
        return self.word_value(as_affine(u).reduced_word(), z)

    def transport(self, i, z, inverse=False):
        """C^{τ(e_i)}(z), ou C^{τ(-e_i)}(z) si inverse"""
        word = tau_word(i, self.n)
        return self.word_value(word[::-1] if inverse else word, z)


@lru_cache(maxsize=64)
def spin_cocycle(p):
    """Cocycle de la représentation de spin"""
    pairs = [(p.zeta_p, p.upsilon_p)] + [(p.kappa, p.kappa)] * (p.n - 1) + [(p.zeta, p.upsilon)]
    hecke = [p.kappa_j(j) for j in range(p.n + 1)]
    return HeckeCocycle([pi_T(j, p) for j in range(p.n + 1)], pairs, p.q, hecke)


# ===== COCYCLE EXPLICITE =====

def spin_generator(j, z, p):
    """C^{s_0} = K̲_1(1/2 - z_1), C^{s_i} = P R_{i,i+1}(z_i - z_{i+1}), C^{s_n} = K_n(z_n)"""
    n = p.n
    if j == 0:
        return embed(K_left(0.5 - z[0], p), (1,), n)
    if j == n:
        return embed(K_right(z[n - 1], p), (n,), n)
    return swap(n, j, j + 1) @ R_on(j, j + 1, z[j - 1] - z[j], p)


def cocycle_word(word, z, p):
    out = np.eye(2 ** p.n, dtype=complex)
    y = np.asarray(z, dtype=complex)
    for j in word:
        try:
            out = out @ spin_generator(j, y, p)
        except PoleError as exc:
            raise PoleError(f"C^s{j}", exc.argument) from exc
        y = AffineElement.simple(j, p.n).act(y)
    return out


def cocycle_value(u, z, p):
    return cocycle_word(as_affine(u).reduced_word(), z, p)


def transport(i, z, p, inverse=False):
    """C^{τ(e_i)}(z) par mot réduit ; C^{τ(-e_i)}(z) si inverse"""
    word = tau_word(i, p.n)
    return cocycle_word(word[::-1] if inverse else word, z, p)


def transport_explicit(i, z, p):
    """Produit développé de C^{τ(-e_i)}(z) sur les R_{kl} et K"""
    n = p.n
    z = np.asarray(z, dtype=complex)
    zi = z[i - 1]
    out = np.eye(2 ** n, dtype=complex)
    for k in range(i + 1, n + 1):
        out = out @ R_on(k, i, zi - z[k - 1], p)
    out = out @ embed(K_right(zi, p), (i,), n)
    for k in range(n, i, -1):
        out = out @ R_on(i, k, zi + z[k - 1], p)
    for k in range(i - 1, 0, -1):
        out = out @ R_on(i, k, z[k - 1] + zi, p)
    out = out @ embed(K_left(0.5 + zi, p), (i,), n)
    for k in range(1, i):
        out = out @ R_on(k, i, 1 - z[k - 1] + zi, p)
    return out


def nabla(v, f, z, p):
    """(∇(v)f)(z) = C^v(z) f(v^{-1} z)"""
    g = as_affine(v)
    return cocycle_value(g, z, p) @ f(g.inverse().act(np.asarray(z, dtype=complex)))


# ===== RÉSIDUS =====

def _max_abs(m):
    return float(np.max(np.abs(m)))


def ybe_residual(z1, z2, z3, p):
    q3 = p.with_rank(3)
    lhs = R_on(1, 2, z1 - z2, q3) @ R_on(1, 3, z1 - z3, q3) @ R_on(2, 3, z2 - z3, q3)
    rhs = R_on(2, 3, z2 - z3, q3) @ R_on(1, 3, z1 - z3, q3) @ R_on(1, 2, z1 - z2, q3)
    return _max_abs(lhs - rhs)


def unitarity_residual(z, p):
    q2 = p.with_rank(2)
    return _max_abs(R_on(2, 1, z, q2) @ R_on(1, 2, -z, q2) - np.eye(4))


def K_unitarity_residual(z, p):
    return max(_max_abs(K_right(z, p) @ K_right(-z, p) - np.eye(2)),
               _max_abs(K_left(z, p) @ K_left(-z, p) - np.eye(2)))


def right_reflection_residual(z1, z2, p):
    q2 = p.with_rank(2)
    k1 = embed(K_right(z1, q2), (1,), 2)
    k2 = embed(K_right(z2, q2), (2,), 2)
    lhs = R_on(2, 1, z1 - z2, q2) @ k1 @ R_on(1, 2, z1 + z2, q2) @ k2
    rhs = k2 @ R_on(2, 1, z1 + z2, q2) @ k1 @ R_on(1, 2, z1 - z2, q2)
    return _max_abs(lhs - rhs)


def left_reflection_residual(z1, z2, p):
    q2 = p.with_rank(2)
    k1 = embed(K_left(z1, q2), (1,), 2)
    k2 = embed(K_left(z2, q2), (2,), 2)
    lhs = R_on(1, 2, z1 - z2, q2) @ k1 @ R_on(2, 1, z1 + z2, q2) @ k2
    rhs = k2 @ R_on(1, 2, z1 + z2, q2) @ k1 @ R_on(2, 1, z1 - z2, q2)
    return _max_abs(lhs - rhs)


def baxterization_residual(j, z, p):
    """Écart entre C^{s_j} explicite et la baxtérisation de π(T_j)"""
    return _max_abs(spin_generator(j, z, p) - spin_cocycle(p).generator(j, z))


def cocycle_braid_residual(i, j, z, p):
    """C^{s_i s_j ...}(z) = C^{s_j s_i ...}(z) (m_{ij} facteurs)"""
    m = braid_order(i, j, p.n)
    word_a = [i if k % 2 == 0 else j for k in range(m)]
    word_b = [j if k % 2 == 0 else i for k in range(m)]
    return _max_abs(cocycle_word(word_a, z, p) - cocycle_word(word_b, z, p))


def cocycle_unitarity_residual(j, z, p):
    """C^{s_j}(z) C^{s_j}(s_j z) = Id"""
    return _max_abs(cocycle_word([j, j], z, p) - np.eye(2 ** p.n))


def word_independence_residual(u, z, p):
    g = as_affine(u)
    return _max_abs(cocycle_word(right_reduced_word(g), z, p) - cocycle_value(g, z, p))


def transport_compatibility_residual(lam, mu, z, p):
    """C^{τ(λ)}(z) C^{τ(μ)}(z - λ) = C^{τ(λ+μ)}(z)"""
    lam, mu = np.asarray(lam), np.asarray(mu)
    z = np.asarray(z, dtype=complex)
    lhs = cocycle_value(AffineElement.tau(lam), z, p) @ cocycle_value(AffineElement.tau(mu), z - lam, p)
    return _max_abs(lhs - cocycle_value(AffineElement.tau(lam + mu), z, p))


def transport_explicit_residual(i, z, p):
    return _max_abs(transport(i, z, p, inverse=True) - transport_explicit(i, z, p))
