#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Équations qKZB de bord.

Les opérateurs aux différences en ξ sont représentés par leur action sur des
fonctions échantillonnées g : ξ ↦ vecteur de (C²)^{⊗n}. Le cocycle de W
(type C_n affine) est engendré par

    M^{s_0}(z) = T_{-κh_1} K̲_1(1/2 - z_1, ·) T_{κh_1}
    M^{s_i}(z) = P_{i,i+1} R_{i,i+1}(z_i - z_{i+1}, 2ξ - 2κ(h_1+...+h_{i-1}))
    M^{s_n}(z) = K_n(z_n, ξ - κ(h_1+...+h_{n-1}))
"""

from dataclasses import dataclass, field, replace

import numpy as np

import config
from baxter_face import K_Ba, R_Ba
from elliptic_connection import (
    K_unitarity_residual,
    dynamical_unitarity_residual,
    dynamical_ybe_residual,
    ice_rule_residual,
    left_reflection_residual,
    right_reflection_residual,
    shifted_local,
)
from errors import CocycleMismatchError, NonGenericError, PoleError
from spin_rep import braid_order, swap, weights
from weylc import AffineElement, tau_word

SAMPLE_SCALE = 0.3
PACK_POINTS = ((0.27 + 0.1j, 0.41 - 0.2j), (-0.33 + 0.05j, 0.12 + 0.3j))


# ===== DÉCALAGES DE POIDS =====

def leg_signs(i, n):
    """Poids h_i = ±1 de chaque vecteur de base"""
    return np.array([weights(k, n)[i - 1] for k in range(2 ** n)])


def weight_shift(alpha, i, f, n):
    """(T_{αh_i} f)(ξ) = Σ_μ f_μ(ξ + α μ_i)"""
    if alpha == 0:
        return f
    signs = leg_signs(i, n)

    def shifted(xi):
        return np.where(signs > 0, f(xi + alpha), f(xi - alpha))

    return shifted


class DifferenceOperator:
    """
    Opérateur aux différences matriciel en ξ, connu par son action sur les
    fonctions échantillonnées. `matrix_fn` est renseigné quand l'opérateur est
    un simple opérateur de multiplication ξ ↦ M(ξ).
    """

    def __init__(self, n, action, matrix_fn=None):
        self.n = n
        self.action = action
        self.matrix_fn = matrix_fn

    @classmethod
    def identity(cls, n):
        return cls(n, lambda g: g, lambda xi: np.eye(2 ** n, dtype=complex))

    @classmethod
    def multiplication(cls, n, matrix_fn):
        def action(g):
            return lambda xi: matrix_fn(xi) @ g(xi)
        return cls(n, action, matrix_fn)

    @classmethod
    def shift(cls, alpha, i, n):
        return cls(n, lambda g: weight_shift(alpha, i, g, n))

    @property
    def is_multiplication(self):
        return self.matrix_fn is not None

    def matrix(self, xi):
        if self.matrix_fn is None:
            raise ValueError("opérateur non multiplicatif")
        return self.matrix_fn(xi)

    def __call__(self, g):
        return self.action(g)

    def __matmul__(self, other):
        if self.n != other.n:
            raise ValueError(f"rangs incompatibles {self.n} et {other.n}")
        matrix_fn = None
        if self.is_multiplication and other.is_multiplication:
            left, right = self.matrix_fn, other.matrix_fn
            matrix_fn = lambda xi: left(xi) @ right(xi)  # noqa: E731
        return DifferenceOperator(self.n, lambda g: self.action(other.action(g)), matrix_fn)


def acts_as_multiplication(op, xi, q, exponents=(0.0, 0.7)):
    """Test extensionnel : (op g)(ξ)/q^{dξ} ne dépend pas de d pour g = q^{dξ} v_k"""
    dim = 2 ** op.n
    worst = 0.0
    for k in range(dim):
        columns = []
        for d in exponents:
            unit = np.zeros(dim, dtype=complex)
            unit[k] = 1.0
            g = (lambda u, d: lambda s: np.exp(np.log(q) * d * s) * u)(unit, d)
            columns.append(op(g)(xi) / np.exp(np.log(q) * d * xi))
        worst = max(worst, float(np.max(np.abs(columns[0] - columns[1]))))
    return worst


# ===== FONCTIONS TESTS =====

@dataclass(frozen=True)
class SampleFunction:
    """f(z,ξ) = Σ_ε q^{c_ε·z + d_ε ξ} v_ε"""

    q: float
    c: np.ndarray
    d: np.ndarray

    @property
    def n(self):
        return self.c.shape[1]

    def __call__(self, z, xi):
        z = np.asarray(z, dtype=complex)
        return np.exp(np.log(self.q) * (self.c @ z + self.d * xi))

    def at(self, z):
        """ξ ↦ f(z, ξ)"""
        return lambda xi: self(z, xi)


def sample_functions(count, n, q, rng):
    dim = 2 ** n
    out = []
    for _ in range(count):
        c = SAMPLE_SCALE * rng.normal(size=(dim, n))
        d = SAMPLE_SCALE * (rng.normal(size=dim) + 1j * rng.normal(size=dim))
        out.append(SampleFunction(q, c, d))
    return out


# ===== SYSTÈME qKZB =====

@dataclass
class QKZBSystem:
    """Données (R, K, K̲) d'un système qKZB de bord en rang n"""

    R_fn: object
    K_right_fn: object
    K_left_fn: object
    n: int
    kappa: complex
    q: float
    packs: dict = field(default_factory=dict)

    def generator(self, j, z):
        n, kappa = self.n, self.kappa
        z = np.asarray(z, dtype=complex)
        if j == 0:
            return M_s0(z, self)
        if j == n:
            zn = z[n - 1]
            return DifferenceOperator.multiplication(n, lambda xi: shifted_local(
                lambda s: self.K_right_fn(zn, s), (n,), n, lambda w: xi - kappa * sum(w[:n - 1])))
        if not 1 <= j < n:
            raise ValueError(f"générateur s_{j} hors de 0..{n}")
        zj = z[j - 1] - z[j]
        perm = swap(n, j, j + 1)
        return DifferenceOperator.multiplication(n, lambda xi: perm @ shifted_local(
            lambda s: self.R_fn(zj, s), (j, j + 1), n, lambda w: 2 * xi - 2 * kappa * sum(w[:j - 1])))

    def word(self, word, z):
        """M^{s_{j1}}(z) M^{s_{j2}}(s_{j1} z) ..."""
        out = DifferenceOperator.identity(self.n)
        y = np.asarray(z, dtype=complex)
        for j in word:
            out = out @ self.generator(j, y)
            y = AffineElement.simple(j, self.n).act(y)
        return out

    def transport(self, lam, z):
        """M^{τ(λ)}(z)"""
        return qkzb_cocycle(AffineElement.tau(lam), z, self)

    def with_K_right(self, K_fn):
        return replace(self, K_right_fn=K_fn)

    def with_K_left(self, K_fn):
        return replace(self, K_left_fn=K_fn)


def M_s0(z, sys):
    """T_{-κh_1} K̲_1(1/2 - z_1, ·) T_{κh_1}"""
    n, kappa = sys.n, sys.kappa
    x = 0.5 - complex(np.asarray(z)[0])
    k_left = DifferenceOperator.multiplication(n, lambda xi: shifted_local(
        lambda s: sys.K_left_fn(x, s), (1,), n, lambda w: xi))
    return DifferenceOperator.shift(-kappa, 1, n) @ k_left @ DifferenceOperator.shift(kappa, 1, n)


def M_s0_diagonal(z, sys):
    """Forme multiplicative K̲_1(1/2 - z_1, ξ - κh_1), valable quand [K̲, h] = 0"""
    n, kappa = sys.n, sys.kappa
    x = 0.5 - complex(np.asarray(z)[0])
    return DifferenceOperator.multiplication(n, lambda xi: shifted_local(
        lambda s: sys.K_left_fn(x, s), (1,), n, lambda w: xi - kappa * w[0]))


def qkzb_cocycle(v, z, sys):
    return sys.word(v.reduced_word(), z)


# ===== OPÉRATEURS DE TRANSPORT =====

def _left_boundary_sum(z1, sys, g):
    """ξ ↦ Σ_{μ,ν} K̲^{μ_1}_{ν_1}(1/2 + z_1, ξ - κν_1) g_μ(ξ + κ(μ_1 - ν_1))"""
    n, kappa = sys.n, sys.kappa
    signs = leg_signs(1, n)
    half = 2 ** (n - 1)

    def summed(xi):
        values = {}
        out = np.zeros(2 ** n, dtype=complex)
        blocks = {nu: sys.K_left_fn(0.5 + z1, xi - kappa * nu) for nu in (1, -1)}
        for row in range(2 ** n):
            nu = signs[row]
            for mu in (1, -1):
                col = row % half + (0 if mu == 1 else half)
                shift = kappa * (mu - nu)
                if shift not in values:
                    values[shift] = g(xi + shift)
                out[row] += blocks[nu][int(nu == -1), int(mu == -1)] * values[shift][col]
        return out

    return summed


def transport_e1_matrix(z, sys, xi):
    """
    R_21(z_1-z_2, 2ξ) ... R_n1(z_1-z_n, 2ξ-2κ(h_2+...+h_{n-1})) K_1(z_1, ξ-κ(h_2+...+h_n))
    R_1n(z_1+z_n, ...) ... R_12(z_1+z_2, 2ξ)
    """
    n, kappa = sys.n, sys.kappa
    z = np.asarray(z, dtype=complex)
    z1 = z[0]
    out = np.eye(2 ** n, dtype=complex)
    for k in range(2, n + 1):
        out = out @ shifted_local(lambda s, k=k: sys.R_fn(z1 - z[k - 1], s), (k, 1), n,
                                  lambda w, k=k: 2 * xi - 2 * kappa * sum(w[1:k - 1]))
    out = out @ shifted_local(lambda s: sys.K_right_fn(z1, s), (1,), n,
                              lambda w: xi - kappa * sum(w[1:]))
    for k in range(n, 1, -1):
        out = out @ shifted_local(lambda s, k=k: sys.R_fn(z1 + z[k - 1], s), (1, k), n,
                                  lambda w, k=k: 2 * xi - 2 * kappa * sum(w[1:k - 1]))
    return out


def transport_e1(z, sys, f):
    """ξ ↦ (M^{τ(-e_1)}(z) f(z + e_1, ·))(ξ) par la formule développée"""
    z = np.asarray(z, dtype=complex)
    shifted = z.copy()
    shifted[0] += 1
    boundary = _left_boundary_sum(z[0], sys, lambda xi: f(shifted, xi))
    return lambda xi: transport_e1_matrix(z, sys, xi) @ boundary(xi)


def transport_e1_diagonal(z, sys, f):
    """Forme simplifiée quand K̲ commute avec h"""
    z = np.asarray(z, dtype=complex)
    shifted = z.copy()
    shifted[0] += 1
    left = M_s0_diagonal(-z, sys)

    def value(xi):
        return transport_e1_matrix(z, sys, xi) @ left.matrix(xi) @ f(shifted, xi)

    return value


def transport_e1_cocycle(z, sys, f):
    """Même opérateur, obtenu par le cocycle le long du mot de τ(-e_1)"""
    z = np.asarray(z, dtype=complex)
    shifted = z.copy()
    shifted[0] += 1
    op = sys.word(tau_word(1, sys.n)[::-1], z)
    return op(lambda xi: f(shifted, xi))


# ===== RÉSIDUS =====

def _operator_gap(op_a, op_b, z_at, sample_fns, xis):
    worst = 0.0
    for f in sample_fns:
        g = f.at(z_at)
        left, right = op_a(g), op_b(g)
        for xi in xis:
            worst = max(worst, float(np.max(np.abs(left(xi) - right(xi)))))
    return worst


def affine_braid_words(n):
    """(nom, mot_a, mot_b) pour les relations de Coxeter de C_n affine"""
    words = [(f"s{j}²", [j, j], []) for j in range(n + 1)]
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            m = braid_order(i, j, n)
            words.append((f"({i},{j})", [i if k % 2 == 0 else j for k in range(m)],
                          [j if k % 2 == 0 else i for k in range(m)]))
    return words


def braid_residuals(sys, z, sample_fns, xis):
    """Écart maximal par relation de Coxeter, sur les fonctions tests"""
    z = np.asarray(z, dtype=complex)
    return {name: _operator_gap(sys.word(a, z), sys.word(b, z), z, sample_fns, xis)
            for name, a, b in affine_braid_words(sys.n)}


def word_independence_residual(words, z, sys, sample_fns, xis, tol=None):
    """Écart maximal entre les opérateurs de plusieurs mots du même élément"""
    z = np.asarray(z, dtype=complex)
    ops = [sys.word(w, z) for w in words]
    worst = max(_operator_gap(ops[0], other, z, sample_fns, xis) for other in ops[1:])
    if tol is not None and worst > tol:
        raise CocycleMismatchError(f"mots {words} incompatibles", worst)
    return worst


def transport_compatibility_residual(lam, mu, z, sys, sample_fns, xis):
    """M^{τ(λ)}(z) M^{τ(μ)}(z - λ) = M^{τ(λ+μ)}(z)"""
    lam, mu = np.asarray(lam), np.asarray(mu)
    z = np.asarray(z, dtype=complex)
    lhs = sys.transport(lam, z) @ sys.transport(mu, z - lam)
    return _operator_gap(lhs, sys.transport(lam + mu, z), z, sample_fns, xis)


def cocycle_law_residual(u, v, z, sys, sample_fns, xis):
    """M^{uv}(z) = M^u(z) M^v(u^{-1} z)"""
    z = np.asarray(z, dtype=complex)
    lhs = qkzb_cocycle(u * v, z, sys)
    rhs = qkzb_cocycle(u, z, sys) @ qkzb_cocycle(v, u.inverse().act(z), sys)
    return _operator_gap(lhs, rhs, z, sample_fns, xis)


def transport_two_route_residual(z, sys, sample_fns, xis):
    """Formule développée de M^{τ(-e_1)} contre le cocycle"""
    worst = 0.0
    for f in sample_fns:
        explicit, via_cocycle = transport_e1(z, sys, f), transport_e1_cocycle(z, sys, f)
        for xi in xis:
            worst = max(worst, float(np.max(np.abs(explicit(xi) - via_cocycle(xi)))))
    return worst


def hypothesis_residuals(sys, z1, z2, z3, xi):
    """Hypothèses (R unitaire dynamique, K et K̲ associées) du critère de cocycle"""
    R, K, KL, kappa = sys.R_fn, sys.K_right_fn, sys.K_left_fn, sys.kappa
    return {
        "ice": ice_rule_residual(R, z1, xi),
        "unitarity": dynamical_unitarity_residual(R, z1, xi),
        "dybe": dynamical_ybe_residual(R, z1, z2, z3, xi, kappa),
        "K_unitarity": K_unitarity_residual(K, z1, xi),
        "K_left_unitarity": K_unitarity_residual(KL, z1, xi),
        "right_reflection": right_reflection_residual(R, K, z1, z2, xi, kappa),
        "left_reflection": left_reflection_residual(R, KL, z1, z2, xi, kappa),
    }


def perturbed_K(K_fn, eps):
    """K(z,ξ) + ε E_{+-}"""
    def K_eps(z, xi):
        k = np.array(K_fn(z, xi), dtype=complex)
        k[0, 1] += eps
        return k
    return K_eps


def sensitivity_check(sys, z, sample_fns, xis, eps=1e-3):
    """Plus grand écart de Coxeter après perturbation de K (doit être non négligeable)"""
    broken = sys.with_K_right(perturbed_K(sys.K_right_fn, eps))
    residuals = braid_residuals(broken, z, sample_fns, xis)
    name = max(residuals, key=residuals.get)
    return name, residuals[name]


# ===== INSTANCE DE BAXTER =====

def left_pack_from_config():
    return (config.ZETA_LEFT, config.ZETA_PRIME_LEFT, config.UPSILON_LEFT, config.UPSILON_PRIME_LEFT)


def _check_pack(label, p):
    for z, xi in PACK_POINTS:
        try:
            residual = K_unitarity_residual(lambda a, b: K_Ba(a, b, p), z, xi)
        except PoleError as exc:
            raise NonGenericError(f"paquet de bord {label} dégénéré : {exc}") from exc
        if not np.isfinite(residual) or residual > 1e-8:
            raise NonGenericError(f"paquet de bord {label} dégénéré (unitarité {residual:.2e})")


def baxter_system(p, left_pack=None):
    """
    Neuf couplages : κ (via p), paquet droit (ζ, ζ', υ, υ') de p et paquet
    gauche (ζ_l, ζ'_l, υ_l, υ'_l). K̲(z,ξ) = K_Ba(z, -ξ ; paquet gauche).
    """
    zl, zpl, ul, upl = left_pack_from_config() if left_pack is None else left_pack
    p_left = replace(p, zeta=zl, zeta_p=zpl, upsilon=ul, upsilon_p=upl)
    _check_pack("droit", p)
    _check_pack("gauche", p_left)
    packs = {
        "kappa": p.kappa,
        "right": (p.zeta, p.zeta_p, p.upsilon, p.upsilon_p),
        "left": (zl, zpl, ul, upl),
    }
    return QKZBSystem(
        R_fn=lambda z, xi: R_Ba(z, xi, p),
        K_right_fn=lambda z, xi: K_Ba(z, xi, p),
        K_left_fn=lambda z, xi: K_Ba(z, -xi, p_left),
        n=p.n,
        kappa=p.kappa,
        q=p.q,
        packs=packs,
    )
