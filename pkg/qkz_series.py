#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Base de solutions en séries entières des équations qKZ de bord.

Φ(z) = W(z, w) / (S_sp(z) · N) · Σ_μ Γ_μ x^μ,   x_j = q^{-(α_j, z)}

Les coefficients Γ_μ sont obtenus hauteur par hauteur en développant les
opérateurs de transport C^{τ(e_i)}(z) en séries des monômes x^μ.
"""

from dataclasses import dataclass, field

import numpy as np

import config
from errors import NonGenericError, PoleError
from numerics import TruncatedSeries, qpoch, qpow
from principal_series import (
    A,
    MultiplicityFunction,
    S_root_product,
    phi_I,
    principal_cocycle,
    principal_vector,
)
from spin_rep import ParameterSet, b_basis, pi_Tw
from trig_cocycle import spin_cocycle
from weylc import (
    WeylElement,
    epsilons,
    pairing,
    positive_roots,
    simple_coordinates,
    simple_root,
    tau_word,
    w_epsilon,
)

SINGULAR_RCOND = 1e-12
SHIFT_SLACK = 1e-9


def default_height(n):
    if config.HEIGHT:
        return config.HEIGHT
    return 6 if n <= 2 else 4


# ===== NORMALISATIONS =====

def rho(p):
    """ρ_i = ζ + ζ' + 2(n-i)κ, demi-somme pondérée des coracines positives"""
    return np.array([p.zeta + p.zeta_p + 2 * (p.n - i) * p.kappa
                     for i in range(1, p.n + 1)], dtype=complex)


def rho_tilde(p):
    return rho(p.dual())


def rho_shifted(p):
    """Variante (ζ+ζ'+(n+1-2i)κ)_i, décalée de (n-1)κ par rapport à rho"""
    return np.array([p.zeta + p.zeta_p + (p.n + 1 - 2 * i) * p.kappa
                     for i in range(1, p.n + 1)], dtype=complex)


def plane_wave(z, w, p):
    """W(z, w) = q^{(ρ - w, ρ̃ + w_0 z)} avec w_0 = -1"""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return complex(p.qp(np.dot(rho(p) - w, rho_tilde(p) - z)))


def sp_factors(p):
    """Facteurs (c, β) de S_sp : produit des (c q^{-(β,z)} ; q)_∞"""
    n = p.n
    factors = []
    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n))
        factors.extend((p.q / t, e) for t in p.askey_wilson())
    for r in range(n):
        for s in range(r + 1, n):
            for sign in (-1, 1):
                beta = [0] * n
                beta[r], beta[s] = 1, sign
                factors.append((p.qp(1 - 2 * p.kappa), tuple(beta)))
                factors.append((-p.q, tuple(beta)))
    return factors


def S_sp_eval(z, p):
    z = np.asarray(z, dtype=complex)
    out = 1.0 + 0.0j
    for const, beta in sp_factors(p):
        out *= qpoch(const * p.qp(-pairing(beta, z)), p.q)
    return out


def _u_denominator(z, p):
    n = p.n
    den = 1.0 + 0.0j
    for i in range(n):
        den *= qpoch(p.qp(1 - 2 * z[i]), p.q)
    for r in range(n):
        for s in range(r + 1, n):
            den *= qpoch(p.qp(2 - 2 * z[r] + 2 * z[s]), p.q ** 2)
            den *= qpoch(p.qp(2 - 2 * z[r] - 2 * z[s]), p.q ** 2)
    return den


def U_eval(z, p):
    """U(z) = S_sp(z) / [∏(q^{1-2z_i};q)_∞ ∏(q^{2-2z_r±2z_s};q²)_∞]"""
    z = np.asarray(z, dtype=complex)
    den = _u_denominator(z, p)
    if abs(den) < 1e-300:
        raise PoleError("U", z)
    return S_sp_eval(z, p) / den


def U_eval_factored(z, p):
    """Seconde écriture de U, facteur par facteur"""
    z = np.asarray(z, dtype=complex)
    n = p.n
    out = 1.0 + 0.0j
    for i in range(n):
        num = 1.0 + 0.0j
        for t in p.askey_wilson():
            num *= qpoch(p.qp(1 - z[i]) / t, p.q)
        out *= num / qpoch(p.qp(1 - 2 * z[i]), p.q)
    for r in range(n):
        for s in range(r + 1, n):
            for sign in (1, -1):
                arg = -z[r] + sign * z[s]
                out *= qpoch(p.qp(1 - 2 * p.kappa + arg), p.q) / qpoch(p.qp(1 + arg), p.q)
    return out


def U_dual_eval(gamma, p):
    """Ũ : U avec υ et ζ' échangés"""
    return U_eval(gamma, p.dual())


# ===== DÉVELOPPEMENT DES OPÉRATEURS DE TRANSPORT =====

def simple_pairings(z):
    """((α_1, z), ..., (α_n, z)) ; x_j = q^{-(α_j, z)}"""
    z = np.asarray(z, dtype=complex)
    n = len(z)
    return np.array([pairing(simple_root(j, n), z) for j in range(1, n + 1)])


def monomials(z, q):
    return qpow(q, -simple_pairings(z))


def shift_scales(i, n, q):
    """d_j = q^{(α_j, e_i)} : x(z - e_i) = d · x(z)"""
    return np.array([q ** simple_root(j, n)[i - 1] for j in range(1, n + 1)], dtype=complex)


def _generator_series(cocycle, j, const, beta, height_cap):
    """C^{s_j} en série quand X = q^{const + (beta, z)}"""
    n = cocycle.n
    (a0, a1, a2), (u1, u2) = cocycle.polynomial(j)
    m = simple_coordinates(beta)
    if all(c <= 0 for c in m):
        mu = tuple(-c for c in m)
        c = cocycle.qp(const)
        num = TruncatedSeries(n, height_cap, {(0,) * n: a0})
        num = num + TruncatedSeries.monomial(n, height_cap, mu, a1 * c)
        num = num + TruncatedSeries.monomial(n, height_cap, tuple(2 * k for k in mu), a2 * c * c)
        den = (TruncatedSeries.inv_one_minus(n, height_cap, u1 * c, mu)
               * TruncatedSeries.inv_one_minus(n, height_cap, -u2 * c, mu))
        return num * den
    if all(c >= 0 for c in m):
        mu = tuple(m)
        c = cocycle.qp(-const)
        num = TruncatedSeries(n, height_cap, {(0,) * n: a2})
        num = num + TruncatedSeries.monomial(n, height_cap, mu, a1 * c)
        num = num + TruncatedSeries.monomial(n, height_cap, tuple(2 * k for k in mu), a0 * c * c)
        den = (TruncatedSeries.inv_one_minus(n, height_cap, c / u1, mu)
               * TruncatedSeries.inv_one_minus(n, height_cap, -c / u2, mu))
        return (num * den).scale(-1.0 / (u1 * u2))
    raise ValueError(f"argument affine non monomial : β={beta}")


def transport_series(cocycle, i, height_cap):
    """C^{τ(e_i)}(z) développé en série des x_j"""
    n = cocycle.n
    word = tau_word(i, n)
    origin = cocycle.word_points(word, np.zeros(n, dtype=complex))
    units = [cocycle.word_points(word, np.eye(n, dtype=complex)[r]) for r in range(n)]
    out = TruncatedSeries(n, height_cap, {(0,) * n: np.eye(cocycle.dim, dtype=complex)})
    for k, j in enumerate(word):
        const = cocycle.argument(j, origin[k])
        beta = tuple(int(round((cocycle.argument(j, units[r][k]) - const).real))
                     for r in range(n))
        out = out * _generator_series(cocycle, j, const.real, beta, height_cap)
    return out


def sp_shift_series(i, p, height_cap):
    """S_sp(z) / S_sp(z - e_i) en série des x_j"""
    n = p.n
    out = TruncatedSeries.constant(n, height_cap, 1.0)
    for const, beta in sp_factors(p):
        k = beta[i - 1]
        mu = simple_coordinates(beta)
        if k == 1:
            out = out * (TruncatedSeries.constant(n, height_cap, 1.0)
                         + TruncatedSeries.monomial(n, height_cap, mu, -const))
        elif k == -1:
            out = out * TruncatedSeries.inv_one_minus(n, height_cap, const / p.q, mu)
    return out


# ===== SOLUTIONS =====

@dataclass
class SeriesSolution:
    """Solution tronquée : préfacteur W(z,w)·normalization/S_sp(z) fois Σ Γ_μ x^μ"""

    label: tuple
    height_cap: int
    coefficients: TruncatedSeries
    params: ParameterSet
    spectral: np.ndarray
    normalization: complex
    residuals: list = field(default_factory=list)
    kind: str = "spin"

    @property
    def n(self):
        return self.params.n

    def leading(self):
        return self.coefficients.constant_term()

    def consistency(self):
        return max(self.residuals) if self.residuals else 0.0


def solve_coefficients(cocycle, seed, w, p, height_cap):
    """
    Résout hauteur par hauteur L_i(x) Ψ(d_i x) = Ψ(x), i = 1..n, avec
    L_i = q^{ρ_i - w_i} · S_sp(z)/S_sp(z-e_i) · C^{τ(e_i)}(z).
    Retourne (série Ψ, résidus de cohérence par hauteur).
    """
    n = p.n
    dim = cocycle.dim
    zero = (0,) * n
    one = np.eye(dim, dtype=complex)
    w = np.asarray(w, dtype=complex)
    shift = rho(p) - w
    ops = []
    for i in range(1, n + 1):
        series = sp_shift_series(i, p, height_cap) * transport_series(cocycle, i, height_cap)
        ops.append(series.scale(p.qp(shift[i - 1])))
    scales = [shift_scales(i, n, p.q) for i in range(1, n + 1)]

    seed = np.asarray(seed, dtype=complex)
    norm0 = max(float(np.linalg.norm(seed)), 1e-300)
    residuals = [max(float(np.linalg.norm(op.get(zero, 0 * one) @ seed - seed)) / norm0
                     for op in ops)]
    tol = config.TOL_OVERRIDE or config.TOLERANCES["series_consistency"]
    if residuals[0] > tol:
        raise NonGenericError(f"terme dominant non invariant (résidu {residuals[0]:.3e})", height=0)

    coeffs = {zero: seed}
    template = TruncatedSeries(n, height_cap)
    for mu in template.multi_indices():
        if mu == zero:
            continue
        blocks, rhs = [], []
        for op, d in zip(ops, scales):
            blocks.append(op.get(zero, 0 * one) * np.prod(d ** np.array(mu)) - one)
            acc = np.zeros(dim, dtype=complex)
            for kappa, g in coeffs.items():
                diff = tuple(a - b for a, b in zip(mu, kappa))
                if min(diff) < 0:
                    continue
                block = op.coeffs.get(diff)
                if block is not None:
                    acc += block @ (np.prod(d ** np.array(kappa)) * g)
            rhs.append(-acc)
        matrix = np.vstack(blocks)
        target = np.concatenate(rhs)
        singular = np.linalg.svd(matrix, compute_uv=False)
        if singular[-1] < SINGULAR_RCOND * singular[0]:
            raise NonGenericError(f"système singulier pour μ={mu}", height=sum(mu))
        solution = np.linalg.lstsq(matrix, target, rcond=None)[0]
        residual = float(np.linalg.norm(matrix @ solution - target)) / max(1.0, float(np.linalg.norm(target)))
        h = sum(mu)
        while len(residuals) <= h:
            residuals.append(0.0)
        residuals[h] = max(residuals[h], residual)
        if residual > tol:
            raise NonGenericError(f"système incohérent pour μ={mu} (résidu {residual:.3e})", height=h)
        coeffs[mu] = solution
    return TruncatedSeries(n, height_cap, coeffs), residuals


def solve_gamma(eps, height_cap, p):
    """Solution Φ_ε : Γ_0 = π(T_{w_0}) b_ε, spectre w_ε γ, normalisation 1/Ũ(w_ε γ)"""
    eps = tuple(int(e) for e in eps)
    w = w_epsilon(eps).act(p.gamma())
    seed = pi_Tw(WeylElement.longest(p.n), p) @ b_basis(eps, p)
    coeffs, residuals = solve_coefficients(spin_cocycle(p), seed, w, p, height_cap)
    u = U_dual_eval(w, p)
    if abs(u) < 1e-300:
        raise PoleError("U_dual", w)
    return SeriesSolution(eps, height_cap, coeffs, p, w, 1.0 / u, residuals)


def principal_leading_factor(gamma, m):
    """∏_{α>0} (q_α² q^{-2(α,γ)} ; q_α²)_∞"""
    out = 1.0 + 0.0j
    for alpha in positive_roots(len(gamma)):
        q2 = m.q_alpha(alpha) ** 2
        out *= qpoch(q2 * m.qp(-2 * pairing(alpha, gamma)), q2)
    return out


def solve_principal(gamma, m, p, height_cap):
    """Série Ψ(z, γ) de M(γ), Γ_0 = ∏(q_α² q^{-2(α,γ)};q_α²)_∞ v_{w_0}"""
    n = len(gamma)
    seed = principal_leading_factor(gamma, m) * principal_vector(WeylElement.longest(n))
    return solve_coefficients(principal_cocycle(gamma, m), seed, gamma, p, height_cap)


def solve_gamma_general(sigma, height_cap, gamma, m):
    """
    Φ^I_{σ^{-1}} = φ_I(A_{σ^{-1}}(γ) Φ(·, σγ)) pour σ ∈ W_0^I,
    normalisé par 1/S̃(σγ).
    """
    n = sigma.n
    gamma = np.asarray(gamma, dtype=complex)
    xi = gamma[-1] + (n - 1) * m.kappa
    p = m.to_params(xi, n)
    shifted = sigma.act(gamma)
    psi, residuals = solve_principal(shifted, m, p, height_cap)
    push = phi_I(gamma, m) @ A(sigma.inverse(), gamma, m)
    s_dual = S_root_product(shifted, m.dual())
    if abs(s_dual) < 1e-300:
        raise PoleError("S_dual", shifted)
    return SeriesSolution(tuple(sigma.images), height_cap, psi.map(lambda v: push @ v), p, shifted,
                          1.0 / s_dual, residuals, kind="principal")


def solve_basis(p, height_cap=None):
    height_cap = default_height(p.n) if height_cap is None else height_cap
    return [solve_gamma(eps, height_cap, p) for eps in epsilons(p.n)]


# ===== ÉVALUATION =====

def prefactor(sol, z):
    s = S_sp_eval(z, sol.params)
    if abs(s) < 1e-300:
        raise PoleError("S_sp", z)
    return plane_wave(z, sol.spectral, sol.params) * sol.normalization / s


def eval_series(sol, z):
    """Σ Γ_μ x(z)^μ"""
    return sol.coefficients.evaluate(monomials(z, sol.params.q))


def eval_solution(sol, z):
    return prefactor(sol, z) * eval_series(sol, z)


def eval_holomorphic(sol, z):
    """S_sp(z)·Φ(z), fini aux zéros de S_sp"""
    z = np.asarray(z, dtype=complex)
    return plane_wave(z, sol.spectral, sol.params) * sol.normalization * eval_series(sol, z)


def chamber_shift(z, depth):
    """Plus petite translation λ ∈ N^n avec Re(α_j, z - λ) ≤ -depth, construite de e_n vers e_1"""
    re = np.real(np.asarray(z, dtype=complex))
    n = len(re)
    lam = np.zeros(n, dtype=int)
    lam[-1] = max(0, int(np.ceil(re[-1] + depth - SHIFT_SLACK)))
    for i in range(n - 2, -1, -1):
        ceiling = re[i + 1] - lam[i + 1] - depth
        lam[i] = max(0, int(np.ceil(re[i] - ceiling - SHIFT_SLACK)))
    return lam


def eval_anywhere(sol, z, depth=3.0):
    """Φ(z) = C^{τ(λ)}(z) Φ(z - λ) avec z - λ au fond de la chambre"""
    z = np.asarray(z, dtype=complex)
    lam = chamber_shift(z, depth)
    cocycle = spin_cocycle(sol.params)
    op = np.eye(cocycle.dim, dtype=complex)
    y = z.copy()
    for i, k in enumerate(lam, start=1):
        for _ in range(k):
            op = op @ cocycle.transport(i, y)
            y = y - np.eye(len(z))[i - 1]
    return op @ eval_solution(sol, y)


def transport_residual(sol, z):
    """max_i ‖C^{τ(e_i)}(z) Φ(z - e_i) - Φ(z)‖ / ‖Φ(z)‖"""
    z = np.asarray(z, dtype=complex)
    cocycle = spin_cocycle(sol.params)
    phi = eval_solution(sol, z)
    scale = max(float(np.linalg.norm(phi)), 1e-300)
    worst = 0.0
    for i in range(1, sol.n + 1):
        shifted = eval_solution(sol, z - np.eye(sol.n)[i - 1])
        worst = max(worst, float(np.linalg.norm(cocycle.transport(i, z) @ shifted - phi)) / scale)
    return worst


def solution_matrix(solutions, z):
    """Colonnes Φ_ε(z)"""
    return np.column_stack([eval_solution(s, z) for s in solutions])


def chamber_point(n, depth=3.0, wobble=0.0):
    """Point de la chambre avec Re(α_j, z) = -depth pour tout j"""
    return np.array([-depth * (n + 1 - i) + 1j * wobble * i for i in range(1, n + 1)], dtype=complex)


def cross_route_check(eps, p, zs, height_cap=None):
    """
    Compare Φ_ε (représentation de spin) et Φ^I_{w_ε^{-1}} (entrelaceurs) aux points zs.
    Retourne (rapports r(z), écarts ‖Φ^I - r Φ_ε‖ / ‖Φ_ε‖) ; r est le coefficient
    des moindres carrés, l'écart mesure la proportionnalité.
    """
    height_cap = default_height(p.n) if height_cap is None else height_cap
    m = MultiplicityFunction.from_params(p)
    spin = solve_gamma(eps, height_cap, p)
    general = solve_gamma_general(w_epsilon(eps), height_cap, p.gamma(), m)
    ratios, misfits = [], []
    for z in zs:
        a = eval_solution(spin, z)
        b = eval_solution(general, z)
        r = complex(np.vdot(a, b) / np.vdot(a, a))
        ratios.append(r)
        misfits.append(float(np.linalg.norm(b - r * a) / np.linalg.norm(a)))
    return ratios, misfits


def cross_route_ratios(eps, p, zs, height_cap=None):
    """Rapports Φ^I_{w_ε^{-1}}(z) / Φ_ε(z) aux points zs"""
    return cross_route_check(eps, p, zs, height_cap)[0]


# ===== EXPORT JSON =====

def _pair(value):
    value = complex(value)
    return [value.real, value.imag]


def to_document(sol):
    """Document JSON {n, H, epsilon, params, coefficients}"""
    params = {key: (_pair(value) if key != "n" else value)
              for key, value in sol.params.as_dict().items()}
    params["q"] = sol.params.q
    return {
        "n": sol.n,
        "H": sol.height_cap,
        "epsilon": list(sol.label),
        "params": params,
        "coefficients": [
            {"mu": list(mu), "re": list(np.real(value)), "im": list(np.imag(value))}
            for mu, value in sol.coefficients.sorted_items()
        ],
    }


def from_document(doc):
    """Reconstruit une SeriesSolution ; spectre et normalisation sont recalculés"""
    raw = doc["params"]
    values = {key: (complex(*value) if isinstance(value, list) else value)
              for key, value in raw.items()}
    p = ParameterSet(q=float(values["q"]), kappa=values["kappa"], zeta=values["zeta"],
                     zeta_p=values["zeta_p"], upsilon=values["upsilon"],
                     upsilon_p=values["upsilon_p"], xi=values["xi"], n=int(doc["n"]))
    coeffs = {tuple(entry["mu"]): np.array(entry["re"]) + 1j * np.array(entry["im"])
              for entry in doc["coefficients"]}
    eps = tuple(doc["epsilon"])
    w = w_epsilon(eps).act(p.gamma())
    return SeriesSolution(eps, int(doc["H"]), TruncatedSeries(p.n, int(doc["H"]), coeffs),
                          p, w, 1.0 / U_dual_eval(w, p))
