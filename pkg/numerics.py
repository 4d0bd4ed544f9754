#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Fonctions spéciales complexes (q-Pochhammer, thêta de Jacobi renormalisée)
et arithmétique des séries entières tronquées à plusieurs variables.
"""

import math
from itertools import product as cartesian

import numpy as np
import mpmath

import config
from errors import PoleError

MAX_FACTORS = 100000


# ===== PUISSANCES ET PRODUITS INFINIS =====

def qpow(q, x):
    """Retourne q**x pour un exposant complexe (branche réelle de log q)"""
    return np.exp(math.log(q) * np.asarray(x, dtype=complex))


def qpoch(x, q, cutoff=None):
    """(x;q)_∞ tronqué dès que le facteur de queue vaut 1 à cutoff près"""
    if not 0 < abs(q) < 1:
        raise ValueError(f"base q hors de (0,1): {q}")
    cutoff = config.TAIL_CUTOFF if cutoff is None else cutoff
    term = complex(x)
    result = 1.0 + 0.0j
    for _ in range(MAX_FACTORS):
        if abs(term) < cutoff:
            break
        result *= 1.0 - term
        term *= q
    return result


def theta(x, q):
    """θ(x;q) = (x;q)_∞ (q/x;q)_∞"""
    x = complex(x)
    if x == 0:
        raise PoleError("theta", x)
    return qpoch(x, q) * qpoch(q / x, q)


def thetas(xs, q):
    """Produit θ(x_1,...,x_r;q)"""
    result = 1.0 + 0.0j
    for x in xs:
        result *= theta(x, q)
    return result


def checked_ratio(num, den, where, argument=None):
    """Quotient avec détection du pôle"""
    if den == 0 or not np.isfinite(den):
        raise PoleError(where, argument)
    return num / den


def theta_quadruple_identity_residual(x, nu, lam, mu, q):
    """Résidu de l'identité à trois termes entre produits de quatre thêtas"""
    first = thetas([x * nu, x / nu, lam * mu, mu / lam], q)
    second = thetas([x * lam, x / lam, mu * nu, mu / nu], q)
    third = (mu / lam) * thetas([x * mu, x / mu, lam * nu, lam / nu], q)
    return float(abs(first - second + third))


# ===== ORACLE EN PRÉCISION ÉTENDUE =====

def qpoch_mp(x, q, dps=40):
    """(x;q)_∞ calculé par mpmath, pour les contrôles de haute précision"""
    with mpmath.workdps(dps):
        return complex(mpmath.qp(mpmath.mpc(x), mpmath.mpf(q)))


def theta_mp(x, q, dps=40):
    with mpmath.workdps(dps):
        a = mpmath.mpc(x)
        base = mpmath.mpf(q)
        return complex(mpmath.qp(a, base) * mpmath.qp(base / a, base))


# ===== SÉRIES TRONQUÉES =====

def _times(a, b):
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray) and a.ndim and b.ndim:
        return a @ b
    return a * b


def _is_zero(value):
    if isinstance(value, np.ndarray):
        return not np.any(value)
    return value == 0


class TruncatedSeries:
    """
    Série entière en x_1..x_n tronquée à la hauteur totale H.
    Les coefficients sont des scalaires complexes ou des tableaux numpy
    (vecteurs d'état ou opérateurs) ; un indice absent vaut zéro.
    """

    __slots__ = ("rank", "height_cap", "coeffs")
    __array_ufunc__ = None  # ndarray * série -> __rmul__

    def __init__(self, rank, height_cap, coeffs=None):
        if rank < 1 or height_cap < 0:
            raise ValueError(f"rang {rank} / hauteur {height_cap} invalides")
        self.rank = rank
        self.height_cap = height_cap
        self.coeffs = {}
        for mu, value in (coeffs or {}).items():
            mu = tuple(int(m) for m in mu)
            if len(mu) != rank or min(mu) < 0:
                raise ValueError(f"multi-indice invalide {mu}")
            if sum(mu) <= height_cap and not _is_zero(value):
                self.coeffs[mu] = value

    # --- constructeurs ---

    @classmethod
    def constant(cls, rank, height_cap, value):
        return cls(rank, height_cap, {(0,) * rank: value})

    @classmethod
    def monomial(cls, rank, height_cap, mu, value=1.0):
        return cls(rank, height_cap, {tuple(mu): value})

    @classmethod
    def inv_one_minus(cls, rank, height_cap, c, mu):
        """Développement géométrique de 1/(1 - c·x^μ)"""
        mu = tuple(int(m) for m in mu)
        if not any(mu):
            if abs(1.0 - c) < 1e-14:
                raise PoleError("inv_one_minus", c)
            return cls.constant(rank, height_cap, 1.0 / (1.0 - c))
        step = sum(mu)
        coeffs = {}
        power = 1.0 + 0.0j
        for k in range(height_cap // step + 1):
            coeffs[tuple(k * m for m in mu)] = power
            power *= c
        return cls(rank, height_cap, coeffs)

    # --- outils ---

    @staticmethod
    def height(mu):
        return sum(mu)

    def multi_indices(self):
        """Tous les multi-indices de hauteur ≤ H, triés par hauteur"""
        indices = [mu for mu in cartesian(range(self.height_cap + 1), repeat=self.rank)
                   if sum(mu) <= self.height_cap]
        return sorted(indices, key=lambda mu: (sum(mu), mu))

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda item: (sum(item[0]), item[0]))

    def get(self, mu, default=0.0):
        return self.coeffs.get(tuple(mu), default)

    def constant_term(self):
        return self.coeffs.get((0,) * self.rank, 0.0)

    def _like(self, coeffs):
        return TruncatedSeries(self.rank, self.height_cap, coeffs)

    def _check(self, other):
        if self.rank != other.rank:
            raise ValueError("rangs incompatibles")
        return min(self.height_cap, other.height_cap)

    def map(self, fn):
        return self._like({mu: fn(value) for mu, value in self.coeffs.items()})

    def scale(self, factor):
        return self.map(lambda value: factor * value)

    def substitute_scale(self, d):
        """Série en (d_1 x_1, ..., d_n x_n)"""
        d = np.asarray(d, dtype=complex)
        return self._like({mu: np.prod(d ** np.array(mu)) * value
                           for mu, value in self.coeffs.items()})

    def truncate(self, height_cap):
        return TruncatedSeries(self.rank, height_cap, self.coeffs)

    # --- arithmétique ---

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.rank, self.height_cap, other)
        cap = self._check(other)
        coeffs = dict(self.coeffs)
        for mu, value in other.coeffs.items():
            coeffs[mu] = coeffs[mu] + value if mu in coeffs else value
        return TruncatedSeries(self.rank, cap, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.map(lambda value: _times(value, other))
        cap = self._check(other)
        coeffs = {}
        for mu, a in self.coeffs.items():
            h = sum(mu)
            for nu, b in other.coeffs.items():
                if h + sum(nu) > cap:
                    continue
                key = tuple(m + n for m, n in zip(mu, nu))
                term = _times(a, b)
                coeffs[key] = coeffs[key] + term if key in coeffs else term
        return TruncatedSeries(self.rank, cap, coeffs)

    def __rmul__(self, other):
        return self.map(lambda value: _times(other, value))

    def inverse(self):
        """Inverse d'une série scalaire de terme constant non nul"""
        s0 = self.constant_term()
        if isinstance(s0, np.ndarray) or s0 == 0:
            raise PoleError("TruncatedSeries.inverse", "terme constant nul")
        rest = self.scale(1.0 / s0) - 1.0
        result = TruncatedSeries.constant(self.rank, self.height_cap, 1.0)
        power = TruncatedSeries.constant(self.rank, self.height_cap, 1.0)
        for _ in range(self.height_cap):
            power = power * (-rest)
            if not power.coeffs:
                break
            result = result + power
        return result.scale(1.0 / s0)

    def evaluate(self, x):
        x = np.asarray(x, dtype=complex)
        total = 0.0
        for mu, value in self.coeffs.items():
            total = total + np.prod(x ** np.array(mu)) * value
        return total

    def height_norms(self):
        """Norme maximale des coefficients par hauteur"""
        norms = [0.0] * (self.height_cap + 1)
        for mu, value in self.coeffs.items():
            norms[sum(mu)] = max(norms[sum(mu)], float(np.max(np.abs(value))))
        return norms

    def __repr__(self):
        return f"TruncatedSeries(rank={self.rank}, H={self.height_cap}, termes={len(self.coeffs)})"
