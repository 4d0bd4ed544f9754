#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Groupe de Weyl fini et affine de type C_n.
Éléments finis : permutations signées ; éléments affines : (partie finie, translation entière).
Longueurs, mots réduits, ordre de Bruhat, représentants minimaux de classes.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product, combinations
from math import floor

import numpy as np


# ===== RACINES =====

def simple_root(i, n):
    """α_i = e_i - e_{i+1} (i<n), α_n = e_n"""
    v = [0] * n
    v[i - 1] = 1
    if i < n:
        v[i] = -1
    return tuple(v)


@lru_cache(maxsize=None)
def positive_roots(n):
    roots = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    for r, s in combinations(range(n), 2):
        for sign in (-1, 1):
            v = [0] * n
            v[r], v[s] = 1, sign
            roots.append(tuple(v))
    return tuple(roots)


def all_roots(n):
    pos = positive_roots(n)
    return pos + tuple(tuple(-c for c in a) for a in pos)


def is_positive(root):
    """Une racine est positive ssi sa première coordonnée non nulle l'est"""
    for c in root:
        if c:
            return c > 0
    raise ValueError("vecteur nul")


def is_long(root):
    return sum(c * c for c in root) == 2


def pairing(root, z):
    return sum(c * zc for c, zc in zip(root, z))


def simple_coordinates(vector):
    """Coordonnées m_j de Σ ℓ_i e_i dans la base des racines simples : m_j = Σ_{i≤j} ℓ_i"""
    return tuple(int(c) for c in np.cumsum(vector))


# ===== GROUPE FINI =====

@dataclass(frozen=True)
class WeylElement:
    """Permutation signée : w(e_i) = signe(images[i])·e_{|images[i]|}"""

    images: tuple

    @property
    def n(self):
        return len(self.images)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def simple(cls, i, n):
        if not 1 <= i <= n:
            raise ValueError(f"réflexion simple finie s_{i} inexistante pour n={n}")
        images = list(range(1, n + 1))
        if i < n:
            images[i - 1], images[i] = i + 1, i
        else:
            images[n - 1] = -n
        return cls(tuple(images))

    @classmethod
    def sign_change(cls, i, n):
        images = list(range(1, n + 1))
        images[i - 1] = -i
        return cls(tuple(images))

    @classmethod
    def longest(cls, n):
        return cls(tuple(-k for k in range(1, n + 1)))

    @classmethod
    def from_word(cls, word, n):
        w = cls.identity(n)
        for j in word:
            w = w * cls.simple(j, n)
        return w

    def __mul__(self, other):
        images = []
        for img in other.images:
            target = self.images[abs(img) - 1]
            images.append(target if img > 0 else -target)
        return WeylElement(tuple(images))

    def inverse(self):
        images = [0] * self.n
        for i, img in enumerate(self.images, start=1):
            images[abs(img) - 1] = i if img > 0 else -i
        return WeylElement(tuple(images))

    def matrix(self):
        m = np.zeros((self.n, self.n), dtype=int)
        for i, img in enumerate(self.images):
            m[abs(img) - 1, i] = 1 if img > 0 else -1
        return m

    def act(self, z):
        z = np.asarray(z)
        out = np.empty_like(z)
        for i, img in enumerate(self.images):
            out[abs(img) - 1] = z[i] if img > 0 else -z[i]
        return out

    def act_root(self, root):
        return tuple(int(c) for c in self.act(np.array(root, dtype=int)))

    def inversions(self):
        """R_0^+ ∩ w^{-1}R_0^- : racines positives envoyées dans les négatives"""
        return [a for a in positive_roots(self.n) if not is_positive(self.act_root(a))]

    def length(self):
        return len(self.inversions())

    def reduced_word(self):
        return AffineElement(self, (0,) * self.n).reduced_word()

    def __repr__(self):
        return f"W0{self.images}"


@lru_cache(maxsize=None)
def enumerate_w0(n):
    """W_0 dans un ordre canonique (longueur, images)"""
    elements = []
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            elements.append(WeylElement(tuple(s * p for s, p in zip(signs, perm))))
    return tuple(sorted(elements, key=lambda w: (w.length(), w.images)))


# ===== GROUPE AFFINE =====

@lru_cache(maxsize=None)
def _alcove_point(n):
    # point intérieur de l'alcôve fondamentale 1/2 > p_1 > ... > p_n > 0
    return tuple(Fraction(n + 1 - i, 2 * n + 3) for i in range(1, n + 1))


def _hyperplane_forms(n):
    forms = [tuple(2 if k == i else 0 for k in range(n)) for i in range(n)]
    for r, s in combinations(range(n), 2):
        for sign in (1, -1):
            v = [0] * n
            v[r], v[s] = 1, sign
            forms.append(tuple(v))
    return forms


@dataclass(frozen=True)
class AffineElement:
    """Élément (w, λ) du groupe de Weyl affine, agissant par z ↦ w z + λ"""

    finite: WeylElement
    translation: tuple

    @property
    def n(self):
        return self.finite.n

    @classmethod
    def identity(cls, n):
        return cls(WeylElement.identity(n), (0,) * n)

    @classmethod
    def simple(cls, j, n):
        if j == 0:
            shift = [0] * n
            shift[0] = 1
            return cls(WeylElement.sign_change(1, n), tuple(shift))
        return cls(WeylElement.simple(j, n), (0,) * n)

    @classmethod
    def tau(cls, lam):
        lam = tuple(int(c) for c in lam)
        return cls(WeylElement.identity(len(lam)), lam)

    @classmethod
    def from_finite(cls, w):
        return cls(w, (0,) * w.n)

    @classmethod
    def from_word(cls, word, n):
        g = cls.identity(n)
        for j in word:
            g = g * cls.simple(j, n)
        return g

    def __mul__(self, other):
        shift = self.finite.act(np.array(other.translation, dtype=int)) + np.array(self.translation)
        return AffineElement(self.finite * other.finite, tuple(int(c) for c in shift))

    def inverse(self):
        inv = self.finite.inverse()
        shift = -inv.act(np.array(self.translation, dtype=int))
        return AffineElement(inv, tuple(int(c) for c in shift))

    def act(self, z):
        z = np.asarray(z)
        return self.finite.act(z) + np.asarray(self.translation, dtype=z.dtype if z.dtype != int else int)

    def is_finite(self):
        return not any(self.translation)

    def length(self):
        """Nombre d'hyperplans affines séparant l'alcôve fondamentale de son image"""
        p = _alcove_point(self.n)
        image = [Fraction(0)] * self.n
        for i, img in enumerate(self.finite.images):
            image[abs(img) - 1] = p[i] if img > 0 else -p[i]
        image = [c + t for c, t in zip(image, self.translation)]
        total = 0
        for form in _hyperplane_forms(self.n):
            before = sum(c * x for c, x in zip(form, p))
            after = sum(c * x for c, x in zip(form, image))
            total += abs(floor(before) - floor(after))
        return total

    def reduced_word(self):
        """Mot réduit glouton : on retire la plus petite descente à gauche"""
        word = []
        current = self
        length = current.length()
        while length > 0:
            for j in range(self.n + 1):
                candidate = AffineElement.simple(j, self.n) * current
                candidate_length = candidate.length()
                if candidate_length < length:
                    word.append(j)
                    current, length = candidate, candidate_length
                    break
            else:
                raise RuntimeError("aucune descente trouvée")
        return word

    def __repr__(self):
        return f"W({self.finite.images}, τ{self.translation})"


def as_affine(w):
    return w if isinstance(w, AffineElement) else AffineElement.from_finite(w)


def act(w, z):
    return as_affine(w).act(np.asarray(z, dtype=complex))


def reduced_word(w):
    return as_affine(w).reduced_word()


def tau_word(i, n):
    """Mot de τ(e_i) = s_{i-1}...s_1 s_0 s_1...s_n...s_i"""
    return list(range(i - 1, 0, -1)) + [0] + list(range(1, n + 1)) + list(range(n - 1, i - 1, -1))


# ===== COMBINATOIRE =====

def w_epsilon(eps):
    """w_ε = (s_{i_k}...s_n)...(s_{i_1}...s_n) sur les positions où ε_i = -1"""
    n = len(eps)
    w = WeylElement.identity(n)
    for i in (k for k in range(1, n + 1) if eps[k - 1] == -1):
        w = WeylElement.from_word(range(i, n + 1), n) * w
    return w


def epsilon_of(w):
    """ε tel que w(1,...,1) = ε"""
    return tuple(int(c) for c in w.act(np.ones(w.n, dtype=int)))


@lru_cache(maxsize=None)
def epsilons(n):
    """{±1}^n dans l'ordre de base (+ avant -, jambe 1 la plus significative)"""
    return tuple(product((1, -1), repeat=n))


def bruhat_leq(u, v):
    """u ≤ v : u est produit d'un sous-mot d'un mot réduit de v"""
    u, v = as_affine(u), as_affine(v)
    word = v.reduced_word()
    if u.length() > len(word):
        return False
    n = v.n
    generators = [AffineElement.simple(j, n) for j in word]
    for mask in product((0, 1), repeat=len(word)):
        g = AffineElement.identity(n)
        for bit, s in zip(mask, generators):
            if bit:
                g = g * s
        if g == u:
            return True
    return False


def minimal_coset_reps(subset, n):
    """σ ∈ W_0 avec σ(α_i) > 0 pour tout i ∈ I"""
    return [w for w in enumerate_w0(n)
            if all(is_positive(w.act_root(simple_root(i, n))) for i in subset)]


def parabolic_subset(n):
    return tuple(range(1, n))


def right_reduced_word(w):
    """Second mot réduit : on retire la plus grande descente à droite"""
    g = as_affine(w)
    word = []
    length = g.length()
    while length > 0:
        for j in range(g.n, -1, -1):
            candidate = g * AffineElement.simple(j, g.n)
            if candidate.length() < length:
                word.insert(0, j)
                g, length = candidate, length - 1
                break
        else:
            raise RuntimeError("aucune descente trouvée")
    return word
