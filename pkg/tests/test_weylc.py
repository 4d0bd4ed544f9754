import numpy as np
import pytest
from numpy.testing import assert_allclose

from weylc import (
    WeylElement,
    AffineElement,
    enumerate_w0,
    positive_roots,
    is_positive,
    simple_root,
    simple_coordinates,
    tau_word,
    w_epsilon,
    epsilon_of,
    epsilons,
    bruhat_leq,
    minimal_coset_reps,
    parabolic_subset,
)


@pytest.mark.parametrize("n,order", [(1, 2), (2, 8), (3, 48)])
def test_group_order(n, order):
    assert len(enumerate_w0(n)) == order
    assert len(set(enumerate_w0(n))) == order


@pytest.mark.parametrize("n", [2, 3])
def test_positive_roots_count(n):
    assert len(positive_roots(n)) == n * n
    assert all(is_positive(a) for a in positive_roots(n))


class TestFinite:

    @pytest.mark.parametrize("n", [2, 3])
    def test_longest_element(self, n):
        w0 = WeylElement.longest(n)
        assert w0.length() == n * n
        assert max(w.length() for w in enumerate_w0(n)) == n * n

    @pytest.mark.parametrize("n", [2, 3])
    def test_inverse_and_product(self, n, rng):
        z = rng.normal(size=n)
        for u in enumerate_w0(n):
            assert u * u.inverse() == WeylElement.identity(n)
            for v in enumerate_w0(n)[:6]:
                assert_allclose((u * v).act(z), u.act(v.act(z)))

    def test_braid_relations(self):
        s1, s2 = WeylElement.simple(1, 2), WeylElement.simple(2, 2)
        assert s1 * s2 * s1 * s2 == s2 * s1 * s2 * s1
        s1, s2, s3 = (WeylElement.simple(i, 3) for i in (1, 2, 3))
        assert s1 * s2 * s1 == s2 * s1 * s2
        assert s1 * s3 == s3 * s1

    @pytest.mark.parametrize("n", [2, 3])
    def test_affine_length_agrees_with_inversions(self, n):
        for w in enumerate_w0(n):
            assert AffineElement.from_finite(w).length() == w.length()

    @pytest.mark.parametrize("n", [2, 3])
    def test_reduced_words(self, n):
        for w in enumerate_w0(n):
            word = w.reduced_word()
            assert len(word) == w.length()
            assert 0 not in word
            assert WeylElement.from_word(word, n) == w

    def test_simple_root_images(self):
        s2 = WeylElement.simple(2, 2)
        assert s2.act_root(simple_root(1, 2)) == (1, 1)
        assert s2.act_root(simple_root(2, 2)) == (0, -1)


class TestAffine:

    def test_s0_action(self):
        s0 = AffineElement.simple(0, 2)
        assert_allclose(s0.act(np.array([0.3, 0.1])), [0.7, 0.1])
        assert s0 * s0 == AffineElement.identity(2)

    def test_affine_braid(self):
        s0, s1 = AffineElement.simple(0, 2), AffineElement.simple(1, 2)
        assert s0 * s1 * s0 * s1 == s1 * s0 * s1 * s0

    def test_tau_e1_reduced_word(self):
        assert AffineElement.tau((1, 0)).reduced_word() == [0, 1, 2, 1]

    @pytest.mark.parametrize("n", [2, 3])
    def test_tau_words(self, n):
        for i in range(1, n + 1):
            lam = tuple(1 if k == i - 1 else 0 for k in range(n))
            tau = AffineElement.tau(lam)
            assert AffineElement.from_word(tau_word(i, n), n) == tau
            assert tau.length() == 2 * n

    def test_inverse(self, rng):
        g = AffineElement.from_word([0, 1, 2, 0, 1], 2)
        z = rng.normal(size=2)
        assert_allclose(g.inverse().act(g.act(z)), z)

    def test_reduced_word_rebuilds_element(self):
        g = AffineElement.from_word([0, 1, 0, 2, 1, 0, 1], 2)
        word = g.reduced_word()
        assert AffineElement.from_word(word, 2) == g
        assert len(word) == g.length()


class TestCombinatorics:

    @pytest.mark.parametrize("n", [2, 3])
    def test_w_epsilon_maps_ones_to_epsilon(self, n):
        for eps in epsilons(n):
            assert epsilon_of(w_epsilon(eps)) == eps

    @pytest.mark.parametrize("n", [2, 3])
    def test_w_epsilon_are_minimal_reps(self, n):
        reps = set(minimal_coset_reps(parabolic_subset(n), n))
        assert reps == {w_epsilon(eps) for eps in epsilons(n)}

    @pytest.mark.parametrize("n", [2, 3])
    def test_w_epsilon_length(self, n):
        for eps in epsilons(n):
            expected = sum(n - i + 1 for i in range(1, n + 1) if eps[i - 1] == -1)
            assert w_epsilon(eps).length() == expected

    def test_w_epsilon_small_rank(self):
        assert w_epsilon((1, -1)) == WeylElement.simple(2, 2)
        assert w_epsilon((-1, 1)) == WeylElement.from_word([1, 2], 2)

    def test_bruhat(self):
        e = WeylElement.identity(2)
        s1, s2 = WeylElement.simple(1, 2), WeylElement.simple(2, 2)
        assert all(bruhat_leq(e, w) for w in enumerate_w0(2))
        assert all(bruhat_leq(w, WeylElement.longest(2)) for w in enumerate_w0(2))
        assert bruhat_leq(s1, s1 * s2)
        assert not bruhat_leq(s2, s1)

    def test_simple_coordinates(self):
        assert simple_coordinates((1, 0)) == (1, 1)
        assert simple_coordinates((0, 1, -1)) == (0, 1, 0)
