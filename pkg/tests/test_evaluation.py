"""Neighborhood-overlap curves against brute-force reference loops."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from factorout.evaluation import (
    NosCurve,
    area_between,
    knn_sets,
    nos_distance,
    nos_label,
)
from factorout.matrices import labels_to_distance, pairwise_euclidean


def neighbor_sets_reference(d, k):
    """Plain double-loop k-NN with (distance, index) tie-breaking."""
    n = d.shape[0]
    out = []
    for i in range(n):
        order = sorted((d[i, j], j) for j in range(n) if j != i)
        out.append([j for _, j in order[:k]])
    return np.array(out)


def nos_distance_reference(d_a, d_b):
    n = d_a.shape[0]
    scores = []
    for k in range(1, n):
        na = neighbor_sets_reference(d_a, k)
        nb = neighbor_sets_reference(d_b, k)
        total = sum(
            len(set(na[i]) & set(nb[i])) / k for i in range(n)
        )
        scores.append(total / n)
    return np.array(scores)


def nos_label_reference(d, labels):
    n = d.shape[0]
    labels = np.asarray(labels)
    scores = []
    for k in range(1, n):
        nk = neighbor_sets_reference(d, k)
        total = 0.0
        for i in range(n):
            mates = set(np.flatnonzero(labels == labels[i])) - {i}
            if mates:
                total += len(set(nk[i]) & mates) / len(mates)
        scores.append(total / n)
    return np.array(scores)


def random_distances(n, seed):
    u = np.triu(np.random.default_rng(seed).random((n, n)), 1)
    return u + u.T


class TestKnnSets:
    def test_hand_example(self):
        d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        assert_array_equal(knn_sets(d, 1), [[1], [0], [0]])
        assert_array_equal(knn_sets(d, 2), [[1, 2], [0, 2], [0, 1]])

    def test_ties_break_by_ascending_index(self):
        d = np.full((3, 3), 5.0)
        np.fill_diagonal(d, 0.0)
        assert_array_equal(knn_sets(d, 1), [[1], [0], [0]])

    def test_never_contains_self(self):
        d = random_distances(25, seed=0)
        for k in (1, 5, 24):
            sets = knn_sets(d, k)
            for i in range(25):
                assert i not in sets[i]

    def test_matches_reference(self):
        d = random_distances(30, seed=1)
        for k in (1, 3, 17, 29):
            assert_array_equal(knn_sets(d, k), neighbor_sets_reference(d, k))

    def test_k_out_of_range(self):
        d = random_distances(5, seed=2)
        for k in (0, 5, -1):
            with pytest.raises(ValueError, match="k must"):
                knn_sets(d, k)


class TestNosDistance:
    def test_self_overlap_is_exactly_one(self):
        d = random_distances(60, seed=3)
        curve = nos_distance(d, d)
        assert_array_equal(curve.scores, np.ones(59))
        assert curve.ks[0] == 1 and curve.ks[-1] == 59

    def test_hand_example(self):
        d_a = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]])
        d_b = np.array([[0.0, 3.0, 1.0], [3.0, 0.0, 2.0], [1.0, 2.0, 0.0]])
        curve = nos_distance(d_a, d_b)
        # k=1 neighborhoods: a = (1, 0, 0), b = (2, 2, 0) -> overlap 1/3;
        # k=2 both cover everyone -> 1.
        assert_allclose(curve.scores, [1.0 / 3.0, 1.0], rtol=1e-15)
        assert_allclose(curve.area, ((1 / 3 - 1 / 2) + (1.0 - 1.0)) / 2.0, rtol=1e-12)

    def test_matches_reference(self):
        d_a = random_distances(28, seed=4)
        d_b = pairwise_euclidean(np.random.default_rng(5).normal(size=(28, 3)))
        curve = nos_distance(d_a, d_b)
        assert_allclose(curve.scores, nos_distance_reference(d_a, d_b), rtol=1e-12)

    def test_symmetric_in_arguments(self):
        d_a = random_distances(20, seed=6)
        d_b = random_distances(20, seed=7)
        assert_array_equal(nos_distance(d_a, d_b).scores, nos_distance(d_b, d_a).scores)

    def test_unrelated_matrices_hug_identity_line(self):
        curve = nos_distance(random_distances(200, 8), random_distances(200, 9))
        assert abs(curve.area) <= 0.03

    def test_curve_ends_at_one(self):
        curve = nos_distance(random_distances(40, 10), random_distances(40, 11))
        assert curve.scores[-1] == 1.0

    def test_stride_subsamples_grid(self):
        d_a = random_distances(30, seed=12)
        d_b = random_distances(30, seed=13)
        full = nos_distance(d_a, d_b)
        strided = nos_distance(d_a, d_b, stride=7)
        assert_array_equal(strided.ks, [1, 8, 15, 22, 29])
        assert_array_equal(strided.scores, full.scores[strided.ks - 1])
        assert strided.stride == 7

    def test_size_mismatch_raises(self):
        with pytest.raises(ValueError, match="disagree"):
            nos_distance(random_distances(5, 0), random_distances(6, 1))

    def test_bad_stride_raises(self):
        d = random_distances(6, 2)
        with pytest.raises(ValueError, match="stride"):
            nos_distance(d, d, stride=0)


class TestNosLabel:
    def test_matches_reference(self):
        d = random_distances(26, seed=14)
        labels = np.random.default_rng(15).integers(0, 3, size=26)
        curve = nos_label(d, labels)
        assert_allclose(curve.scores, nos_label_reference(d, labels), rtol=1e-12)

    def test_label_induced_distances_saturate(self):
        labels = np.array([0] * 5 + [1] * 7 + [2] * 4)
        curve = nos_label(labels_to_distance(labels), labels)
        # Same-class points come first in every ordering, so recall at k is
        # min(k, class size - 1) / (class size - 1); from k = 6 on it is 1.
        sizes = np.array([{0: 4, 1: 6, 2: 3}[c] for c in labels])
        for k in (1, 3, 6, 15):
            expected = np.mean(np.minimum(k, sizes) / sizes)
            assert_allclose(curve.scores[k - 1], expected, rtol=1e-12)
        assert curve.scores[-1] == 1.0

    def test_single_label_tracks_identity_line(self):
        d = random_distances(15, seed=16)
        curve = nos_label(d, np.zeros(15, dtype=int))
        assert_allclose(curve.scores, curve.ks / 14.0, rtol=1e-15)
        assert abs(curve.area) <= 1e-15  # identity up to float averaging

    def test_singleton_classes_contribute_zero(self):
        d = random_distances(4, seed=17)
        labels = np.array([0, 1, 2, 3])  # nobody shares a class
        curve = nos_label(d, labels)
        assert_array_equal(curve.scores, np.zeros(3))

    def test_shuffled_labels_hug_identity_line(self):
        rng = np.random.default_rng(18)
        x = np.vstack([rng.normal(size=(150, 3)), rng.normal(size=(150, 3)) + 5.0])
        d = pairwise_euclidean(x)
        labels = rng.integers(0, 4, size=300)  # independent of the geometry
        assert abs(nos_label(d, labels).area) <= 0.03

    def test_label_length_mismatch_raises(self):
        with pytest.raises(ValueError, match="expected"):
            nos_label(random_distances(5, 19), [0, 1])


class TestAreaBetween:
    def test_identity_curve_has_exactly_zero_area(self):
        ks = np.arange(1, 30)
        curve = NosCurve(ks=ks, scores=ks / 29.0, n=30)
        assert area_between(curve) == 0.0

    def test_constant_one_curve(self):
        ks = np.arange(1, 11)
        curve = NosCurve(ks=ks, scores=np.ones(10), n=11)
        assert_allclose(area_between(curve), 1.0 - np.mean(ks / 10.0), rtol=1e-15)

    def test_area_field_matches_function(self):
        d_a = random_distances(18, seed=20)
        d_b = random_distances(18, seed=21)
        curve = nos_distance(d_a, d_b)
        assert curve.area == area_between(curve)
