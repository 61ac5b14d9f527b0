"""One-sided stump search against exhaustive enumeration."""
import numpy as np
import pytest

import riskboost as rb
from riskboost.errors import DomainError, GenError
from util import brute_best_stump, dyadic_weights, random_weighted_dataset


class TestBestStump:
    def test_matches_brute_force_exactly(self):
        # dyadic weights make every accuracy sum exact, so the comparison
        # can demand bit-identical results, tie-breaks included
        rng = np.random.default_rng(42)
        for _ in range(60):
            wds = random_weighted_dataset(rng, n=int(rng.integers(4, 24)), d=3)
            got = rb.best_stump(wds)
            f, theta, acc = brute_best_stump(wds)
            assert got.stump.feature == f
            assert got.stump.theta == theta
            assert got.weighted_accuracy == acc
            assert got.advantage == acc - 0.5

    def test_many_duplicate_values(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            n = int(rng.integers(6, 16))
            X = rng.integers(0, 3, size=(n, 2)).astype(np.float64)
            y = np.where(rng.random(n) < 0.5, 1, -1)
            if y.min() == y.max():
                y[0] = -y[0]
            wds = rb.WeightedDataset(
                base=rb.make_dataset(X, y), mu=dyadic_weights(rng, n)
            )
            got = rb.best_stump(wds)
            f, theta, acc = brute_best_stump(wds)
            assert (got.stump.feature, got.stump.theta, got.weighted_accuracy) == (
                f,
                theta,
                acc,
            )

    def test_constant_positive_stump(self):
        # all positive labels: predict-everything-+1 wins via the below-min cut
        ds = rb.make_dataset(np.array([[0.2], [0.7], [0.4]]), np.array([1, 1, 1]))
        wds = rb.WeightedDataset(base=ds, mu=np.array([0.25, 0.5, 0.25]))
        got = rb.best_stump(wds)
        assert got.weighted_accuracy == 1.0
        assert got.stump.theta < 0.2

    def test_constant_negative_stump(self):
        ds = rb.make_dataset(np.array([[0.2], [0.7], [0.4]]), np.array([-1, -1, -1]))
        wds = rb.WeightedDataset(base=ds, mu=np.array([0.25, 0.5, 0.25]))
        got = rb.best_stump(wds)
        assert got.weighted_accuracy == 1.0
        assert got.stump.theta > 0.7

    def test_zero_weight_points_dont_source_thresholds(self):
        # the zero-weight point at 0.9 must not contribute a candidate cut
        X = np.array([[0.1], [0.2], [0.9]])
        y = np.array([-1, 1, -1])
        wds = rb.WeightedDataset(base=rb.make_dataset(X, y), mu=np.array([0.5, 0.5, 0.0]))
        got = rb.best_stump(wds)
        assert got.weighted_accuracy == 1.0
        assert got.stump.theta == pytest.approx(0.15)

    def test_tie_breaks_prefer_low_feature_then_low_theta(self):
        # two identical features: both reach the same accuracy everywhere
        X = np.array([[0.0, 0.0], [1.0, 1.0]])
        y = np.array([-1, 1])
        wds = rb.WeightedDataset(base=rb.make_dataset(X, y), mu=np.array([0.5, 0.5]))
        got = rb.best_stump(wds)
        assert got.stump.feature == 0
        assert got.stump.theta == 0.5

    def test_all_weight_on_one_example(self):
        X = np.array([[0.3], [0.6]])
        y = np.array([1, -1])
        wds = rb.WeightedDataset(base=rb.make_dataset(X, y), mu=np.array([1.0, 0.0]))
        got = rb.best_stump(wds)
        assert got.weighted_accuracy == 1.0


class TestGenLinear:
    def test_margin_invariant_exact(self):
        for dom, mid in (("[-1,1]", 0.0), ("[0,1]", 0.5)):
            ds, w = rb.gen_linear_dataset(d=4, gamma=0.15, n=300, seed=9, domain=dom)
            margins = ds.y * ((ds.X - mid) @ w)
            assert margins.min() >= 0.15
            assert np.all(np.abs(ds.X - mid) <= (0.5 if dom == "[0,1]" else 1.0))

    def test_weights_are_simplex(self):
        _, w = rb.gen_linear_dataset(d=6, gamma=0.1, n=50, seed=2)
        assert np.all(w >= 0)
        assert np.abs(w).sum() == pytest.approx(1.0)

    def test_deterministic(self):
        a, wa = rb.gen_linear_dataset(d=3, gamma=0.2, n=100, seed=5)
        b, wb = rb.gen_linear_dataset(d=3, gamma=0.2, n=100, seed=5)
        assert np.array_equal(a.X, b.X) and np.array_equal(a.y, b.y)
        assert np.array_equal(wa, wb)

    def test_seeds_differ(self):
        a, _ = rb.gen_linear_dataset(d=3, gamma=0.2, n=100, seed=5)
        b, _ = rb.gen_linear_dataset(d=3, gamma=0.2, n=100, seed=6)
        assert not np.array_equal(a.X, b.X)

    def test_both_labels_present(self):
        ds, _ = rb.gen_linear_dataset(d=2, gamma=0.05, n=200, seed=0)
        assert set(np.unique(ds.y)) == {-1, 1}

    def test_impossible_margin_raises(self):
        # acceptance ~1e-5 per draw, below the 1e-4 give-up threshold
        with pytest.raises(GenError, match="acceptance"):
            rb.gen_linear_dataset(d=1, gamma=0.99999, n=100, seed=0)

    def test_bad_arguments(self):
        with pytest.raises(DomainError):
            rb.gen_linear_dataset(d=0, gamma=0.1, n=10, seed=0)
        with pytest.raises(DomainError):
            rb.gen_linear_dataset(d=2, gamma=1.0, n=10, seed=0)
        with pytest.raises(DomainError):
            rb.gen_linear_dataset(d=2, gamma=-0.1, n=10, seed=0)
        with pytest.raises(DomainError):
            rb.gen_linear_dataset(d=2, gamma=0.1, n=10, seed=0, domain="[0,2]")
