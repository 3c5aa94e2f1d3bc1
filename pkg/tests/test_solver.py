import numpy as np
import pytest

from tweetsift.features import SparseVector
from tweetsift.solver import primal_objective, train_binary_svm


def sv(*values):
    values = np.asarray(values, dtype=np.float64)
    nz = np.nonzero(values)[0]
    return SparseVector(indices=nz.astype(np.int64), values=values[nz])


def brute_force_qp(X, y, costs, n_features, fit_bias=True, span=3.0,
                   coarse=21, refinements=3):
    """Grid minimizer of the (regularized-bias) primal objective.

    Coordinates are refined around the best point a few times, shrinking
    the step each round; independent of the coordinate-descent solver.
    """
    dims = n_features + (1 if fit_bias else 0)
    dense = np.zeros((len(X), dims))
    for i, x in enumerate(X):
        dense[i, x.indices] = x.values
        if fit_bias:
            dense[i, -1] = 1.0
    y = np.asarray(y, dtype=np.float64)
    costs = np.asarray(costs, dtype=np.float64)

    center = np.zeros(dims)
    half = span
    best_point, best_obj = None, np.inf
    for _ in range(refinements):
        axes = [np.linspace(center[d] - half, center[d] + half, coarse)
                for d in range(dims)]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=1)
        margins = y[None, :] * (points @ dense.T)
        hinge = np.maximum(0.0, 1.0 - margins)
        obj = 0.5 * (points ** 2).sum(axis=1) + hinge @ costs
        idx = int(np.argmin(obj))
        if obj[idx] < best_obj:
            best_obj = float(obj[idx])
            best_point = points[idx]
        center = best_point
        half = 2.0 * half / (coarse - 1) * 1.5
    return best_point, best_obj


class TestAnalyticTwoPoint:
    def test_weight_is_one(self):
        X = [sv(1.0), sv(-1.0)]
        model = train_binary_svm(X, [1, -1], C=1.0, fit_bias=False,
                                 tol=1e-8, keep_dual_state=True)
        assert model.weights[0] == pytest.approx(1.0, abs=1e-3)
        # dual optimum: alpha1 + alpha2 = 1
        assert model.dual.alphas.sum() == pytest.approx(1.0, abs=1e-3)

    def test_both_points_on_margin(self):
        X = [sv(1.0), sv(-1.0)]
        model = train_binary_svm(X, [1, -1], C=1.0, fit_bias=False, tol=1e-8)
        for x, label in zip(X, (1, -1)):
            assert label * model.decision(x) == pytest.approx(1.0, abs=2e-3)


class TestSeparable:
    def test_blobs_training_accuracy(self):
        rng = np.random.default_rng(7)
        pos = rng.normal(loc=(2.0, 2.0), scale=0.3, size=(20, 2))
        neg = rng.normal(loc=(-2.0, -2.0), scale=0.3, size=(20, 2))
        X = [sv(*p) for p in pos] + [sv(*p) for p in neg]
        y = [1] * 20 + [-1] * 20
        model = train_binary_svm(X, y, C=1.0)
        assert all(model.predict_sign(x) == label for x, label in zip(X, y))


class TestObjectiveEquivalences:
    def test_duplicated_data_matches_halved_C(self):
        rng = np.random.default_rng(3)
        pts = rng.normal(size=(12, 2))
        labels = [1 if p.sum() > 0.2 else -1 for p in pts]
        if len(set(labels)) < 2:
            labels[0] = -labels[0]
        X = [sv(*p) for p in pts]
        base = train_binary_svm(X, labels, C=0.5, tol=1e-9, max_epochs=20000)
        doubled = train_binary_svm(X + X, labels + labels, C=0.25,
                                   tol=1e-9, max_epochs=20000)
        np.testing.assert_allclose(doubled.weights, base.weights, atol=2e-4)
        assert doubled.bias == pytest.approx(base.bias, abs=2e-4)

    def test_rescaled_features_matched_C(self):
        # x -> s*x with C -> C/s^2 leaves decision values unchanged (no bias).
        rng = np.random.default_rng(11)
        pts = rng.normal(size=(10, 2))
        labels = [1 if p[0] - p[1] > 0 else -1 for p in pts]
        if len(set(labels)) < 2:
            labels[0] = -labels[0]
        s = 3.7
        X = [sv(*p) for p in pts]
        Xs = [sv(*(s * p)) for p in pts]
        base = train_binary_svm(X, labels, C=0.8, fit_bias=False,
                                tol=1e-9, max_epochs=20000)
        scaled = train_binary_svm(Xs, labels, C=0.8 / s ** 2, fit_bias=False,
                                  tol=1e-9, max_epochs=20000)
        for x, xs in zip(X, Xs):
            assert scaled.decision(xs) == pytest.approx(base.decision(x), abs=1e-4)


class TestDualInvariants:
    def _random_problem(self, rng, n=10, d=3):
        pts = rng.normal(size=(n, d))
        labels = np.where(rng.random(n) > 0.5, 1.0, -1.0)
        if len(set(labels.tolist())) < 2:
            labels[0] = -labels[0]
        return [sv(*p) for p in pts], labels

    def test_dual_objective_nondecreasing(self):
        rng = np.random.default_rng(5)
        for trial in range(5):
            X, y = self._random_problem(rng)
            model = train_binary_svm(X, y, C=1.0, tol=1e-10, max_epochs=300,
                                     seed=trial, keep_dual_state=True)
            history = model.dual.dual_history
            assert len(history) >= 1
            diffs = np.diff(history)
            assert (diffs >= -1e-12).all()

    def test_alphas_in_box(self):
        rng = np.random.default_rng(6)
        for trial in range(5):
            X, y = self._random_problem(rng)
            weights = {1: 1.5, -1: 0.5}
            model = train_binary_svm(X, y, C=0.7, class_weights=weights,
                                     seed=trial, keep_dual_state=True)
            alphas, caps = model.dual.alphas, model.dual.caps
            assert (alphas >= -1e-15).all()
            assert (alphas <= caps + 1e-15).all()

    def test_kkt_residual_small(self):
        rng = np.random.default_rng(8)
        X, y = self._random_problem(rng)
        model = train_binary_svm(X, y, C=1.0, tol=1e-4, max_epochs=5000,
                                 keep_dual_state=True)
        assert model.dual.converged
        assert model.dual.max_violation <= 1e-3


class TestAgainstBruteForceOracle:
    @pytest.mark.parametrize("trial", range(10))
    def test_primal_within_one_percent(self, trial):
        rng = np.random.default_rng(100 + trial)
        n = int(rng.integers(6, 10))
        d = int(rng.integers(1, 4))
        pts = rng.normal(size=(n, d))
        labels = np.where(rng.random(n) > 0.5, 1.0, -1.0)
        if len(set(labels.tolist())) < 2:
            labels[0] = -labels[0]
        C = float(rng.choice([0.2, 0.5, 1.0]))
        X = [sv(*p) for p in pts]
        costs = np.full(n, C)

        model = train_binary_svm(X, labels, C=C, tol=1e-8, max_epochs=20000)
        solver_obj = primal_objective(model.weights, model.bias, X, labels, costs)

        _, oracle_obj = brute_force_qp(X, labels, costs, n_features=d)
        assert solver_obj <= oracle_obj * 1.01 + 1e-9
        assert abs(solver_obj - oracle_obj) <= 0.01 * max(oracle_obj, 1e-9)


class TestValidation:
    def test_single_class_error(self):
        with pytest.raises(ValueError):
            train_binary_svm([sv(1.0), sv(2.0)], [1, 1], C=1.0)

    def test_too_few_examples(self):
        with pytest.raises(ValueError):
            train_binary_svm([sv(1.0)], [1], C=1.0)

    def test_nonpositive_C(self):
        with pytest.raises(ValueError):
            train_binary_svm([sv(1.0), sv(-1.0)], [1, -1], C=0.0)
