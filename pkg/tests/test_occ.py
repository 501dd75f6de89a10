import numpy as np
import pytest

from roadocc import occ
from roadocc.errors import ConfigurationError, UnsupportedRepresentationError
from roadocc.evaluation import roc_curve
from roadocc.occ import base
from roadocc.occ.clustering import covering_radius


def blob(rng, center, sigma, n, d=2):
    return rng.normal(center, sigma, size=(n, d))


class TestHistogram:
    def test_shared_bin_mass(self):
        model = occ.fit_histogram(np.array([[0.1], [0.5], [0.5], [0.9]]), bins=64)
        assert model.score(np.array([[0.5]]))[0] == pytest.approx(0.5, abs=0)

    def test_empty_bin_scores_zero(self):
        model = occ.fit_histogram(np.array([[0.1], [0.9]]), bins=64)
        assert model.score(np.array([[0.5]]))[0] == 0.0

    def test_mass_sums_to_one(self):
        rows = np.random.default_rng(0).random((500, 2))
        model = occ.fit_histogram(rows, bins=100)
        assert model.hist.sum() == pytest.approx(1.0, abs=1e-12)

    def test_out_of_range_clamps_to_edge_bins(self):
        model = occ.fit_histogram(np.array([[0.001], [0.999]]), bins=64)
        assert model.score(np.array([[-3.0]]))[0] == 0.5
        assert model.score(np.array([[7.0]]))[0] == 0.5

    def test_high_dimension_rejected(self):
        rows = np.random.default_rng(0).random((10, 4))
        with pytest.raises(ConfigurationError):
            occ.fit_histogram(rows, bins=64)


class TestGaussian:
    def test_score_one_at_mean(self):
        model = occ.fit_gaussian(np.array([[0.0], [1.0], [2.0]]))
        assert model.score(np.array([[1.0]]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_unbiased_variance_distance(self):
        model = occ.fit_gaussian(np.array([[0.0], [1.0], [2.0]]))
        assert model.mahalanobis_sq(np.array([[3.0]]))[0] == pytest.approx(4.0, abs=1e-12)
        assert model.score(np.array([[3.0]]))[0] == pytest.approx(0.2, abs=1e-12)

    def test_isotropic_circular_contours(self):
        rng = np.random.default_rng(0)
        rows = rng.normal(5.0, 1.0, size=(20_000, 2))
        model = occ.fit_gaussian(rows)
        ring = model.mean + np.array([[2.0, 0.0], [0.0, 2.0], [-2.0, 0.0], [0.0, -2.0]])
        scores = model.score(ring)
        assert np.ptp(scores) < 0.02

    def test_rejection_refits_once(self):
        rng = np.random.default_rng(1)
        rows = np.vstack([rng.normal(0, 1, size=(100, 1)), [[50.0]]])
        model = occ.fit_gaussian(rows)
        assert model.iterations == 2
        assert abs(model.mean[0]) < 1.0


class TestRobustGaussian:
    def test_close_to_ml_without_outliers(self):
        rng = np.random.default_rng(2)
        rows = rng.normal(0.0, 1.0, size=(200, 2))
        robust = occ.fit_robust_gaussian(rows)
        ml_mean = rows.mean(axis=0)
        se = rows.std(axis=0, ddof=1) / np.sqrt(len(rows))
        assert np.all(np.abs(robust.mean - ml_mean) < 3 * se)

    def test_outlier_excluded(self):
        rng = np.random.default_rng(3)
        rows = np.vstack([rng.normal(0, 1, size=(39, 1)), [[100.0]]])
        robust = occ.fit_robust_gaussian(rows)
        assert -1.0 <= robust.mean[0] <= 1.0

    def test_deterministic(self):
        rows = np.random.default_rng(4).normal(size=(120, 2))
        a = occ.fit_robust_gaussian(rows)
        b = occ.fit_robust_gaussian(rows)
        assert np.array_equal(a.mean, b.mean)
        assert np.array_equal(a.cov, b.cov)


class TestMixture:
    def test_recovers_separated_means(self):
        rng = np.random.default_rng(5)
        rows = np.concatenate([rng.normal(0, 0.1, 300), rng.normal(10, 0.1, 300)])[:, None]
        model = occ.fit_mog(rows, n_components=2, seed=0)
        means = np.sort(model.means.ravel())
        assert means[0] == pytest.approx(0.0, abs=0.1)
        assert means[1] == pytest.approx(10.0, abs=0.1)

    def test_single_component_matches_gaussian_ranking(self):
        rng = np.random.default_rng(6)
        rows = rng.normal(0.0, 1.0, size=(30, 2))  # small N: no rejection in G
        test = rng.normal(0.0, 2.0, size=(200, 2))
        labels = rng.random(200) > 0.5
        g = occ.fit_gaussian(rows)
        m = occ.fit_mog(rows, n_components=1, seed=0)
        auc_g = roc_curve(g.score(test), labels).auc
        auc_m = roc_curve(m.score(test), labels).auc
        assert auc_m == pytest.approx(auc_g, abs=1e-9)

    def test_score_near_weight_at_component_mean(self):
        rng = np.random.default_rng(7)
        rows = np.concatenate([rng.normal(0, 0.05, 400), rng.normal(10, 0.05, 100)])[:, None]
        model = occ.fit_mog(rows, n_components=2, seed=0)
        for k in range(2):
            at_mean = model.score(model.means[k][None, :])[0]
            assert at_mean == pytest.approx(model.weights[k], abs=0.02)

    def test_weights_simplex(self):
        rows = np.random.default_rng(8).normal(size=(200, 2))
        model = occ.fit_mog(rows, n_components=3, seed=1)
        assert np.all(model.weights >= 0.0)
        assert model.weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_opt_picks_two_for_two_clusters(self):
        rng = np.random.default_rng(9)
        rows = np.concatenate([rng.normal(0, 0.2, 250), rng.normal(8, 0.2, 250)])[:, None]
        model = occ.fit_mog_opt(rows, seed=0)
        assert model.n_components == 2

    def test_too_few_samples(self):
        with pytest.raises(ConfigurationError):
            occ.fit_mog(np.zeros((8, 1)), n_components=2, seed=0)


class TestKMeans:
    def test_single_center_is_mean(self):
        rows = np.random.default_rng(10).normal(size=(50, 2))
        model = occ.fit_kmeans(rows, k=1, seed=0)
        assert model.centers[0] == pytest.approx(rows.mean(axis=0), abs=1e-12)
        assert model.score(rows.mean(axis=0)[None, :])[0] == pytest.approx(1.0, abs=1e-12)

    def test_query_at_center_scores_one(self):
        rows = np.random.default_rng(11).normal(size=(60, 2))
        model = occ.fit_kmeans(rows, k=3, seed=0)
        assert np.allclose(model.score(model.centers), 1.0)

    def test_objective_monotone(self):
        rows = np.random.default_rng(12).random((200, 3))
        model = occ.fit_kmeans(rows, k=6, seed=3)
        hist = np.array(model.objective_history)
        assert np.all(np.diff(hist) <= 1e-9)


class TestKCenter:
    def test_k_equals_n_covers_exactly(self):
        rows = np.random.default_rng(13).random((12, 2))
        model = occ.fit_kcenter(rows, k=12)
        assert np.allclose(model.score(rows), 1.0)

    def test_farthest_first_trace(self):
        model = occ.fit_kcenter(np.array([[0.0], [1.0], [10.0]]), k=2)
        assert sorted(model.centers.ravel().tolist()) == [1.0, 10.0]
        assert covering_radius(model, np.array([[0.0], [1.0], [10.0]])) <= 1.0

    def test_two_approximation_on_small_instances(self):
        from itertools import combinations

        rng = np.random.default_rng(14)
        for _ in range(10):
            rows = rng.random((9, 2))
            k = 3
            model = occ.fit_kcenter(rows, k=k)
            got = covering_radius(model, rows)
            best = min(
                covering_radius(occ.CenterModel(centers=rows[list(idx)]), rows)
                for idx in combinations(range(len(rows)), k)
            )
            assert got <= 2.0 * best + 1e-12


class TestPca:
    def test_in_subspace_scores_one(self):
        t = np.linspace(-1, 1, 100)
        rows = np.column_stack([t, t])
        model = occ.fit_pca(rows)
        assert model.score(np.array([[0.3, 0.3]]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_error(self):
        t = np.linspace(-1, 1, 100)
        rows = np.column_stack([t, t])
        model = occ.fit_pca(rows)
        q = rows.mean(axis=0) + np.array([1.0, -1.0])
        assert model.reconstruction_error_sq(q[None, :])[0] == pytest.approx(2.0, abs=1e-9)
        assert model.score(q[None, :])[0] == pytest.approx(1 / 3, abs=1e-9)

    def test_single_dimension_unsupported(self):
        with pytest.raises(UnsupportedRepresentationError):
            occ.fit_pca(np.random.default_rng(0).random((20, 1)))

    def test_energy_retained(self):
        rng = np.random.default_rng(15)
        rows = rng.normal(size=(500, 3)) * np.array([10.0, 1.0, 0.1])
        model = occ.fit_pca(rows)
        assert model.energy >= 0.95
        assert model.basis.shape[1] < 3


class TestNearestNeighbor:
    def test_training_row_scores_one(self):
        rows = np.random.default_rng(16).random((30, 2))
        model = occ.fit_nn(rows)
        assert np.allclose(model.score(rows), 1.0)

    def test_min_squared_distance(self):
        model = occ.fit_nn(np.array([[0.0], [10.0]]))
        assert model.score(np.array([[4.0]]))[0] == pytest.approx(1 / 17, abs=1e-12)

    def test_monotone_in_radius(self):
        model = occ.fit_nn(np.array([[0.0, 0.0]]))
        radii = np.linspace(0, 5, 20)
        scores = model.score(np.column_stack([radii, np.zeros_like(radii)]))
        assert np.all(np.diff(scores) <= 0)


class TestDlp:
    def test_single_prototype_degenerates_to_nn(self):
        model = occ.fit_dlp(np.array([[2.0, 2.0]]))
        assert model.weights[0] == pytest.approx(1.0, abs=1e-9)
        q = np.array([[5.0, 6.0]])
        assert model.proximity(q)[0] == pytest.approx(5.0, abs=1e-9)

    def test_coincident_points(self):
        model = occ.fit_dlp(np.zeros((5, 2)) + 1.0)
        assert model.rho == pytest.approx(0.0, abs=1e-9)
        assert model.proximity(np.array([[1.0, 1.0]]))[0] == pytest.approx(0.0, abs=1e-9)

    def test_sparse_weights_and_feasibility(self):
        rng = np.random.default_rng(17)
        rows = rng.normal(size=(60, 2))
        model = occ.fit_dlp(rows)
        nnz = int((model.weights > 1e-8).sum())
        assert nnz <= len(rows)
        assert nnz < len(rows) // 2  # "only a few non-zero"
        f_train = model.proximity(rows)
        assert np.all(f_train <= model.rho + model.slacks + 1e-8)
        assert model.weights.sum() == pytest.approx(1.0, abs=1e-9)


class TestSvdd:
    def test_two_symmetric_points_linear(self):
        model = occ.fit_svdd(np.array([[-1.0], [1.0]]), C=1.0, kernel="linear")
        assert model.alpha == pytest.approx([0.5, 0.5], abs=1e-9)
        assert model.radius_sq == pytest.approx(1.0, abs=1e-9)

    def test_training_covered_when_unbounded(self):
        rng = np.random.default_rng(18)
        rows = rng.normal(size=(50, 2))
        model = occ.fit_svdd(rows, C=10.0)
        d2 = model.sq_distance_to_center(rows)
        assert np.all(np.sqrt(np.clip(d2, 0, None)) <= np.sqrt(model.radius_sq) + 1e-6)

    def test_dual_feasibility(self):
        rng = np.random.default_rng(19)
        rows = rng.random((80, 3))
        model = occ.fit_svdd(rows, C=0.2)
        assert model.alpha.sum() == pytest.approx(1.0, abs=1e-9)
        assert model.alpha.min() >= -1e-12
        assert model.alpha.max() <= model.C + 1e-12
        assert model.kkt_violation < 1e-6

    def test_c_below_simplex_rejected(self):
        with pytest.raises(ConfigurationError):
            occ.fit_svdd(np.random.default_rng(0).random((10, 2)), C=0.05)


class TestMpm:
    def test_closed_form_direction(self):
        rng = np.random.default_rng(20)
        rows = rng.normal(0, 1.0, size=(100_000, 2)) + np.array([2.0, 0.0])
        model = occ.fit_mpm(rows)
        assert model.w == pytest.approx([0.5, 0.0], abs=0.02)

    def test_raw_score_increases_along_mean_direction(self):
        rng = np.random.default_rng(21)
        rows = rng.normal(size=(200, 2)) + np.array([3.0, 1.0])
        model = occ.fit_mpm(rows)
        ts = np.linspace(0.0, 2.0, 10)
        pts = ts[:, None] * model.mean[None, :]
        raw = model.raw_score(pts)
        assert np.all(np.diff(raw) > 0)

    def test_rejection_fraction(self):
        rng = np.random.default_rng(22)
        rows = rng.normal(size=(400, 2)) + 5.0
        model = occ.fit_mpm(rows, rejection=0.025)
        below = float(np.mean(model.raw_score(rows) < model.offset))
        assert abs(below - 0.025) <= 1.0 / len(rows) + 1e-12


class TestMst:
    def test_on_edge(self):
        model = occ.fit_mst(np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert model.score(np.array([[1.0, 0.0]]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_perpendicular_projection(self):
        model = occ.fit_mst(np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert model.score(np.array([[1.0, 1.0]]))[0] == pytest.approx(0.5, abs=1e-12)

    def test_clamped_to_vertex(self):
        model = occ.fit_mst(np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert model.min_edge_distance(np.array([[3.0, 0.0]]))[0] == pytest.approx(1.0, abs=1e-12)

    def test_duplicates_allowed(self):
        model = occ.fit_mst(np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]]))
        assert model.min_edge_distance(np.array([[1.0, 1.0]]))[0] == 0.0

    def test_never_exceeds_nn_distance(self):
        rng = np.random.default_rng(23)
        rows = rng.random((40, 3))
        mst = occ.fit_mst(rows)
        nn = occ.fit_nn(rows)
        queries = rng.random((500, 3)) * 2 - 0.5
        assert np.all(mst.min_edge_distance(queries) <= nn.min_distance(queries) + 1e-12)


@pytest.fixture(scope="module")
def specs():
    from roadocc.bench import default_classifiers

    return default_classifiers()


class TestContract:
    def test_seventeen_instances(self, specs):
        assert len(specs) == 17

    def test_scores_in_unit_interval(self, specs):
        rng = np.random.default_rng(24)
        rows = rng.random((120, 2))
        queries = rng.random((300, 2)) * 3 - 1
        for spec in specs:
            model = occ.fit(rows, spec, seed=0)
            scores = model.score(queries)
            assert np.all(np.isfinite(scores)), spec.name
            assert scores.min() >= 0.0, spec.name
            assert scores.max() <= 1.0, spec.name

    def test_fit_deterministic(self, specs):
        rng = np.random.default_rng(25)
        rows = rng.random((100, 2))
        queries = rng.random((50, 2))
        for spec in specs:
            a = occ.fit(rows, spec, seed=7)
            b = occ.fit(rows, spec, seed=7)
            assert np.array_equal(a.score(queries), b.score(queries)), spec.name

    def test_serialization_roundtrip(self, specs, tmp_path):
        rng = np.random.default_rng(26)
        rows = rng.random((80, 2))
        queries = rng.random((40, 2))
        for spec in specs:
            model = occ.fit(rows, spec, seed=0)
            path = tmp_path / f"{spec.name}.pkl"
            occ.save_model(model, path)
            loaded = occ.load_model(path)
            assert np.array_equal(model.score(queries), loaded.score(queries)), spec.name

    def test_distance_score_ranking_inverted(self):
        rng = np.random.default_rng(27)
        d = rng.random(100) * 10
        s = base.distance_to_score(d)
        assert np.array_equal(np.argsort(d), np.argsort(-s))

    def test_binarize_strict(self):
        scores = np.array([0.7, 0.5, 0.2])
        mask = occ.binarize(scores, 0.5)
        assert mask.tolist() == [True, False, False]
        assert not occ.binarize(np.ones(3), 1.0).any()
