import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roadocc.errors import SingleClassError
from roadocc.evaluation import (
    FPR_GRID,
    RocCurve,
    average_roc,
    concordance_auc,
    export_curve_csv,
    make_curve,
    roc_curve,
)


def random_instance(rng, n=200, with_ties=True):
    if with_ties and rng.random() < 0.5:
        scores = rng.integers(0, 10, size=n) / 10.0
    else:
        scores = rng.random(n)
    truth = rng.random(n) < rng.uniform(0.2, 0.8)
    if truth.all():
        truth[0] = False
    if not truth.any():
        truth[0] = True
    return scores, truth


class TestRocCurve:
    def test_four_pixel_example(self):
        scores = np.array([0.8, 0.6, 0.7, 0.2])
        truth = np.array([True, True, False, False])
        curve = roc_curve(scores, truth)
        assert curve.auc == pytest.approx(0.75, abs=1e-12)

    def test_perfect_separation(self):
        curve = roc_curve(np.array([0.9, 0.8, 0.2, 0.1]), np.array([1, 1, 0, 0], bool))
        assert curve.auc == 1.0
        assert curve.eer == 0.0

    def test_all_ties_diagonal(self):
        curve = roc_curve(np.full(10, 0.5), np.arange(10) < 4)
        assert curve.auc == pytest.approx(0.5, abs=1e-12)
        assert curve.eer == pytest.approx(0.5, abs=1e-12)

    def test_endpoints_and_monotone(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            scores, truth = random_instance(rng)
            curve = roc_curve(scores, truth)
            assert curve.fpr[0] == 0.0 and curve.tpr[0] == 0.0
            assert curve.fpr[-1] == 1.0 and curve.tpr[-1] == 1.0
            assert np.all(np.diff(curve.fpr) >= 0)
            assert np.all(np.diff(curve.tpr) >= 0)

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassError):
            roc_curve(np.array([0.1, 0.2]), np.array([True, True]))
        with pytest.raises(SingleClassError):
            roc_curve(np.array([0.1, 0.2]), np.array([False, False]))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(SingleClassError):
            roc_curve(np.zeros(3), np.array([True, False]))

    def test_accepts_2d_map_and_mask(self):
        scores = np.array([[0.9, 0.1], [0.8, 0.2]])
        truth = np.array([[True, False], [True, False]])
        assert roc_curve(scores, truth).auc == 1.0


class TestAucOracle:
    def test_matches_concordance_on_random_instances(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            scores, truth = random_instance(rng, n=int(rng.integers(5, 201)))
            got = roc_curve(scores, truth).auc
            want = concordance_auc(scores, truth)
            assert got == pytest.approx(want, abs=1e-12)

    @given(st.lists(st.integers(0, 8), min_size=4, max_size=60), st.data())
    @settings(max_examples=60, deadline=None)
    def test_property_oracle(self, raw, data):
        scores = np.array(raw, dtype=float) / 8.0
        truth = np.array(data.draw(st.lists(st.booleans(), min_size=len(raw), max_size=len(raw))))
        if truth.all() or not truth.any():
            return
        assert roc_curve(scores, truth).auc == pytest.approx(
            concordance_auc(scores, truth), abs=1e-12
        )

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(2)
        scores, truth = random_instance(rng)
        base = roc_curve(scores, truth)
        for transform in (lambda s: s**3, lambda s: 0.1 + 0.8 * s, np.expm1):
            curve = roc_curve(transform(scores), truth)
            assert np.array_equal(curve.fpr, base.fpr)
            assert np.array_equal(curve.tpr, base.tpr)
            assert curve.auc == base.auc

    def test_flip_symmetry(self):
        rng = np.random.default_rng(3)
        scores, truth = random_instance(rng)
        a = roc_curve(scores, truth).auc
        b = roc_curve(1.0 - scores, ~truth).auc
        assert a == pytest.approx(b, abs=1e-12)


class TestEer:
    def test_point_on_equality_line(self):
        curve = make_curve(np.array([0.0, 0.2, 1.0]), np.array([0.0, 0.8, 1.0]))
        assert curve.eer == pytest.approx(0.2, abs=1e-12)

    def test_interpolated_between_points(self):
        # segment from (0,0) to (1,1) crosses equality at 0.5
        curve = make_curve(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        assert curve.eer == pytest.approx(0.5, abs=1e-12)

    def test_in_unit_interval(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            scores, truth = random_instance(rng)
            curve = roc_curve(scores, truth)
            assert 0.0 <= curve.eer <= 1.0


class TestAverageRoc:
    def test_identical_curves_fixed_point(self):
        curve = roc_curve(np.array([0.9, 0.7, 0.6, 0.2]), np.array([1, 0, 1, 0], bool))
        avg = average_roc([curve, curve, curve])
        single = average_roc([curve])
        assert avg.tpr == pytest.approx(single.tpr, abs=1e-15)
        assert avg.auc == pytest.approx(single.auc, abs=1e-12)

    def test_perfect_plus_random(self):
        perfect = make_curve(np.array([0.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0]))
        diag = make_curve(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        avg = average_roc([perfect, diag])
        assert avg.auc == pytest.approx(0.75, abs=1e-3)

    def test_grid_size(self):
        diag = make_curve(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
        avg = average_roc([diag])
        assert avg.fpr.shape == FPR_GRID.shape
        assert np.array_equal(avg.fpr, FPR_GRID)

    def test_bounded_by_inputs(self):
        rng = np.random.default_rng(5)
        curves = [roc_curve(*random_instance(rng)) for _ in range(4)]
        avg = average_roc(curves)
        stack = np.array([np.interp(FPR_GRID, *_env(c)) for c in curves])
        assert np.all(avg.tpr >= stack.min(axis=0) - 1e-12)
        assert np.all(avg.tpr <= stack.max(axis=0) + 1e-12)

    def test_empty_rejected(self):
        with pytest.raises(SingleClassError):
            average_roc([])


def _env(curve):
    fpr, idx = np.unique(curve.fpr, return_index=True)
    return fpr, np.maximum.reduceat(curve.tpr, idx)


class TestCsvExport:
    def test_layout(self, tmp_path):
        curve = roc_curve(np.array([0.8, 0.6, 0.7, 0.2]), np.array([1, 1, 0, 0], bool))
        path = tmp_path / "curve.csv"
        export_curve_csv(curve, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "fpr,tpr"
        assert lines[-1].startswith("auc=0.75,eer=")
        assert len(lines) == len(curve.fpr) + 2
        for line in lines[1:-1]:
            f, t = map(float, line.split(","))
            assert 0.0 <= f <= 1.0 and 0.0 <= t <= 1.0
