import math
from statistics import NormalDist

import numpy as np
import pytest

from kdetree import kde

from oracles import oracle_bandwidth


class TestSilvermanBandwidth:
    def test_constant_sample_gives_zero(self):
        assert kde.silverman_bandwidth([3.7, 3.7, 3.7]) == 0.0

    def test_one_to_ten_matches_oracle(self):
        # sigma = 3.0276503540974917, Q1 = 3.25, Q3 = 7.75, IQR = 4.5
        h = kde.silverman_bandwidth(range(1, 11))
        assert h == pytest.approx(1.719286404692283, rel=1e-12)
        assert h == pytest.approx(oracle_bandwidth(range(1, 11)), rel=1e-12)

    def test_zero_iqr_takes_sigma_branch(self):
        sample = [0, 5, 5, 5, 5, 5, 5, 10]
        h = kde.silverman_bandwidth(sample)
        sigma = np.std(sample, ddof=1)
        assert h == pytest.approx(0.9 * sigma * 8 ** (-0.2), rel=1e-12)
        assert h == pytest.approx(1.5869399532589448, rel=1e-12)

    def test_single_point_is_zero(self):
        assert kde.silverman_bandwidth([5.0]) == 0.0

    def test_empty_sample_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            kde.silverman_bandwidth([])

    def test_oracle_agreement_random(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 120))
            sample = rng.normal(rng.uniform(-5, 5), rng.uniform(0.1, 4), n)
            if rng.random() < 0.2:  # duplicate-heavy samples hit the IQR=0 branch
                sample = rng.choice([1.0, 1.0, 1.0, 2.0], size=n)
            expected = oracle_bandwidth(sample.tolist())
            got = kde.silverman_bandwidth(sample)
            if expected == 0:
                assert got == 0
            else:
                assert got == pytest.approx(expected, rel=1e-12)


class TestFit:
    def test_sorts_sample(self):
        model = kde.fit([3.0, 1.0, 2.0])
        assert model.sample.tolist() == [1.0, 2.0, 3.0]

    def test_single_point_has_zero_bandwidth(self):
        assert kde.fit([5.0]).bandwidth == 0.0

    def test_nan_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            kde.fit([1.0, float("nan")])

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            kde.fit([])


class TestEvaluate:
    def test_single_kernel_peak(self):
        model = kde.KdeModel(np.array([0.0]), 1.0)
        assert kde.evaluate(model, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi))

    def test_symmetry(self):
        model = kde.fit([-2.0, 2.0])
        for z in (0.1, 0.9, 3.3):
            assert kde.evaluate(model, z) == pytest.approx(kde.evaluate(model, -z))

    def test_far_tail_is_tiny(self):
        model = kde.KdeModel(np.array([0.0]), 1.0)
        bound = math.exp(-50) / math.sqrt(2 * math.pi)
        assert kde.evaluate(model, 10.0) <= bound

    def test_zero_bandwidth_rejected(self):
        model = kde.KdeModel(np.array([1.0, 1.0]), 0.0)
        with pytest.raises(ValueError, match="bandwidth"):
            kde.evaluate(model, 1.0)

    def test_vector_matches_scalar_exactly(self, rng):
        model = kde.fit(rng.normal(0, 1, 50))
        zs = np.linspace(-3, 3, 32)
        vec = kde.evaluate(model, zs)
        assert all(vec[i] == kde.evaluate(model, z) for i, z in enumerate(zs))

    def test_nonnegative_everywhere(self, rng):
        model = kde.fit(rng.normal(0, 2, 30))
        assert np.all(kde.evaluate(model, np.linspace(-50, 50, 500)) >= 0)


class TestEvaluateGrid:
    def test_linspace_contract(self):
        model = kde.fit([0.3, 0.5, 0.7])
        grid = kde.evaluate_grid(model, 0.0, 1.0, 512)
        assert grid.points[0] == 0.0 and grid.points[-1] == 1.0
        assert np.allclose(np.diff(grid.points), 1 / 511)
        assert len(grid.points) == 512

    def test_unimodal_sample_has_one_mode(self):
        # deterministic normal quantiles give a cleanly unimodal estimate
        gauss = NormalDist()
        sample = np.array([gauss.inv_cdf((i + 0.5) / 200) for i in range(200)])
        model = kde.fit(sample)
        h = model.bandwidth
        grid = kde.evaluate_grid(model, sample.min() - h, sample.max() + h, 512)
        # brute-force scan over grid values, independent of find_extrema
        d = grid.densities
        peaks = [i for i in range(1, 511)
                 if d[i] > d[i - 1] and d[i] >= d[i + 1]]
        assert grid.mode_count == len(peaks)
        assert grid.mode_count == 1

    def test_densities_match_pointwise_evaluation(self):
        model = kde.fit([1.0, 2.0, 4.0])
        grid = kde.evaluate_grid(model, 0.0, 5.0, 64)
        assert np.array_equal(grid.densities, kde.evaluate(model, grid.points))

    def test_small_grid_rejected(self):
        model = kde.fit([1.0, 2.0])
        with pytest.raises(ValueError, match="grid_points"):
            kde.evaluate_grid(model, 0.0, 1.0, 8)

    def test_bad_range_rejected(self):
        model = kde.fit([1.0, 2.0])
        with pytest.raises(ValueError, match="lo < hi"):
            kde.evaluate_grid(model, 1.0, 1.0, 64)


class TestFindExtrema:
    def test_three_point_peak(self):
        maxima, minima = kde.find_extrema([0.0, 1.0, 0.0])
        assert maxima.tolist() == [1]
        assert minima.tolist() == [0, 2]

    def test_three_point_valley(self):
        maxima, minima = kde.find_extrema([1.0, 0.0, 1.0])
        assert maxima.tolist() == [0, 2]
        assert minima.tolist() == [1]

    def test_plateau_collapses_to_first_index(self):
        maxima, minima = kde.find_extrema([0.0, 1.0, 1.0, 1.0, 0.0])
        assert maxima.tolist() == [1]
        assert minima.tolist() == [0, 4]

    def test_flat_curve_has_no_extrema(self):
        maxima, minima = kde.find_extrema([1.0, 1.0, 1.0, 1.0])
        assert maxima.size == 0 and minima.size == 0

    def test_bimodal_clusters(self, rng):
        sample = np.concatenate([rng.normal(0, 0.3, 200), rng.normal(10, 0.3, 200)])
        model = kde.fit(sample)
        h = model.bandwidth
        grid = kde.evaluate_grid(model, sample.min() - h, sample.max() + h, 512)
        interior_max = [i for i in grid.maxima_indices if 0 < i < 511]
        interior_min = [i for i in grid.minima_indices if 0 < i < 511]
        assert len(interior_max) == 2
        assert len(interior_min) == 1
        assert interior_max[0] < interior_min[0] < interior_max[1]

    def test_too_small_rejected(self):
        with pytest.raises(ValueError, match="3 grid points"):
            kde.find_extrema([1.0, 2.0])


class TestNormalization:
    def test_integral_is_one(self, rng):
        for _ in range(10):
            sample = rng.normal(rng.uniform(-3, 3), rng.uniform(0.2, 3),
                                int(rng.integers(5, 150)))
            model = kde.fit(sample)
            h = model.bandwidth
            xs = np.linspace(sample.min() - 8 * h, sample.max() + 8 * h, 4096)
            integral = np.trapezoid(kde.evaluate(model, xs), xs)
            assert integral == pytest.approx(1.0, abs=1e-3)
