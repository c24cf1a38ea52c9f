import math

import numpy as np
import pytest

from mcbounds.stats import SampleStats, accumulate, normal_cdf, student_t_cdf


def test_single_sample():
    stats = accumulate(None, 5.0)
    assert stats.count == 1
    assert stats.mean == 5.0
    assert stats.variance_vn == 0.0
    assert stats.min_value == 5.0
    assert stats.max_value == 5.0


def test_two_point_sample():
    stats = SampleStats.from_values([1.0, 3.0])
    assert stats.count == 2
    assert stats.mean == pytest.approx(2.0, abs=1e-15)
    assert stats.variance_vn == pytest.approx(1.0, abs=1e-15)
    assert stats.sample_range == pytest.approx(2.0, abs=1e-15)
    assert stats.variance_unbiased == pytest.approx(2.0, abs=1e-15)


def test_constant_stream_variance_stays_zero():
    stats = None
    for _ in range(1_000_000):
        stats = accumulate(stats, 7.25)
    assert stats.count == 1_000_000
    assert stats.mean == pytest.approx(7.25, abs=1e-12)
    assert stats.variance_vn <= 1e-12
    assert stats.sample_range == 0.0


@pytest.mark.parametrize("size", [1, 2, 3, 10, 1_000, 100_000])
def test_accumulate_matches_batch(size):
    rng = np.random.default_rng(size)
    values = rng.lognormal(mean=1.0, sigma=1.5, size=size)
    stats = None
    for x in values:
        stats = accumulate(stats, float(x))
    batch = SampleStats.from_values(values)
    assert stats.count == batch.count == size

    def close(a, b):
        return abs(a - b) <= 1e-12 * max(1.0, abs(b))

    assert close(stats.mean, float(np.mean(values)))
    assert close(stats.variance_vn, float(np.var(values)))
    assert close(batch.mean, float(np.mean(values)))
    assert close(batch.variance_vn, float(np.var(values)))
    assert stats.min_value == batch.min_value == float(np.min(values))
    assert stats.max_value == batch.max_value == float(np.max(values))


def test_variance_unbiased_matches_numpy():
    rng = np.random.default_rng(7)
    values = rng.normal(size=257)
    stats = SampleStats.from_values(values)
    assert stats.variance_unbiased == pytest.approx(
        float(np.var(values, ddof=1)), rel=1e-12
    )


def test_variance_unbiased_needs_two_samples():
    stats = SampleStats.from_values([4.0])
    with pytest.raises(ValueError):
        _ = stats.variance_unbiased


def test_from_values_rejects_empty():
    with pytest.raises(ValueError):
        SampleStats.from_values([])


def test_validation_errors():
    with pytest.raises(ValueError):
        SampleStats(count=0, mean=0.0, variance_vn=0.0, min_value=0.0, max_value=0.0)
    with pytest.raises(ValueError):
        SampleStats(count=1, mean=0.0, variance_vn=-1e-6, min_value=0.0, max_value=0.0)
    with pytest.raises(ValueError):
        SampleStats(count=1, mean=2.0, variance_vn=0.0, min_value=0.0, max_value=1.0)
    with pytest.raises(ValueError):
        SampleStats(count=1, mean=0.0, variance_vn=0.0, min_value=1.0, max_value=0.0)


def test_variance_never_exceeds_half_range_squared():
    for seed in range(25):
        rng = np.random.default_rng(seed)
        values = rng.normal(scale=rng.uniform(0.1, 5.0), size=int(rng.integers(2, 200)))
        stats = SampleStats.from_values(values)
        half_range = 0.5 * stats.sample_range
        assert stats.variance_vn <= half_range * half_range + 1e-12


def test_normal_cdf_reference_points():
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    # Independently computed by quadrature of the standard normal density.
    assert normal_cdf(1.959964) == pytest.approx(0.9750000009035577, abs=1e-9)
    assert normal_cdf(0.2, mean=0.0, variance=0.01) == pytest.approx(
        0.9772498680518208, abs=1e-9
    )


def test_normal_cdf_reflection_and_standardization():
    rng = np.random.default_rng(11)
    for _ in range(200):
        x = float(rng.normal(scale=3.0))
        mean = float(rng.normal())
        variance = float(rng.uniform(0.01, 9.0))
        p = normal_cdf(x, mean, variance)
        q = normal_cdf(2.0 * mean - x, mean, variance)
        assert p + q == pytest.approx(1.0, abs=1e-12)
        z = (x - mean) / math.sqrt(variance)
        assert p == pytest.approx(normal_cdf(z), abs=1e-12)
        assert 0.0 <= p <= 1.0


def test_normal_cdf_monotone():
    xs = np.linspace(-10.0, 10.0, 401)
    values = [normal_cdf(float(x)) for x in xs]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_normal_cdf_rejects_bad_variance():
    with pytest.raises(ValueError):
        normal_cdf(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        normal_cdf(0.0, 0.0, -1.0)


def test_student_t_cdf_reference_points():
    assert student_t_cdf(0.0, 5.0) == 0.5
    # dof=1 is the Cauchy distribution with closed-form CDF.
    assert student_t_cdf(1.0, 1.0) == pytest.approx(
        0.5 + math.atan(1.0) / math.pi, abs=1e-12
    )
    # Independently computed by quadrature of the t density.
    assert student_t_cdf(2.0, 10.0) == pytest.approx(0.9633059826146303, abs=1e-8)
    assert student_t_cdf(math.inf, 3.0) == 1.0
    assert student_t_cdf(-math.inf, 3.0) == 0.0


def test_student_t_cdf_symmetry_and_monotonicity():
    rng = np.random.default_rng(13)
    for _ in range(200):
        x = float(rng.normal(scale=4.0))
        dof = float(rng.uniform(0.5, 120.0))
        assert student_t_cdf(x, dof) + student_t_cdf(-x, dof) == pytest.approx(
            1.0, abs=1e-10
        )
    for dof in (1.0, 2.5, 9.0, 100.0):
        xs = np.linspace(-12.0, 12.0, 241)
        values = [student_t_cdf(float(x), dof) for x in xs]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)


def test_student_t_cdf_approaches_normal():
    xs = np.linspace(-6.0, 6.0, 121)
    gap = max(abs(student_t_cdf(float(x), 1e5) - normal_cdf(float(x))) for x in xs)
    assert gap < 1e-3


def test_student_t_cdf_rejects_bad_dof():
    with pytest.raises(ValueError):
        student_t_cdf(0.0, 0.0)
    with pytest.raises(ValueError):
        student_t_cdf(0.0, -2.0)
