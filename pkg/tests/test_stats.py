import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pwpshrink.stats import (
    DegenerateFitError,
    Histogram,
    aic,
    fit_exponential,
    fit_gaussian,
    histogram,
    kl_divergence,
    symmetric_kl,
    teager,
)


def test_teager_middle_value():
    assert teager([2.0, 3.0, 4.0]).values[1] == 1.0


def test_teager_constant_is_zero():
    np.testing.assert_array_equal(teager(np.full(7, 3.5)).values, 0.0)


def test_teager_single_sample():
    t = teager([2.0])
    assert t.values.tolist() == [0.0] and t.source_len == 1


def test_teager_rectifies():
    # interior value 1 - 3*3 < 0
    assert teager([3.0, 1.0, 3.0]).values[1] == 0.0


def test_teager_empty():
    with pytest.raises(ValueError):
        teager([])


@pytest.mark.parametrize("amp", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("omega", [0.1, 0.3, 1.0])
def test_teager_cosine(amp, omega):
    m = np.arange(100)
    x = amp * np.cos(omega * m)
    brute = [x[i] ** 2 - x[i + 1] * x[i - 1] for i in range(1, 99)]
    expected = amp ** 2 * math.sin(omega) ** 2
    np.testing.assert_allclose(brute, expected, atol=1e-12)
    np.testing.assert_allclose(teager(x).values[1:-1], expected, atol=1e-6)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(1, 50), elements=st.floats(-100, 100)), st.floats(0.01, 100))
def test_teager_scales_quadratically(x, c):
    np.testing.assert_allclose(teager(c * x).values, c * c * teager(x).values, rtol=1e-9, atol=1e-9)


def test_histogram_even_split():
    np.testing.assert_allclose(histogram([1, 1, 3, 3], 2).probs, [0.5, 0.5])


def test_histogram_counts():
    h = histogram([0, 0, 0, 9], 3)
    np.testing.assert_allclose(h.bin_edges, [0, 3, 6, 9])
    np.testing.assert_allclose(h.probs, [0.75, 0, 0.25])


def test_histogram_all_zero():
    h = histogram(np.zeros(5), 4)
    assert h.bin_edges[-1] == 1.0 and h.probs[0] == 1.0


def test_histogram_errors():
    with pytest.raises(ValueError):
        histogram([], 4)
    with pytest.raises(ValueError):
        histogram([1.0], 1)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(1, 200), elements=st.floats(0, 1e6)), st.integers(2, 80))
def test_histogram_sums_to_one(v, bins):
    h = histogram(v, bins)
    assert abs(h.probs.sum() - 1.0) < 1e-12
    assert np.all(h.probs >= 0)


def test_fit_exponential_small():
    f = fit_exponential([1.0, 3.0])
    assert f.params == (2.0,)
    f = fit_exponential([5.0])
    assert f.params == (5.0,)
    assert f.log_likelihood == pytest.approx(-(math.log(5) + 1))


def test_fit_exponential_loglik_matches_density():
    v = np.random.default_rng(3).exponential(2.0, 300)
    f = fit_exponential(v)
    assert f.log_likelihood == pytest.approx(np.sum(np.log(f.pdf(v))), rel=1e-12)


def test_fit_exponential_degenerate():
    with pytest.raises(DegenerateFitError):
        fit_exponential(np.zeros(4))


@pytest.mark.parametrize("seed", range(5))
def test_fit_exponential_monte_carlo(seed):
    v = np.random.default_rng(seed).exponential(1.0, 10_000)
    assert 0.97 <= fit_exponential(v).params[0] <= 1.03


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(1, 100), elements=st.floats(0.001, 1000)))
def test_exponential_scale_is_mean(v):
    assert fit_exponential(v).params[0] == float(v.mean())


def test_fit_gaussian():
    f = fit_gaussian([-1.0, 1.0])
    assert f.params == (0.0, 1.0)
    v = np.random.default_rng(4).normal(0.3, 2.0, 500)
    f = fit_gaussian(v)
    assert f.log_likelihood == pytest.approx(np.sum(np.log(f.pdf(v))), rel=1e-12)


def test_fit_gaussian_degenerate():
    with pytest.raises(DegenerateFitError):
        fit_gaussian([2.0, 2.0, 2.0])


@pytest.mark.parametrize("seed", range(5))
def test_fit_gaussian_monte_carlo(seed):
    v = np.random.default_rng(seed).standard_normal(10_000)
    assert -0.05 <= fit_gaussian(v).params[0] <= 0.05


def test_aic_formula():
    from pwpshrink.stats import FittedPdf
    assert aic(FittedPdf("exponential", (1.0,), -10.0, 5)) == 22.0
    assert aic(FittedPdf("gaussian", (0.0, 1.0), -10.0, 5)) == 24.0


def test_aic_prefers_exponential_on_exponential_data():
    rng = np.random.default_rng(11)
    wins = 0
    for _ in range(100):
        v = rng.exponential(1.0, 1000)
        wins += aic(fit_exponential(v)) < aic(fit_gaussian(v))
    assert wins >= 95


def test_binned_mass_sums_to_cdf():
    f = fit_exponential([1.0, 2.0, 3.0])
    edges = np.linspace(0, 10, 11)
    assert f.binned(edges).sum() == pytest.approx(f.cdf(10.0))


def test_kl_examples():
    p, q = [0.5, 0.5], [0.9, 0.1]
    hand_pq = 0.5 * math.log(0.5 / 0.9) + 0.5 * math.log(0.5 / 0.1)
    hand_qp = 0.9 * math.log(0.9 / 0.5) + 0.1 * math.log(0.1 / 0.5)
    assert kl_divergence(p, q) == pytest.approx(hand_pq, abs=1e-12)
    assert hand_pq == pytest.approx(0.5108, abs=1e-4)
    assert hand_qp == pytest.approx(0.3680, abs=1e-4)
    assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-12)
    assert symmetric_kl(p, q) == pytest.approx((hand_pq + hand_qp) / 2, abs=1e-12)
    assert symmetric_kl(p, q) == pytest.approx(0.4394, abs=1e-4)


def test_kl_identity_and_symmetry():
    h = histogram(np.random.default_rng(0).exponential(1, 100), 10)
    assert kl_divergence(h, h) == 0.0
    assert symmetric_kl(h, h) == 0.0


def test_kl_edge_mismatch():
    a = Histogram(np.array([0.0, 1.0, 2.0]), np.array([0.5, 0.5]))
    b = Histogram(np.array([0.0, 1.0, 3.0]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        kl_divergence(a, b)


def test_kl_zero_q_is_floored():
    assert np.isfinite(kl_divergence([0.5, 0.5], [1.0, 0.0]))


probs = arrays(float, 8, elements=st.floats(0.01, 1.0)).map(lambda a: a / a.sum())


@settings(max_examples=100, deadline=None)
@given(probs, probs)
def test_kl_properties(p, q):
    assert kl_divergence(p, q) >= -1e-12
    assert symmetric_kl(p, q) == symmetric_kl(q, p)
