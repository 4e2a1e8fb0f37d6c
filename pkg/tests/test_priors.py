import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy.integrate import cumulative_trapezoid
from scipy.signal import fftconvolve

from src.errors import PrecisionInsufficientError
from src.priors import (
    IrwinHall,
    Prior,
    ProductPrior,
    cdf,
    density,
    inverse_cdf,
    irwin_hall_cdf,
    irwin_hall_cdf_grid,
    irwin_hall_sf,
    mean,
    sample,
    sample_chunk,
)


def test_uniform_factor_values():
    u = Prior.uniform()
    assert cdf(u, 0.3) == pytest.approx(0.3)
    assert cdf(u, -1.0) == 0.0
    assert cdf(u, 2.0) == 1.0
    assert density(u, 0.5) == 1.0
    assert mean(u) == 0.5


def test_exponential_factor_values():
    e = Prior.exponential(2.0)
    assert cdf(e, 1.0) == pytest.approx(1 - math.exp(-2.0))
    assert density(e, 0.0) == pytest.approx(2.0)
    assert inverse_cdf(e, 0.999) == pytest.approx(math.log(1000) / 2)
    assert mean(e) == 0.5


def test_bad_rate_rejected():
    with pytest.raises(ValueError):
        Prior.exponential(0.0)
    with pytest.raises(ValueError):
        Prior(kind="uniform", rate=1.0)


def test_mixed_product_rejected():
    with pytest.raises(ValueError):
        ProductPrior(factors=(Prior.uniform(), Prior.exponential(1.0)))


def test_rates_keep_input_order():
    prior = ProductPrior.exponential([1.0, 3.0, 2.0])
    assert prior.rates.tolist() == [1.0, 3.0, 2.0]
    with pytest.raises(ValueError):
        _ = ProductPrior.uniform_iid(2).rates


def test_sample_is_concatenation_of_chunks():
    prior = ProductPrior.exponential([2.0, 1.0])
    full = sample(prior, 2500, seed=11, chunk_size=1000)
    chunks = [sample_chunk(prior, s, 11, k) for k, s in enumerate([1000, 1000, 500])]
    np.testing.assert_array_equal(full, np.concatenate(chunks))


def test_sample_independent_of_worker_count():
    prior = ProductPrior.uniform_iid(3)
    one = sample(prior, 5000, seed=7, chunk_size=1000, max_workers=1)
    four = sample(prior, 5000, seed=7, chunk_size=1000, max_workers=4)
    np.testing.assert_array_equal(one, four)
    assert one.shape == (5000, 3)
    assert np.all((one >= 0) & (one < 1))


def test_sample_rejects_bad_seed():
    with pytest.raises(ValueError):
        sample(ProductPrior.uniform_iid(1), 10, seed=-1)
    with pytest.raises(ValueError):
        sample(ProductPrior.uniform_iid(1), 10, seed=1 << 64)


def test_irwin_hall_small_cases():
    assert irwin_hall_cdf(IrwinHall(m=1), 0.3) == pytest.approx(0.3, abs=1e-15)
    assert irwin_hall_cdf(IrwinHall(m=2), 1.0) == pytest.approx(0.5, abs=1e-15)
    # m=2, x=0.5: x²/2
    assert irwin_hall_cdf(IrwinHall(m=2), 0.5) == pytest.approx(0.125, rel=1e-12)
    assert irwin_hall_sf(IrwinHall(m=3), 1.5) == pytest.approx(0.5, abs=1e-15)


def test_irwin_hall_large_m_center():
    ih = IrwinHall(m=100)
    assert irwin_hall_cdf(ih, 50.0) == pytest.approx(0.5, rel=1e-9)


def test_irwin_hall_precision_failure():
    with pytest.raises(PrecisionInsufficientError):
        irwin_hall_cdf(IrwinHall(m=100, precision=53), 50.0)


@hsettings(max_examples=40, deadline=None)
@given(
    m=st.integers(min_value=1, max_value=20),
    a=st.floats(min_value=0.0, max_value=1.0),
    b=st.floats(min_value=0.0, max_value=1.0),
)
def test_irwin_hall_cdf_monotone_and_symmetric(m, a, b):
    ih = IrwinHall(m=m)
    lo, hi = sorted((a * m, b * m))
    assert irwin_hall_cdf(ih, lo) <= irwin_hall_cdf(ih, hi) + 1e-12
    assert irwin_hall_sf(ih, lo) == pytest.approx(irwin_hall_cdf(ih, m - lo), abs=1e-12)


def test_cdf_spot_values():
    assert cdf(Prior.uniform(), 0.5) == 0.5
    assert cdf(Prior.exponential(1.0), 0.0) == 0.0
    assert cdf(Prior.exponential(2.0), math.log(2) / 2) == pytest.approx(0.5, abs=1e-15)
    assert irwin_hall_cdf(IrwinHall(m=3), 3.0) == 1.0
    assert irwin_hall_cdf(IrwinHall(m=2), 1.5) == pytest.approx(0.875, rel=1e-12)


@pytest.mark.parametrize("prior", [Prior.uniform(), Prior.exponential(1.0), Prior.exponential(2.5)])
def test_cdf_nondecreasing(prior):
    points = np.sort(sample(ProductPrior(factors=(prior,)), 1000, seed=21)[:, 0])
    values = cdf(prior, np.concatenate(([-1.0], points, [points[-1] + 1.0])))
    assert np.all(np.diff(values) >= 0.0)
    assert values[0] == 0.0


def test_sample_means_within_clt_bounds():
    n = 1_000_000
    uniform = sample(ProductPrior.uniform_iid(2), n, seed=5)
    assert np.all(np.abs(uniform.mean(axis=0) - 0.5) <= 3 * 0.2887 / 1000)

    exponential = sample(ProductPrior.exponential([2.0]), n, seed=5)[:, 0]
    assert abs(exponential.mean() - 0.5) <= 3 * exponential.std() / math.sqrt(n)


def test_sample_is_deterministic():
    prior = ProductPrior.exponential([2.0, 1.0])
    np.testing.assert_array_equal(sample(prior, 3000, seed=9), sample(prior, 3000, seed=9))


@pytest.mark.parametrize("m", [1, 2, 3, 5, 10])
def test_irwin_hall_matches_empirical_cdf(m):
    sums = np.sort(sample(ProductPrior.uniform_iid(m), 1_000_000, seed=100 + m).sum(axis=1))
    points = np.linspace(0.0, m, 50)
    empirical = np.searchsorted(sums, points, side="right") / sums.size
    exact = np.array([irwin_hall_cdf(IrwinHall(m=m), float(x)) for x in points])
    assert np.max(np.abs(empirical - exact)) <= 0.002


def _convolved_cdf(m: int, cells: int = 10_000):
    """m-1번의 trapezoid 합성곱으로 만든 합 밀도의 CDF (격자 간격 1/cells)."""
    h = 1.0 / cells
    # 구간 끝 밀도는 점프의 평균값 1/2
    uniform = np.ones(cells + 1)
    uniform[[0, -1]] = 0.5
    dens = uniform
    for _ in range(m - 1):
        dens = h * fftconvolve(dens, uniform)
    return cumulative_trapezoid(dens, dx=h, initial=0.0)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_irwin_hall_matches_numeric_convolution(m):
    cells = 10_000
    numeric = _convolved_cdf(m, cells)
    ih = IrwinHall(m=m)
    for k in range(1, 50):
        index = k * m * cells // 50
        assert irwin_hall_cdf(ih, index / cells) == pytest.approx(numeric[index], abs=1e-6)


@pytest.mark.parametrize("m", [1, 2, 7, 40])
def test_irwin_hall_grid_approximation(m):
    points = np.linspace(0.0, m, 101)
    approx = irwin_hall_cdf_grid(m, points)
    exact = np.array([irwin_hall_cdf(IrwinHall(m=m), float(x)) for x in points])
    assert np.max(np.abs(approx - exact)) <= 1e-5
    assert np.all(np.diff(approx) >= 0.0)
