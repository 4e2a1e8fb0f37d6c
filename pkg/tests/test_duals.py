import math
from fractions import Fraction

import numpy as np
import pytest

from src.bounds import exponential_upper_bound, uniform_upper_bound
from src.duals import (
    ExponentialDual,
    ObjectiveMethod,
    UniformDual,
    appendix_c_identity,
    exponential_branch_gap,
    simplex_moments,
    trivial_uniform_dual,
    uniform_dual_derivative_map,
    uniform_dual_objective_exact,
    verify_exponential_dual,
    verify_uniform_dual,
)
from src.errors import GridTooCoarseError


@pytest.mark.parametrize("m, grid", [(1, 1000), (2, 200)])
def test_uniform_dual_feasible(m, grid):
    report = verify_uniform_dual(m, grid, max_workers=2)
    assert report.ok
    assert report.derivative_violations == 0
    assert report.objective_closed_form == pytest.approx(uniform_upper_bound(m))
    assert report.relative_gap <= 1e-3


@pytest.mark.parametrize("grid", [200, 250, 301])
def test_uniform_dual_objective_exact_through_kink_cells(grid):
    # 3의 배수가 아닌 격자에서는 kink 1/3, 2/3 이 셀 내부에 놓인다
    report = verify_uniform_dual(2, grid, max_workers=2)
    assert report.cells_skipped_at_kinks > 0
    assert report.objective_numeric == pytest.approx(5 / 9, abs=1e-12)
    assert report.ok


@pytest.mark.slow
def test_uniform_dual_three_items():
    report = verify_uniform_dual(3, 100)
    assert report.derivative_violations == 0
    assert report.relative_gap <= 5e-3
    assert report.ok


def test_uniform_dual_boundary_conditions():
    dual = UniformDual(m=3)
    x = np.array([[0.0, 0.7, 0.9], [1.0, 0.1, 0.1], [1.0, 1.0, 1.0]])
    z = dual.evaluate(x)
    assert z[0, 0] == 0.0
    assert z[1, 0] >= 1.0 - 1e-12
    assert np.all(z[2] >= 1.0 - 1e-12)


def test_trivial_dual_objective():
    report = verify_uniform_dual(2, 100, dual=trivial_uniform_dual(2))
    assert report.objective_closed_form == pytest.approx(1.5)
    assert report.objective_numeric == pytest.approx(1.5, rel=1e-9)
    assert report.ok


def test_uniform_dual_grid_checks():
    with pytest.raises(GridTooCoarseError):
        verify_uniform_dual(4, 51)
    with pytest.raises(ValueError):
        verify_uniform_dual(2, 49)
    with pytest.raises(ValueError):
        verify_uniform_dual(5, 60)


@pytest.mark.parametrize("lambdas", [(1.0,), (1.0, 1.0), (2.0, 1.0)])
def test_exponential_dual_feasible(lambdas):
    report = verify_exponential_dual(lambdas, max_workers=2)
    assert report.ok
    assert report.objective_method is ObjectiveMethod.MIDPOINT
    assert report.objective_closed_form == pytest.approx(exponential_upper_bound(lambdas))
    assert report.tail_bound < 1e-6 * report.objective_closed_form


@pytest.mark.slow
def test_exponential_dual_three_items_quasi_random():
    report = verify_exponential_dual((1.0, 1.0, 1.0), seed=3)
    assert report.objective_method is ObjectiveMethod.QUASI_RANDOM
    assert report.relative_gap <= report.objective_tolerance
    assert report.ok


def test_exponential_dual_zero_below_gamma_star():
    dual = ExponentialDual(lambdas=(2.0, 1.0))
    x = np.array([[0.2, 0.3]])  # w = 0.7 < γ*_2
    assert np.all(dual.evaluate(x) == 0.0)
    assert np.all(dual.partials(x) == 0.0)


def test_exponential_branch_gap():
    gap = exponential_branch_gap([2.0, 1.0])
    assert gap.ok
    assert gap.gamma_star == pytest.approx((1 + math.sqrt(5)) / 2)


def test_exponential_truncation_too_small():
    with pytest.raises(ValueError):
        verify_exponential_dual([1.0], w_max=10.0)
    with pytest.raises(ValueError):
        verify_exponential_dual([1.0, 1.0, 1.0, 1.0])


@pytest.mark.parametrize("m", range(1, 31))
def test_partition_sum_identity(m):
    assert appendix_c_identity(m).holds


def test_uniform_dual_objective_exact():
    assert uniform_dual_objective_exact(1) == Fraction(1, 4)
    assert uniform_dual_objective_exact(2) == Fraction(5, 9)
    assert uniform_dual_objective_exact(3) == Fraction(15, 16)


def test_simplex_moments():
    moments = simplex_moments(3, qmc_log2_points=16, seed=5)
    assert moments.volume == pytest.approx(0.5)
    assert moments.first_moment == pytest.approx(1 / 6)
    assert moments.volume_estimate == pytest.approx(0.5, abs=1e-3)
    assert moments.moment_estimate == pytest.approx(1 / 6, abs=1e-3)
    assert simplex_moments(40).volume_estimate is None


def test_derivative_map():
    rows = uniform_dual_derivative_map()
    assert len(rows) == 2500
    values = {r["dz1"] for r in rows} | {r["dz2"] for r in rows}
    assert values <= {0.0, 1.5, 3.0}
