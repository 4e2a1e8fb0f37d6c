import math

import numpy as np
import pytest
from scipy import optimize, sparse

from src.errors import SizeLimitError
from src.oracles import build_lp, check_lp_solution, revised_simplex, solve_lp, solve_many
from src.oracles.simplex import SimplexStatus
from src.priors import ProductPrior


def test_build_lp_uniform_one_item():
    instance = build_lp(ProductPrior.uniform_iid(1), 11)
    assert instance.n_types == 11
    assert instance.quantile is None
    assert instance.masses[-1] == 0.0
    assert math.fsum(instance.masses) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(instance.grid[:, 0], np.linspace(0.0, 1.0, 11))


def test_build_lp_exponential_truncation():
    instance = build_lp(ProductPrior.exponential([1.0]), 11, quantile=0.999)
    assert instance.grid[-1, 0] == pytest.approx(math.log(1000.0))
    assert instance.masses[-1] == pytest.approx(0.001 / 1.0, rel=1e-9)


def test_build_lp_two_items_is_lexicographic():
    instance = build_lp(ProductPrior.uniform_iid(2), 11)
    assert instance.n_types == 121
    assert instance.n_ic_constraints == 121 * 120
    assert tuple(instance.grid[1]) == pytest.approx((0.0, 0.1))
    assert tuple(instance.grid[11]) == pytest.approx((0.1, 0.0))


def test_build_lp_limits():
    with pytest.raises(SizeLimitError):
        build_lp(ProductPrior.uniform_iid(3), 5)
    with pytest.raises(SizeLimitError):
        build_lp(ProductPrior.uniform_iid(2), 26)
    with pytest.raises(ValueError):
        build_lp(ProductPrior.uniform_iid(1), 1)
    with pytest.raises(ValueError):
        build_lp(ProductPrior.exponential([1.0]), 11, quantile=1.0)


def test_one_item_lp_is_posted_price():
    solution = solve_lp(build_lp(ProductPrior.uniform_iid(1), 11))
    assert solution.status is SimplexStatus.OPTIMAL
    assert solution.value == pytest.approx(0.25, abs=1e-9)
    assert solution.dual_objective == pytest.approx(solution.value, abs=1e-9)


def test_one_item_lp_monotone_in_grid():
    values = [s.value for s in solve_many([build_lp(ProductPrior.uniform_iid(1), n) for n in (6, 11, 21)])]
    assert values == pytest.approx([0.24, 0.25, 0.25], abs=1e-9)
    assert values[0] <= values[1] + 1e-9
    assert values[1] <= values[2] + 1e-9


def test_one_item_fine_grid():
    solution = solve_lp(build_lp(ProductPrior.uniform_iid(1), 101))
    assert abs(solution.value - 0.25) <= 0.01


def test_two_item_lp_feasible_and_bounded():
    instance = build_lp(ProductPrior.uniform_iid(2), 11)
    solution = solve_lp(instance)
    assert solution.status is SimplexStatus.OPTIMAL
    assert check_lp_solution(instance, solution).ok
    assert 0.5 - 1e-9 <= solution.value <= 5 / 9 + 0.02


def test_lp_deterministic():
    instance = build_lp(ProductPrior.exponential([2.0, 1.0]), 6)
    first, second = solve_lp(instance), solve_lp(instance)
    assert first.value == second.value
    np.testing.assert_array_equal(first.payments, second.payments)


def _highs_value(instance) -> float:
    """같은 primal LP를 HiGHS로 직접 푼 값."""
    x, f = instance.grid, instance.masses
    t, m = x.shape
    n_vars = t * m + t
    rows = []
    for i in range(t):
        for k in range(t):
            if i == k:
                continue
            row = np.zeros(n_vars)
            row[k * m : (k + 1) * m] += x[i]
            row[i * m : (i + 1) * m] -= x[i]
            row[t * m + i] += 1.0
            row[t * m + k] -= 1.0
            rows.append(row)
        row = np.zeros(n_vars)
        row[t * m + i] = 1.0
        row[i * m : (i + 1) * m] -= x[i]
        rows.append(row)
    cost = np.concatenate([np.zeros(t * m), -f])
    bounds = [(0.0, 1.0)] * (t * m) + [(None, None)] * t
    res = optimize.linprog(cost, A_ub=np.array(rows), b_ub=np.zeros(len(rows)), bounds=bounds, method="highs")
    assert res.status == 0
    return -res.fun


@pytest.mark.parametrize(
    "prior",
    [ProductPrior.uniform_iid(2), ProductPrior.exponential([2.0, 1.0])],
    ids=["uniform", "exponential"],
)
def test_matches_highs(prior):
    instance = build_lp(prior, 6)
    solution = solve_lp(instance)
    assert solution.value == pytest.approx(_highs_value(instance), abs=1e-7)
    assert check_lp_solution(instance, solution).ok


def test_iteration_limit_reported():
    solution = solve_lp(build_lp(ProductPrior.uniform_iid(2), 6), max_pivots=1)
    assert solution.status is SimplexStatus.ITERATION_LIMIT
    assert solution.pivots == 1


def test_revised_simplex_small_problem():
    # min x1 + 2 x2  s.t. x1 + x2 - s = 1
    a = sparse.csc_matrix(np.array([[1.0, 1.0, -1.0]]))
    result = revised_simplex(a, np.array([1.0]), np.array([1.0, 2.0, 0.0]), np.array([1]), max_pivots=10)
    assert result.status is SimplexStatus.OPTIMAL
    assert result.objective == pytest.approx(1.0)
    assert result.multipliers == pytest.approx([1.0])
