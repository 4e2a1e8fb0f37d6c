"""Command handlers.

각 handler는 검증된 파라미터를 받아 OutputRecord를 반환한다.
계산은 모두 하위 패키지에 위임한다.
"""

import logging
import math
from typing import Any

import mpmath
import numpy as np

from src.bounds import (
    bound_report_exponential,
    bound_report_uniform,
    exponential_upper_bound,
    figure_1_curve,
    figure_2_curve,
    uniform_upper_bound,
)
from src.commands.records import OutputRecord, Provenance
from src.config import settings
from src.duals import (
    trivial_uniform_dual,
    uniform_dual_derivative_map,
    verify_exponential_dual,
    verify_uniform_dual,
)
from src.errors import UsageError
from src.gamma import big_g, big_g_quadrature, gamma_star
from src.mechanisms import (
    brev_uniform,
    check_truthful,
    full_bundle,
    proportional,
    proportional_revenue_closed_form,
    separate_myerson,
    simulate_revenue,
    srev,
)
from src.oracles import build_lp, check_lp_solution, solve_lp
from src.pipeline import run_acceptance
from src.priors import ProductPrior

logger = logging.getLogger(__name__)

LP_SLACK = 0.02
GAMMA_QUADRATURE_TOLERANCE = 1e-8
DEFAULT_UNIFORM_DUAL_GRID = 200
FLOAT_DIGITS = 17


def _prior(setting: str | None, m: int | None, lambdas: list[float] | None) -> ProductPrior:
    """setting/m/λ 조합에서 product prior 구성."""
    if setting == "uniform" or (setting is None and lambdas is None):
        if m is None or m < 1:
            raise UsageError("uniform setting에는 --m (≥ 1)이 필요합니다.")
        return ProductPrior.uniform_iid(m)
    if not lambdas:
        raise UsageError("exp setting에는 --lambdas가 필요합니다.")
    return ProductPrior.exponential(lambdas)


def cmd_bounds(setting: str, m: int | None, lambdas: list[float] | None) -> OutputRecord:
    """폐형식 상한과 SRev/BRev/근사비 상한."""
    prior = _prior(setting, m, lambdas)
    if setting == "uniform":
        report = bound_report_uniform(prior.m)
    else:
        report = bound_report_exponential(prior.rates.tolist())
    return OutputRecord(
        command="bounds",
        params={"setting": setting, "m": prior.m, "lambdas": lambdas},
        results=report.model_dump(mode="json", exclude_none=True),
        provenance=[Provenance.CLOSED_FORM, Provenance.NUMERIC] if setting == "uniform" else [Provenance.CLOSED_FORM],
    )


def cmd_fig(which: str, max_m: int, grid: int) -> OutputRecord:
    """ratio 곡선과 dual 편미분 지도 데이터."""
    provenance = [Provenance.CLOSED_FORM]
    if which == "1":
        # ratio_bundle은 BRev 수치 최대화 값
        rows = [r.model_dump() for r in figure_1_curve(max_m)]
        params: dict[str, Any] = {"which": which, "max_m": max_m}
        provenance = [Provenance.CLOSED_FORM, Provenance.NUMERIC]
    elif which == "2":
        rows = [r.model_dump() for r in figure_2_curve(max_m)]
        params = {"which": which, "max_m": max_m}
    else:
        rows = uniform_dual_derivative_map(grid)
        params = {"which": which, "grid": grid}
    return OutputRecord(command="fig", params=params, rows=rows, provenance=provenance)


def cmd_verify_dual(
    family: str,
    m: int | None,
    lambdas: list[float] | None,
    grid: int | None,
    seed: int | None,
) -> OutputRecord:
    """Dual certificate 점검. 제약 위반이나 objective 차이가 있으면 ok=False."""
    if family == "exp":
        if not lambdas:
            raise UsageError("exp dual에는 --lambdas가 필요합니다.")
        seed = settings.default_seed if seed is None else seed
        report = verify_exponential_dual(lambdas, grid_points_per_axis=grid, seed=seed)
    else:
        if m is None:
            raise UsageError("uniform dual에는 --m이 필요합니다.")
        dual = trivial_uniform_dual(m) if family == "uniform-trivial" else None
        report = verify_uniform_dual(m, grid or DEFAULT_UNIFORM_DUAL_GRID, dual=dual)
        seed = None

    provenance = [Provenance.QUADRATURE]
    if report.objective_method.value == "quasi-random":
        provenance.append(Provenance.MONTE_CARLO)
    else:
        seed = None
    record = OutputRecord(
        command="verify-dual",
        params={"family": family, "m": report.m, "lambdas": lambdas, "grid": report.grid_points_per_axis},
        results=report.model_dump(mode="json", exclude_none=True),
        provenance=provenance,
        seed=seed,
    )
    if report.derivative_violations:
        record.fail(f"편미분 합 위반 {report.derivative_violations}개 (최대 {report.max_derivative_residual:.3e})")
    if report.max_boundary_residual > 1e-9:
        record.fail(f"경계 조건 위반 {report.max_boundary_residual:.3e}")
    if report.relative_gap > report.objective_tolerance:
        record.fail(f"objective 상대오차 {report.relative_gap:.3e} > {report.objective_tolerance:g}")
    if not report.ok and record.ok:
        record.fail(f"해석적 편미분 불일치 {report.max_analytic_mismatch:.3e}")
    return record


def _mechanism(mechanism: str, prior: ProductPrior, price: float | None):
    """(메커니즘, 폐형식 기대 수익 또는 None)."""
    if mechanism == "separate":
        return separate_myerson(prior), srev(prior)
    if mechanism == "proportional":
        if prior.kind.value != "exponential":
            raise UsageError("proportional 메커니즘은 exp setting에서만 정의됩니다.")
        return proportional(prior.rates.tolist()), proportional_revenue_closed_form(prior.rates.tolist())
    # bundle
    if price is not None:
        return full_bundle(prior.m, price), None
    if prior.kind.value == "uniform":
        best = brev_uniform(prior.m)
        return full_bundle(prior.m, best.price), best.revenue
    rates = prior.rates
    if not np.all(rates == rates[0]):
        raise UsageError("rate가 다른 exponential bundle에는 --price가 필요합니다.")
    return full_bundle(prior.m, gamma_star(prior.m) / float(rates[0])), exponential_upper_bound(rates)


def cmd_simulate(
    mechanism: str,
    setting: str | None,
    m: int | None,
    lambdas: list[float] | None,
    price: float | None,
    n: int,
    pairs: int,
    seed: int | None,
) -> OutputRecord:
    """Monte Carlo 수익 추정과 폐형식 대조 (3 std_err)."""
    prior = _prior(setting, m, lambdas)
    seed = settings.default_seed if seed is None else seed
    mech, target = _mechanism(mechanism, prior, price)
    estimate = simulate_revenue(mech, prior, n, seed=seed, progress=logger.isEnabledFor(logging.INFO))

    results: dict[str, Any] = {
        "mean": estimate.mean,
        "std_err": estimate.std_err,
        "n": estimate.n,
    }
    provenance = [Provenance.MONTE_CARLO]
    if target is not None:
        results["closed_form"] = target
        results["z_score"] = (estimate.mean - target) / estimate.std_err if estimate.std_err > 0 else 0.0
        provenance.append(Provenance.CLOSED_FORM)

    record = OutputRecord(
        command="simulate",
        params={"mechanism": mechanism, "m": prior.m, "lambdas": lambdas, "price": price, "n": n, "pairs": pairs},
        results=results,
        provenance=provenance,
        seed=seed,
    )
    if target is not None and not estimate.within(target):
        record.fail(f"평균 {estimate.mean:.9g} 이 폐형식 {target:.9g} 의 3 std_err 밖")
    if pairs > 0:
        truth = check_truthful(mech, prior, pairs, seed=seed)
        record.results.update(ic_violations=truth.ic_violations, ir_violations=truth.ir_violations)
        if not truth.ok:
            record.fail(f"truthfulness 위반: IC {truth.ic_violations}, IR {truth.ir_violations}")
    return record


def cmd_lp(
    setting: str,
    m: int | None,
    lambdas: list[float] | None,
    n: int,
    quantile: float,
) -> OutputRecord:
    """격자 LP 풀이, 열거 재점검, 폐형식 상한 대조."""
    prior = _prior(setting, m, lambdas)
    instance = build_lp(prior, n, quantile=quantile)
    solution = solve_lp(instance)
    residuals = check_lp_solution(instance, solution)
    bound = uniform_upper_bound(prior.m) if setting == "uniform" else exponential_upper_bound(prior.rates)

    record = OutputRecord(
        command="lp",
        params={"setting": setting, "m": prior.m, "lambdas": lambdas, "n": n, "quantile": instance.quantile},
        results={
            "value": solution.value,
            "dual_objective": solution.dual_objective,
            "status": solution.status.value,
            "pivots": solution.pivots,
            "n_types": instance.n_types,
            "ic_constraints": instance.n_ic_constraints,
            "closed_form_bound": bound,
            "max_ic_violation": residuals.max_ic_violation,
            "max_ir_violation": residuals.max_ir_violation,
            "max_range_violation": residuals.max_range_violation,
        },
        provenance=[Provenance.LP, Provenance.CLOSED_FORM],
    )
    if solution.status.value != "optimal":
        record.fail(f"LP status {solution.status.value}")
    if not residuals.ok:
        record.fail("LP 해가 IC/IR/범위 제약을 위반")
    if solution.value > bound + LP_SLACK:
        record.fail(f"LP 값 {solution.value:.9g} > 상한 {bound:.9g} + {LP_SLACK}")
    return record


def _finite_or_decimal(value: float, log_value: float) -> float | str:
    """float으로 표현되지 않는 값은 exp(log_value)의 17자리 십진 문자열로."""
    if math.isfinite(value):
        return value
    return mpmath.nstr(mpmath.exp(mpmath.mpf(log_value)), FLOAT_DIGITS)


def cmd_gamma(m: int) -> OutputRecord:
    """γ*_m, G(m), G(m)/m! 와 quadrature 대조."""
    profile = big_g(m)
    record = OutputRecord(
        command="gamma",
        params={"m": m},
        results={
            "gamma_star": profile.gamma_star,
            "G": _finite_or_decimal(profile.G, profile.log_G),
            "log_G": profile.log_G,
            "G_over_m_fact": profile.G_over_m_fact,
        },
        provenance=[Provenance.CLOSED_FORM],
    )
    if profile.G > 0 and np.isfinite(profile.G):
        quad = big_g_quadrature(m)
        rel = abs(quad - profile.G) / profile.G
        record.results.update(G_quadrature=quad, quadrature_rel_error=rel)
        record.provenance.append(Provenance.QUADRATURE)
        if rel > GAMMA_QUADRATURE_TOLERANCE:
            record.fail(f"G(m) quadrature 상대오차 {rel:.3e}")
    return record


def cmd_accept(criteria: list[int] | None, quick: bool, seed: int | None) -> OutputRecord:
    """Acceptance 점검 그래프 실행."""
    seed = settings.default_seed if seed is None else seed
    state = run_acceptance(criteria, quick=quick, seed=seed)
    rows = [
        {"check": r["step"]["check"], "status": r["status"], **{k: v for k, v in r["output"].items() if k != "values"}}
        for r in state["past_steps"]
    ]
    record = OutputRecord(
        command="accept",
        params={"criteria": criteria, "quick": quick},
        results={"summary": state.get("result")},
        rows=rows,
        provenance=[Provenance.CLOSED_FORM, Provenance.QUADRATURE, Provenance.MONTE_CARLO, Provenance.LP],
        seed=seed,
    )
    if state.get("error"):
        record.fail(state["error"])
    for r in state["past_steps"]:
        for failure in r["output"].get("failures", []):
            record.fail(f"{r['step']['check']}: {failure}")
    if not state.get("passed"):
        record.ok = False
    return record
