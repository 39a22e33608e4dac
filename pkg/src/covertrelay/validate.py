"""Cross-validation suite: closed forms against their independent oracles.

Each check compares one analytic result with a route that does not share
its derivation (brute-force grid search, Monte Carlo tallies, alternative
algebraic forms, distributional tests) and reports the measured error
against its tolerance. The optional perturbation knob deliberately skews
the closed forms under test so the harness can prove it would catch a
regression (self-test mode).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import detection, montecarlo, rates, relaying
from .params import PS, TS, ChannelDraw, SchemeConfig, SystemParams

KS_DRAWS = 10**6
KS_TOL_CHANNEL = 0.002
KS_TOL_STATISTIC = 0.003


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool


def _check(name: str, measured: float, tolerance: float) -> CheckResult:
    return CheckResult(name, float(measured), float(tolerance), bool(measured <= tolerance))


def _schemes(params: SystemParams, fraction_ts: float, fraction_ps: float):
    return (SchemeConfig(TS, fraction_ts), SchemeConfig(PS, fraction_ps))


def run_validation(
    params: SystemParams,
    seed: int = 0,
    mc_blocks: int = 10**6,
    fraction_ts: float = 0.5,
    fraction_ps: float = 0.5,
    perturb: float = 0.0,
) -> list[CheckResult]:
    """Run every cross-check; returns one CheckResult per check.

    perturb != 0 scales the closed-form detection quantities under test and
    is expected to make the suite fail (harness self-test).
    """
    results: list[CheckResult] = []
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 999]))
    skew = 1.0 + perturb

    eta1_mid = 0.5 * (params.eta0 + params.eta_u)

    for scheme in _schemes(params, fraction_ts, fraction_ps):
        tag = scheme.variant

        # Power algebra over random (draw, eta1) tuples.
        n = 10**4
        draw = ChannelDraw(
            g_ar=rng.exponential(params.lambda_ar, n),
            g_rb=rng.exponential(params.lambda_rb, n),
        )
        eta1s = rng.uniform(params.eta0, params.eta_u, n)
        alloc = relaying.allocate_powers(params, scheme, eta1s, draw)
        total = relaying.harvested_power_total(params, scheme, eta1s, draw.g_ar)
        balance = np.max(np.abs(alloc.pr1 + alloc.prc - total) / total)
        results.append(_check(f"power-balance-{tag}", balance, 1e-12))

        g0 = relaying.snr_h0(params, scheme, draw)
        g1 = relaying.sinr_h1(params, scheme, eta1s, draw)
        results.append(_check(f"snr-match-{tag}", np.max(np.abs(g0 - g1) / g0), 1e-10))

        gc_direct = relaying.covert_snr(params, scheme, eta1s, draw)
        gc_reduced = relaying.covert_snr_reduced(params, scheme, eta1s, draw)
        results.append(
            _check(f"covert-snr-forms-{tag}", np.max(np.abs(gc_direct - gc_reduced) / gc_reduced), 1e-12)
        )

        # Threshold optimality: closed form against a threshold grid, and
        # the minimum against the ratio-only expression.
        tau_star = detection.optimal_threshold(params, scheme, eta1_mid)
        offsets = np.geomspace(params.sigma2_a * 1e-9, 1e3 * (tau_star - params.sigma2_a), 10**4)
        xi_grid = detection.detection_error(params, scheme, eta1_mid, params.sigma2_a + offsets).xi
        xi_at_star = detection.detection_error(params, scheme, eta1_mid, tau_star).xi * skew
        results.append(_check(f"threshold-grid-{tag}", xi_at_star - np.min(xi_grid), 1e-12))
        xi_ratio = detection.min_detection_error(params.eta0 / eta1_mid)
        results.append(_check(f"xi-star-closed-form-{tag}", abs(xi_at_star - xi_ratio), 1e-10))

        # Detection rates against Monte Carlo tallies (3 binomial standard
        # errors computed from the closed-form rates).
        n_det = min(mc_blocks, 10**5)
        worst = 0.0
        for k, mult in enumerate((0.3, 1.0, 3.0)):
            tau = params.sigma2_a + mult * (tau_star - params.sigma2_a)
            rep = montecarlo.simulate_detection(params, scheme, eta1_mid, tau, n_det, seed + k)
            a = detection.false_alarm(params, scheme, tau) * skew
            b = detection.miss_detection(params, scheme, eta1_mid, tau) * skew
            se_a = max(np.sqrt(a * (1 - a) / n_det), 1.0 / n_det)
            se_b = max(np.sqrt(b * (1 - b) / n_det), 1.0 / n_det)
            worst = max(worst, abs(rep.alpha_hat - a) / (3 * se_a), abs(rep.beta_hat - b) / (3 * se_b))
        results.append(_check(f"detection-mc-{tag}", worst, 1.0))

        # Rate quadrature against Monte Carlo.
        rate = rates.average_covert_rate(params, scheme, eta1_mid)
        results.append(_check(f"quad-convergence-{tag}", rate.quad_error, rates.QUAD_ERROR_LIMIT))
        rep = montecarlo.simulate_covert_rate(params, scheme, eta1_mid, mc_blocks, seed)
        results.append(_check(f"rate-quad-vs-mc-{tag}", abs(rate.c_avg - rep.c_hat) / rate.c_avg, 0.02))

        # Empirical CDF of the received-power statistic under H0.
        stream = 5 if tag == TS else 6
        g = montecarlo.substream(seed, stream).exponential(params.lambda_ar, KS_DRAWS)
        t_draws = montecarlo.sufficient_statistic(params, scheme, params.eta0, g)
        ks = stats.kstest(t_draws, lambda t: montecarlo.statistic_cdf(params, scheme, params.eta0, t))
        results.append(_check(f"statistic-cdf-ks-{tag}", ks.statistic, KS_TOL_STATISTIC))

        # Threshold optimality on a grid, closed-form and empirical sides.
        ok = montecarlo.validate_threshold_optimality(
            params, scheme, eta1_mid, grid_size=2000, seed=seed, n_blocks=min(mc_blocks, 10**5)
        )
        results.append(_check(f"threshold-optimality-{tag}", 0.0 if ok else 1.0, 0.0))

    # Scheme-independent checks.
    s_ts, s_ps = _schemes(params, fraction_ts, fraction_ps)
    xi_ts = detection.detection_error(
        params, s_ts, eta1_mid, detection.optimal_threshold(params, s_ts, eta1_mid)
    ).xi
    xi_ps = detection.detection_error(
        params, s_ps, eta1_mid, detection.optimal_threshold(params, s_ps, eta1_mid)
    ).xi
    results.append(_check("xi-star-scheme-equal", abs(xi_ts - xi_ps), 1e-10))

    phis = np.linspace(0.01, 0.99, 1000)
    xi_vals = np.array([detection.min_detection_error(p) for p in phis])
    non_increasing = float(np.sum(np.diff(xi_vals) <= 0))
    results.append(_check("xi-star-monotone", non_increasing, 0.0))

    budget = rates.covertness_budget_limit(params.eta0, params.eta_u)
    identity = abs(budget - (1.0 - detection.min_detection_error(params.eta0 / params.eta_u)))
    results.append(_check("budget-identity", identity, 1e-12))

    samples = montecarlo.substream(seed, 7).exponential(params.lambda_ar, KS_DRAWS)
    ks = stats.kstest(samples, "expon", args=(0, params.lambda_ar))
    results.append(_check("channel-ks", ks.statistic, KS_TOL_CHANNEL))

    return results


def format_report(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name:<{width}}  measured={r.measured:.3e}  tolerated={r.tolerance:.3e}")
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
