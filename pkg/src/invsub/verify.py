"""End-to-end checks of the distributional identities and tail bounds.

Each suite draws its samples on fixed stream ids derived from ``seed`` and
returns a :class:`SuiteResult` made of one or more pass/fail lines.
Finite-``t`` limit suites run at the 5% level; exact identities at 1%.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import samplers as smp
from .bounds import log_chernoff_bound, trivial_threshold
from .exponents import DomainError, Stable, Subordinator, TemperedStable, psi
from .stats import CheckReport, check_tail_dominance, ks_report

SUITES = ("selfsim", "composition", "tailbound", "renewal-limit", "timechange-limit", "lt-consistency")


@dataclass
class SuiteResult:
    suite: str
    reports: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "pass": self.passed,
            "results": [r.to_dict() for r in self.reports],
            **self.detail,
        }


def _gen(seed, stream):
    return smp.RngStream(seed, stream).generator()


def selfsim(alpha: float, c: float, t: float = 1.0, n: int = 100_000, seed: int = 0, level: float = 0.01) -> SuiteResult:
    """KS between ``E_alpha(c t)`` and ``c**alpha E_alpha(t)``."""
    lhs = smp.sample_inverse_stable_exact(alpha, c * t, _gen(seed, 0), n)
    rhs = c**alpha * smp.sample_inverse_stable_exact(alpha, t, _gen(seed, 1), n)
    rep = ks_report(f"selfsim alpha={alpha} c={c} t={t}", lhs, rhs, level)
    return SuiteResult("selfsim", [rep])


def composition(alphas, t: float = 1.0, n: int = 100_000, seed: int = 0, level: float = 0.01) -> SuiteResult:
    """KS between the composed clocks and a single clock of index ``prod(alphas)``."""
    alphas = [float(a) for a in alphas]
    target = math.prod(alphas)
    lhs = smp.sample_composed_iss(alphas, t, _gen(seed, 0), n)
    rhs = smp.sample_inverse_stable_exact(target, t, _gen(seed, 1), n)
    rep = ks_report(f"composition {alphas} vs alpha={target:.6g}", lhs, rhs, level)
    return SuiteResult("composition", [rep])


def level_for_bound(spec: Subordinator, t: float, target: float) -> float:
    """Smallest level ``x`` at which the Chernoff bound drops to ``target``."""
    goal = math.log(target)
    lo = max(trivial_threshold(spec, t), 1e-12)
    hi = max(2.0 * lo, 1.0)
    while log_chernoff_bound(spec, t, hi) > goal:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_chernoff_bound(spec, t, mid) > goal:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * hi:
            break
    return hi


def default_tail_grid(spec: Subordinator, t: float, points: int = 10) -> np.ndarray:
    """Log-spaced levels from bound ~0.9 down to bound ~1e-5."""
    return np.geomspace(level_for_bound(spec, t, 0.9), level_for_bound(spec, t, 1e-5), points)


def inverse_draws(spec: Subordinator, t: float, n: int, rng, dt: float | None = None) -> np.ndarray:
    """Draws of ``E(t)``: exact for stable, bracket midpoints otherwise."""
    if isinstance(spec, Stable) and dt is None:
        return smp.sample_inverse_stable_exact(spec.alpha, t, rng, n)
    if dt is None:
        dt = 1e-2 * max(t, 1.0)
        if isinstance(spec, TemperedStable):
            dt = min(dt, smp.TEMPER_LIMIT / spec.lam**spec.alpha)
    return smp.sample_inverse_subordinator(spec, t, dt, rng, n).midpoint


def tailbound(
    spec: Subordinator, t: float = 1.0, n: int = 1_000_000, seed: int = 0, x_grid=None, dt: float | None = None
) -> SuiteResult:
    """Empirical tail of ``E(t)`` against the Chernoff bound plus 4 standard errors."""
    grid = default_tail_grid(spec, t) if x_grid is None else np.asarray(x_grid, dtype=float)
    draws = inverse_draws(spec, t, n, _gen(seed, 0), dt)
    dom = check_tail_dominance(draws, spec, t, grid)
    excess = dom.empirical - dom.allowance
    worst = int(np.argmax(excess))
    rep = CheckReport(
        f"tailbound {spec} t={t}", n, float(excess[worst]), float("nan"), bool(dom.ok),
        note="statistic = max(empirical tail - allowance); pass iff <= 0",
    )
    return SuiteResult("tailbound", [rep], {"dominance": dom.to_dict()})


def renewal_limit(
    alpha: float,
    waiting: smp.WaitingTime,
    t: float = 1e4,
    n: int = 10_000,
    seed: int = 0,
    level: float = 0.05,
    fractional_poisson: bool = True,
) -> SuiteResult:
    """``N(E_alpha(t)) / t**alpha`` against ``lam E_alpha(1)``, ``lam = 1 / E W``.

    With ``fractional_poisson`` the Poisson case ``M(E_alpha(t))`` is
    checked the same way on its own streams.
    """
    lam = 1.0 / waiting.mean
    scale = t**alpha
    clock = smp.sample_inverse_stable_exact(alpha, t, _gen(seed, 0), n)
    counts = smp.sample_renewal_count(waiting, clock, _gen(seed, 1))
    ref = lam * smp.sample_inverse_stable_exact(alpha, 1.0, _gen(seed, 2), n)
    note = "finite-t check of an a.s. limit; tolerance is an engineering choice"
    reps = [ks_report(f"renewal {waiting.kind} alpha={alpha} t={t:g}", counts / scale, ref, level, note)]
    if fractional_poisson:
        m = smp.sample_fractional_poisson(lam, alpha, t, _gen(seed, 3), n)
        ref2 = lam * smp.sample_inverse_stable_exact(alpha, 1.0, _gen(seed, 4), n)
        reps.append(ks_report(f"fractional poisson lam={lam:g} alpha={alpha} t={t:g}", m / scale, ref2, level, note))
    return SuiteResult("renewal-limit", reps)


def timechange_limit(
    alpha: float,
    outer: Subordinator,
    t: float = 1e4,
    n: int = 10_000,
    seed: int = 0,
    level: float = 0.05,
    dt: float = 1.0,
) -> SuiteResult:
    """``E_alpha(T(t)) / t**alpha`` against ``(E T(1))**alpha E_alpha(1)``."""
    mean = outer.v_sup
    if math.isinf(mean):
        raise DomainError("outer clock must have finite mean")
    if isinstance(outer, TemperedStable):
        dt = min(dt, smp.TEMPER_LIMIT / outer.lam**outer.alpha)
    lhs = smp.sample_time_changed_iss(alpha, outer, t, dt, _gen(seed, 0), n) / t**alpha
    rhs = mean**alpha * smp.sample_inverse_stable_exact(alpha, 1.0, _gen(seed, 1), n)
    note = "finite-t check of an a.s. limit; tolerance is an engineering choice"
    rep = ks_report(f"timechange alpha={alpha} outer={outer} t={t:g}", lhs, rhs, level, note)
    return SuiteResult("timechange-limit", [rep])


def lt_consistency(
    spec: Subordinator, n: int = 1_000_000, seed: int = 0, us=(0.5, 1.0, 2.0), dt: float = 1.0, n_se: float = 4.0
) -> SuiteResult:
    """Monte Carlo mean of ``exp(-u T(dt))`` against ``exp(-dt psi(u))``."""
    x = smp.sample_increment(spec, dt, _gen(seed, 0), n)
    reps = []
    for u in us:
        y = np.exp(-u * x)
        se = y.std(ddof=1) / math.sqrt(n)
        z = (y.mean() - math.exp(-dt * psi(spec, u))) / se
        reps.append(CheckReport(f"lt {spec} u={u}", n, float(z), float("nan"), bool(abs(z) < n_se), note="statistic is a z-score"))
    return SuiteResult("lt-consistency", reps)
