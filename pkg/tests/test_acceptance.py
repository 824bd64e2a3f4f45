"""Acceptance criteria, one test each.

Every test prints a single ``ACCEPTANCE <k> PASS|FAIL`` line with its
measurements and wall time, then asserts the criterion.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar
from scipy.stats import norm

from invsub import samplers as smp
from invsub import verify as ver
from invsub.bounds import INCONCLUSIVE, NOT_ID, chernoff_bound, closed_form_bound, diagnose_id, log_chernoff_bound, trivial_threshold
from invsub.density import TALBOT, LTInversionConfig, inverse_subordinator_density
from invsub.exponents import Gamma, InverseGaussian, Stable, TemperedStable, psi
from invsub.stats import empirical_growth_exponent

TAIL_FAMILIES = [
    Stable(0.3),
    Stable(0.5),
    Stable(0.8),
    TemperedStable(0.5, 1.0),
    InverseGaussian(1.0, 0.0),
    InverseGaussian(1.0, 1.0),
    Gamma(1.0, 1.0),
]


@pytest.fixture
def report(capsys):
    def emit(k, title, ok, detail, elapsed, limit):
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\nACCEPTANCE {k:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{elapsed:.1f}s / {limit:g}s]")
        return ok

    return emit


def _random_spec(rng):
    kind = rng.integers(4)
    if kind == 0:
        return Stable(rng.uniform(0.1, 0.95))
    if kind == 1:
        return TemperedStable(rng.uniform(0.1, 0.95), rng.uniform(0.1, 5.0))
    if kind == 2:
        return InverseGaussian(rng.uniform(0.2, 5.0), rng.uniform(0.0, 3.0))
    return Gamma(rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0))


def _numeric_log_bound(spec, t, x):
    # minimize u t - x psi(u) over log u, independently of the analytic optimizer
    res = minimize_scalar(lambda v: t * math.exp(v) - x * psi(spec, math.exp(v)), bounds=(-60, 60), method="bounded",
                          options={"xatol": 1e-12, "maxiter": 2000})
    return min(res.fun, 0.0)


def test_1_chernoff_optimality(report):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    done = 0
    while done < 200:
        spec = _random_spec(rng)
        t = math.exp(rng.uniform(math.log(0.1), math.log(10)))
        lo = trivial_threshold(spec, t)
        x = t * math.exp(rng.uniform(math.log(0.1), math.log(100))) if lo == 0 else lo * math.exp(rng.uniform(math.log(1.1), math.log(100)))
        la = float(log_chernoff_bound(spec, t, x))
        if la < -700:
            # the bound underflows a double; relative comparison is meaningless there
            continue
        done += 1
        ln = _numeric_log_bound(spec, t, x)
        worst = max(worst, abs(math.expm1(ln - la)))
    elapsed = time.perf_counter() - start
    assert report(1, "Chernoff optimality", worst <= 1e-6, f"200 queries, max rel diff {worst:.2e}", elapsed, 5)


def test_2_closed_form_agreement(report):
    start = time.perf_counter()
    worst = 0.0
    for spec in (Stable(0.3), Stable(0.7), TemperedStable(0.5, 1.0), TemperedStable(0.8, 3.0), Gamma(1, 1), Gamma(2.5, 0.5),
                 InverseGaussian(1, 0), InverseGaussian(2, 1)):
        for t in (0.5, 2.0):
            lo = max(1e-2, 1.001 * trivial_threshold(spec, t))
            for x in np.geomspace(lo, 1e3 * lo, 30):
                ref = chernoff_bound(spec, t, x)
                if ref > 1e-300:
                    worst = max(worst, abs(closed_form_bound(spec, t, x).bound / ref - 1))
    # delta = 1/sqrt(2) makes E(t) equal |N(0, 2t)| in law, whose tail is 2 Phi-bar(x / sqrt(2t))
    folded = []
    for delta in (1 / math.sqrt(2), 1.0, 2.0):
        for t in (0.5, 1.0, 2.0):
            for x in (1, 2, 3, 4):
                exact = 2 * norm.sf(delta * x / math.sqrt(t))
                folded.append(exact <= chernoff_bound(InverseGaussian(delta, 0.0), t, x))
    half = [2 * norm.sf(x / math.sqrt(2)) <= chernoff_bound(InverseGaussian(1 / math.sqrt(2), 0.0), 1.0, x) for x in (1, 2, 3, 4)]
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and all(folded) and all(half)
    assert report(2, "closed-form agreement", ok, f"max rel diff {worst:.1e}; folded-normal dominance {sum(folded)}/{len(folded)}", elapsed, 1)


def test_3_tail_dominance(report):
    start = time.perf_counter()
    lines, ok = [], True
    for i, spec in enumerate(TAIL_FAMILIES):
        res = ver.tailbound(spec, 1.0, n=10**6, seed=100 + i)
        ok &= res.passed
        lines.append(f"{spec}:{'ok' if res.passed else 'VIOLATED'}")
    elapsed = time.perf_counter() - start
    assert report(3, "tail dominance", ok, ", ".join(lines), elapsed, 300)


def test_4_id_diagnostics(report):
    start = time.perf_counter()
    grid = np.geomspace(10, 1e4, 61)
    cases = [
        (Stable(0.3), NOT_ID, 1 / 0.7),
        (Stable(0.5), NOT_ID, 2.0),
        (Stable(0.8), NOT_ID, 5.0),
        (TemperedStable(0.5, 1.0), NOT_ID, 2.0),
        (InverseGaussian(1.0, 1.0), NOT_ID, 2.0),
        (InverseGaussian(1.0, 0.0), NOT_ID, 2.0),
        (Gamma(1.0, 1.0), INCONCLUSIVE, 1.0),
        (Gamma(2.0, 0.5), INCONCLUSIVE, 1.0),
    ]
    ok, lines = True, []
    for spec, verdict, slope in cases:
        d = diagnose_id(spec, 1.0, grid)
        good = d.verdict == verdict and abs(d.slope_estimate - slope) <= 0.05
        ok &= good
        lines.append(f"{spec} {d.slope_estimate:.3f}")
    elapsed = time.perf_counter() - start
    assert report(4, "ID diagnostics", ok, "; ".join(lines), elapsed, 10)


def test_5_power_thresholds(report):
    start = time.perf_counter()
    grid = np.geomspace(10, 1e12, 111)
    ok, lines = True, []
    for spec, crit in ((Stable(0.5), 2.0), (Stable(0.75), 4.0), (TemperedStable(0.5, 1.0), 2.0), (InverseGaussian(1, 1), 2.0),
                       (Gamma(1, 1), 1.0)):
        below = diagnose_id(spec, 1.0, grid, 0.9 * crit)
        above = diagnose_id(spec, 1.0, grid, 1.1 * crit)
        good = below.verdict == NOT_ID and above.verdict == INCONCLUSIVE
        ok &= good
        lines.append(f"{spec} p*={crit:g} {'flip' if good else 'NO FLIP'}")
    elapsed = time.perf_counter() - start
    assert report(5, "power-transform thresholds", ok, "; ".join(lines), elapsed, 30)


def test_6_composition(report):
    start = time.perf_counter()
    passes = sum(ver.composition([0.8, 0.75], 1.0, n=10**5, seed=s).passed for s in range(20))
    elapsed = time.perf_counter() - start
    assert report(6, "composition identity", passes >= 18, f"{passes}/20 seeds pass at 1%", elapsed, 120)


def test_7_selfsimilarity(report):
    start = time.perf_counter()
    counts = {}
    for alpha in (0.5, 0.8):
        for c in (2.0, 10.0):
            counts[(alpha, c)] = sum(ver.selfsim(alpha, c, 1.0, n=10**5, seed=s).passed for s in range(20))
    elapsed = time.perf_counter() - start
    ok = all(v >= 18 for v in counts.values())
    detail = ", ".join(f"a={a} c={c:g}: {v}/20" for (a, c), v in counts.items())
    assert report(7, "self-similarity", ok, detail, elapsed, 120)


def test_8_renewal_limit(report):
    start = time.perf_counter()
    res = [ver.renewal_limit(alpha, smp.WaitingTime.exponential(2.0), t=1e4, n=10**4, seed=0) for alpha in (0.5, 0.8)]
    elapsed = time.perf_counter() - start
    reps = [r for s in res for r in s.reports]
    detail = "; ".join(f"{r.test} p={r.p_value:.3f}" for r in reps)
    assert report(8, "renewal limit", all(r.passed for r in reps), detail, elapsed, 300)


def test_9_timechange_limit(report):
    start = time.perf_counter()
    res = [ver.timechange_limit(alpha, Gamma(1.0, 1.0), t=1e4, n=10**4, seed=0) for alpha in (0.5, 0.8)]
    elapsed = time.perf_counter() - start
    reps = [r for s in res for r in s.reports]
    detail = "; ".join(f"alpha={a} p={r.p_value:.3f}" for a, r in zip((0.5, 0.8), reps))
    assert report(9, "time-change limit", all(r.passed for r in reps), detail, elapsed, 300)


def _bin_probs(spec, t, edges):
    nodes, weights = np.polynomial.legendre.leggauss(8)
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        xs = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        out.append(0.5 * (b - a) * sum(w * inverse_subordinator_density(spec, x, t) for x, w in zip(xs, weights)))
    return np.array(out)


def test_10_density_inversion(report):
    start = time.perf_counter()
    spec = Stable(0.5)
    grid = np.linspace(0.2, 3.0, 15)
    analytic = max(
        abs(inverse_subordinator_density(spec, x, t) - math.exp(-x * x / (4 * t)) / math.sqrt(math.pi * t)) for x in grid for t in grid
    )
    gaver = LTInversionConfig("gaver", 14)
    coarse = np.linspace(0.2, 3.0, 6)
    methods = max(abs(inverse_subordinator_density(spec, x, t, TALBOT) - inverse_subordinator_density(spec, x, t, gaver))
                  for x in coarse for t in coarse)
    n = 10**6
    hist = []
    for s, (fam, hi) in enumerate(((spec, 5.0), (Gamma(1.0, 1.0), 6.0))):
        rng = smp.RngStream(0, s).generator()
        if isinstance(fam, Stable):
            draws = smp.sample_inverse_stable_exact(fam.alpha, 1.0, rng, n)
        else:
            draws = smp.sample_inverse_subordinator(fam, 1.0, 1e-4, rng, n).midpoint
        edges = np.linspace(0.05, hi, 51)
        p = _bin_probs(fam, 1.0, edges)
        freq = np.histogram(draws, edges)[0] / n
        hist.append(float(np.max(np.abs(freq - p) / np.sqrt(p * (1 - p) / n))))
    elapsed = time.perf_counter() - start
    ok = analytic <= 1e-5 and methods <= 1e-5 and all(h <= 3 for h in hist)
    detail = f"analytic err {analytic:.1e}; talbot-gaver {methods:.1e}; histogram max |z| {hist[0]:.2f} (stable), {hist[1]:.2f} (gamma)"
    assert report(10, "density inversion", ok, detail, elapsed, 60)


def test_11_lt_consistency(report):
    start = time.perf_counter()
    specs = TAIL_FAMILIES + [TemperedStable(0.7, 2.0), InverseGaussian(2.0, 0.5), Gamma(2.0, 3.0)]
    worst, ok = 0.0, True
    for i, spec in enumerate(specs):
        res = ver.lt_consistency(spec, n=10**6, seed=200 + i)
        ok &= res.passed
        worst = max(worst, max(abs(r.statistic) for r in res.reports))
    elapsed = time.perf_counter() - start
    assert report(11, "LT consistency", ok, f"{len(specs)} specs x 3 u, max |z| {worst:.2f}", elapsed, 120)


def test_12_id_positive_control(report):
    start = time.perf_counter()
    grid = np.arange(3.0, 30.01, 0.5)
    erlang = smp.RngStream(0, 0).generator().gamma(2.0, 1.0, 10**7)
    iss = smp.sample_inverse_stable_exact(0.5, 1.0, smp.RngStream(0, 1).generator(), 10**7)
    s_erl, x_erl = empirical_growth_exponent(erlang, grid)
    s_iss, x_iss = empirical_growth_exponent(iss, grid)
    elapsed = time.perf_counter() - start
    ok = s_erl <= 1.05 and s_iss >= 1.5
    detail = f"Erlang(2,1) slope {s_erl:.3f} on x in [{x_erl[0]:g},{x_erl[-1]:g}]; E_0.5(1) slope {s_iss:.3f} on [{x_iss[0]:g},{x_iss[-1]:g}]"
    assert report(12, "ID positive control", ok, detail, elapsed, 180)
