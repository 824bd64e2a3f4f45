"""Chernoff tail bounds for inverse subordinators and the Steutel diagnostic.

For ``E(t) = inf{s : T(s) > t}`` the exponential Markov inequality gives
``P(E(t) > x) <= exp(u t - x psi(u))`` for every ``u > 0``. The optimum is
at ``u* = psi'^{-1}(t / x)``, which exists only while ``t / x < v_sup``;
past that the infimum sits at ``u -> 0+`` and the bound is the trivial 1.

Everything is computed on the log scale first because ``-log P`` grows
polynomially in ``x`` and the bound itself underflows quickly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exponents import DomainError, Gamma, InverseGaussian, Stable, Subordinator, TemperedStable

NOT_ID = "NotInfinitelyDivisible"
INCONCLUSIVE = "Inconclusive"


class DiagnosticError(DomainError):
    """The grid does not support an infinite-divisibility verdict."""


def _check_tx(t, x, p=1.0):
    if not (np.isfinite(t) and t > 0):
        raise DomainError(f"t must be positive, got {t!r}")
    xa = np.asarray(x, dtype=float)
    if not (np.all(np.isfinite(xa)) and np.all(xa > 0)):
        raise DomainError("x must be positive and finite")
    if not (np.isfinite(p) and p > 0):
        raise DomainError(f"p must be positive, got {p!r}")
    return float(t), xa, float(p)


def trivial_threshold(spec: Subordinator, t: float) -> float:
    """Level below which (``x <= t / v_sup``) the optimised bound is 1."""
    return 0.0 if math.isinf(spec.v_sup) else t / spec.v_sup


def is_trivial(spec: Subordinator, t: float, x) -> np.ndarray:
    return np.asarray(t / np.asarray(x, dtype=float) >= spec.v_sup)


def log_chernoff_bound(spec: Subordinator, t: float, x, p: float = 1.0):
    """``log`` of the optimised bound on ``P(E(t)**p > x)``; 0 in the trivial regime."""
    t, xa, p = _check_tx(t, x, p)
    level = xa if p == 1.0 else xa ** (1.0 / p)
    v = t / level
    live = v < spec.v_sup
    out = np.zeros_like(level)
    if live.any():
        u = np.asarray(spec._dpsi_inv(v[live]), dtype=float)
        out[live] = np.minimum(t * u - level[live] * spec._psi(u), 0.0)
    return out.item() if np.ndim(x) == 0 else out


def chernoff_bound(spec: Subordinator, t: float, x):
    """Optimised Chernoff bound on ``P(E(t) > x)``, in (0, 1]."""
    return np.exp(log_chernoff_bound(spec, t, x))


def chernoff_bound_power(spec: Subordinator, t: float, x, p: float):
    """Bound on ``P(E(t)**p > x)``: the plain bound at level ``x**(1/p)``."""
    return np.exp(log_chernoff_bound(spec, t, x, p))


@dataclass(frozen=True)
class BoundQuery:
    spec: Subordinator
    t: float
    x: float
    p: float = 1.0

    def __post_init__(self):
        _check_tx(self.t, self.x, self.p)

    def bound(self) -> float:
        return float(chernoff_bound_power(self.spec, self.t, self.x, self.p))


class ClosedForm(NamedTuple):
    """Per-family closed-form bound.

    ``bound`` is the value used downstream. ``printed`` differs from it only
    for the inverse Gaussian family, where the exponent with ``delta**2 x**2 / t``
    (missing the factor 1/2) is kept for comparison.
    """

    bound: float
    printed: float
    trivial: bool


def _closed_form_exponent(spec, t, x, printed=False):
    if isinstance(spec, Stable) or isinstance(spec, TemperedStable):
        a = spec.alpha
        w = t / (a * x)
        e = t * w ** (1.0 / (a - 1.0)) - x * w ** (a / (a - 1.0))
        if isinstance(spec, TemperedStable):
            lam = spec.lam
            e += -lam * t + lam**a * x
        return e
    if isinstance(spec, Gamma):
        a, b = spec.a, spec.b
        return a * x * math.log(b * t / (a * x)) + a * x - b * t
    if isinstance(spec, InverseGaussian):
        d, g = spec.delta, spec.gamma
        quad = d * d * x * x / t
        if not printed:
            quad /= 2.0
        return -quad + d * g * x - g * g * t / 2.0
    raise DomainError(f"no closed form for {spec!r}")


def closed_form_bound(spec: Subordinator, t: float, x: float) -> ClosedForm:
    """Evaluate the family's explicit bound formula at a single level."""
    t, xa, _ = _check_tx(t, x)
    x = float(xa)
    if t / x >= spec.v_sup:
        return ClosedForm(1.0, 1.0, True)
    derived = _closed_form_exponent(spec, t, x)
    printed = _closed_form_exponent(spec, t, x, printed=True)
    return ClosedForm(math.exp(min(derived, 0.0)), math.exp(min(printed, 0.0)), False)


def closed_form_log_bound(spec: Subordinator, t: float, x: float) -> float:
    t, xa, _ = _check_tx(t, x)
    x = float(xa)
    if t / x >= spec.v_sup:
        return 0.0
    return min(_closed_form_exponent(spec, t, x), 0.0)


def steutel_ratio(spec: Subordinator, t: float, x, p: float = 1.0):
    """``-log(bound) / (x log x)`` with natural logarithms; requires ``x > 1``."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 1):
        raise DomainError("steutel_ratio requires x > 1")
    lb = np.asarray(log_chernoff_bound(spec, t, xa, p))
    r = -lb / (xa * np.log(xa))
    return r.item() if np.ndim(x) == 0 else r


def growth_exponent(x, f) -> tuple[float, float]:
    """Fit ``log f = c + s log x + k log log x`` by least squares.

    Returns ``(s, k)``. The ``log log x`` regressor absorbs the logarithmic
    factor in ``x log x``-type growth, so ``s`` estimates the polynomial
    exponent rather than drifting above it by ``~1/log x``. Needs ``x > 1``
    and ``f > 0`` at every point and at least four points.
    """
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    if x.size < 4:
        raise DiagnosticError("need at least 4 points to fit a growth exponent")
    if np.any(x <= 1) or np.any(f <= 0):
        raise DiagnosticError("growth fit needs x > 1 and f > 0")
    lx = np.log(x)
    design = np.column_stack([np.ones_like(lx), lx, np.log(lx)])
    coef, *_ = np.linalg.lstsq(design, np.log(f), rcond=None)
    return float(coef[1]), float(coef[2])


@dataclass
class BoundCurve:
    x_grid: np.ndarray
    bound: np.ndarray
    ratio: np.ndarray
    log_bound: np.ndarray = field(repr=False, default=None)

    def rows(self):
        return zip(self.x_grid.tolist(), self.bound.tolist(), self.ratio.tolist())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "bound", "ratio"])
        for x, b, r in self.rows():
            w.writerow([f"{x:.17g}", f"{b:.17g}", f"{r:.17g}"])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "x": self.x_grid.tolist(),
            "bound": self.bound.tolist(),
            "ratio": [None if math.isnan(r) else r for r in self.ratio.tolist()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def bound_curve(spec: Subordinator, t: float, x_grid, p: float = 1.0) -> BoundCurve:
    x = np.asarray(x_grid, dtype=float)
    if x.ndim != 1 or x.size == 0 or np.any(np.diff(x) <= 0):
        raise DomainError("x_grid must be a non-empty strictly increasing 1-d array")
    lb = np.atleast_1d(log_chernoff_bound(spec, t, x, p))
    ratio = np.full_like(x, np.nan)
    big = x > 1
    ratio[big] = -lb[big] / (x[big] * np.log(x[big]))
    return BoundCurve(x, np.exp(lb), ratio, lb)


@dataclass
class IDDiagnosis:
    verdict: str
    slope_estimate: float
    ratio_tail: np.ndarray
    x_tail: np.ndarray
    log_coefficient: float
    curve: BoundCurve = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "slope_estimate": self.slope_estimate,
            "log_coefficient": self.log_coefficient,
            "x_tail": self.x_tail.tolist(),
            "ratio_tail": self.ratio_tail.tolist(),
        }


def diagnose_id(
    spec: Subordinator, t: float, x_grid, p: float = 1.0, margin: float = 0.1
) -> IDDiagnosis:
    """Classify the growth of ``-log P(E(t)**p > x)`` against ``x log x``.

    The verdict is ``NotInfinitelyDivisible`` when the Steutel ratio is
    increasing across the last decade of the grid and the fitted exponent
    over the top two decades exceeds ``1 + margin``; otherwise
    ``Inconclusive``. Only grid points with ``x > 1`` outside the trivial
    regime are used, and they must span at least three decades.
    """
    curve = bound_curve(spec, t, x_grid, p)
    x = curve.x_grid
    usable = (x > 1) & (curve.log_bound < 0)
    if usable.sum() < 4:
        raise DiagnosticError("grid lies inside the trivial-bound regime")
    xu = x[usable]
    if math.log10(xu[-1] / xu[0]) < 3 - 1e-9:
        raise DiagnosticError(
            f"usable grid spans {math.log10(xu[-1] / xu[0]):.2f} decades; need >= 3"
        )
    f = -curve.log_bound[usable]
    top = xu >= xu[-1] / 100.0
    slope, k = growth_exponent(xu[top], f[top])
    last = xu >= xu[-1] / 10.0
    ratio_tail = curve.ratio[usable][last]
    increasing = ratio_tail.size >= 2 and bool(np.all(np.diff(ratio_tail) > 0))
    verdict = NOT_ID if increasing and slope > 1.0 + margin else INCONCLUSIVE
    return IDDiagnosis(verdict, slope, ratio_tail, xu[last], k, curve)
