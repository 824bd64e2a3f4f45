"""Empirical distribution tools used to check distributional identities."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.stats import kstwobign

from .bounds import chernoff_bound, growth_exponent
from .exponents import DomainError, Subordinator


class ExhaustedTail(DomainError):
    """No sample value lies above the requested level."""


@dataclass
class EmpiricalSample:
    """Sorted, NaN-free draws."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise DomainError("empirical sample must be non-empty")
        if np.isnan(v).any():
            raise DomainError("empirical sample contains NaN")
        self.values = np.sort(v)

    @property
    def n(self) -> int:
        return self.values.size

    def ecdf(self, x):
        return ecdf(self, x)

    def tail(self, x):
        """``P(X > x)`` under the empirical law."""
        return 1.0 - ecdf(self, x)


def as_sample(data) -> EmpiricalSample:
    return data if isinstance(data, EmpiricalSample) else EmpiricalSample(data)


def ecdf(sample, x):
    """Right-continuous empirical CDF: fraction of values ``<= x``."""
    s = as_sample(sample)
    out = np.searchsorted(s.values, x, side="right") / s.n
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class KSResult:
    statistic: float
    p_value: float
    n_effective: float

    def passes(self, level: float) -> bool:
        return self.p_value >= level


def ks_two_sample(a, b) -> KSResult:
    """Two-sample Kolmogorov-Smirnov test.

    The statistic is the exact sup-distance between the two ECDFs over the
    pooled points; the p-value is the asymptotic Kolmogorov tail at
    ``sqrt(n_a n_b / (n_a + n_b)) * D``.
    """
    a, b = as_sample(a), as_sample(b)
    pooled = np.concatenate([a.values, b.values])
    d = float(np.max(np.abs(ecdf(a, pooled) - ecdf(b, pooled))))
    ne = a.n * b.n / (a.n + b.n)
    p = float(kstwobign.sf(math.sqrt(ne) * d))
    return KSResult(d, min(max(p, 0.0), 1.0), ne)


def empirical_steutel_ratio(sample, x):
    """``-log(1 - F_n(x)) / (x log x)`` for ``x > 1``.

    Raises :class:`ExhaustedTail` where no draw exceeds ``x``.
    """
    s = as_sample(sample)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 1):
        raise DomainError("empirical_steutel_ratio requires x > 1")
    tail = s.tail(xa)
    if np.any(tail <= 0):
        raise ExhaustedTail("tail exhausted: shrink x or draw more samples")
    r = -np.log(tail) / (xa * np.log(xa))
    return float(r) if r.ndim == 0 else r


def resolved_levels(sample, x_grid, min_count: int = 100) -> np.ndarray:
    """Grid points with ``x > 1`` and at least ``min_count`` draws above them."""
    s = as_sample(sample)
    x = np.asarray(x_grid, dtype=float)
    above = s.n - np.searchsorted(s.values, x, side="right")
    return x[(x > 1) & (above >= min_count)]


def empirical_growth_exponent(sample, x_grid, min_count: int = 100) -> tuple[float, np.ndarray]:
    """Growth exponent of ``-log(1 - F_n(x))`` on the resolved part of the grid.

    Uses the same ``log log x``-augmented fit as the bound diagnostic.
    Returns the exponent and the levels that entered the fit.
    """
    s = as_sample(sample)
    x = resolved_levels(s, x_grid, min_count)
    if x.size < 4:
        raise ExhaustedTail("fewer than 4 resolved levels")
    f = -np.log(s.tail(x))
    return growth_exponent(x, f)[0], x


@dataclass
class DominanceReport:
    x: np.ndarray
    empirical: np.ndarray
    bound: np.ndarray
    allowance: np.ndarray
    n: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x": self.x.tolist(),
            "empirical_tail": self.empirical.tolist(),
            "bound": self.bound.tolist(),
            "allowance": self.allowance.tolist(),
            "violations": self.violations,
            "pass": self.ok,
        }


def check_tail_dominance(sample, spec: Subordinator, t: float, x_grid, n_se: float = 4.0) -> DominanceReport:
    """Flag grid levels where the empirical tail of ``E(t)`` beats the bound.

    A level is a violation when ``tail > bound + n_se * sqrt(bound (1 - bound) / n)``.
    Levels in the trivial regime (bound 1) cannot be violated.
    """
    s = as_sample(sample)
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    emp = np.atleast_1d(s.tail(x))
    b = np.atleast_1d(chernoff_bound(spec, t, x))
    allow = b + n_se * np.sqrt(b * (1.0 - b) / s.n)
    bad = [float(xi) for xi, e, a in zip(x, emp, allow) if e > a]
    return DominanceReport(x, emp, b, allow, s.n, bad)


@dataclass
class CheckReport:
    """One pass/fail line: ``{test, n, statistic, p_value, pass}``."""

    test: str
    n: int
    statistic: float
    p_value: float
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if not d["note"]:
            d.pop("note")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def ks_report(test: str, a, b, level: float, note: str = "") -> CheckReport:
    r = ks_two_sample(a, b)
    n = min(as_sample(a).n, as_sample(b).n)
    return CheckReport(test, n, r.statistic, r.p_value, bool(r.passes(level)), note)
