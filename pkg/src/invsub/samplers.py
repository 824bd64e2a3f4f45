"""Random variates for subordinators, their inverses and time-changed counts.

All samplers take a ``numpy.random.Generator`` (or anything accepted by
:func:`as_generator`) and an optional numpy-style ``size``. Reproducible
parallel batches are built with :func:`parallel_draws`, which maps chunks
onto disjoint :class:`RngStream` ids and concatenates them in id order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exponents import DomainError, Gamma, InverseGaussian, Stable, Subordinator, TemperedStable

# cells per block when stepping many paths at once (~32 MB of float64)
_MAX_CELLS = 1 << 22
MAX_GRID = 10**8
# tempered-stable rejection: expected tries per increment is exp(lam**alpha * dt)
TEMPER_LIMIT = 5.0
_MAX_TRIES = 10**9


@dataclass(frozen=True)
class RngStream:
    """``(seed, stream_id)`` names one independent PCG64 stream."""

    seed: int = 0
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v < 2**64:
                raise DomainError(f"{name} must be an integer in [0, 2**64), got {v!r}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng=None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if rng is None:
        return np.random.default_rng()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"cannot make a Generator from {type(rng).__name__}")


def parallel_draws(
    fn: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    seed: int = 0,
    streams: int = 1,
    workers: int = 1,
) -> np.ndarray:
    """Draw ``n`` values as ``streams`` chunks on disjoint stream ids.

    Chunk ``i`` always uses ``RngStream(seed, i)``, so the result depends on
    ``(seed, streams)`` but never on ``workers``.
    """
    if n < 0 or streams < 1 or workers < 1:
        raise DomainError("need n >= 0, streams >= 1, workers >= 1")
    sizes = [len(c) for c in np.array_split(np.arange(n), streams)]

    def run(i):
        return np.asarray(fn(RngStream(seed, i).generator(), sizes[i]))

    if workers == 1:
        parts = [run(i) for i in range(streams)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(streams)))
    return np.concatenate(parts) if parts else np.empty(0)


# -- subordinator increments --------------------------------------------------


def sample_stable_unit(alpha: float, rng=None, size=None):
    """Draw ``S_alpha(1)`` with ``E exp(-u S) = exp(-u**alpha)``.

    Kanter's representation: with ``U ~ Unif(0, pi)`` and ``W ~ Exp(1)``,
    ``S = sin(aU)/sin(U)**(1/a) * (sin((1-a)U)/W)**((1-a)/a)``.
    Evaluated in logs so small ``alpha`` does not overflow intermediates.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    rng = as_generator(rng)
    u = np.pi * (1.0 - rng.random(size))  # (0, pi]
    w = rng.standard_exponential(size)
    with np.errstate(divide="ignore", over="ignore"):
        logs = (
            np.log(np.sin(alpha * u))
            - np.log(np.sin(u)) / alpha
            + (1.0 - alpha) / alpha * (np.log(np.sin((1.0 - alpha) * u)) - np.log(w))
        )
        return np.exp(logs)


def _sample_ig(mu, shape, rng, size):
    # Michael, Schucany & Haas transformation; written without cancellation
    y = rng.standard_normal(size) ** 2
    my = mu * y
    root = np.sqrt(my * my + 4.0 * mu * shape * y)
    x = 4.0 * mu * mu * shape * y / (my + root) ** 2
    x = np.where(y == 0, mu, x)
    flip = rng.random(size) * (mu + x) > mu
    return np.where(flip, mu * mu / x, x)


def _sample_tempered(spec: TemperedStable, dt, rng, size):
    alpha, lam = spec.alpha, spec.lam
    scale = dt ** (1.0 / alpha)
    if lam == 0:
        return scale * sample_stable_unit(alpha, rng, size)
    if lam**alpha * dt > math.log(_MAX_TRIES):
        raise DomainError(
            f"tempered rejection would need ~exp({lam**alpha * dt:.3g}) tries per draw; use a smaller dt"
        )
    shape = () if size is None else size
    out = np.empty(shape)
    flat = out.reshape(-1)
    pending = np.arange(flat.size)
    tries = 0
    while pending.size:
        s = scale * sample_stable_unit(alpha, rng, pending.size)
        keep = rng.random(pending.size) < np.exp(-lam * s)
        flat[pending[keep]] = s[keep]
        pending = pending[~keep]
        tries += 1
        if tries > _MAX_TRIES:
            raise DomainError("tempered rejection loop exceeded its iteration cap; use a smaller dt")
    return out.item() if size is None else out


def sample_increment(spec: Subordinator, dt: float, rng=None, size=None):
    """Draw ``T(dt)`` (equivalently any increment over a step of length ``dt``)."""
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt!r}")
    rng = as_generator(rng)
    if isinstance(spec, Stable):
        return dt ** (1.0 / spec.alpha) * sample_stable_unit(spec.alpha, rng, size)
    if isinstance(spec, TemperedStable):
        return _sample_tempered(spec, dt, rng, size)
    if isinstance(spec, InverseGaussian):
        scale = spec.delta * dt
        if spec.gamma == 0:
            # Levy law: E exp(-u X) = exp(-scale * sqrt(2u))
            z = rng.standard_normal(size)
            with np.errstate(divide="ignore"):
                return scale * scale / (z * z)
        return _sample_ig(scale / spec.gamma, scale * scale, rng, size)
    if isinstance(spec, Gamma):
        return rng.gamma(spec.a * dt, 1.0 / spec.b, size)
    raise DomainError(f"no sampler for {spec!r}")


# -- paths and first passage --------------------------------------------------


@dataclass
class SamplePath:
    """Subordinator on a uniform grid: ``values[k] = T(k * dt)``."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if v.ndim != 1 or v.size == 0 or v[0] != 0:
            raise DomainError("values must be 1-d and start at 0")
        if not np.all(np.isfinite(v)) or np.any(np.diff(v) < 0):
            raise DomainError("values must be finite and nondecreasing")
        self.values = v

    @property
    def horizon(self) -> float:
        return self.dt * (self.values.size - 1)


@dataclass
class PassageBracket:
    """``E(t)`` lies in ``[lower, upper]``.

    ``exceeded`` is False when the path never rose above ``t``; then both
    ends equal the horizon and the caller has to extend it. Fields are
    scalars for a single draw and arrays for a batch.
    """

    lower: np.ndarray | float
    upper: np.ndarray | float
    exceeded: np.ndarray | bool

    @property
    def midpoint(self):
        mid = 0.5 * (np.asarray(self.lower) + np.asarray(self.upper))
        return float(mid) if mid.ndim == 0 else mid


def _check_step(spec, dt):
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt!r}")
    if isinstance(spec, TemperedStable) and spec.lam**spec.alpha * dt > TEMPER_LIMIT:
        raise DomainError(
            f"dt={dt!r} too large for tempered rejection: need lam**alpha * dt <= {TEMPER_LIMIT}"
        )


def simulate_path(spec: Subordinator, horizon: float, dt: float, rng=None) -> SamplePath:
    _check_step(spec, dt)
    if not horizon > 0:
        raise DomainError("horizon must be positive")
    steps = int(math.ceil(horizon / dt - 1e-9))
    if steps + 1 > MAX_GRID:
        raise DomainError(f"grid of {steps + 1} points exceeds the cap of {MAX_GRID}")
    inc = sample_increment(spec, dt, as_generator(rng), steps)
    values = np.concatenate([[0.0], np.cumsum(inc)])
    return SamplePath(dt, values)


def first_passage(path: SamplePath, t: float) -> PassageBracket:
    """Bracket ``E(t) = inf{s : T(s) > t}`` on the path's grid."""
    k = int(np.searchsorted(path.values, t, side="right"))
    if k >= path.values.size:
        return PassageBracket(path.horizon, path.horizon, False)
    if k == 0:
        return PassageBracket(0.0, 0.0, True)
    return PassageBracket((k - 1) * path.dt, k * path.dt, True)


def _first_exceedance(draw, level, max_steps):
    """Step many random walks until each rises strictly above its level.

    ``draw(shape)`` returns nonnegative increments. Returns ``(k, before,
    after)``: the 1-based index of the first partial sum above the level and
    the partial sums at ``k - 1`` and ``k``. Block length doubles per round,
    which plays the role of horizon doubling for a whole batch.
    """
    level = np.asarray(level, dtype=float)
    n = level.size
    k = np.zeros(n, dtype=np.int64)
    before = np.zeros(n)
    after = np.zeros(n)
    pos = np.zeros(n)
    active = np.arange(n)
    done = 0
    block = 16
    while active.size:
        width = max(1, min(block, _MAX_CELLS // active.size))
        cs = np.cumsum(draw((active.size, width)), axis=1)
        cs += pos[active, None]
        hit = cs > level[active, None]
        crossed = hit[:, -1]
        if crossed.any():
            rows = active[crossed]
            j = np.argmax(hit[crossed], axis=1)
            sub = cs[crossed]
            idx = np.arange(rows.size)
            k[rows] = done + j + 1
            after[rows] = sub[idx, j]
            before[rows] = np.where(j > 0, sub[idx, np.maximum(j - 1, 0)], pos[rows])
        stay = ~crossed
        pos[active[stay]] = cs[stay, -1]
        active = active[stay]
        done += width
        block *= 2
        if active.size and done >= max_steps:
            raise DomainError(f"no passage within {max_steps} steps; horizon cap reached")
    return k, before, after


def _gamma_bridge_refine(spec: Gamma, t, coarse, levels, k, before, after, rng):
    """Halve gamma-process crossing intervals ``levels`` times.

    Given ``T(s0)`` and ``T(s0 + h)``, the midpoint value is
    ``T(s0) + (T(s0+h) - T(s0)) * Beta(a h/2, a h/2)``, so bisection yields
    the same fine-grid crossing index as stepping at ``coarse / 2**levels``.
    """
    lo_s = (k - 1) * coarse
    lo_v, hi_v = before.copy(), after.copy()
    width = coarse
    for _ in range(levels):
        width /= 2.0
        shp = spec.a * width
        frac = rng.beta(shp, shp, lo_v.size)
        mid = lo_v + (hi_v - lo_v) * frac
        up = mid > t
        hi_v = np.where(up, mid, hi_v)
        lo_v = np.where(up, lo_v, mid)
        lo_s = np.where(up, lo_s, lo_s + width)
    return lo_s


def sample_inverse_subordinator(spec: Subordinator, t: float, dt: float, rng=None, size=None) -> PassageBracket:
    """Bracket draws of ``E(t)`` with width ``dt``; report ``.midpoint``.

    Paths are stepped at ``dt``. For the gamma family the walk is stepped
    at ``dt * 2**m`` and then refined by gamma-bridge bisection, which is
    exact on the ``dt`` grid and much cheaper.
    """
    _check_step(spec, dt)
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    rng = as_generator(rng)
    n = 1 if size is None else int(np.prod(size))
    max_steps = MAX_GRID
    if t == 0:
        # all four families are strictly increasing, so E(0) = 0
        lower = np.zeros(n)
    elif isinstance(spec, Gamma):
        target = max(t * spec.b / spec.a, 1.0) / 64.0
        levels = int(min(40, max(0, math.floor(math.log2(target / dt)))))
        coarse = dt * 2.0**levels
        k, before, after = _first_exceedance(
            lambda shp: sample_increment(spec, coarse, rng, shp), np.full(n, float(t)), max_steps
        )
        lower = _gamma_bridge_refine(spec, t, coarse, levels, k, before, after, rng)
    else:
        k, _, _ = _first_exceedance(
            lambda shp: sample_increment(spec, dt, rng, shp), np.full(n, float(t)), max_steps
        )
        lower = (k - 1) * dt
    upper = lower + dt
    if size is None:
        return PassageBracket(float(lower[0]), float(upper[0]), True)
    return PassageBracket(lower.reshape(size), upper.reshape(size), np.ones(size, dtype=bool))


# -- inverse stable and compositions ------------------------------------------


def sample_inverse_stable_exact(alpha: float, t, rng=None, size=None):
    """Exact draw of ``E_alpha(t)`` as ``(t / S_alpha(1))**alpha``.

    ``t`` may be an array (one time per draw), which is how compositions
    and random time changes are evaluated.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t must be >= 0")
    if size is None and t_arr.ndim:
        size = t_arr.shape
    s = sample_stable_unit(alpha, rng, size)
    return (t_arr / s) ** alpha


def sample_composed_iss(alphas: Sequence[float], t, rng=None, size=None):
    """``E_{a1}(E_{a2}(... E_{an}(t)))`` with independent clocks."""
    alphas = list(alphas)
    if not alphas:
        raise DomainError("alphas must be non-empty")
    rng = as_generator(rng)
    e = sample_inverse_stable_exact(alphas[-1], t, rng, size)
    for a in reversed(alphas[:-1]):
        e = sample_inverse_stable_exact(a, e, rng)
    return e


def sample_outer_clock(spec: Subordinator | None, t: float, dt: float, rng, size=None):
    """Draw ``T(t)`` for a finite-mean subordinator (``None`` means ``T(t) = t``)."""
    if spec is None:
        return np.full(size, float(t)) if size is not None else float(t)
    if isinstance(spec, Stable) or (isinstance(spec, TemperedStable) and spec.lam == 0):
        raise DomainError("outer clock must have finite mean; stable clocks do not")
    if isinstance(spec, TemperedStable):
        _check_step(spec, dt)
        steps = int(math.ceil(t / dt - 1e-9))
        h = t / steps
        shape = (1 if size is None else int(np.prod(size)), steps)
        total = np.zeros(shape[0])
        rows = max(1, _MAX_CELLS // steps)
        for i in range(0, shape[0], rows):
            m = min(rows, shape[0] - i)
            total[i : i + m] = sample_increment(spec, h, rng, (m, steps)).sum(axis=1)
        return total.item() if size is None else total.reshape(size)
    return sample_increment(spec, t, rng, size)


def sample_time_changed_iss(alpha: float, outer_spec: Subordinator | None, t: float, dt: float = 1.0, rng=None, size=None):
    """Draw ``E_alpha(T(t))`` with ``T`` independent of ``E_alpha``.

    Gamma, inverse Gaussian and ``None`` clocks use the exact marginal of
    ``T(t)``; tempered stable clocks sum increments over a grid of step at
    most ``dt``.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    rng = as_generator(rng)
    clock = sample_outer_clock(outer_spec, t, dt, rng, size)
    return sample_inverse_stable_exact(alpha, clock, rng, size)


# -- renewal counts -----------------------------------------------------------


@dataclass(frozen=True)
class WaitingTime:
    """Inter-arrival law of a renewal process.

    ``kind`` is ``"exponential"`` (``rate``), ``"deterministic"`` (``c``) or
    ``"gamma"`` (``shape``, ``scale``).
    """

    kind: str
    a: float
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exponential", "deterministic", "gamma"):
            raise DomainError(f"unknown waiting-time law {self.kind!r}")
        if not (self.a > 0 and self.b > 0):
            raise DomainError("waiting-time parameters must be positive")

    @classmethod
    def exponential(cls, rate: float) -> "WaitingTime":
        return cls("exponential", rate)

    @classmethod
    def deterministic(cls, c: float) -> "WaitingTime":
        return cls("deterministic", c)

    @classmethod
    def gamma(cls, shape: float, scale: float) -> "WaitingTime":
        return cls("gamma", shape, scale)

    @property
    def mean(self) -> float:
        if self.kind == "exponential":
            return 1.0 / self.a
        if self.kind == "deterministic":
            return self.a
        return self.a * self.b

    def sample(self, rng, size):
        if self.kind == "exponential":
            return rng.exponential(1.0 / self.a, size)
        if self.kind == "deterministic":
            return np.full(size, self.a)
        return rng.gamma(self.a, self.b, size)


def sample_renewal_count(waiting: WaitingTime, t, rng=None, size=None):
    """``N(t) = max{i : W_1 + ... + W_i <= t}``; ``t`` may be an array."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t must be >= 0")
    if size is not None:
        t_arr = np.broadcast_to(t_arr, size)
    if waiting.kind == "deterministic":
        counts = np.floor(t_arr / waiting.a).astype(np.int64)
    else:
        rng = as_generator(rng)
        flat = t_arr.reshape(-1)
        k, _, _ = _first_exceedance(lambda shp: waiting.sample(rng, shp), flat, MAX_GRID)
        counts = (k - 1).reshape(t_arr.shape)
    return int(counts) if counts.ndim == 0 else counts


def sample_fractional_poisson(lam: float, alpha: float, t, rng=None, size=None):
    """``M(E_alpha(t))`` for a rate-``lam`` Poisson process ``M``.

    ``alpha = 1`` uses the identity clock and returns ordinary Poisson counts.
    """
    if not lam > 0:
        raise DomainError("lam must be positive")
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    rng = as_generator(rng)
    if alpha == 1:
        clock = np.broadcast_to(np.asarray(t, dtype=float), () if size is None else size)
        if np.any(clock < 0):
            raise DomainError("t must be >= 0")
    else:
        clock = sample_inverse_stable_exact(alpha, t, rng, size)
    counts = rng.poisson(lam * clock)
    return int(counts) if np.ndim(counts) == 0 else counts
