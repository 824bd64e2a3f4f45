"""Laplace exponents of driftless subordinators.

Each family is a small frozen record. ``psi``, ``psi_prime`` and
``psi_prime_inverse`` evaluate the closed forms; ``psi_prime_inverse_numeric``
is an independent bisection used to cross-check them.

Parameterisations (``E exp(-u T(t)) = exp(-t psi(u))``)::

    Stable(alpha)             psi(u) = u**alpha
    TemperedStable(alpha, lam) psi(u) = (u + lam)**alpha - lam**alpha
    InverseGaussian(delta, gamma) psi(u) = delta * (sqrt(2u + gamma**2) - gamma)
    Gamma(a, b)               psi(u) = a * log(1 + u / b)
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class OutOfDomain(DomainError):
    """``psi_prime_inverse`` called with ``v >= v_sup``.

    The Chernoff optimiser treats this as the trivial-bound regime.
    """


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _check_index(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


class Subordinator:
    """Base class for the subordinator families.

    Subclasses implement ``_psi``, ``_dpsi`` and ``_dpsi_inv`` on numpy
    arrays; the module-level functions do the argument checking.
    """

    family: str = ""

    @property
    def v_sup(self) -> float:
        """Supremum of ``psi'`` on (0, inf), i.e. ``psi'(0+) = E T(1)``."""
        raise NotImplementedError

    @property
    def params(self) -> dict:
        raise NotImplementedError

    def _psi(self, u):
        raise NotImplementedError

    def _dpsi(self, u):
        raise NotImplementedError

    def _dpsi_inv(self, v):
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self) -> str:
        return self.family + ":" + ",".join(repr(v) for v in self.params.values())


@dataclass(frozen=True)
class Stable(Subordinator):
    alpha: float
    family = "stable"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_index(self.alpha))

    @property
    def v_sup(self) -> float:
        return math.inf

    @property
    def params(self) -> dict:
        return {"alpha": self.alpha}

    def _psi(self, u):
        return u**self.alpha

    def _dpsi(self, u):
        return self.alpha * u ** (self.alpha - 1.0)

    def _dpsi_inv(self, v):
        return (v / self.alpha) ** (1.0 / (self.alpha - 1.0))


@dataclass(frozen=True)
class TemperedStable(Subordinator):
    """Exponentially tempered stable subordinator.

    ``lam = 0`` is accepted and reproduces :class:`Stable` exactly; it exists
    for testing the reduction.
    """

    alpha: float
    lam: float
    family = "tempered"

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_index(self.alpha))
        lam = float(self.lam)
        if not (lam >= 0 and math.isfinite(lam)):
            raise DomainError(f"lam must be >= 0 and finite, got {lam!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def v_sup(self) -> float:
        if self.lam == 0:
            return math.inf
        return self.alpha * self.lam ** (self.alpha - 1.0)

    @property
    def params(self) -> dict:
        return {"alpha": self.alpha, "lambda": self.lam}

    def _psi(self, u):
        if self.lam == 0:
            return u**self.alpha
        # expm1/log1p keep relative accuracy for u << lam
        lam = self.lam
        return lam**self.alpha * np.expm1(self.alpha * np.log1p(u / lam))

    def _dpsi(self, u):
        return self.alpha * (u + self.lam) ** (self.alpha - 1.0)

    def _dpsi_inv(self, v):
        if self.lam == 0:
            return (v / self.alpha) ** (1.0 / (self.alpha - 1.0))
        lam = self.lam
        return lam * np.expm1(np.log(v / self.alpha) / (self.alpha - 1.0) - np.log(lam))


@dataclass(frozen=True)
class InverseGaussian(Subordinator):
    delta: float
    gamma: float
    family = "ig"

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_positive("delta", self.delta))
        gamma = float(self.gamma)
        if not (gamma >= 0 and math.isfinite(gamma)):
            raise DomainError(f"gamma must be >= 0 and finite, got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def v_sup(self) -> float:
        return math.inf if self.gamma == 0 else self.delta / self.gamma

    @property
    def params(self) -> dict:
        return {"delta": self.delta, "gamma": self.gamma}

    def _psi(self, u):
        g = self.gamma
        root = np.sqrt(2.0 * u + g * g)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = self.delta * 2.0 * u / (root + g)
        return np.where(u == 0, 0.0, out)

    def _dpsi(self, u):
        return self.delta / np.sqrt(2.0 * u + self.gamma**2)

    def _dpsi_inv(self, v):
        r = self.delta / v
        return 0.5 * (r - self.gamma) * (r + self.gamma)


@dataclass(frozen=True)
class Gamma(Subordinator):
    """Gamma subordinator: ``T(t) ~ Gamma(shape=a*t, rate=b)``."""

    a: float
    b: float
    family = "gamma"

    def __post_init__(self):
        object.__setattr__(self, "a", _check_positive("a", self.a))
        object.__setattr__(self, "b", _check_positive("b", self.b))

    @property
    def v_sup(self) -> float:
        return self.a / self.b

    @property
    def params(self) -> dict:
        return {"a": self.a, "b": self.b}

    def _psi(self, u):
        return self.a * np.log1p(u / self.b)

    def _dpsi(self, u):
        return self.a / (self.b + u)

    def _dpsi_inv(self, v):
        return self.a / v - self.b


FAMILIES = {
    "stable": (Stable, ("alpha",)),
    "tempered": (TemperedStable, ("alpha", "lambda")),
    "ig": (InverseGaussian, ("delta", "gamma")),
    "gamma": (Gamma, ("a", "b")),
}


def make_spec(family: str, *args: float) -> Subordinator:
    try:
        cls, names = FAMILIES[family]
    except KeyError:
        raise DomainError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}") from None
    if len(args) != len(names):
        raise DomainError(f"{family} takes {len(names)} parameter(s) {names}, got {len(args)}")
    return cls(*args)


def spec_from_dict(obj: dict) -> Subordinator:
    """Build a spec from ``{"family": ..., "params": {...}}``."""
    try:
        family = obj["family"]
        params = obj.get("params", {})
        names = FAMILIES[family][1]
    except (KeyError, TypeError, AttributeError):
        raise DomainError(f"malformed spec object: {obj!r}") from None
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(f"spec {family!r} missing parameter(s) {missing}")
    extra = sorted(set(params) - set(names))
    if extra:
        raise DomainError(f"spec {family!r} has unknown parameter(s) {extra}")
    return make_spec(family, *(params[n] for n in names))


def spec_from_json(text: str) -> Subordinator:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"spec is not valid JSON: {exc}") from None
    return spec_from_dict(obj)


def parse_spec(text: str) -> Subordinator:
    """Parse ``family:p1,p2`` or a JSON object into a spec.

    >>> parse_spec("gamma:1,2")
    Gamma(a=1.0, b=2.0)
    """
    text = text.strip()
    if text.startswith("{"):
        return spec_from_json(text)
    family, _, rest = text.partition(":")
    try:
        args = [float(p) for p in rest.split(",")] if rest else []
    except ValueError:
        raise DomainError(f"cannot parse spec parameters in {text!r}") from None
    return make_spec(family.strip().lower(), *args)


def _as_real(u, name="u"):
    arr = np.asarray(u, dtype=float)
    if np.isnan(arr).any():
        raise DomainError(f"{name} contains NaN")
    return arr


def _ret(arr: np.ndarray, like):
    return arr.item() if np.ndim(like) == 0 else arr


def psi(spec: Subordinator, u: ArrayLike) -> ArrayLike:
    """Laplace exponent ``psi(u)``; ``psi(0) == 0`` exactly.

    Complex ``u`` is evaluated on the principal branch (used by the
    Laplace inversion in :mod:`invsub.density`); real ``u`` must be >= 0.
    """
    if np.iscomplexobj(u):
        return spec._psi(np.asarray(u, dtype=complex))
    arr = _as_real(u)
    if (arr < 0).any():
        raise DomainError("psi is defined for u >= 0")
    return _ret(np.asarray(spec._psi(arr), dtype=float), u)


def psi_prime(spec: Subordinator, u: ArrayLike) -> ArrayLike:
    arr = _as_real(u)
    if (arr <= 0).any():
        raise DomainError("psi_prime is defined for u > 0")
    return _ret(np.asarray(spec._dpsi(arr), dtype=float), u)


def psi_prime_inverse(spec: Subordinator, v: ArrayLike) -> ArrayLike:
    """Unique ``u > 0`` with ``psi'(u) = v``.

    Raises
    ------
    OutOfDomain
        If any ``v >= spec.v_sup``.
    DomainError
        If any ``v <= 0``.
    """
    arr = _as_real(v, "v")
    if (arr <= 0).any():
        raise DomainError("psi_prime_inverse requires v > 0")
    if (arr >= spec.v_sup).any():
        raise OutOfDomain(f"v must be < v_sup = {spec.v_sup!r} for {spec}")
    return _ret(np.asarray(spec._dpsi_inv(arr), dtype=float), v)


def psi_prime_inverse_numeric(spec: Subordinator, v: float, rtol: float = 1e-15) -> float:
    """Invert ``psi'`` by bisection in ``log u``.

    Only uses ``psi'`` and its monotonicity, so it is an independent check
    on the closed forms. The bracket starts at [1/2, 2] and is expanded
    geometrically; failure to find ``psi'(lo) > v`` means ``v >= v_sup``.
    """
    v = float(v)
    if not v > 0:
        raise DomainError("psi_prime_inverse_numeric requires v > 0")
    f = lambda u: float(spec._dpsi(np.float64(u))) - v  # decreasing in u
    lo, hi = 0.5, 2.0
    while f(lo) <= 0:
        lo *= 1e-3
        if lo < 1e-300:
            raise OutOfDomain(f"no root: v={v!r} is not below psi'(0+) for {spec}")
    while f(hi) >= 0:
        hi *= 1e3
        if hi > 1e300:
            raise DomainError(f"bracket expansion failed for v={v!r}")
    for _ in range(400):
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi:
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi / lo - 1.0 < rtol:
            break
    return math.sqrt(lo * hi)


class LaplaceTriple(NamedTuple):
    spec: Subordinator
    psi: Callable
    psi_prime: Callable
    psi_prime_inverse: Callable
    v_sup: float


def laplace_triple(spec: Subordinator) -> LaplaceTriple:
    return LaplaceTriple(
        spec,
        lambda u: psi(spec, u),
        lambda u: psi_prime(spec, u),
        lambda v: psi_prime_inverse(spec, v),
        spec.v_sup,
    )
