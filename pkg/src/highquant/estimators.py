"""Three-order-statistic GW, log-GW and GP (Pickands-type) quantile estimators.

All three use order statistics ``X_{n-k_m+1,n}`` for ``m = 0, 1, 2`` with
``k_2 < k_1 < k_0``:

* GW / log-GW: ``k_j = floor((k_2/n)**(iota**(j-2)) * n)`` so the levels
  ``log(n/k_m)`` are (up to flooring) ``y_n * iota**m``;
* GP: ``k_j = floor(k_2 * iota**(2-j))`` so the levels are
  ``y_n + m * log(iota)``.

``y_n = log(n / k_0)`` is the common anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from . import asymptotics
from .approx import prob_error, spacing_slope
from .core import h
from .errors import ConfigurationError, DegenerateSpacing, DomainError, NonpositiveThreshold
from .models import TailModel

__all__ = [
    "KSchedule",
    "TailEstimate",
    "StabilityPoint",
    "make_schedule",
    "default_schedule",
    "select_order_stats",
    "estimate",
    "estimate_from_order_stats",
    "estimate_gw",
    "estimate_loggw",
    "estimate_gp",
    "quantile_at",
    "nu_hat",
    "stability_profile",
    "plugin_order_stats",
    "plugin_sample",
]

Family = Literal["GW", "logGW", "GP"]
FAMILIES = ("GW", "logGW", "GP")

# values within this relative distance of an integer are treated as that integer
# before floor/ceil, so that e.g. (16/65536)**0.25 * 65536 lands on 8192
_INT_SNAP = 1e-9


def _snap(v: float) -> float:
    r = round(v)
    return float(r) if abs(v - r) <= _INT_SNAP * max(1.0, abs(v)) else v


def _floor(v: float) -> int:
    return int(math.floor(_snap(v)))


def _ceil(v: float) -> int:
    return int(math.ceil(_snap(v)))


@dataclass(frozen=True)
class KSchedule:
    """Ranks of the three order statistics and the anchor level ``y_n``."""

    iota: float
    n: int
    k2: int
    k1: int
    k0: int
    y_n: float
    eta: float = 1.0
    rule: Literal["gw", "gp"] = "gw"

    @property
    def ks(self) -> tuple[int, int, int]:
        return (self.k0, self.k1, self.k2)

    def level(self, m: int) -> float:
        """Nominal ``y``-level of ``X_{n-k_m+1,n}``."""
        if self.rule == "gw":
            return self.y_n * self.iota**m
        return self.y_n + m * math.log(self.iota)


def _validate(iota, n, k2, k1, k0):
    if not iota > 1:
        raise ConfigurationError(f"iota must exceed 1, got {iota!r}")
    if n < 2:
        raise ConfigurationError(f"n must be >= 2, got {n!r}")
    if k2 < 1:
        raise ConfigurationError(f"schedule collapse: k2={k2} < 1 (n={n})")
    if not k2 < k1:
        raise ConfigurationError(f"schedule collapse: k2={k2} >= k1={k1} (n={n}, iota={iota})")
    if not k1 < k0:
        raise ConfigurationError(f"schedule collapse: k1={k1} >= k0={k0} (n={n}, iota={iota})")
    if not k0 <= n - 1:
        raise ConfigurationError(f"schedule collapse: k0={k0} > n-1={n - 1}")


def make_schedule(
    n: int, k2: int, iota: float = 2.0, eta: float = 1.0, rule: Literal["gw", "gp"] = "gw"
) -> KSchedule:
    """Derive ``k1, k0, y_n`` from ``k2`` after the threshold shift ``eta``.

    ``eta < 1`` replaces ``k2`` by ``ceil(n * (k2/n)**eta)`` (a lower
    threshold) before the other ranks are derived.
    """
    if not 0 < eta <= 1:
        raise ConfigurationError(f"eta must lie in (0, 1], got {eta!r}")
    if eta != 1.0:
        k2 = _ceil(n * (k2 / n) ** eta)
    if rule == "gw":
        k1 = _floor((k2 / n) ** (1.0 / iota) * n)
        k0 = _floor((k2 / n) ** (1.0 / (iota * iota)) * n)
    elif rule == "gp":
        k1 = _floor(k2 * iota)
        k0 = _floor(k2 * iota * iota)
    else:
        raise ConfigurationError(f"unknown schedule rule {rule!r}")
    _validate(iota, n, k2, k1, k0)
    return KSchedule(iota, n, k2, k1, k0, math.log(n / k0), eta, rule)


def default_schedule(
    n: int, iota: float = 2.0, eta: float = 1.0, rule: Literal["gw", "gp"] = "gw"
) -> KSchedule:
    """Default schedule ``k2 = floor(n**(1/4))``.

    With ``iota = 2`` this gives ``k0 = floor(n**(13/16))`` at ``n = 2**(4j)``.
    The GP rule starts from the GW threshold ``k0`` and sets
    ``k2 = floor(k0 / iota**2)``; its own ``k0`` is then ``floor(k2 * iota**2)``,
    equal to the GW one when ``iota**2`` divides it and slightly smaller
    otherwise, so both estimators use (nearly) the same threshold.
    """
    if n < 32:
        raise ConfigurationError(f"default_schedule needs n >= 32, got {n}")
    base = make_schedule(n, _floor(n**0.25), iota, eta, "gw")
    if rule == "gw":
        return base
    if rule != "gp":
        raise ConfigurationError(f"unknown schedule rule {rule!r}")
    return make_schedule(n, max(1, _floor(base.k0 / (iota * iota))), iota, 1.0, "gp")


def select_order_stats(sample: Sequence[float], ks: Sequence[int]) -> tuple[list[float], float]:
    """Return the ``k``-th largest values for each ``k`` in ``ks`` and the maximum.

    Uses introselect (``numpy.partition``), linear expected time.
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n == 0:
        raise DomainError("empty sample")
    ks = [int(k) for k in ks]
    for k in ks:
        if not 1 <= k <= n:
            raise DomainError(f"rank k={k} out of range for n={n}")
    kth = sorted({n - k for k in ks} | {n - 1})
    part = np.partition(x, kth)
    return [float(part[n - k]) for k in ks], float(part[n - 1])


@dataclass(frozen=True)
class TailEstimate:
    """Estimated index and scale plus the order statistics they came from."""

    family: Family
    rho_hat: float
    g_hat: float
    x_k0: float
    x_k1: float
    x_k2: float
    schedule: KSchedule
    sample_max: float

    @property
    def y_n(self) -> float:
        return self.schedule.y_n

    def quantile(self, z: float, floor_at_max: bool = False) -> float:
        return quantile_at(self, z, floor_at_max)


def estimate_from_order_stats(
    family: Family,
    x_k0: float,
    x_k1: float,
    x_k2: float,
    sched: KSchedule,
    sample_max: Optional[float] = None,
) -> TailEstimate:
    """Estimator from the three order statistics ``x_k0 <= x_k1 <= x_k2``."""
    if sample_max is None:
        sample_max = x_k2
    iota = sched.iota
    if family in ("GW", "GP"):
        if family == "GP" and sched.rule != "gp":
            raise ConfigurationError("GP estimator needs a schedule with rule='gp'")
        if family == "GW" and sched.rule != "gw":
            raise ConfigurationError("GW estimator needs a schedule with rule='gw'")
        if not x_k0 < x_k1 < x_k2:
            raise DegenerateSpacing(f"order statistics not strictly increasing: {x_k0}, {x_k1}, {x_k2}")
        rho = spacing_slope(x_k0, x_k1, x_k2, iota)
        g = (x_k1 - x_k0) / h(rho, iota)
    elif family == "logGW":
        if sched.rule != "gw":
            raise ConfigurationError("log-GW estimator needs a schedule with rule='gw'")
        if not x_k0 > 0:
            raise NonpositiveThreshold(
                f"threshold order statistic X_(n-k0+1)={x_k0!r} is not positive; "
                "shift the data by a positive constant before log-GW estimation"
            )
        if not x_k0 < x_k1 < x_k2:
            raise DegenerateSpacing(f"order statistics not strictly increasing: {x_k0}, {x_k1}, {x_k2}")
        d_lo = math.log(x_k1 / x_k0)
        d_hi = math.log(x_k2 / x_k1)
        if d_lo <= 0 or d_hi <= 0:
            raise DegenerateSpacing("log-spacings vanish in floating point")
        rho = (math.log(d_hi) - math.log(d_lo)) / math.log(iota)
        g = d_lo / h(rho, iota)
    else:
        raise ConfigurationError(f"unknown estimator family {family!r}")
    return TailEstimate(family, rho, g, x_k0, x_k1, x_k2, sched, float(sample_max))


def estimate(sample: Sequence[float], sched: KSchedule, family: Family) -> TailEstimate:
    (x0, x1, x2), xmax = select_order_stats(sample, sched.ks)
    return estimate_from_order_stats(family, x0, x1, x2, sched, xmax)


def estimate_gw(sample: Sequence[float], sched: KSchedule) -> TailEstimate:
    return estimate(sample, sched, "GW")


def estimate_loggw(sample: Sequence[float], sched: KSchedule) -> TailEstimate:
    return estimate(sample, sched, "logGW")


def estimate_gp(sample: Sequence[float], sched: KSchedule) -> TailEstimate:
    """Pickands-type estimator; ``rho_hat`` plays the role of the GP index."""
    return estimate(sample, sched, "GP")


def quantile_at(est: TailEstimate, z: float, floor_at_max: bool = False) -> float:
    """Estimated quantile exceeded with probability ``exp(-z)``."""
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    y_n = est.schedule.y_n
    if est.family == "GW":
        value = est.g_hat * h(est.rho_hat, z / y_n) + est.x_k0
    elif est.family == "logGW":
        try:
            value = est.x_k0 * math.exp(est.g_hat * h(est.rho_hat, z / y_n))
        except OverflowError:
            value = math.inf
    else:
        try:
            lam = math.exp(z - y_n)
        except OverflowError:
            lam = math.inf
        value = est.g_hat * h(est.rho_hat, lam) + est.x_k0
    if floor_at_max:
        value = max(value, est.sample_max)
    return value


def nu_hat(model: TailModel, est: TailEstimate, z: float, floor_at_max: bool = False) -> float:
    """Probability-based estimation error against the true model."""
    return prob_error(model, quantile_at(est, z, floor_at_max), z)


@dataclass(frozen=True)
class StabilityPoint:
    eta: float
    rho_hat: float
    ci_low: float
    ci_high: float
    k2: int = 0
    y_n: float = math.nan
    warning: Optional[str] = None


def stability_profile(
    sample: Sequence[float],
    iota: float,
    eta_grid: Sequence[float],
    family: Family,
    level: float = 0.90,
    base_k2: Optional[int] = None,
) -> list[StabilityPoint]:
    """Index estimates over lowered thresholds with plug-in asymptotic intervals.

    Intervals are ``rho_hat +- z * rho_sd(rho_hat, ...)``; the GP family has
    no such interval and reports NaN edges.  An ``eta`` whose schedule
    collapses, or whose estimate is undefined, yields a record with NaNs and
    a ``warning``.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    out = []
    for eta in eta_grid:
        try:
            if base_k2 is None:
                sched = default_schedule(n, iota, eta, "gp" if family == "GP" else "gw")
            else:
                sched = make_schedule(n, base_k2, iota, eta, "gp" if family == "GP" else "gw")
            est = estimate_from_order_stats(
                family, x[n - sched.k0], x[n - sched.k1], x[n - sched.k2], sched, x[-1]
            )
        except (ConfigurationError, DegenerateSpacing, NonpositiveThreshold) as exc:
            out.append(StabilityPoint(eta, math.nan, math.nan, math.nan, warning=str(exc)))
            continue
        if family == "GP":
            lo = hi = math.nan
        else:
            band = asymptotics.rho_band(est.rho_hat, iota, sched.y_n, sched.k2, est.rho_hat, level)
            lo, hi = band.low, band.high
        out.append(StabilityPoint(eta, est.rho_hat, lo, hi, sched.k2, sched.y_n))
    return out


def plugin_order_stats(model: TailModel, sched: KSchedule) -> tuple[float, float, float]:
    """Exact quantiles at the nominal levels of the three order statistics."""
    return tuple(model.q(sched.level(m)) for m in range(3))


def plugin_sample(model: TailModel, sched: KSchedule, shuffle_seed: Optional[int] = None) -> np.ndarray:
    """A size-``n`` sample whose selected order statistics are exact quantiles.

    Ranks between the anchors get levels interpolated linearly in ``log k``,
    so the sample is strictly ordered and ``X_{n-k_m+1,n} = q(level(m))``.
    """
    n = sched.n
    y0, y1, y2 = (sched.level(m) for m in range(3))
    anchors_k = [1.0, float(sched.k2), float(sched.k1), float(sched.k0), float(n)]
    anchors_y = [y2 + 1.0 + math.log(sched.k2), y2, y1, y0, 0.01 * y0]
    # drop duplicated rank 1 anchor when k2 == 1
    if sched.k2 == 1:
        anchors_k.pop(0)
        anchors_y.pop(0)
    k = np.arange(1, n + 1, dtype=float)
    levels = np.interp(np.log(k), np.log(anchors_k), anchors_y)
    for m, km in enumerate(sched.ks):
        levels[km - 1] = sched.level(m)
    values = np.array([model.q(float(v)) for v in levels])
    if shuffle_seed is not None:
        np.random.default_rng(shuffle_seed).shuffle(values)
    return values
