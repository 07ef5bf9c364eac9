"""Asymptotic standard deviations and normal bands for the estimators.

With ``Z = (rho_hat - a(y_n)) * y_n * sqrt(k2) * h(rho, iota)`` asymptotically
``N(0, (iota**(rho - 2) / log iota)**2)``, the errors of ``rho_hat``, of the
probability-based error ``nu_hat`` and of ``q_hat`` are all linear in ``Z``.
The bands below are ``center +- z_{(1+level)/2} * sd``.  Replacing the true
index by its estimate (plug-in) keeps the limit valid.

Also hosts the standardized order-statistic deviation (Smirnov) and a small
Kolmogorov-Smirnov utility used to test it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy import special

from .core import h, kappa
from .errors import DomainError
from .models import TailModel

__all__ = [
    "AsymptoticBand",
    "normal_quantile",
    "z_sd",
    "rho_sd",
    "rho_band",
    "nu_sd",
    "nu_band",
    "q_sd",
    "q_band",
    "smirnov_stat",
    "ks_statistic",
    "kolmogorov_sf",
    "ks_test_normal",
]


def normal_quantile(p: float) -> float:
    return float(special.ndtri(p))


@dataclass(frozen=True)
class AsymptoticBand:
    center: float
    sd: float
    level: float = 0.90
    low: float = math.nan
    high: float = math.nan
    # log-scale edges, only filled for log-GW quantile bands
    log_low: float = math.nan
    log_high: float = math.nan

    @classmethod
    def from_sd(cls, center: float, sd: float, level: float = 0.90) -> "AsymptoticBand":
        if not 0 < level < 1:
            raise DomainError(f"level must lie in (0, 1), got {level!r}")
        zq = normal_quantile(0.5 * (1.0 + level))
        return cls(center, sd, level, center - zq * sd, center + zq * sd)


def z_sd(rho: float, iota: float) -> float:
    """Standard deviation ``iota**(rho - 2) / log(iota)`` of the limit of ``Z``."""
    if not iota > 1:
        raise DomainError(f"iota must exceed 1, got {iota!r}")
    return iota ** (rho - 2.0) / math.log(iota)


def rho_sd(rho: float, iota: float, y_n: float, k2: int) -> float:
    """Asymptotic sd of ``rho_hat - a(y_n)``."""
    if k2 < 1:
        raise DomainError(f"k2 must be >= 1, got {k2!r}")
    return z_sd(rho, iota) / (y_n * math.sqrt(k2) * h(rho, iota))


def rho_band(rho, iota, y_n, k2, center, level=0.90) -> AsymptoticBand:
    return AsymptoticBand.from_sd(center, rho_sd(rho, iota, y_n, k2), level)


def nu_sd(rho: float, iota: float, lam: float, y_n: float, k2: int) -> float:
    """Asymptotic sd of ``nu_hat(lam * y_n) - nu(lam * y_n)``."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    return lam ** (-rho) * abs(kappa(rho, lam, iota)) * z_sd(rho, iota) / (y_n * math.sqrt(k2))


def nu_band(rho, iota, lam, y_n, k2, center, level=0.90) -> AsymptoticBand:
    return AsymptoticBand.from_sd(center, nu_sd(rho, iota, lam, y_n, k2), level)


def q_sd(rho: float, iota: float, lam: float, k2: int, q_prime_at_yn: float) -> float:
    """Asymptotic sd of ``q_hat - q_tilde`` (GW) in units of the quantile.

    For log-GW pass ``q'(y_n) / q(y_n)`` to get the sd of the log quantile.
    """
    if not q_prime_at_yn > 0:
        raise DomainError(f"q'(y_n) must be positive, got {q_prime_at_yn!r}")
    return q_prime_at_yn * abs(kappa(rho, lam, iota)) * z_sd(rho, iota) / math.sqrt(k2)


def q_band(
    rho: float,
    iota: float,
    lam: float,
    y_n: float,
    k2: int,
    q_prime_at_yn: float,
    center: float,
    family: Literal["GW", "logGW"] = "GW",
    q_at_yn: float = math.nan,
    level: float = 0.90,
) -> AsymptoticBand:
    """Band for the quantile estimate at ``z = lam * y_n`` around ``center``.

    ``center`` is the deterministic approximation ``q_tilde(z)``.  For
    ``family="logGW"`` the band is built for ``log q_hat`` and its edges are
    exponentiated; the log edges are kept in ``log_low``/``log_high``.
    ``y_n`` only enters through ``lam``; it is accepted for symmetry with
    the other band functions.
    """
    if family == "GW":
        return AsymptoticBand.from_sd(center, q_sd(rho, iota, lam, k2, q_prime_at_yn), level)
    if family != "logGW":
        raise ValueError(f"unknown family {family!r}")
    if not q_at_yn > 0:
        raise DomainError("log-GW quantile band needs q(y_n) > 0")
    if not center > 0:
        raise DomainError("log-GW quantile band needs a positive center")
    log_band = AsymptoticBand.from_sd(
        math.log(center), q_sd(rho, iota, lam, k2, q_prime_at_yn / q_at_yn), level
    )
    return AsymptoticBand(
        center=center,
        sd=log_band.sd,
        level=level,
        low=math.exp(log_band.low),
        high=math.exp(log_band.high),
        log_low=log_band.low,
        log_high=log_band.high,
    )


def smirnov_stat(
    model: TailModel,
    n: int,
    m: int,
    sched,
    sample: Sequence[float] | None = None,
    order_stat: float | None = None,
) -> float:
    """Standardized deviation ``y_n * (iota_hat_m - iota**m) * sqrt(k_m)``.

    ``iota_hat_m = q_inv(X_{n-k_m+1,n}) / y_n``.  Either the full ``sample``
    or the relevant order statistic itself may be supplied.
    """
    if m not in (0, 1, 2):
        raise DomainError(f"m must be 0, 1 or 2, got {m!r}")
    if n != sched.n:
        raise DomainError(f"schedule built for n={sched.n}, got n={n}")
    k = (sched.k0, sched.k1, sched.k2)[m]
    if order_stat is None:
        if sample is None:
            raise ValueError("need a sample or an order statistic")
        from .estimators import select_order_stats

        (order_stat,), _ = select_order_stats(sample, [k])
    iota_hat = model.q_inv(order_stat) / sched.y_n
    return sched.y_n * (iota_hat - sched.iota**m) * math.sqrt(k)


def ks_statistic(values: Sequence[float], cdf) -> float:
    """Two-sided one-sample Kolmogorov-Smirnov statistic ``sup |F_R - F|``."""
    x = np.sort(np.asarray(values, dtype=float))
    r = x.size
    if r == 0:
        raise DomainError("KS statistic of an empty sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, r + 1)
    d_plus = np.max(i / r - f)
    d_minus = np.max(f - (i - 1) / r)
    return float(max(d_plus, d_minus))


def kolmogorov_sf(t: float, terms: int = 100) -> float:
    """Asymptotic Kolmogorov tail ``P(sqrt(R) D > t) = 2 sum (-1)^(j-1) exp(-2 j^2 t^2)``."""
    if t <= 0:
        return 1.0
    s = 0.0
    for j in range(1, terms + 1):
        term = math.exp(-2.0 * j * j * t * t)
        s += term if j % 2 else -term
        if term < 1e-300:
            break
    return min(1.0, max(0.0, 2.0 * s))


def ks_test_normal(values: Sequence[float]) -> tuple[float, float]:
    """KS test against N(0, 1); returns ``(D, asymptotic p-value)``."""
    d = ks_statistic(values, special.ndtr)
    return d, kolmogorov_sf(math.sqrt(len(values)) * d)
