"""Penultimate GW and log-GW quantile approximations.

Both families anchor at a finite ``y`` and extrapolate ``q`` to ``z``:

* GW:     ``q(y) + g * h(rho, z / y)``
* log-GW: ``q(y) * exp(g * h(rho, z / y))``

with ``rho`` and ``g`` taken from finite differences of ``q`` (GW) or
``log q`` (log-GW) over the geometric grid ``y, y*iota, y*iota**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .core import h, h_inv
from .errors import DegenerateSpacing, DomainError
from .models import TailModel

__all__ = [
    "PenultimateApprox",
    "a_gw",
    "a_loggw",
    "g_gw",
    "g_loggw",
    "anchor",
    "approx_eval",
    "nu",
    "prob_error",
    "survival_form",
]

Family = Literal["GW", "logGW"]


@dataclass(frozen=True)
class PenultimateApprox:
    family: Family
    base_y: float
    rho_tilde: float
    g_tilde: float
    base_q: float

    def __post_init__(self):
        if self.family not in ("GW", "logGW"):
            raise ValueError(f"unknown family {self.family!r}")
        if not self.g_tilde > 0:
            raise DomainError(f"g_tilde must be positive, got {self.g_tilde!r}")
        if not self.base_y > 0:
            raise DomainError(f"base_y must be positive, got {self.base_y!r}")
        if self.family == "logGW" and not self.base_q > 0:
            raise DomainError("log-GW approximation needs a positive base quantile")

    def __call__(self, z: float) -> float:
        return approx_eval(self, z)


def spacing_slope(v0: float, v1: float, v2: float, iota: float) -> float:
    """``log(|v2 - v1| / |v1 - v0|) / log(iota)`` for three increasing levels."""
    d_hi = abs(v2 - v1)
    d_lo = abs(v1 - v0)
    if d_hi == 0 or d_lo == 0:
        raise DegenerateSpacing(f"zero spacing among {v0!r}, {v1!r}, {v2!r}")
    return (math.log(d_hi) - math.log(d_lo)) / math.log(iota)


def _check_iota(iota):
    if not iota > 1:
        raise DomainError(f"iota must exceed 1, got {iota!r}")


def _log_levels(model, iota, y):
    qs = (model.q(y), model.q(y * iota), model.q(y * iota * iota))
    if min(qs) <= 0:
        raise DomainError(f"{model.name}: log-GW functionals need q > 0 near y={y!r}")
    return tuple(math.log(v) for v in qs)


def a_gw(model: TailModel, iota: float, y: float) -> float:
    """Slope functional of ``q``; tends to the GW index."""
    _check_iota(iota)
    return spacing_slope(model.q(y), model.q(y * iota), model.q(y * iota * iota), iota)


def a_loggw(model: TailModel, iota: float, y: float) -> float:
    """Slope functional of ``log q``; tends to the log-GW index."""
    _check_iota(iota)
    return spacing_slope(*_log_levels(model, iota, y), iota)


def g_gw(model: TailModel, iota: float, y: float) -> float:
    rho = a_gw(model, iota, y)
    return (model.q(y * iota) - model.q(y)) / h(rho, iota)


def g_loggw(model: TailModel, iota: float, y: float) -> float:
    rho = a_loggw(model, iota, y)
    l0, l1, _ = _log_levels(model, iota, y)
    return (l1 - l0) / h(rho, iota)


def anchor(model: TailModel, family: Family, iota: float, y: float) -> PenultimateApprox:
    """Approximation anchored at ``y`` using the ``(a, g)`` functionals of ``model``."""
    if family == "GW":
        return PenultimateApprox("GW", y, a_gw(model, iota, y), g_gw(model, iota, y), model.q(y))
    if family == "logGW":
        return PenultimateApprox(
            "logGW", y, a_loggw(model, iota, y), g_loggw(model, iota, y), model.q(y)
        )
    raise ValueError(f"unknown family {family!r}")


def approx_eval(a: PenultimateApprox, z: float) -> float:
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    shape = h(a.rho_tilde, z / a.base_y)
    if a.family == "GW":
        return a.base_q + a.g_tilde * shape
    try:
        return a.base_q * math.exp(a.g_tilde * shape)
    except OverflowError:
        return math.inf


def prob_error(model: TailModel, value: float, z: float) -> float:
    """Probability-based error of ``value`` as an estimate of ``q(z)``.

    ``log(1 - F(value)) / log(1 - F(q(z))) - 1``.  Values above ``q(inf)``
    give ``+inf``; values at or below ``q(0+)`` have exceedance probability
    one and give ``-1``.  The denominator is evaluated as ``q_inv(q(z))``
    rather than ``z`` so that ``value == q(z)`` yields exactly zero even when
    the inverse is numerical.
    """
    if math.isnan(value):
        return math.nan
    if value <= model.q_lower:
        return -1.0
    num = model.q_inv(value)
    if math.isinf(num):
        return math.inf
    den = model.q_inv(model.q(z))
    return num / den - 1.0


def nu(model: TailModel, a: PenultimateApprox, z: float) -> float:
    """Probability-based error of the approximation ``a`` at ``z``."""
    return prob_error(model, approx_eval(a, z), z)


def survival_form(
    model: TailModel, rho: float, g_of_y: float, y: float, x: float
) -> tuple[float, float]:
    """Both sides of the GW limit written for the survival function.

    Returns ``(|1 - F(x*g + q(y))|**(1/y), exp(-h_inv(rho, x)))``; the first
    tends to the second as ``y`` grows when ``q`` has a GW limit with index
    ``rho`` and scale ``g``.
    """
    rhs = math.exp(-h_inv(rho, x))
    level = x * g_of_y + model.q(y)
    if level <= model.q_lower:
        raise DomainError(f"x*g + q(y) = {level!r} is below the support of {model.name}")
    lhs = math.exp(-model.q_inv(level) / y)
    return lhs, rhs
