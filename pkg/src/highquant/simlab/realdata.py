"""Estimation on user data read from a file."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import asymptotics
from ..errors import DataFileError, DegenerateSpacing
from ..estimators import KSchedule, StabilityPoint, TailEstimate, estimate, quantile_at, default_schedule, stability_profile

__all__ = ["read_sample", "EstimateReport", "estimate_sample", "estimate_file", "FAMILY_ALIASES"]

FAMILY_ALIASES = {"gw": "GW", "loggw": "logGW", "gp": "GP"}


def read_sample(path: str) -> np.ndarray:
    """Read one finite number per line; blank lines and ``#`` comments are skipped."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                v = float(text)
            except ValueError:
                raise DataFileError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not math.isfinite(v):
                raise DataFileError(f"{path}:{lineno}: non-finite value {text!r}")
            values.append(v)
    if len(values) < 32:
        raise DataFileError(f"{path}: need at least 32 values, found {len(values)}")
    return np.asarray(values)


@dataclass
class EstimateReport:
    n: int
    family: str
    schedule: KSchedule
    estimate: TailEstimate
    rho_band: asymptotics.AsymptoticBand | None
    quantiles: list  # (p, z, q_hat)
    stability: list[StabilityPoint]


def estimate_sample(
    sample: Sequence[float],
    family: str,
    iota: float = 2.0,
    eta_grid: Sequence[float] = (1.0,),
    level: float = 0.90,
    probs: Sequence[float] = (),
) -> EstimateReport:
    """Estimate the tail, quantiles ``q_hat(-log p)`` and the stability profile.

    No truth is available, so probability-based errors are not reported.
    """
    family = FAMILY_ALIASES.get(family.lower(), family) if isinstance(family, str) else family
    x = np.asarray(sample, dtype=float)
    sched = default_schedule(x.size, iota, 1.0, "gp" if family == "GP" else "gw")
    try:
        est = estimate(x, sched, family)
    except DegenerateSpacing as exc:
        raise DegenerateSpacing(
            f"{exc}; the data have ties at the selected ranks (coarse rounding?), "
            "try another iota or de-duplicate"
        ) from None
    band = None
    if family != "GP":
        band = asymptotics.rho_band(est.rho_hat, iota, sched.y_n, sched.k2, est.rho_hat, level)
    quantiles = []
    for p in probs:
        if not 0 < p < 1:
            raise ValueError(f"exceedance probability must lie in (0, 1), got {p!r}")
        z = -math.log(p)
        quantiles.append((p, z, quantile_at(est, z)))
    prof = stability_profile(x, iota, eta_grid, family, level)
    return EstimateReport(x.size, family, sched, est, band, quantiles, prof)


def estimate_file(path, family, iota=2.0, eta_grid=(1.0,), level=0.90, probs=()) -> EstimateReport:
    return estimate_sample(read_sample(path), family, iota, eta_grid, level, probs)
