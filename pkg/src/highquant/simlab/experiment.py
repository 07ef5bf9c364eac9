"""Monte Carlo study of the high-quantile estimators.

A *cell* is one (model, n) pair.  For every replication of a cell a fresh
exponential sample is drawn, the order statistics needed by every requested
estimator (and every threshold shift ``eta``) are selected in one partition,
mapped through ``q``, and the estimators are evaluated at ``z = tau * log n``.
Cells are independent and may run in worker processes; rows are always
emitted in config order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .. import asymptotics
from ..approx import prob_error, spacing_slope
from ..errors import ConfigurationError, DegenerateSpacing, NonpositiveThreshold
from ..estimators import (
    FAMILIES,
    KSchedule,
    TailEstimate,
    estimate_from_order_stats,
    plugin_order_stats,
    quantile_at,
    default_schedule,
)
from ..models import TailModel, make_model
from .sampling import exponentials, replication_seed

__all__ = [
    "ExperimentConfig",
    "CellResult",
    "SummaryRow",
    "SimulationSummary",
    "nearest_rank",
    "run_cell",
    "summarize_cell",
    "run_experiment",
    "deterministic_estimate",
]

PERCENTILES = (5, 50, 95)


@dataclass(frozen=True)
class ExperimentConfig:
    models: tuple[str, ...] = ("lognormal", "normal", "pareto_like", "burr")
    estimators: tuple[str, ...] = ("logGW", "GP")
    n_grid: tuple[int, ...] = tuple(2**j for j in range(5, 17))
    replications: int = 1000
    iota: float = 2.0
    tau_grid: tuple[float, ...] = (2.0,)
    seed: int = 20140620
    eta_grid: tuple[float, ...] = (1.0,)
    floor_at_max: bool = True
    level: float = 0.90
    output_path: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if not self.models:
            raise ConfigurationError("at least one model is required")
        for m in self.models:
            make_model(m)
        for e in self.estimators:
            if e not in FAMILIES:
                raise ConfigurationError(f"unknown estimator {e!r}; choose from {FAMILIES}")
        if not self.estimators:
            raise ConfigurationError("at least one estimator is required")
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigurationError("n_grid must be strictly ascending")
        if not self.iota > 1:
            raise ConfigurationError("iota must exceed 1")
        for t in self.tau_grid:
            if not 1 <= t <= 3:
                raise ConfigurationError(f"tau={t} outside [1, 3]")
        for eta in self.eta_grid:
            if not 0 < eta <= 1:
                raise ConfigurationError(f"eta={eta} outside (0, 1]")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")


def nearest_rank(values: Sequence[float], pct: int) -> float:
    """Nearest-rank percentile: the ``ceil(pct/100 * N)``-th smallest value."""
    v = sorted(values)
    if not v:
        return math.nan
    rank = max(1, -(-pct * len(v) // 100))
    return float(v[rank - 1])


def _schedule(n, iota, eta, family) -> KSchedule:
    return default_schedule(n, iota, eta, "gp" if family == "GP" else "gw")


@dataclass
class CellResult:
    """Per-replication output of one (model, n) cell.

    ``rho``, ``q_hat`` and ``nu_hat`` map ``(family, eta)`` to arrays of
    shape ``(R,)``, ``(R, n_tau)`` and ``(R, n_tau)``; NaN marks a
    degenerate replication.  ``order_stats`` maps ``(family, eta)`` to an
    ``(R, 3)`` array of ``X_{n-k_m+1,n}``, ``m = 0, 1, 2``.
    """

    model: str
    model_index: int
    n: int
    z_grid: tuple[float, ...]
    schedules: dict
    rho: dict
    q_hat: dict
    nu_hat: dict
    order_stats: dict
    sample_max: np.ndarray
    degenerate: dict = field(default_factory=dict)


def run_cell(cfg: ExperimentConfig, model_index: int, n: int) -> CellResult:
    model = make_model(cfg.models[model_index])
    R = cfg.replications
    z_grid = tuple(t * math.log(n) for t in cfg.tau_grid)
    keys = [(fam, eta) for fam in cfg.estimators for eta in cfg.eta_grid]
    scheds = {key: _schedule(n, cfg.iota, key[1], key[0]) for key in keys}
    ranks = sorted({k for s in scheds.values() for k in s.ks})
    rho = {key: np.full(R, np.nan) for key in keys}
    qh = {key: np.full((R, len(z_grid)), np.nan) for key in keys}
    nuh = {key: np.full((R, len(z_grid)), np.nan) for key in keys}
    ost = {key: np.full((R, 3), np.nan) for key in keys}
    smax = np.empty(R)
    degenerate = {key: 0 for key in keys}
    kth = sorted({n - k for k in ranks} | {n - 1})
    for r in range(R):
        e = exponentials(n, replication_seed(cfg.seed, model_index, n, r))
        part = np.partition(e, kth)
        x_of = {k: model.q(float(part[n - k])) for k in ranks}
        xmax = model.q(float(part[n - 1]))
        smax[r] = xmax
        for key in keys:
            s = scheds[key]
            xs = (x_of[s.k0], x_of[s.k1], x_of[s.k2])
            ost[key][r] = xs
            try:
                est = estimate_from_order_stats(key[0], *xs, s, xmax)
            except (DegenerateSpacing, NonpositiveThreshold):
                degenerate[key] += 1
                continue
            rho[key][r] = est.rho_hat
            for j, z in enumerate(z_grid):
                v = quantile_at(est, z, cfg.floor_at_max)
                qh[key][r, j] = v
                nuh[key][r, j] = prob_error(model, v, z)
    return CellResult(
        cfg.models[model_index], model_index, n, z_grid, scheds, rho, qh, nuh, ost, smax, degenerate
    )


def deterministic_estimate(model: TailModel, sched: KSchedule, family: str) -> TailEstimate:
    """The estimator applied to exact quantiles at the nominal levels.

    For GW and log-GW this is the penultimate approximation anchored at
    ``y_n`` with the ``(a_iota, g_iota)`` functionals.
    """
    x0, x1, x2 = plugin_order_stats(model, sched)
    return estimate_from_order_stats(family, x0, x1, x2, sched, -math.inf)


def _true_index(model: TailModel, family: str):
    v = {"GW": model.rho_gw_true, "logGW": model.rho_loggw_true, "GP": model.gamma_true}[family]
    return math.nan if v is None else v


@dataclass(frozen=True)
class SummaryRow:
    model: str
    estimator: str
    n: int
    eta: float
    tau: float
    z: float
    quantity: str
    p05: float
    p50: float
    p95: float
    deterministic_value: float
    band_low: float
    band_high: float
    band_low_log: float
    band_high_log: float
    true_value: float
    threshold: float
    k2: int
    k1: int
    k0: int
    y_n: float
    replications: int
    degenerate_count: int


SUMMARY_COLUMNS = tuple(SummaryRow.__dataclass_fields__)


@dataclass
class SimulationSummary:
    rows: list

    def select(self, **criteria) -> list:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in criteria.items())]

    def get(self, **criteria) -> SummaryRow:
        hits = self.select(**criteria)
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} rows match {criteria}")
        return hits[0]


def summarize_cell(cell: CellResult, cfg: ExperimentConfig) -> list[SummaryRow]:
    model = make_model(cell.model)
    nan = math.nan
    rows = []
    R = cfg.replications
    for (family, eta), s in cell.schedules.items():
        key = (family, eta)
        ndeg = cell.degenerate[key]
        rho_ok = cell.rho[key][~np.isnan(cell.rho[key])]
        p_rho = [nearest_rank(rho_ok, p) for p in PERCENTILES]
        rho_plug = p_rho[1]
        q_y = model.q(s.y_n)
        common = dict(
            model=cell.model, estimator=family, n=cell.n, eta=eta, k2=s.k2, k1=s.k1, k0=s.k0,
            y_n=s.y_n, replications=R, degenerate_count=ndeg, threshold=q_y,
        )
        try:
            det = deterministic_estimate(model, s, family)
        except (DegenerateSpacing, NonpositiveThreshold):
            det = None
        with_band = family != "GP" and det is not None and math.isfinite(rho_plug)

        det_rho = det.rho_hat if det is not None else nan
        if with_band:
            b = asymptotics.rho_band(rho_plug, s.iota, s.y_n, s.k2, det_rho, cfg.level)
            lo, hi = b.low, b.high
        else:
            lo = hi = nan
        rows.append(SummaryRow(
            tau=nan, z=nan, quantity="rho_hat", p05=p_rho[0], p50=p_rho[1], p95=p_rho[2],
            deterministic_value=det_rho, band_low=lo, band_high=hi, band_low_log=nan,
            band_high_log=nan, true_value=_true_index(model, family), **common,
        ))

        for j, (tau, z) in enumerate(zip(cfg.tau_grid, cell.z_grid)):
            lam = z / s.y_n
            qcol = cell.q_hat[key][:, j]
            qcol = qcol[~np.isnan(qcol)]
            det_q = quantile_at(det, z) if det is not None else nan
            lo = hi = llo = lhi = nan
            if with_band:
                qp = model.q_prime(s.y_n)
                if family == "GW":
                    b = asymptotics.q_band(rho_plug, s.iota, lam, s.y_n, s.k2, qp, det_q, "GW")
                else:
                    b = asymptotics.q_band(rho_plug, s.iota, lam, s.y_n, s.k2, qp, det_q, "logGW", q_y)
                    llo, lhi = b.log_low, b.log_high
                lo, hi = b.low, b.high
            rows.append(SummaryRow(
                tau=tau, z=z, quantity="q_hat",
                **dict(zip(("p05", "p50", "p95"), (nearest_rank(qcol, p) for p in PERCENTILES))),
                deterministic_value=det_q, band_low=lo, band_high=hi, band_low_log=llo,
                band_high_log=lhi, true_value=model.q(z), **common,
            ))

            ncol = cell.nu_hat[key][:, j]
            ncol = ncol[~np.isnan(ncol)]
            det_nu = prob_error(model, det_q, z) if det is not None else nan
            lo = hi = nan
            if with_band:
                b = asymptotics.nu_band(rho_plug, s.iota, lam, s.y_n, s.k2, det_nu, cfg.level)
                lo, hi = b.low, b.high
            rows.append(SummaryRow(
                tau=tau, z=z, quantity="nu_hat",
                **dict(zip(("p05", "p50", "p95"), (nearest_rank(ncol, p) for p in PERCENTILES))),
                deterministic_value=det_nu, band_low=lo, band_high=hi, band_low_log=nan,
                band_high_log=nan, true_value=0.0, **common,
            ))
    return rows


def _cell_rows(args):
    cfg, model_index, n = args
    return summarize_cell(run_cell(cfg, model_index, n), cfg)


def run_experiment(cfg: ExperimentConfig, workers: Optional[int] = None) -> SimulationSummary:
    """Run every (model, n) cell and collect summary rows in config order."""
    workers = cfg.workers if workers is None else workers
    tasks = [(cfg, i, n) for i in range(len(cfg.models)) for n in cfg.n_grid]
    if workers == 1:
        parts = [_cell_rows(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_cell_rows, tasks))
    return SimulationSummary([row for part in parts for row in part])
