"""CSV serialisation of simulation summaries and plot-ready figure panels.

Floats are written with 17 significant digits (``%.17g``), which round-trips
every IEEE double; the decimal separator is always ``.``.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Sequence, TextIO

from ..errors import ConfigurationError
from .experiment import SUMMARY_COLUMNS, SimulationSummary, SummaryRow

__all__ = [
    "format_value",
    "write_csv",
    "summary_to_csv",
    "read_summary",
    "figure_emit",
    "FIGURE_COLUMNS",
    "gnuplot_script",
]

_INT_COLUMNS = {"n", "k2", "k1", "k0", "replications", "degenerate_count"}
_STR_COLUMNS = {"model", "estimator", "quantity"}


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def write_csv(fh: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])


def summary_to_csv(summary: SimulationSummary) -> str:
    buf = io.StringIO()
    write_csv(buf, SUMMARY_COLUMNS, ([getattr(r, c) for c in SUMMARY_COLUMNS] for r in summary.rows))
    return buf.getvalue()


def read_summary(fh: TextIO) -> SimulationSummary:
    reader = csv.DictReader(fh)
    missing = set(SUMMARY_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ConfigurationError(f"summary CSV lacks columns: {', '.join(sorted(missing))}")
    rows = []
    for rec in reader:
        vals = {}
        for c in SUMMARY_COLUMNS:
            raw = rec[c]
            if c in _STR_COLUMNS:
                vals[c] = raw
            elif c in _INT_COLUMNS:
                vals[c] = int(raw)
            else:
                vals[c] = float(raw)
        rows.append(SummaryRow(**vals))
    return SimulationSummary(rows)


FIGURE_COLUMNS = {
    "a": ("model", "estimator", "n", "eta", "tau", "q_p05", "q_p50", "q_p95",
          "target_quantile", "threshold_quantile", "approx_quantile", "band_low", "band_high",
          "band_low_log", "band_high_log"),
    "b": ("model", "estimator", "n", "eta", "rho_p05", "rho_p50", "rho_p95", "true_index",
          "approx_index", "band_low", "band_high"),
    "c": ("model", "estimator", "n", "eta", "tau", "nu_p05", "nu_p50", "nu_p95",
          "deterministic_nu", "band_low", "band_high"),
}

_PANEL_QUANTITY = {"a": "q_hat", "b": "rho_hat", "c": "nu_hat"}


def _panel_row(panel: str, r: SummaryRow) -> tuple:
    head = (r.model, r.estimator, r.n, r.eta)
    pct = (r.p05, r.p50, r.p95)
    if panel == "a":
        # target U(n**tau) = q(tau log n); threshold U(n/k0) = q(y_n)
        return head + (r.tau,) + pct + (r.true_value, r.threshold, r.deterministic_value,
                                        r.band_low, r.band_high, r.band_low_log, r.band_high_log)
    if panel == "b":
        return head + pct + (r.true_value, r.deterministic_value, r.band_low, r.band_high)
    return head + (r.tau,) + pct + (r.deterministic_value, r.band_low, r.band_high)


def figure_emit(summary: SimulationSummary, panel: str) -> str:
    """Plot-ready CSV for one panel of the study figures.

    ``a``: quantile estimates with target and threshold quantiles;
    ``b``: index estimates with the true index;
    ``c``: probability-based errors with deterministic value and band.
    """
    if panel not in FIGURE_COLUMNS:
        raise ConfigurationError(f"unknown panel {panel!r}; choose a, b or c")
    quantity = _PANEL_QUANTITY[panel]
    rows = [r for r in summary.rows if r.quantity == quantity]
    if not rows:
        raise ConfigurationError(f"summary has no {quantity} rows for panel {panel}")
    buf = io.StringIO()
    write_csv(buf, FIGURE_COLUMNS[panel], (_panel_row(panel, r) for r in rows))
    return buf.getvalue()


def gnuplot_script(csv_path: str, panel: str, model: str, estimator: str) -> str:
    """A gnuplot script plotting one panel CSV for one (model, estimator)."""
    cols = FIGURE_COLUMNS[panel]
    col = {name: i + 1 for i, name in enumerate(cols)}
    prefix = {"a": "q", "b": "rho", "c": "nu"}[panel]
    sel = f'(strcol({col["model"]}) eq "{model}" && strcol({col["estimator"]}) eq "{estimator}")'

    def pick(name):
        return f"({sel} ? column({col[name]}) : 1/0)"

    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale x 2",
        "set xlabel 'n'",
    ]
    if panel == "a":
        lines.append("set logscale y")
    lines.append(
        "plot "
        + ", \\\n     ".join(
            [
                f"'{csv_path}' using {pick('n')}:{pick(prefix + '_p50')}:{pick(prefix + '_p05')}:"
                f"{pick(prefix + '_p95')} with yerrorbars title 'median, 90% interval'",
            ]
            + [
                f"'{csv_path}' using {pick('n')}:{pick(extra)} with lines title '{extra}'"
                for extra in {
                    "a": ("target_quantile", "threshold_quantile", "approx_quantile"),
                    "b": ("true_index", "band_low", "band_high"),
                    "c": ("deterministic_nu", "band_low", "band_high"),
                }[panel]
            ]
        )
    )
    return "\n".join(lines) + "\n"
