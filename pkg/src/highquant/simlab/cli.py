"""Command-line interface: ``highquant <subcommand> ...``."""

from __future__ import annotations

import argparse
import io
import logging
import sys
from typing import Optional, Sequence

from ..approx import anchor, approx_eval, nu
from ..errors import HighQuantError
from ..models import make_model
from .config import build_config, load_config, split_list
from .experiment import run_experiment
from .output import figure_emit, format_value, gnuplot_script, read_summary, summary_to_csv, write_csv
from .realdata import FAMILY_ALIASES, estimate_file

log = logging.getLogger("highquant")


def _floats(text: str) -> list[float]:
    return [float(v) for v in split_list(text)]


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        log.info("wrote %s", out)


def cmd_simulate(args) -> int:
    values = load_config(args.config) if args.config else {}
    flag_map = {
        "models": args.models and split_list(args.models),
        "estimators": args.estimators and split_list(args.estimators),
        "nmin": args.nmin,
        "nmax": args.nmax,
        "reps": args.reps,
        "iota": args.iota,
        "tau": args.tau and _floats(args.tau),
        "seed": args.seed,
        "out": args.out,
        "eta": args.eta and _floats(args.eta),
        "floor": args.floor,
        "workers": args.workers,
    }
    values.update({k: v for k, v in flag_map.items() if v is not None})
    cfg = build_config(values)
    summary = run_experiment(cfg)
    _emit(summary_to_csv(summary), cfg.output_path)
    return 0


def cmd_estimate(args) -> int:
    rep = estimate_file(args.file, args.family, args.iota, _floats(args.eta), args.level,
                        _floats(args.p) if args.p else ())
    s, est = rep.schedule, rep.estimate
    buf = io.StringIO()
    pairs = [
        ("family", rep.family), ("n", rep.n), ("iota", s.iota), ("k2", s.k2), ("k1", s.k1),
        ("k0", s.k0), ("y_n", s.y_n), ("threshold", est.x_k0), ("rho_hat", est.rho_hat),
        ("g_hat", est.g_hat),
    ]
    if rep.rho_band is not None:
        pairs += [("level", rep.rho_band.level), ("rho_ci_low", rep.rho_band.low),
                  ("rho_ci_high", rep.rho_band.high)]
    for k, v in pairs:
        buf.write(f"{k},{format_value(v)}\n")
    if rep.quantiles:
        buf.write("\n")
        write_csv(buf, ("p", "z", "q_hat"), rep.quantiles)
    buf.write("\n")
    write_csv(buf, ("eta", "k2", "y_n", "rho_hat", "ci_low", "ci_high", "warning"),
              ((p.eta, p.k2, p.y_n, p.rho_hat, p.ci_low, p.ci_high, p.warning or "")
               for p in rep.stability))
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_stability(args) -> int:
    rep = estimate_file(args.file, args.family, args.iota, _floats(args.eta), args.level)
    buf = io.StringIO()
    write_csv(buf, ("eta", "k2", "y_n", "rho_hat", "ci_low", "ci_high", "warning"),
              ((p.eta, p.k2, p.y_n, p.rho_hat, p.ci_low, p.ci_high, p.warning or "")
               for p in rep.stability))
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_approx(args) -> int:
    model = make_model(args.model)
    family = FAMILY_ALIASES[args.family.lower()]
    if family == "GP":
        raise HighQuantError("approx supports the gw and loggw families")
    rows = []
    for y in _floats(args.y):
        a = anchor(model, family, args.iota, y)
        for z in _floats(args.z):
            rows.append((model.name, family, y, z, a.rho_tilde, a.g_tilde, approx_eval(a, z), nu(model, a, z)))
    buf = io.StringIO()
    write_csv(buf, ("model", "family", "y", "z", "rho_tilde", "g_tilde", "approx", "nu"), rows)
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_figure(args) -> int:
    with open(args.summary, encoding="utf-8") as fh:
        summary = read_summary(fh)
    _emit(figure_emit(summary, args.panel), args.out)
    if args.gnuplot:
        if not args.out or args.out == "-":
            raise HighQuantError("--gnuplot needs --out so the script can reference the CSV")
        model = args.model or summary.rows[0].model
        est = args.estimator or summary.rows[0].estimator
        with open(args.gnuplot, "w", encoding="utf-8") as fh:
            fh.write(gnuplot_script(args.out, args.panel, model, est))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="highquant", description="High quantile estimation laboratory")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the Monte Carlo study and write a summary CSV")
    s.add_argument("--config")
    s.add_argument("--models")
    s.add_argument("--estimators", help="comma list of gw, loggw, gp")
    s.add_argument("--nmin", type=int)
    s.add_argument("--nmax", type=int)
    s.add_argument("--reps", type=int)
    s.add_argument("--iota", type=float)
    s.add_argument("--tau")
    s.add_argument("--seed", type=int)
    s.add_argument("--eta")
    s.add_argument("--floor", dest="floor", action="store_true", default=None)
    s.add_argument("--no-floor", dest="floor", action="store_false")
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    for name, func, helptext in (
        ("estimate", cmd_estimate, "estimate tail and high quantiles from a data file"),
        ("stability", cmd_stability, "threshold stability profile of the index estimate"),
    ):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("--file", required=True)
        e.add_argument("--family", required=True, choices=sorted(FAMILY_ALIASES))
        e.add_argument("--iota", type=float, default=2.0)
        e.add_argument("--eta", default="1")
        e.add_argument("--level", type=float, default=0.90)
        if name == "estimate":
            e.add_argument("--p", help="comma list of exceedance probabilities")
        e.add_argument("--out")
        e.set_defaults(func=func)

    a = sub.add_parser("approx", help="deterministic penultimate approximations for a model")
    a.add_argument("--model", required=True)
    a.add_argument("--family", required=True, choices=["gw", "loggw"])
    a.add_argument("--iota", type=float, default=2.0)
    a.add_argument("--y", required=True)
    a.add_argument("--z", required=True)
    a.add_argument("--out")
    a.set_defaults(func=cmd_approx)

    f = sub.add_parser("figure", help="extract a plot-ready panel from a summary CSV")
    f.add_argument("--summary", required=True)
    f.add_argument("--panel", required=True, choices=["a", "b", "c"])
    f.add_argument("--out")
    f.add_argument("--gnuplot", help="also write a gnuplot script to this path")
    f.add_argument("--model")
    f.add_argument("--estimator")
    f.set_defaults(func=cmd_figure)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (HighQuantError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
