"""Command-line front end.

    cellplan sweep    --arch conv --config scenario.yaml --out conv.csv
    cellplan feasible --arch tdrs --config scenario.yaml
    cellplan fleet    --config scenario.yaml --round floor
    cellplan validate --config scenario.yaml --trials 100000 --seed 7
    cellplan report   --arch fdrs --config scenario.yaml

All tables are CSV: a header row, a units row, then data rows.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from typing import Optional, Sequence

from .config import ConfigError, ScenarioConfig, build_config, load_config
from .montecarlo import McConfig, mc_report
from .planner import InfeasibleError, fleet_comparison, max_feasible_side, sweep
from .throughput import Architecture

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

log = logging.getLogger("cellplan")


def mbps(bps: Optional[float]) -> str:
    return "" if bps is None else f"{bps / 1e6:.4g}"


class ResultTable:
    def __init__(self, columns: Sequence[str], units: Sequence[str]):
        if len(columns) != len(units):
            raise ValueError("every column needs a unit")
        self.columns = list(columns)
        self.units = list(units)
        self.rows: list[list] = []

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} fields, expected {len(self.columns)}")
        self.rows.append(list(row))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerow(self.units)
        w.writerows(self.rows)
        return buf.getvalue()


def _rate_columns(arch: Architecture):
    cols = ["routine", "incident"] + (["backhaul"] if arch.is_proposed else [])
    return cols, ["Mbps"] * len(cols)


def _load(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else build_config({})
    if args.verbose:
        for path, value in cfg.defaults_used:
            print(f"default {path} = {value}", file=sys.stderr)
    return cfg


def _range(args, cfg: ScenarioConfig):
    s = cfg.sweep
    return (args.lmin if args.lmin is not None else s.l_min,
            args.lmax if args.lmax is not None else s.l_max,
            args.step if args.step is not None else s.step)


def cmd_sweep(args, cfg: ScenarioConfig) -> tuple[int, ResultTable]:
    arch = Architecture(args.arch)
    curve = sweep(arch, cfg.scenario, *_range(args, cfg), workers=args.workers)
    cols, units = _rate_columns(arch)
    table = ResultTable(["side_length"] + cols, ["m"] + units)
    for L, rep in curve.points:
        table.add(f"{L:g}", *(mbps(v) for v in rep.rates().values()))
    return EXIT_OK, table


def cmd_feasible(args, cfg: ScenarioConfig) -> tuple[int, ResultTable]:
    arch = Architecture(args.arch)
    cols, units = _rate_columns(arch)
    table = ResultTable(["architecture", "max_side_length", "binding"] + cols,
                        ["-", "m", "-"] + units)
    try:
        res = max_feasible_side(arch, cfg.scenario, cfg.requirements, *_range(args, cfg),
                                workers=args.workers)
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL, table
    table.add(arch.value, f"{res.side_length:g}", res.binding or "none",
              *(mbps(v) for v in res.report.rates().values()))
    return EXIT_OK, table


def cmd_fleet(args, cfg: ScenarioConfig) -> tuple[int, ResultTable]:
    f = cfg.fleet
    fc = fleet_comparison(f.conv_side, f.prop_side, f.fire_stations, f.stationary_baseline,
                          f.dispatch_time_factor, rounding=args.round)
    table = ResultTable(
        ["conv_side", "prop_side", "stationary_reduction", "mobile_bts", "mobile_bts_exact",
         "total_ratio", "fire_stations", "stationary_baseline", "dispatch_time_factor"],
        ["m", "m", "fraction", "count", "count", "fraction", "count", "count", "-"])
    table.add(f"{fc.conv_side:g}", f"{fc.prop_side:g}", f"{fc.stationary_reduction:.4f}",
              fc.mobile_bts_count, f"{fc.mobile_bts_exact:.6g}", f"{fc.total_ratio:.4f}",
              fc.fire_stations, fc.stationary_bts_baseline, f"{fc.dispatch_time_factor:g}")
    return EXIT_OK, table


def cmd_validate(args, cfg: ScenarioConfig) -> tuple[int, ResultTable]:
    mc = McConfig(args.trials or cfg.mc.trials,
                  cfg.mc.seed if args.seed is None else args.seed,
                  None if args.trials else cfg.mc.batch,
                  args.workers)
    side = args.side or cfg.side_length
    archs = [Architecture(args.arch)] if args.arch else list(Architecture)
    table = ResultTable(
        ["architecture", "side_length", "rate", "closed_form", "mc_mean", "mc_std_error", "z",
         "agree"],
        ["-", "m", "-", "Mbps", "Mbps", "Mbps", "sigma", "-"])
    ok = True
    sc = cfg.scenario
    layout = sc.geometry.layout(side)
    for arch in archs:
        rep = mc_report(layout, sc.powers, sc.sharing(arch), sc.radio, arch, mc, sc.models,
                        sc.incident_sees_serving_bts)
        for name, r in rep.rates.items():
            agree = r.agrees(args.sigma)
            ok &= agree
            table.add(arch.value, f"{side:g}", name, mbps(r.closed_form), mbps(r.estimate.mean),
                      mbps(r.estimate.std_error), f"{r.z:.3f}", "yes" if agree else "no")
    return (EXIT_OK if ok else EXIT_FAIL), table


def cmd_report(args, cfg: ScenarioConfig) -> tuple[int, ResultTable]:
    arch = Architecture(args.arch)
    side = args.side or cfg.side_length
    rep = cfg.scenario.evaluate(arch, side)
    cols, units = _rate_columns(arch)
    table = ResultTable(["architecture", "side_length"] + cols, ["-", "m"] + units)
    table.add(arch.value, f"{side:g}", *(mbps(v) for v in rep.rates().values()))
    return EXIT_OK, table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cellplan", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    archs = [a.value for a in Architecture]

    def common(p, arch=True, arch_required=True):
        p.add_argument("--config", help="YAML scenario file (defaults when omitted)")
        p.add_argument("--out", help="write the CSV here instead of stdout")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("-v", "--verbose", action="store_true", help="echo defaults used")
        if arch:
            p.add_argument("--arch", choices=archs, required=arch_required)

    def ranged(p):
        p.add_argument("--lmin", type=float)
        p.add_argument("--lmax", type=float)
        p.add_argument("--step", type=float)

    p = sub.add_parser("sweep", help="throughput against cell side length")
    common(p)
    ranged(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("feasible", help="largest cell side meeting the requirements")
    common(p)
    ranged(p)
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("fleet", help="station-count comparison")
    common(p, arch=False)
    p.add_argument("--round", choices=["ceil", "floor"], default="ceil")
    p.set_defaults(func=cmd_fleet)

    p = sub.add_parser("validate", help="closed forms against the Monte Carlo oracle")
    common(p, arch_required=False)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--sigma", type=float, default=3.0)
    p.add_argument("--side", type=float)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="throughputs for one cell size")
    common(p)
    p.add_argument("--side", type=float)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(message)s")
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _load(args)
        code, table = args.func(args, cfg)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = table.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
