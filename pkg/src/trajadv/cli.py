"""Command-line front end.

Subcommands: ``simulate`` (run a scenario, write a CSV log), ``sweep``
(one run per preset wrench row plus a summary table), ``classify``
(assistive/agnostic test of a single wrench), ``plot`` (CSV columns to a
standalone SVG).

Exit codes: 0 success, 2 for parse/validation problems (bad config,
missing file, unknown preset, missing column), 1 for runtime failures.
"""

import argparse
import csv
import os
import pathlib
import sys

import numpy as np
import yaml

from . import config as cfgmod
from . import sim
from . import svgplot
from .errors import SchemaError, TrajadvError
from .wrench import Wrench, classify as classify_wrench

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _color(text: str, code: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def _resolve_config(arg: str) -> pathlib.Path:
    p = pathlib.Path(arg)
    if p.is_file():
        return p
    if "/" not in arg and not arg.endswith(".yaml"):
        try:
            return cfgmod.preset_path(f"scenarios/{arg}.yaml")
        except SchemaError:
            pass
    raise SchemaError(f"config not found: {arg!r}")


def _load(args) -> sim.ScenarioConfig:
    path = _resolve_config(args.config)
    return cfgmod.load_scenario(path, args.set or [])


def _summary_line(row: sim.SweepRow) -> str:
    return (f"delta_psi={row.delta_psi:+.6g}  rms_err={row.rms_tracking_err:.6g} m  "
            f"peak_psidot={row.peak_psidot:.6g}")


def cmd_simulate(args) -> int:
    cfg = _load(args)
    records = sim.run(cfg)
    sim.write_csv(records, args.out)
    row = sim.summarize(records, cfg.duration, label=cfg.name or "run")
    print(_summary_line(row))
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    path = _resolve_config(args.config)
    data = cfgmod.apply_overrides(cfgmod._load_yaml(path), args.set or [])
    base = cfgmod.build_scenario(data)
    opts = cfgmod.sweep_options(data)
    preset = args.preset or opts["preset"]
    if preset != "table1":
        raise SchemaError(f"unknown sweep preset: {preset!r}")
    events = sim.table1_events(scale=opts["scale"], start=opts["start"],
                               duration=opts["duration"],
                               noise_std=opts["noise_std"])
    rows, logs = sim.sweep(base, events)
    out_dir = pathlib.Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for row, records in zip(rows, logs):
        sim.write_csv(records, out_dir / f"{preset}_{row.label}.csv")
    sim.write_summary_csv(rows, out_dir / "summary.csv")
    for row in rows:
        tag = _color(row.wrench_class.value, "32" if row.delta_psi > 0.05 else "36")
        print(f"({row.label}) {tag:>10}  {_summary_line(row)}  "
              f"peak_alpha={row.peak_alpha:.6g}")
    print(f"wrote {len(rows)} run logs + summary.csv to {out_dir}")
    return EXIT_OK


def _parse_vec(text: str, length: int, what: str) -> np.ndarray:
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise SchemaError(f"{what} must be comma-separated numbers") from exc
    if len(parts) != length:
        raise SchemaError(f"{what} must have {length} components")
    return np.asarray(parts)


def cmd_classify(args) -> int:
    force = _parse_vec(args.force, 3, "--force")
    torque = _parse_vec(args.torque, 3, "--torque")
    direction = _parse_vec(args.direction, 6, "--direction")
    nrm = np.linalg.norm(direction)
    if nrm < 1e-12:
        raise SchemaError("--direction must be nonzero")
    result = classify_wrench(Wrench(force, torque), direction / nrm)
    print(result.value.capitalize())
    return EXIT_OK


def cmd_plot(args) -> int:
    path = pathlib.Path(args.csv)
    if not path.is_file():
        raise SchemaError(f"CSV not found: {args.csv!r}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{args.csv}: empty CSV")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{args.csv}: no data rows")
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    if not columns:
        raise SchemaError("--columns must name at least one column")
    for c in columns + ["t"]:
        if c not in header:
            raise SchemaError(f"{args.csv}: missing column {c!r}")
    idx = {c: header.index(c) for c in columns}
    t_i = header.index("t")
    xs = [float(r[t_i]) for r in rows]
    series = [(c, [float(r[idx[c]]) for r in rows]) for c in columns]
    svg = svgplot.line_plot(xs, series, xlabel="t", title=path.name)
    with open(args.out, "w", newline="") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajadv",
        description="Task-space control with interaction-driven trajectory "
                    "advancement: simulate, sweep, classify, plot.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario and write a CSV log")
    p_sim.add_argument("--config", required=True,
                       help="scenario file or bundled scenario name")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config entry (repeatable)")
    p_sim.set_defaults(func=cmd_simulate)

    p_sw = sub.add_parser("sweep", help="run a wrench preset sweep")
    p_sw.add_argument("--config", required=True,
                      help="base scenario file or bundled scenario name")
    p_sw.add_argument("--preset", default=None, help="preset name (table1)")
    p_sw.add_argument("--out", required=True, help="output directory")
    p_sw.add_argument("--set", action="append", metavar="KEY=VALUE",
                      help="override a config entry (repeatable)")
    p_sw.set_defaults(func=cmd_sweep)

    p_cl = sub.add_parser("classify", help="classify a wrench against a direction")
    p_cl.add_argument("--force", required=True, help="fx,fy,fz in N")
    p_cl.add_argument("--torque", default="0,0,0", help="tx,ty,tz in N m")
    p_cl.add_argument("--direction", default="1,0,0,0,0,0",
                      help="desired direction, 6 components")
    p_cl.set_defaults(func=cmd_classify)

    p_pl = sub.add_parser("plot", help="render CSV columns to a standalone SVG")
    p_pl.add_argument("--csv", required=True, help="input CSV log")
    p_pl.add_argument("--columns", required=True, help="comma-separated column names")
    p_pl.add_argument("--out", required=True, help="output SVG path")
    p_pl.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, FileNotFoundError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrajadvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
