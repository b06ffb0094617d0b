"""Command-line front end.

    ddqpc single --theta 90 --alpha 20 --out s.csv --svg s.svg
    ddqpc optimal --alpha-grid 0.5:50:25log
    ddqpc singlet
    ddqpc compare --tau-max 200
    ddqpc tomo --alpha 5 --tau-max 5

Exit codes: 0 success, 1 usage/config/IO error, 2 numerical failure.
A ``--config`` JSON object may supply any long flag (hyphens as
underscores); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import report
from .errors import NumericalFailure
from .experiments import ScenarioConfig, OutputSpec, default_config, log_grid, run_scenario

SUBCOMMANDS = {
    "single": "single_dd",
    "optimal": "optimal_coupling",
    "singlet": "singlet_pair",
    "compare": "measure_compare",
    "tomo": "tomography_dump",
}
# config key -> ScenarioConfig attribute
KEYS = {
    "alpha": "alpha",
    "alpha_grid": "alpha_grid",
    "theta": "theta_deg",
    "phi": "phi_deg",
    "delta": "delta",
    "tau_max": "tau_max",
    "dt": "dt",
    "stride": "stride",
    "level": "threshold_level",
    "thorough": "thorough",
}
OUTPUT_KEYS = ("out", "svg")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def parse_alpha_grid(text) -> list[float]:
    """``start:stop:N`` (linear), ``start:stop:Nlog`` (log) or a comma list."""
    if isinstance(text, list):
        return [float(v) for v in text]
    text = str(text).strip()
    if ":" in text:
        try:
            start, stop, n = text.split(":")
            is_log = n.endswith("log")
            count = int(n[:-3] if is_log else n)
            start, stop = float(start), float(stop)
        except ValueError:
            raise UsageError(f"--alpha-grid: cannot parse {text!r}") from None
        if count < 2:
            raise UsageError("--alpha-grid: need at least 2 points")
        if is_log:
            if start <= 0 or stop <= 0:
                raise UsageError("--alpha-grid: log grid needs positive endpoints")
            return log_grid(start, stop, count)
        return [float(v) for v in np.linspace(start, stop, count)]
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--alpha-grid: cannot parse {text!r}") from None


def _build_parser() -> _Parser:
    parser = _Parser(prog="ddqpc", description="Double-dot / point-contact entanglement runs")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--alpha", type=float)
        p.add_argument("--alpha-grid", dest="alpha_grid")
        p.add_argument("--theta", type=float, help="degrees")
        p.add_argument("--phi", type=float, help="degrees")
        p.add_argument("--delta", type=float)
        p.add_argument("--tau-max", dest="tau_max", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--stride", type=int)
        p.add_argument("--level", type=float)
        p.add_argument("--out")
        p.add_argument("--svg")
        p.add_argument("--config")
        p.add_argument("--thorough", action="store_true")
    return parser


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("--config: expected a JSON object")
    unknown = sorted(set(data) - set(KEYS) - set(OUTPUT_KEYS))
    if unknown:
        raise UsageError(f"--config: unknown key(s) {', '.join(unknown)}")
    return data


def parse_invocation(argv) -> ScenarioConfig:
    parser = _build_parser()
    ns = vars(parser.parse_args(list(argv)))
    sub = ns.pop("subcommand", None)
    if sub is None:
        raise UsageError(parser.format_usage())
    values = _load_config(ns.pop("config")) if "config" in ns else {}
    values.update(ns)
    kwargs = {}
    for key, attr in KEYS.items():
        if key in values:
            v = values[key]
            if key == "alpha_grid":
                v = parse_alpha_grid(v)
            elif key == "thorough":
                v = bool(v)
            elif key == "stride":
                v = int(v)
            else:
                v = float(v)
            kwargs[attr] = v
    kwargs["output"] = OutputSpec(csv=values.get("out"), svg=values.get("svg"))
    try:
        return default_config(SUBCOMMANDS[sub], **kwargs)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def render_flags(cfg: ScenarioConfig) -> list[str]:
    """Inverse of :func:`parse_invocation`: flags that reproduce ``cfg``."""
    sub = {v: k for k, v in SUBCOMMANDS.items()}[cfg.scenario]
    argv = [sub]
    for key, attr in KEYS.items():
        v = getattr(cfg, attr)
        if v is None:
            continue
        flag = "--" + key.replace("_", "-")
        if key == "thorough":
            if v:
                argv.append(flag)
        elif key == "alpha_grid":
            argv += [flag, ",".join(repr(float(a)) for a in v)]
        else:
            argv += [flag, repr(v)]
    if cfg.output.csv:
        argv += ["--out", cfg.output.csv]
    if cfg.output.svg:
        argv += ["--svg", cfg.output.svg]
    return argv


def _format_summary(summary: dict) -> str:
    def fmt(v):
        if isinstance(v, float):
            return f"{v:.6g}" if math.isfinite(v) else str(v)
        return str(v)

    return "\n".join(f"{k}: {fmt(v)}" for k, v in summary.items())


def run_main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_invocation(argv)
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return 1
    try:
        result = run_scenario(cfg)
    except NumericalFailure as exc:
        where = f" at tau={exc.tau:.6g}" if exc.tau is not None else ""
        print(f"numerical failure{where}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if cfg.output.csv:
            report.write_csv(result, cfg.output.csv)
        else:
            sys.stdout.write(report.render_csv(result))
        if cfg.output.svg:
            report.write_svg_plot(result, cfg.output.svg)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(_format_summary(result.summary), file=sys.stderr)
    return 0


def main():
    sys.exit(run_main())
