"""Command-line entry point: point, curve, figure1, kernel, selftest."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import kernels as K
from .config import RunConfig, build_config, config_dict, read_config_file
from .errors import (AccuracyError, AsymptoticBreakdownError, ConfigError, DomainError, GuardError,
                     IndeterminateError, PoleCrossingError, SingularityError, TopologyError, UdwError)
from .kernels import KernelInput, ScenarioSpec
from .observables import DetectorParams, observe
from .svg import axes_for, boundary_path, render_figure
from .threshold import ThresholdCurve, classify, log_lattice, subset_check, trace_curve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_SELFTEST = 0, 2, 3, 4
CONFIG_ERRORS = (ConfigError, GuardError, DomainError)
NUMERIC_ERRORS = (IndeterminateError, AccuracyError, AsymptoticBreakdownError, PoleCrossingError,
                  SingularityError, TopologyError)
CSV_COLUMNS = ("scenario", "L_over_sigma", "omega_lower_sigma", "omega_upper_sigma",
               "L_max_over_sigma", "horizon_over_sigma", "method", "flags")
HARD_FLAGS = ("topology", "error:")


def _num(x) -> str:
    return "" if x is None or (isinstance(x, float) and not math.isfinite(x)) else repr(float(x))


def scenario_of(name: str, cfg: RunConfig) -> ScenarioSpec:
    return ScenarioSpec.from_name(name, cfg.two_pi_T_sigma)


# -------------------------------------------------------------------------
# point / kernel

def cmd_point(cfg: RunConfig) -> tuple[dict, int]:
    sc = scenario_of(cfg.scenario, cfg)
    spec = cfg.quadrature()
    params = DetectorParams(sigma=1.0, omega=cfg.omega)
    if sc.kind != "vacuum":
        K.check_guards(sc, cfg.L)
    status = EXIT_OK
    margin = error = None
    try:
        c = classify(sc, params, cfg.L, spec)
        r, entangled, margin, error = c.result, c.entangled, c.margin, c.error
    except IndeterminateError as exc:
        r = observe(sc, params, cfg.L, spec)
        entangled, margin, error, status = None, exc.margin, exc.tolerance, EXIT_NUMERIC
    # plain numbers whenever they are representable; otherwise a shared base-e exponent
    scale = max(r.A.exponent, r.X.exponent)
    if scale > -600:
        scale = 0
    X = r.X.mantissa_at(scale)
    record = {
        "scenario": sc.kind, "L": cfg.L, "omega": cfg.omega,
        "A": r.A.mantissa_at(scale).real, "X_re": X.real, "X_im": X.imag,
        "log_scale": scale, "N": r.N.mantissa_at(scale).real,
        "entangled": entangled, "margin": margin, "margin_error": error,
        "method": r.method, "error_estimate": r.error_estimate,
        "config": config_dict(cfg),
    }
    return record, status


def cmd_kernel(cfg: RunConfig) -> tuple[dict, int]:
    T = cfg.two_pi_T_sigma / (2.0 * math.pi)
    inp = KernelInput(u=cfg.u, v=cfg.v, epsilon=cfg.epsilon, L=cfg.L, T=0.0 if cfg.kernel == "vacuum" else T)
    fn = {
        "vacuum": K.vacuum_wightman,
        "thermal": K.thermal_wightman,
        "desitter": K.desitter_wightman,
        "response": lambda i: K.response_kernel(i.v, i.epsilon, i.T),
        "delta_response": lambda i: K.delta_response_kernel(i.v, i.T),
    }[cfg.kernel]
    z = complex(fn(inp))
    return {"kernel": cfg.kernel, "u": cfg.u, "v": cfg.v, "epsilon": cfg.epsilon, "L": cfg.L,
            "re": z.real, "im": z.imag, "config": config_dict(cfg)}, EXIT_OK


# -------------------------------------------------------------------------
# curves

def _L_grid(cfg: RunConfig) -> list[float]:
    return log_lattice(cfg.L_lo, cfg.L_hi, cfg.L_count)


def compute_curves(cfg: RunConfig, names) -> dict[str, ThresholdCurve]:
    spec = cfg.quadrature()
    out = {}
    for name in names:
        sc = scenario_of(name, cfg)
        out[name] = trace_curve(sc, _L_grid(cfg), spec, None, cfg.per_decade, workers=cfg.workers)
    return out


def curve_rows(cfg: RunConfig, curves: dict[str, ThresholdCurve]) -> list[dict]:
    horizon = 1.0 / cfg.two_pi_T_sigma if cfg.two_pi_T_sigma > 0 else None
    rows = []
    for name, curve in curves.items():
        for s in curve.samples:
            rows.append({
                "scenario": name, "L_over_sigma": _num(s.L),
                "omega_lower_sigma": _num(s.omega_lower), "omega_upper_sigma": _num(s.omega_upper),
                "L_max_over_sigma": _num(curve.L_max), "horizon_over_sigma": _num(horizon),
                "method": s.method, "flags": ";".join(s.flags),
            })
    return rows


def render_csv(cfg: RunConfig, rows: list[dict]) -> str:
    buf = io.StringIO()
    for line in cfg.echo_lines():
        buf.write(line + "\n")
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _rows_status(rows) -> int:
    hard = any(any(f.startswith(HARD_FLAGS) for f in r["flags"].split(";") if f) for r in rows)
    return EXIT_NUMERIC if hard else EXIT_OK


def _curve_json(cfg, curves):
    return {
        "curves": [{
            "scenario": name, "two_pi_T_sigma": c.two_pi_T_sigma, "L_max": c.L_max,
            "horizon": None if c.horizon is None or not math.isfinite(c.horizon) else c.horizon,
            "tip": list(c.tip) if c.tip else None,
            "samples": [{"L": s.L, "omega_lower": s.omega_lower, "omega_upper": s.omega_upper,
                         "method": s.method, "flags": list(s.flags)} for s in c.samples],
        } for name, c in curves.items()],
        "config": config_dict(cfg),
    }


def cmd_curve(cfg: RunConfig) -> tuple[dict, int]:
    curves = compute_curves(cfg, cfg.scenarios)
    rows = curve_rows(cfg, curves)
    out = Path(cfg.out)
    written = []
    if "csv" in cfg.formats:
        _write(out / "curve.csv", render_csv(cfg, rows))
        written.append(str(out / "curve.csv"))
    if "json" in cfg.formats:
        _write(out / "curve.json", json.dumps(_curve_json(cfg, curves), indent=2, sort_keys=True) + "\n")
        written.append(str(out / "curve.json"))
    return {"written": written, "rows": len(rows)}, _rows_status(rows)


# -------------------------------------------------------------------------
# figure

def pick_witness(report) -> dict | None:
    """The lattice witness whose classifications are most robust (largest smaller margin)."""
    if not report.witnesses:
        return None
    return max(report.witnesses,
               key=lambda w: (min(w["margin_thermal"], -w["margin_desitter"]), -w["L"], -w["omega"]))


def figure_data(cfg: RunConfig) -> dict:
    curves = compute_curves(cfg, ("vacuum", "thermal", "desitter"))
    report = subset_check(cfg.two_pi_T_sigma, log_lattice(cfg.lattice_L_lo, cfg.lattice_L_hi, cfg.lattice_L_count),
                          log_lattice(cfg.omega_lo, cfg.omega_hi, cfg.omega_count), cfg.quadrature(),
                          workers=cfg.workers)
    return {"curves": curves, "report": report, "witness": pick_witness(report)}


def render_figure1(cfg: RunConfig, data: dict) -> str:
    curves, witness = data["curves"], data["witness"]
    paths = {n: ([(s.L, s.omega_lower) for s in c.samples if s.omega_lower is not None]
                 if n == "vacuum" else boundary_path(c.samples, c.tip)) for n, c in curves.items()}
    ys = [y for pts in paths.values() for _, y in pts]
    axes = axes_for((cfg.L_lo, cfg.L_hi), ys)
    horizon = 1.0 / cfg.two_pi_T_sigma if cfg.two_pi_T_sigma > 0 else None
    note = None if witness else "no witness found: thermal-entangled, de Sitter-separable point missing"
    star = (witness["L"], witness["omega"]) if witness else None
    title = f"Entanglement boundary, 2πTσ = {cfg.two_pi_T_sigma:g}"
    return render_figure(paths, axes, title, horizon, star, cfg.echo_lines(prefix=""), note)


def cmd_figure1(cfg: RunConfig) -> tuple[dict, int]:
    data = figure_data(cfg)
    rows = curve_rows(cfg, data["curves"])
    out = Path(cfg.out)
    written = []
    _write(out / "figure1.csv", render_csv(cfg, rows))
    written.append(str(out / "figure1.csv"))
    if "svg" in cfg.formats:
        _write(out / "figure1.svg", render_figure1(cfg, data))
        written.append(str(out / "figure1.svg"))
    rep = data["report"]
    summary = {
        "L_max": {n: c.L_max for n, c in data["curves"].items()},
        "witness": data["witness"],
        "subset": {"points": rep.points, "violations": rep.violations, "witnesses": len(rep.witnesses),
                   "indeterminate": len(rep.indeterminate), "thermal_entangled": rep.thermal_entangled,
                   "desitter_entangled": rep.desitter_entangled},
        "config": config_dict(cfg),
    }
    if "json" in cfg.formats:
        _write(out / "figure1.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
        written.append(str(out / "figure1.json"))
    ok = data["witness"] is not None and not rep.violations
    status = _rows_status(rows) or (EXIT_OK if ok else EXIT_NUMERIC)
    return {"written": written, "witness": data["witness"], "violations": len(rep.violations)}, status


def cmd_selftest(cfg: RunConfig) -> tuple[dict, int]:
    from .selftest import run_selftest
    results = run_selftest(cfg)
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  status  seconds  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.ok else 'FAIL':<6}  {r.seconds:7.2f}  {r.detail}")
    print("\n".join(lines))
    failed = [r.name for r in results if not r.ok]
    return {"failed": failed, "checks": len(results)}, EXIT_SELFTEST if failed else EXIT_OK


COMMANDS = {"point": cmd_point, "curve": cmd_curve, "figure1": cmd_figure1,
            "kernel": cmd_kernel, "selftest": cmd_selftest}


# -------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="udwent", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key = value file (or an output file with an embedded config)")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
        for f in fields(RunConfig):
            sp.add_argument("--" + f.name.replace("_", "-"), dest="opt_" + f.name, default=None)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    pairs = read_config_file(ns.config) if ns.config else {}
    overrides = {}
    for item in ns.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    for f in fields(RunConfig):
        v = getattr(ns, "opt_" + f.name)
        if v is not None:
            overrides[f.name] = v
    return build_config(pairs, overrides)


def _error_record(exc: Exception, status: int) -> dict:
    rec = {"error": type(exc).__name__, "message": str(exc), "exit_status": status}
    for attr in ("pole", "margin", "tolerance"):
        if hasattr(exc, attr):
            val = getattr(exc, attr)
            rec[attr] = val if isinstance(val, (int, float, str, type(None))) else repr(val)
    return rec


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        payload, status = COMMANDS[ns.command](cfg)
    except CONFIG_ERRORS as exc:
        print(json.dumps(_error_record(exc, EXIT_CONFIG), sort_keys=True))
        return EXIT_CONFIG
    except NUMERIC_ERRORS as exc:
        print(json.dumps(_error_record(exc, EXIT_NUMERIC), sort_keys=True))
        return EXIT_NUMERIC
    except UdwError as exc:
        print(json.dumps(_error_record(exc, EXIT_NUMERIC), sort_keys=True))
        return EXIT_NUMERIC
    if ns.command != "selftest":
        print(json.dumps(payload, indent=2, sort_keys=True, default=_json_default))
    return status


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o).__name__)


if __name__ == "__main__":
    sys.exit(main())
