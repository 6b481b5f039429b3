"""Command-line front end: ``thb <subcommand> ...``.

Exit codes: 0 success, 2 precondition or configuration failure, 1 internal
error.  Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from typing import List, Optional

import numpy as np

from . import hopf, normal_form, report, simulator, svg, turing
from .errors import (BoundaryError, DomainError, PreconditionError,
                     UnsupportedModePairError)
from .model import ModelParams, equilibrium

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION = 0, 1, 2
DEFAULTS = dict(a=0.1, b=0.9, d=0.5)


class UsageError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def positive(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (val > 0 and math.isfinite(val)):
        raise argparse.ArgumentTypeError(f"must be a positive real, got {text!r}")
    return val


def _write(path: Optional[str], text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _kinetics(p):
    p.add_argument("--a", type=positive, default=DEFAULTS["a"])
    p.add_argument("--b", type=positive, default=DEFAULTS["b"])
    p.add_argument("--d", type=positive, default=DEFAULTS["d"])


def _round_opt(p):
    p.add_argument("--round-critical", type=int, default=None, metavar="DIGITS",
                   help="evaluate the normal form at (eps*, tau*, omega*) rounded to DIGITS decimals "
                        "(4 gives the four-decimal reference values)")


# ---------------------------------------------------------------- commands

def cmd_analyze(args) -> int:
    _write(args.out, report.dumps(report.analysis_report(args.a, args.b, args.d, args.round_critical)))
    return EXIT_OK


def cmd_turing_curve(args) -> int:
    if not args.d_min < args.d_max:
        raise UsageError(f"need d-min < d-max, got {args.d_min} >= {args.d_max}")
    if args.samples < 2:
        raise UsageError(f"samples must be >= 2, got {args.samples}")
    eq = equilibrium(args.a, args.b)
    ds = np.linspace(args.d_min, args.d_max, args.samples)
    rows = []
    for d in ds:
        tc = turing.first_turing_curve(eq, d)
        th = turing.thresholds(eq, d)
        rows.append((d, tc.k1, tc.eps_star, th.eps1, th.eps2_of_d, th.epsB_of_d))
    lines = ["d,k1,eps_star,eps1,eps2,epsB"]
    lines += [",".join("%.12g" % v for v in r) for r in rows]
    _write(args.out, "\n".join(lines) + "\n")
    if args.plot:
        arr = np.array(rows)
        corners = []
        k = 1
        while turing.d_corner(eq, k) >= args.d_min:
            dc = turing.d_corner(eq, k)
            if dc <= args.d_max:
                corners.append((dc, turing.eps_star(eq, dc, k), f"T{k},{k + 1}"))
            k += 1
        text = svg.line_plot([(arr[:, 0], arr[:, 2], "first Turing curve"),
                              (arr[:, 0], arr[:, 5], "eps_B(d)")],
                             "First Turing bifurcation curve", "d", "eps", corners)
        _write(args.plot, text)
    return EXIT_OK


def cmd_hopf(args) -> int:
    eq = equilibrium(args.a, args.b)
    eps = args.eps if args.eps is not None else turing.first_turing_curve(eq, args.d).eps_star
    params = ModelParams(args.a, args.b, args.d, eps)
    out = {"schema": report.SCHEMA, "inputs": {"a": args.a, "b": args.b, "d": args.d, "eps": eps},
           "hopf": report.hopf_section(params)}
    seq = []
    for m in hopf.hopf_modes(params):
        seq.append({"k": m.k, "tau_seq": [m.tau_seq(j) for j in range(args.branches)]})
    out["hopf"]["tau_sequences"] = seq
    _write(args.out, report.dumps(out))
    return EXIT_OK


def _analysis(args) -> normal_form.NormalFormAnalysis:
    thp = hopf.turing_hopf_point(args.a, args.b, args.d)
    if args.round_critical is not None:
        thp = thp.rounded(args.round_critical)
    return normal_form.analyze(thp)


def cmd_normal_form(args) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        nfa = _analysis(args)
    out = {"schema": report.SCHEMA,
           "inputs": {"a": args.a, "b": args.b, "d": args.d, "round_critical": args.round_critical},
           "turing_hopf_point": report.point_section(nfa.point),
           "normal_form": report.normal_form_section(nfa),
           "planar_unfolding": report.unfolding_section(nfa),
           "warnings": sorted({str(w.message) for w in caught})}
    _write(args.out, report.dumps(out))
    return EXIT_OK


def sector_samples(nfa: normal_form.NormalFormAnalysis, half_width: float):
    """One probe point per sector, on the angular bisector between consecutive lines."""
    thp = nfa.point
    ang = sorted(ln.angle() for ln in nfa.lines)
    probes = []
    for i, a0 in enumerate(ang):
        a1 = ang[(i + 1) % len(ang)] + (2 * math.pi if i == len(ang) - 1 else 0.0)
        mid = 0.5 * (a0 + a1)
        r = 0.5 * half_width
        tau, eps = thp.tau_star + r * math.cos(mid), thp.eps_star + r * math.sin(mid)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            pred = nfa.region(tau, eps, radius=max(half_width, normal_form.VALIDITY_RADIUS))
        probes.append({"tau": tau, "eps": eps, "label": pred.label,
                       "objects": pred.objects, "stable": pred.stable})
    return sorted(probes, key=lambda p: (p["label"] or "", p["tau"]))


def cmd_bifurcation_set(args) -> int:
    if not args.half_width > 0:
        raise UsageError("empty window: --half-width must be positive")
    nfa = _analysis(args)
    thp, w = nfa.point, args.half_width
    out = {"schema": report.SCHEMA,
           "inputs": {"a": args.a, "b": args.b, "d": args.d, "half_width": w,
                      "round_critical": args.round_critical},
           "turing_hopf_point": report.point_section(thp),
           "case": nfa.unfolding.case_label,
           "lines": report.lines_section(nfa),
           "regions": sector_samples(nfa, w)}
    _write(args.out, report.dumps(out))
    if args.plot:
        fig = svg.Figure(svg.Axes((thp.tau_star - w, thp.tau_star + w), (thp.eps_star - w, thp.eps_star + w)),
                         f"Bifurcation set near the Turing-Hopf point (case {nfa.unfolding.case_label})",
                         "tau", "eps")
        for i, ln in enumerate(nfa.lines):
            t = np.linspace(0, 2 * w, 2)
            xs = thp.tau_star + t * ln.direction[0]
            ys = thp.eps_star + t * ln.direction[1]
            fig.line(xs, ys, svg.PALETTE[i % len(svg.PALETTE)], ln.name)
            fig.text(thp.tau_star + 0.9 * w * ln.direction[0], thp.eps_star + 0.9 * w * ln.direction[1], ln.name)
        for pr in out["regions"]:
            if pr["label"]:
                fig.text(pr["tau"], pr["eps"], pr["label"], size=13)
        fig.marker(thp.tau_star, thp.eps_star, "TH")
        _write(args.plot, fig.to_svg())
    return EXIT_OK


def _load_config(path: str) -> simulator.SimConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise simulator.ConfigError(f"config is not valid JSON: {exc}") from exc
    return simulator.SimConfig.from_dict(raw)


def label_dict(label: simulator.PatternLabel, n_modes: int = 10):
    return {"spatial": label.spatial, "k": label.k, "temporal": label.temporal, "period": label.period,
            "amplitudes_u": label.amplitudes_u[:n_modes], "amplitudes_v": label.amplitudes_v[:n_modes],
            "magnitudes": label.magnitudes[:n_modes], "mean_u": label.mean_u, "mean_v": label.mean_v,
            "text": str(label)}


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fs = simulator.integrate(cfg)
        label = simulator.classify(fs, args.window)
    prefix = args.out
    simulator.write_fields_csv(fs, f"{prefix}_u.csv", "u")
    simulator.write_fields_csv(fs, f"{prefix}_v.csv", "v")
    out = {"schema": report.SCHEMA, "config": cfg.to_dict(), "label": label_dict(label),
           "min_value": fs.min_value, "first_negative_time": fs.first_negative_time,
           "warnings": sorted({str(w.message) for w in caught})}
    _write(f"{prefix}_label.json", report.dumps(out))
    if args.plot:
        # show the analysis window, where the pattern has settled
        span = args.window or 0.2 * fs.times[-1]
        sel = fs.times >= fs.times[-1] - span
        for name, data in (("u", fs.u), ("v", fs.v)):
            _write(f"{prefix}_{name}.svg", svg.heatmap(fs.times[sel], fs.x, data[sel], label=name))
    sys.stdout.write(report.dumps(out["label"]))
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _load_config(args.config)
    taus = np.linspace(*args.tau[:2], int(args.tau[2]))
    epss = np.linspace(*args.eps[:2], int(args.eps[2]))
    initial = [(base.initial_u, base.initial_v)]
    if args.mirrored:
        initial.append((base.initial_u.mirrored(), base.initial_v.mirrored()))
    results = simulator.sweep(base, taus, epss, initial, args.window, args.threads)
    nfa = None
    if args.predict:
        p = base.params
        nfa = normal_form.analyze(hopf.turing_hopf_point(p.a, p.b, p.d))
    points = []
    for (tau, eps), res in sorted(results.items()):
        row = {"tau": tau, "eps": eps,
               "labels": [None if lab is None else label_dict(lab, 4) for lab in res.labels],
               "errors": list(res.errors)}
        if nfa is not None:
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    pred = nfa.region(tau, eps, radius=math.inf)
                row["prediction"] = {"label": pred.label, "stable": pred.stable}
            except BoundaryError as exc:
                row["prediction"] = {"label": None, "error": str(exc)}
        points.append(row)
    _write(args.out, report.dumps({"schema": report.SCHEMA, "points": points}))
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thb", description="Turing-Hopf analysis and simulation of the delayed Schnakenberg system")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("analyze", help="full analysis report (JSON)")
    _kinetics(s)
    _round_opt(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("turing-curve", help="sample the first Turing curve (CSV, optional SVG)")
    s.add_argument("--a", type=positive, default=DEFAULTS["a"])
    s.add_argument("--b", type=positive, default=DEFAULTS["b"])
    s.add_argument("--d-min", type=positive, default=0.02)
    s.add_argument("--d-max", type=positive, default=1.0)
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--out")
    s.add_argument("--plot")
    s.set_defaults(func=cmd_turing_curve)

    s = sub.add_parser("hopf", help="Hopf thresholds and critical delays (JSON)")
    _kinetics(s)
    s.add_argument("--eps", type=positive, default=None, help="default: eps_*(d)")
    s.add_argument("--branches", type=int, default=3, help="number of tau_k^(j) per mode")
    s.add_argument("--out")
    s.set_defaults(func=cmd_hopf)

    s = sub.add_parser("normal-form", help="normal-form coefficients (JSON)")
    _kinetics(s)
    _round_opt(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_normal_form)

    s = sub.add_parser("bifurcation-set", help="lines L1..L6 and regions (JSON, optional SVG)")
    _kinetics(s)
    _round_opt(s)
    s.add_argument("--half-width", type=float, default=0.05)
    s.add_argument("--out")
    s.add_argument("--plot")
    s.set_defaults(func=cmd_bifurcation_set)

    s = sub.add_parser("simulate", help="integrate a JSON config, write CSV and a pattern label")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="output prefix")
    s.add_argument("--window", type=positive, default=None, help="analysis window (default: final 20%%)")
    s.add_argument("--plot", action="store_true", help="also write space-time SVG heatmaps")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="classify simulations over a (tau, eps) grid")
    s.add_argument("--config", required=True)
    s.add_argument("--tau", type=float, nargs=3, required=True, metavar=("MIN", "MAX", "N"))
    s.add_argument("--eps", type=float, nargs=3, required=True, metavar=("MIN", "MAX", "N"))
    s.add_argument("--mirrored", action="store_true", help="also run the x -> 1-x mirrored initial data")
    s.add_argument("--predict", action="store_true", help="attach the normal-form region prediction")
    s.add_argument("--window", type=positive, default=None)
    s.add_argument("--threads", type=int, default=None, help="worker threads (capped by THB_THREADS)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def _fail(exc: BaseException, code: int) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (PreconditionError, DomainError, BoundaryError, UnsupportedModePairError) as exc:
        return _fail(exc, EXIT_PRECONDITION)
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        return _fail(exc, EXIT_INTERNAL)


if __name__ == "__main__":
    sys.exit(main())
