"""Deterministic JSON reports for the analysis pipeline."""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import warnings
from typing import Any, Dict, List, Optional

import numpy as np

from . import hopf, normal_form, turing
from .model import ModelParams, check_n0, equilibrium

SCHEMA = "thb/1"
SIG_DIGITS = 12


def _num(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.{SIG_DIGITS}g}") + 0.0  # no negative zero


def jsonable(obj: Any) -> Any:
    """Plain JSON types: complex as {re, im}, inf/nan as strings, floats at 12 digits."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def from_json(value: Any) -> Any:
    """Inverse of :func:`jsonable` for numbers: {re, im} -> complex, 'inf' -> inf."""
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            return complex(from_json(value["re"]), from_json(value["im"]))
        return {k: from_json(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_json(v) for v in value]
    if value in ("inf", "-inf", "nan"):
        return float(value)
    return value


# ------------------------------------------------------------------ sections

def turing_section(a: float, b: float, d: float) -> Dict[str, Any]:
    eq = equilibrium(a, b)
    th = turing.thresholds(eq, d)
    tc = turing.first_turing_curve(eq, d)
    corners = {f"d_{k},{k + 1}": turing.d_corner(eq, k) for k in range(1, max(4, tc.k1 + 1))}
    return {"eps1": th.eps1, "eps2": th.eps2_of_d, "epsB": th.epsB_of_d, "d0": th.d0,
            "corners": corners,
            "first_curve": {"k1": tc.k1, "eps_star": tc.eps_star, "interval": list(tc.interval),
                            "det_residual": abs(turing.det_k(eq, d, tc.eps_star, tc.k1))}}


def hopf_section(params: ModelParams) -> Dict[str, Any]:
    th = hopf.hopf_thresholds(params)
    modes = []
    for m in hopf.hopf_modes(params):
        row = {"k": m.k, "omega_plus": m.omega_plus, "tau": m.tau_k,
               "transversality": hopf.transversality(params, m.k)}
        if m.omega_minus is not None:
            row.update(omega_minus=m.omega_minus, tau_minus=m.tau_minus,
                       transversality_minus=hopf.transversality(params, m.k, branch="-"))
        modes.append(row)
    k2, tau = hopf.min_hopf_mode(params)
    return {"eps": params.eps, "K0": th.K0, "Kplus": th.Kplus, "Kstar": th.Kstar,
            "two_root_window": th.two_root_window, "modes": modes,
            "min_mode": {"k2": k2, "tau": tau}}


def point_section(thp: hopf.TuringHopfPoint) -> Dict[str, Any]:
    r1, r2 = thp.residuals()
    return {"k1": thp.k1, "k2": thp.k2, "eps_star": thp.eps_star, "tau_star": thp.tau_star,
            "omega_star": thp.omega_star, "residual_turing": r1, "residual_hopf": r2}


def normal_form_section(nfa: normal_form.NormalFormAnalysis) -> Dict[str, Any]:
    ed, mf, c = nfa.eigen, nfa.forms, nfa.coefficients
    forms = {f.name: mf.scalar(f.name) for f in dataclasses.fields(mf)}
    h_mono = {k: {"theta0": v[0], "theta_minus1": v[1]} for k, v in nfa.h.table(False).items()}
    h_fact = {k: {"theta0": v[0], "theta_minus1": v[1]} for k, v in nfa.h.table(True).items()}
    return {
        "eigen": dataclasses.asdict(ed),
        "forms_scalar": forms,
        "h_terms": {"monomial": h_mono, "factorial": h_fact},
        "coefficients": {"a1_alpha": list(c.a1_alpha), "b2_alpha": list(c.b2_alpha),
                         "a111": c.a111, "a123": c.a123, "b112": c.b112, "b223": c.b223,
                         "a11": 0.0, "a23": 0.0, "b12": 0.0, "imag_residue": c.imag_residue},
    }


def unfolding_section(nfa: normal_form.NormalFormAnalysis) -> Dict[str, Any]:
    pu = nfa.unfolding
    return {"eps1_alpha": list(pu.eps1_alpha), "eps2_alpha": list(pu.eps2_alpha), "b0": pu.b0,
            "c0": pu.c0, "d0": pu.d0, "d0_minus_b0c0": pu.discriminant,
            "sign_re_b223": pu.sign_re_b223, "case": pu.case_label}


def lines_section(nfa: normal_form.NormalFormAnalysis) -> List[Dict[str, Any]]:
    return [{"name": ln.name, "description": ln.description, "direction": list(ln.direction),
             "slope": "vertical" if ln.slope is None else ln.slope} for ln in nfa.lines]


def analysis_report(a: float, b: float, d: float, round_critical: Optional[int] = None) -> Dict[str, Any]:
    """Full pipeline; ``round_critical`` evaluates the normal form at (eps*, tau*, omega*)
    rounded to that many decimals."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        eq = equilibrium(a, b)
        thp = hopf.turing_hopf_point(a, b, d)
        used = thp.rounded(round_critical) if round_critical is not None else thp
        nfa = normal_form.analyze(used)
        rep = {
            "schema": SCHEMA,
            "inputs": {"a": a, "b": b, "d": d, "round_critical": round_critical},
            "equilibrium": {"u": eq.u_star, "v": eq.v_star},
            "verdicts": {"N0": check_n0(eq), "N3": True},
            "turing": turing_section(a, b, d),
            "hopf": hopf_section(thp.params),
            "turing_hopf_point": point_section(thp),
            "normal_form": normal_form_section(nfa),
            "planar_unfolding": unfolding_section(nfa),
            "lines": lines_section(nfa),
        }
    rep["warnings"] = sorted({str(w.message) for w in caught})
    return rep
