"""Shared, cached simulation runs so the acceptance and property suites reuse them."""

from __future__ import annotations

import math
import warnings
from functools import lru_cache

from thb.hopf import turing_hopf_point
from thb.model import ModelParams
from thb.normal_form import analyze
from thb.simulator import CosineSeries, SimConfig, aligned_dt, classify, integrate

A, B = 0.1, 0.9
D41, D42 = 0.5, 0.05
# (tau, eps) offsets from the Turing-Hopf point used for the region runs
OFFSETS = {"D1": (-0.05, 0.05), "D2": (0.05, 0.05), "D4": (0.05, -0.0063), "D5": (0.05, -0.03)}
GRID = {D41: 32, D42: 64}
T_END = {D41: 3000.0, D42: 4100.0}


@lru_cache(maxsize=None)
def point(d: float):
    return turing_hopf_point(A, B, d)


@lru_cache(maxsize=None)
def analysis(d: float, rounded: bool = True):
    thp = point(d)
    return analyze(thp.rounded(4) if rounded else thp)


def cosine_data(sign: int = 1, k: int = 1) -> CosineSeries:
    """1 + sign*0.1*cos(k pi x), used for both u and v."""
    return CosineSeries(((0, 1.0), (k, 0.1 * sign)))


def config(d: float, da: float, de: float, sign: int = 1, n: int = None, t_end: float = None,
           min_steps: int = 1) -> SimConfig:
    thp = point(d)
    n = n or GRID[d]
    p = ModelParams(A, B, d, thp.eps_star + de, thp.tau_star + da)
    data = cosine_data(sign)
    return SimConfig(p, data, data, n, aligned_dt(p, n, min_steps), t_end or T_END[d])


@lru_cache(maxsize=None)
def run(d: float, region: str, sign: int = 1):
    cfg = config(d, *OFFSETS[region], sign)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fs = integrate(cfg)
    return fs, classify(fs)


@lru_cache(maxsize=None)
def mesh_pair(region: str):
    """Same D-run at N=32 and N=64 with dt halved (dt chosen admissible on the fine grid)."""
    thp = point(D41)
    da, de = OFFSETS[region]
    tau = thp.tau_star + da
    p = ModelParams(A, B, D41, thp.eps_star + de, tau)
    fine_bound = 0.4 * (1 / 64) ** 2 / (D41 * max(p.eps, 1.0))
    m = 2 * math.ceil(tau / (2 * fine_bound))
    data = cosine_data(1)
    out = []
    for n, steps in ((32, m // 2), (64, m)):
        out.append(integrate(SimConfig(p, data, data, n, tau / steps, 3000.0)))
    return tuple(out)
