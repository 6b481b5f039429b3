"""Method-of-lines integration of the delayed system and pattern classification.

Space: N cells on (0, 1) with centres x_i = (i + 1/2)/N and ghost-point
zero-flux closure, so cos(k pi x) restricted to the grid is an exact
eigenvector of the discrete Laplacian (a DCT-II basis).

Time: classical RK4 with dt = tau/m.  The lagged value u(t - tau)^2 v(t - tau)
is read from a ring buffer of the last m + 1 states and held fixed over the
four stages.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numba
import numpy as np
from scipy.fft import dct

from .errors import ConfigError, DivergenceError, PreconditionError
from .model import ModelParams

BLOWUP = 1e6
DEFAULT_N = 100
DEFAULT_STEPS_PER_DELAY = 1024
DEFAULT_DT_NO_DELAY = 1e-3
DEFAULT_RECORD_INTERVAL = 0.5
STABILITY_FACTOR = 0.4
AMPLITUDE_FLOOR = 1e-4
DOMINANCE_RATIO = 10.0
STEADY_RTOL = 1e-4
MIN_WINDOW = 50.0


# ------------------------------------------------------------------ config

@dataclass(frozen=True)
class CosineSeries:
    """sum_m amp_m cos(m pi x), constant over the history interval."""

    terms: Tuple[Tuple[int, float], ...] = ()

    @classmethod
    def constant(cls, value: float) -> "CosineSeries":
        return cls(((0, float(value)),))

    @classmethod
    def from_list(cls, items) -> "CosineSeries":
        terms = []
        for it in items:
            mode, amp = int(it["mode"]), float(it["amp"])
            if mode < 0:
                raise ConfigError(f"initial data: mode must be >= 0, got {mode}")
            terms.append((mode, amp))
        return cls(tuple(terms))

    def to_list(self):
        return [{"mode": m, "amp": a} for m, a in self.terms]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x, dtype=float)
        for m, a in self.terms:
            out += a * np.cos(m * np.pi * x)
        return out

    def mirrored(self) -> "CosineSeries":
        """Data composed with x -> 1 - x: odd modes change sign."""
        return CosineSeries(tuple((m, -a if m % 2 else a) for m, a in self.terms))


def stability_bound(params: ModelParams, n: int) -> float:
    dx = 1.0 / n
    return STABILITY_FACTOR * dx * dx / (params.d * max(params.eps, 1.0))


def aligned_dt(params: ModelParams, n: int, min_steps: int = DEFAULT_STEPS_PER_DELAY) -> float:
    """Largest dt = tau/m with m >= min_steps that respects the stability bound."""
    bound = stability_bound(params, n)
    if params.tau == 0:
        return min(DEFAULT_DT_NO_DELAY, bound)
    m = max(min_steps, math.ceil(params.tau / bound))
    return params.tau / m


def default_dt(params: ModelParams, n: int) -> float:
    return aligned_dt(params, n, DEFAULT_STEPS_PER_DELAY)


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    initial_u: CosineSeries
    initial_v: CosineSeries
    grid_points: int = DEFAULT_N
    dt: Optional[float] = None  # None: tau/1024, refined if the stability bound demands it
    t_end: float = 3000.0
    record_every: Optional[int] = None  # steps between frames; None: about every 0.5 time units

    def __post_init__(self):
        if not isinstance(self.grid_points, (int, np.integer)) or self.grid_points < 16:
            raise ConfigError(f"grid_points must be an integer >= 16, got {self.grid_points!r}")
        if self.dt is None:
            object.__setattr__(self, "dt", default_dt(self.params, self.grid_points))
        dt, tau = self.dt, self.params.tau
        if not (dt > 0 and math.isfinite(dt)):
            raise ConfigError(f"dt must be positive, got {dt!r}")
        if tau > 0:
            m = tau / dt
            if abs(m - round(m)) > 1e-9 * max(1.0, m) or round(m) < 1:
                raise ConfigError(f"tau/dt must be an integer (method-of-steps alignment), got {m!r}")
        bound = stability_bound(self.params, self.grid_points)
        if dt > bound * (1 + 1e-12):
            raise ConfigError(f"dt={dt!r} exceeds the stability bound 0.4*dx^2/(d*max(eps,1))={bound!r}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ConfigError(f"t_end must be positive, got {self.t_end!r}")
        if self.record_every is None:
            object.__setattr__(self, "record_every", max(1, round(DEFAULT_RECORD_INTERVAL / dt)))
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ConfigError(f"record_every must be a positive integer, got {self.record_every!r}")

    @property
    def steps_per_delay(self) -> int:
        return round(self.params.tau / self.dt) if self.params.tau > 0 else 0

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.grid_points) + 0.5) / self.grid_points

    def at(self, tau: float, eps: float) -> "SimConfig":
        """Same configuration at another (tau, eps), keeping tau/dt when admissible."""
        p = self.params.with_(tau=tau, eps=eps)
        m = self.steps_per_delay
        dt = None
        if m and tau > 0 and tau / m <= stability_bound(p, self.grid_points):
            dt = tau / m
        return replace(self, params=p, dt=dt)

    def mirrored(self) -> "SimConfig":
        return replace(self, initial_u=self.initial_u.mirrored(), initial_v=self.initial_v.mirrored())

    @classmethod
    def from_dict(cls, cfg: dict) -> "SimConfig":
        try:
            pp = cfg["params"]
            params = ModelParams(float(pp["a"]), float(pp["b"]), float(pp["d"]),
                                 float(pp["eps"]), float(pp.get("tau", 0.0)))
            init = cfg.get("initial", {})
            eq = params.equilibrium
            iu = CosineSeries.from_list(init["u"]) if "u" in init else CosineSeries.constant(eq.u_star)
            iv = CosineSeries.from_list(init["v"]) if "v" in init else CosineSeries.constant(eq.v_star)
            rec = cfg.get("record_every")
            return cls(params, iu, iv, int(cfg.get("grid_points", DEFAULT_N)),
                       None if cfg.get("dt") is None else float(cfg["dt"]),
                       float(cfg.get("t_end", 3000.0)), None if rec is None else int(rec))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed config: {exc!r}") from exc

    def to_dict(self) -> dict:
        p = self.params
        return {"params": {"a": p.a, "b": p.b, "d": p.d, "eps": p.eps, "tau": p.tau},
                "grid_points": self.grid_points, "dt": self.dt, "t_end": self.t_end,
                "record_every": self.record_every,
                "initial": {"u": self.initial_u.to_list(), "v": self.initial_v.to_list()}}


# ------------------------------------------------------------------ kernel

@numba.njit(cache=True, nogil=True)
def _laplacian(w, out, inv_dx2):
    n = w.shape[0]
    out[0] = (w[1] - w[0]) * inv_dx2
    for i in range(1, n - 1):
        out[i] = (w[i + 1] - 2.0 * w[i] + w[i - 1]) * inv_dx2
    out[n - 1] = (w[n - 2] - w[n - 1]) * inv_dx2


@numba.njit(cache=True, nogil=True)
def _rk4_delay(bu, bv, a, b, d, eps, dt, nsteps, rec, blowup):
    """Integrate from a ring buffer whose last row is the state at t = 0.

    Returns recorded frames, the buffer (oldest row first), the first blow-up
    step (-1 if none), the minimum value seen and the first step at which it
    went negative (-1 if never).
    """
    ring, n = bu.shape
    m = ring - 1
    inv = float(n) * n
    u = bu[m].copy()
    v = bv[m].copy()
    nrec = nsteps // rec + 1
    outu = np.empty((nrec, n))
    outv = np.empty((nrec, n))
    outu[0] = u
    outv[0] = v
    ku = np.empty((4, n))
    kv = np.empty((4, n))
    tu = np.empty(n)
    tv = np.empty(n)
    lap = np.empty(n)
    g = np.empty(n)
    head = m
    r = 1
    fail = -1
    vmin = min(u.min(), v.min())
    first_neg = -1
    for s in range(1, nsteps + 1):
        lag = (head + 1) % ring  # the state at t - tau
        for st in range(4):
            if st == 0:
                tu[:] = u
                tv[:] = v
            else:
                c = 0.5 if st < 3 else 1.0
                for i in range(n):
                    tu[i] = u[i] + c * dt * ku[st - 1, i]
                    tv[i] = v[i] + c * dt * kv[st - 1, i]
            if m == 0:
                for i in range(n):
                    g[i] = tu[i] * tu[i] * tv[i]
            elif st == 0:
                for i in range(n):
                    g[i] = bu[lag, i] * bu[lag, i] * bv[lag, i]
            _laplacian(tu, lap, inv)
            for i in range(n):
                ku[st, i] = eps * d * lap[i] + a - tu[i] + g[i]
            _laplacian(tv, lap, inv)
            for i in range(n):
                kv[st, i] = d * lap[i] + b - g[i]
        bad = False
        for i in range(n):
            u[i] += dt / 6.0 * (ku[0, i] + 2.0 * ku[1, i] + 2.0 * ku[2, i] + ku[3, i])
            v[i] += dt / 6.0 * (kv[0, i] + 2.0 * kv[1, i] + 2.0 * kv[2, i] + kv[3, i])
            if not (abs(u[i]) <= blowup and abs(v[i]) <= blowup):
                bad = True
            if u[i] < vmin:
                vmin = u[i]
            if v[i] < vmin:
                vmin = v[i]
        if vmin < 0.0 and first_neg < 0:
            first_neg = s
        head = lag
        bu[head] = u
        bv[head] = v
        if bad:
            fail = s
            break
        if s % rec == 0:
            outu[r] = u
            outv[r] = v
            r += 1
    order = np.empty(ring, dtype=np.int64)
    for j in range(ring):
        order[j] = (head + 1 + j) % ring
    return outu[:r], outv[:r], bu[order], bv[order], fail, vmin, first_neg


@dataclass
class FieldState:
    times: np.ndarray
    x: np.ndarray
    u: np.ndarray  # (frames, N)
    v: np.ndarray
    history_u: np.ndarray  # last m + 1 states, oldest first
    history_v: np.ndarray
    config: SimConfig
    min_value: float = 0.0
    first_negative_time: Optional[float] = None

    @property
    def record_interval(self) -> float:
        return self.config.dt * self.config.record_every


def integrate(cfg: SimConfig) -> FieldState:
    p, x = cfg.params, cfg.x
    ring = cfg.steps_per_delay + 1
    hu = np.tile(cfg.initial_u(x), (ring, 1))
    hv = np.tile(cfg.initial_v(x), (ring, 1))
    U, V, HU, HV, fail, vmin, first_neg = _rk4_delay(
        hu, hv, p.a, p.b, p.d, p.eps, cfg.dt, cfg.n_steps, int(cfg.record_every), BLOWUP)
    if fail >= 0:
        raise DivergenceError(f"solution diverged (|u| or |v| > {BLOWUP:g}) at t={fail * cfg.dt:.6g}",
                              fail * cfg.dt)
    neg_time = None
    if first_neg >= 0:
        neg_time = first_neg * cfg.dt
        warnings.warn(f"negative concentration {vmin:.3g} first seen at t={neg_time:.6g}",
                      RuntimeWarning, stacklevel=2)
    times = np.arange(U.shape[0]) * cfg.dt * cfg.record_every
    return FieldState(times, x, U, V, HU, HV, cfg, float(vmin), neg_time)


# ------------------------------------------------------------ classification

def cosine_amplitudes(w: np.ndarray) -> np.ndarray:
    """Coefficients c_k with w(x_i) = sum_k c_k cos(k pi x_i) along the last axis."""
    n = w.shape[-1]
    c = dct(w, type=2, axis=-1) / n
    c[..., 0] *= 0.5
    return c


def resample(w: np.ndarray, n_new: int) -> np.ndarray:
    """Evaluate the cosine interpolant of grid data on another cell-centred grid."""
    c = cosine_amplitudes(w)
    x = (np.arange(n_new) + 0.5) / n_new
    k = np.arange(w.shape[-1])
    return c @ np.cos(np.pi * np.outer(k, x))


@dataclass(frozen=True)
class PatternLabel:
    spatial: str  # "homogeneous" | "inhomogeneous"
    k: Optional[int]
    temporal: str  # "steady" | "periodic"
    period: Optional[float]
    amplitudes_u: np.ndarray = field(repr=False)  # window-averaged signed c_k of u - u*
    amplitudes_v: np.ndarray = field(repr=False)
    magnitudes: np.ndarray = field(repr=False)  # window-averaged |(c_k^u, c_k^v)|
    mean_u: float = float("nan")
    mean_v: float = float("nan")

    def __str__(self):
        sp = self.spatial if self.spatial == "homogeneous" else f"inhomogeneous({self.k})"
        tm = self.temporal if self.period is None else f"periodic({self.period:.6g})"
        return f"{sp}, {tm}"

    def signature(self):
        return (self.spatial, self.k, self.temporal)


def _period(t: np.ndarray, s: np.ndarray) -> Optional[float]:
    s = s - s.mean()
    idx = np.flatnonzero((s[:-1] < 0) & (s[1:] >= 0))
    if len(idx) < 2:
        return None
    frac = -s[idx] / (s[idx + 1] - s[idx])
    tc = t[idx] + frac * (t[idx + 1] - t[idx])
    return float(np.mean(np.diff(tc)))


def classify(fs: FieldState, analysis_window: Optional[float] = None) -> PatternLabel:
    """Spatial and temporal label over the final ``analysis_window`` time units.

    Defaults to the final 20% of the run.
    """
    t = fs.times
    span = t[-1] - t[0]
    if analysis_window is None:
        analysis_window = 0.2 * span
    if analysis_window > span + 1e-12:
        raise PreconditionError(f"analysis window {analysis_window} exceeds the recorded span {span}")
    sel = t >= t[-1] - analysis_window - 1e-9 * max(1.0, t[-1])
    tw = t[sel]
    eq = fs.config.params.equilibrium
    cu = cosine_amplitudes(fs.u[sel] - eq.u_star)
    cv = cosine_amplitudes(fs.v[sel] - eq.v_star)
    mag = np.hypot(cu, cv).mean(axis=0)

    higher = mag[1:]
    k = None
    if higher.size and higher.max() > AMPLITUDE_FLOOR:
        spatial = "inhomogeneous"
        j = int(np.argmax(higher))
        others = np.delete(higher, j)
        if higher[j] > DOMINANCE_RATIO * (others.max() if others.size else 0.0):
            k = j + 1
        retained = [0, k] if k is not None else [0] + [i + 1 for i in np.flatnonzero(higher > AMPLITUDE_FLOOR)]
    else:
        spatial = "homogeneous"
        retained = [0]

    # mode 0 is judged on the full field (mean ~ u*, v*), other modes on c_k itself
    signals = []
    for i in retained:
        for c, base in ((cu, eq.u_star), (cv, eq.v_star)):
            s = c[:, i] + (base if i == 0 else 0.0)
            ref = abs(s.mean()) if i == 0 else mag[i]
            signals.append((np.ptp(s) / max(ref, 1e-300), s))
    worst, s_worst = max(signals, key=lambda z: z[0])
    if worst < STEADY_RTOL:
        temporal, period = "steady", None
    else:
        temporal, period = "periodic", _period(tw, s_worst)
    if analysis_window < MIN_WINDOW and (period is None or analysis_window < 5 * period):
        raise PreconditionError(f"analysis window {analysis_window} covers neither 50 time units nor 5 periods")
    return PatternLabel(spatial, k, temporal, period, cu.mean(axis=0), cv.mean(axis=0), mag,
                        float(fs.u[sel].mean()), float(fs.v[sel].mean()))


# ------------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepOutcome:
    tau: float
    eps: float
    labels: Tuple[Optional[PatternLabel], ...]
    errors: Tuple[Optional[str], ...]


def thread_limit(requested: Optional[int] = None) -> int:
    """Worker count: ``requested`` (default: CPU count), capped by THB_THREADS."""
    n = requested or os.cpu_count() or 1
    env = os.environ.get("THB_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"THB_THREADS must be an integer, got {env!r}") from None
        n = min(n, max(1, cap))
    return max(1, n)


def _run_point(cfg: SimConfig, window: Optional[float]):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return classify(integrate(cfg), window), None
    except DivergenceError as exc:
        return None, str(exc)


def sweep(base: SimConfig, taus: Sequence[float], epss: Sequence[float],
          initial: Optional[Sequence[Tuple[CosineSeries, CosineSeries]]] = None,
          window: Optional[float] = None, threads: Optional[int] = None) -> Dict[Tuple[float, float], SweepOutcome]:
    """Integrate and classify every (tau, eps) grid point for each initial datum.

    Divergent runs are recorded as errors; other config problems propagate.
    """
    initial = list(initial or [(base.initial_u, base.initial_v)])
    jobs = []
    for tau in taus:
        for eps in epss:
            point = base.at(float(tau), float(eps))
            for iu, iv in initial:
                jobs.append(((float(tau), float(eps)), replace(point, initial_u=iu, initial_v=iv)))
    n = thread_limit(threads)
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(lambda j: _run_point(j[1], window), jobs))
    else:
        results = [_run_point(cfg, window) for _, cfg in jobs]
    out: Dict[Tuple[float, float], List] = {}
    for (key, _), res in zip(jobs, results):
        out.setdefault(key, []).append(res)
    return {key: SweepOutcome(key[0], key[1], tuple(r[0] for r in rs), tuple(r[1] for r in rs))
            for key, rs in out.items()}


# --------------------------------------------------------------------- CSV

def write_fields_csv(fs: FieldState, path: str, which: str = "u") -> None:
    data = fs.u if which == "u" else fs.v
    header = "t," + ",".join(f"{which}(x={xi:.12g})" for xi in fs.x)
    rows = np.column_stack([fs.times, data])
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        np.savetxt(fh, rows, fmt="%.12g", delimiter=",", newline="\n")
