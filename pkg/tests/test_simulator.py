import math
import warnings

import numpy as np
import pytest

from thb import normal_form as nf
from thb.errors import ConfigError, DivergenceError, PreconditionError
from thb.model import ModelParams, newton_root
from thb.simulator import (CosineSeries, FieldState, SimConfig, aligned_dt, classify, cosine_amplitudes,
                           integrate, resample, stability_bound, sweep, thread_limit, write_fields_csv)

from _runs import A, B, D41, OFFSETS, analysis, config, mesh_pair, cosine_data, point, run

P = ModelParams(0.1, 0.9, 0.5, 0.12, 0.25)
EQ_U, EQ_V = CosineSeries.constant(1.0), CosineSeries.constant(0.9)


def short(p=P, n=32, t_end=60.0, u=None, v=None, **kw):
    u = u or cosine_data(1)
    v = v or cosine_data(1)
    return SimConfig(p, u, v, n, aligned_dt(p, n, 1), t_end, **kw)


# -------------------------------------------------------------- config

def test_default_dt_aligned_and_stable():
    for n in (16, 32, 100):
        cfg = SimConfig(P, EQ_U, EQ_V, n)
        assert cfg.dt <= stability_bound(P, n)
        assert cfg.steps_per_delay >= 1024
        assert abs(P.tau / cfg.dt - cfg.steps_per_delay) < 1e-9


def test_zero_delay_default():
    cfg = SimConfig(P.with_(tau=0.0), EQ_U, EQ_V, 16)
    assert cfg.dt == 1e-3 and cfg.steps_per_delay == 0


@pytest.mark.parametrize("kw,match", [
    (dict(grid_points=8), "grid_points"),
    (dict(dt=0.25 / 1000.5), "integer"),
    (dict(dt=0.25 / 10), "stability"),
    (dict(t_end=0.0), "t_end"),
    (dict(record_every=0), "record_every"),
])
def test_config_invariants(kw, match):
    base = dict(params=P, initial_u=EQ_U, initial_v=EQ_V, grid_points=32, dt=None, t_end=10.0)
    base.update(kw)
    with pytest.raises(ConfigError, match=match):
        SimConfig(**base)


def test_config_round_trip():
    cfg = short()
    again = SimConfig.from_dict(cfg.to_dict())
    assert again == cfg


def test_config_from_dict_defaults_and_errors():
    cfg = SimConfig.from_dict({"params": {"a": 0.1, "b": 0.9, "d": 0.5, "eps": 0.12, "tau": 0.25},
                               "grid_points": 16, "t_end": 5})
    assert cfg.initial_u == CosineSeries.constant(1.0)
    assert cfg.initial_v == CosineSeries.constant(0.9)
    with pytest.raises(ConfigError):
        SimConfig.from_dict({"params": {"a": 0.1}})
    with pytest.raises(ConfigError):
        SimConfig.from_dict({"params": {"a": 0.1, "b": 0.9, "d": 0.5, "eps": 0.1},
                             "initial": {"u": [{"mode": -1, "amp": 1}]}})


# ----------------------------------------------------------- numerics

def test_cosine_amplitudes_exact():
    x = (np.arange(40) + 0.5) / 40
    w = 0.3 + 0.2 * np.cos(np.pi * x) - 0.05 * np.cos(3 * np.pi * x)
    c = cosine_amplitudes(w)
    assert np.allclose(c[:4], [0.3, 0.2, 0.0, -0.05], atol=1e-14)
    assert np.allclose(resample(w, 80), 0.3 + 0.2 * np.cos(np.pi * (np.arange(80) + 0.5) / 80)
                       - 0.05 * np.cos(3 * np.pi * (np.arange(80) + 0.5) / 80), atol=1e-13)


def test_equilibrium_is_invariant():
    fs = integrate(short(u=EQ_U, v=EQ_V, t_end=200.0))
    assert np.abs(fs.u - 1.0).max() < 1e-10
    assert np.abs(fs.v - 0.9).max() < 1e-10
    lab = classify(fs, 50.0)
    assert lab.signature() == ("homogeneous", None, "steady")


def test_constant_data_stay_constant_in_space():
    fs = integrate(short(u=CosineSeries.constant(0.9), v=CosineSeries.constant(1.1), t_end=100.0))
    assert np.ptp(fs.u, axis=1).max() < 1e-12
    assert np.ptp(fs.v, axis=1).max() < 1e-12


def test_mirror_symmetry():
    u0 = CosineSeries(((0, 1.0), (1, 0.1), (2, 0.05), (3, -0.02)))
    v0 = CosineSeries(((0, 0.9), (1, -0.04), (4, 0.01)))
    p = ModelParams(0.1, 0.9, 0.5, 0.09, 0.3)
    a = integrate(short(p, u=u0, v=v0, t_end=100.0))
    b = integrate(short(p, u=u0.mirrored(), v=v0.mirrored(), t_end=100.0))
    assert np.abs(a.u - b.u[:, ::-1]).max() < 1e-10
    assert np.abs(a.v - b.v[:, ::-1]).max() < 1e-10


@pytest.mark.parametrize("region", ["D1", "D5"])
def test_mesh_halving_convergence(region):
    coarse, fine = mesh_pair(region)
    n = fine.x.size
    err = max(np.abs(resample(coarse.u[-1], n) - fine.u[-1]).max(),
              np.abs(resample(coarse.v[-1], n) - fine.v[-1]).max())
    assert err < 1e-3


def test_linear_growth_rate():
    """tau = 0.1 (below the Hopf delay) and eps below eps*: mode k1 grows at the rate of D_k1's real root."""
    thp = point(D41)
    p = ModelParams(A, B, D41, thp.eps_star - 0.01, 0.1)
    lam = newton_root(p, thp.k1, 0.05)
    assert abs(lam.imag) < 1e-12 and lam.real > 0
    for guess in (0.5, 1.0, 0.2 + 1j, -0.1 + 3j):  # no other root to the right
        other = newton_root(p, thp.k1, guess)
        assert other.real <= lam.real + 1e-9
    eq = p.equilibrium
    cfg = SimConfig(p, CosineSeries(((0, eq.u_star), (1, 1e-6))), CosineSeries.constant(eq.v_star),
                    32, aligned_dt(p, 32, 1), 150.0)
    fs = integrate(cfg)
    c1 = cosine_amplitudes(fs.u - eq.u_star)[:, 1]
    t = fs.times
    sel = (t > 50) & (t < 150)
    rate = np.polyfit(t[sel], np.log(np.abs(c1[sel])), 1)[0]
    assert abs(rate - lam.real) < 0.05 * lam.real


def test_hopf_period_along_ray():
    """In D2 the period approaches 2 pi / omega_0+ as (tau, eps) -> (tau*, eps*)."""
    target = 2 * math.pi / point(D41).omega_star
    errs = []
    for s in (1.0, 0.5):
        da, de = OFFSETS["D2"]
        cfg = config(D41, s * da, s * de)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            lab = classify(integrate(cfg))
        assert lab.signature() == ("homogeneous", None, "periodic")
        errs.append(abs(lab.period - target) / target)
    assert errs[1] < errs[0] < 0.05


# --------------------------------------------------------------- labels

def test_classify_window_errors():
    fs = integrate(short(t_end=60.0))
    with pytest.raises(PreconditionError, match="exceeds"):
        classify(fs, 100.0)
    with pytest.raises(PreconditionError, match="50 time units"):
        classify(fs, 10.0)


def _synthetic(frames):
    x = (np.arange(32) + 0.5) / 32
    t = np.arange(frames.shape[0]) * 0.5
    cfg = short()
    return FieldState(t, x, frames, np.full_like(frames, 0.9), frames[-2:], frames[-2:], cfg)


def test_no_dominant_mode_reports_none():
    x = (np.arange(32) + 0.5) / 32
    row = 1.0 + 0.1 * np.cos(np.pi * x) + 0.05 * np.cos(2 * np.pi * x)
    lab = classify(_synthetic(np.tile(row, (200, 1))), 60.0)
    assert lab.spatial == "inhomogeneous" and lab.k is None and lab.temporal == "steady"


def test_dominance_threshold():
    x = (np.arange(32) + 0.5) / 32
    row = 1.0 + 0.1 * np.cos(2 * np.pi * x) + 0.0099 * np.cos(3 * np.pi * x)
    assert classify(_synthetic(np.tile(row, (200, 1))), 60.0).k == 2
    row = 1.0 + 0.00009 * np.cos(2 * np.pi * x)
    assert classify(_synthetic(np.tile(row, (200, 1))), 60.0).spatial == "homogeneous"


def test_synthetic_period():
    t = np.arange(400) * 0.5
    x = (np.arange(32) + 0.5) / 32
    frames = 1.0 + 0.2 * np.sin(2 * np.pi * t / 7.3)[:, None] * np.ones_like(x)
    lab = classify(_synthetic(frames), 150.0)
    assert lab.signature() == ("homogeneous", None, "periodic")
    assert lab.period == pytest.approx(7.3, rel=1e-3)


def test_negative_values_warn_not_fail():
    u0 = CosineSeries(((0, 1.0), (1, 1.5)))
    with pytest.warns(RuntimeWarning, match="negative"):
        fs = integrate(short(u=u0, t_end=5.0))
    assert fs.first_negative_time is not None and fs.min_value < 0


def test_divergence_reports_time():
    big = CosineSeries.constant(5.0)
    p = ModelParams(0.1, 0.9, 0.5, 0.2, 0.5)
    with pytest.raises(DivergenceError) as err:
        integrate(SimConfig(p, big, big, 16, None, 50.0))
    assert 0 < err.value.time < 50


# ---------------------------------------------------------------- sweep

def test_single_point_sweep_reduces_to_integrate():
    cfg = short(t_end=80.0)
    res = sweep(cfg, [cfg.params.tau], [cfg.params.eps], window=60.0)
    (key, out), = res.items()
    direct = classify(integrate(cfg), 60.0)
    assert key == (cfg.params.tau, cfg.params.eps)
    assert out.labels[0].signature() == direct.signature()
    assert np.array_equal(out.labels[0].amplitudes_u, direct.amplitudes_u)


def test_sweep_records_divergence():
    big = CosineSeries.constant(5.0)
    cfg = SimConfig(ModelParams(0.1, 0.9, 0.5, 0.2, 0.5), big, big, 16, None, 50.0)
    out = sweep(cfg, [0.5], [0.2])[(0.5, 0.2)]
    assert out.labels == (None,) and "diverged" in out.errors[0]


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("THB_THREADS", "2")
    assert thread_limit(8) == 2
    assert thread_limit(1) == 1
    monkeypatch.setenv("THB_THREADS", "x")
    with pytest.raises(ConfigError):
        thread_limit()


def test_threaded_sweep_matches_serial(monkeypatch):
    cfg = short(t_end=60.0)
    taus, epss = [0.2, 0.25], [0.1, 0.12]
    serial = sweep(cfg, taus, epss, threads=1, window=50.0)
    monkeypatch.setenv("THB_THREADS", "2")
    threaded = sweep(cfg, taus, epss, threads=4, window=50.0)
    for key in serial:
        assert np.array_equal(serial[key].labels[0].magnitudes, threaded[key].labels[0].magnitudes)


def test_mirrored_pair_in_d5_gives_opposite_states():
    (_, a), (_, b) = run(D41, "D5", 1), run(D41, "D5", -1)
    assert a.signature() == b.signature() == ("inhomogeneous", 1, "steady")
    assert a.amplitudes_u[1] == pytest.approx(-b.amplitudes_u[1], rel=1e-9)
    assert np.sign(a.amplitudes_u[1]) != np.sign(b.amplitudes_u[1])


EXPECTED = {
    nf.EQUILIBRIUM: ("homogeneous", None, "steady"),
    nf.HOMOGENEOUS_ORBIT: ("homogeneous", None, "periodic"),
    nf.INHOMOGENEOUS_STEADY: ("inhomogeneous", 1, "steady"),
    nf.INHOMOGENEOUS_ORBITS: ("inhomogeneous", 1, "periodic"),
}


def test_sweep_grid_matches_region_predictions():
    """3x3 grid around the d=0.5 Turing-Hopf point, kept clear of the thin sectors between L2 and L4."""
    thp = point(D41)
    a = analysis(D41, rounded=False)
    base = config(D41, 0.0, 0.0)
    taus = thp.tau_star + np.array([-0.04, 0.02, 0.04])
    epss = thp.eps_star + np.array([0.04, -0.015, -0.03])
    res = sweep(base, taus, epss)
    assert len(res) == 9
    for (tau, eps), out in res.items():
        pred = a.region(tau, eps)
        allowed = {EXPECTED[o] for o in pred.stable}
        assert out.labels[0].signature() in allowed, (tau - thp.tau_star, eps - thp.eps_star, pred.label)


def test_csv_format(tmp_path):
    fs = integrate(short(t_end=2.0, record_every=None))
    path = tmp_path / "u.csv"
    write_fields_csv(fs, str(path))
    raw = path.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert lines[0].startswith("t,u(x=")
    assert len(lines) == fs.times.size + 1
    first = lines[1].split(",")
    assert len(first) == 33 and float(first[0]) == 0.0
    assert first[1] == "%.12g" % fs.u[0, 0]
