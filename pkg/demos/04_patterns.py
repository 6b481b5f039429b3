"""Simulate one parameter point in each of D1, D2, D4, D5 near the d=0.5 point.

Each run starts from u = v = 1 + 0.1 cos(pi x), is classified from its final
20%, and leaves a space-time heatmap of u in out/. Takes about ten seconds.
"""

from pathlib import Path

from thb import svg
from thb.hopf import turing_hopf_point
from thb.model import ModelParams
from thb.simulator import CosineSeries, SimConfig, aligned_dt, classify, integrate

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)
N = 32

thp = turing_hopf_point(0.1, 0.9, 0.5)
data = CosineSeries(((0, 1.0), (1, 0.1)))
for region, (da, de) in {"D1": (-0.05, 0.05), "D2": (0.05, 0.05),
                         "D4": (0.05, -0.0063), "D5": (0.05, -0.03)}.items():
    p = ModelParams(0.1, 0.9, 0.5, thp.eps_star + de, thp.tau_star + da)
    fs = integrate(SimConfig(p, data, data, N, aligned_dt(p, N, 1), 3000.0))
    label = classify(fs)
    print(f"{region}: tau={p.tau:.4f} eps={p.eps:.4f} -> {label}")
    tail = fs.times > 2800
    path = OUT / f"{region}_u.svg"
    path.write_text(svg.heatmap(fs.times[tail], fs.x, fs.u[tail], f"{region}: u(x, t)"))
