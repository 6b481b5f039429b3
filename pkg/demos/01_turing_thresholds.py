"""Turing thresholds and the piecewise first Turing curve for a=0.1, b=0.9.

Prints eps_1, d_0 and the first few corners, then writes the curve eps_*(d)
(with each branch eps_*(k, d) dashed) to out/turing_curve.svg.
"""

from pathlib import Path

import numpy as np

from thb import svg
from thb.model import equilibrium
from thb.turing import d_corner, d_threshold, eps_star, first_turing_curve, thresholds

OUT = Path(__file__).with_name("out")
OUT.mkdir(exist_ok=True)

eq = equilibrium(0.1, 0.9)
th = thresholds(eq, 0.5)
print(f"equilibrium (u*, v*) = ({eq.u_star:g}, {eq.v_star:g})")
print(f"eps_1 = {th.eps1:.4f}   d_0 = {th.d0:.4f}")
for k in range(1, 5):
    print(f"d_{k},{k + 1} = {d_corner(eq, k):.4f}")

for d in (0.5, 0.05):
    pt = first_turing_curve(eq, d)
    print(f"d = {d}: k1 = {pt.k1}, eps_* = {pt.eps_star:.6f}, interval = "
          f"[{pt.interval[0]:.4f}, {pt.interval[1]:.4g})")

ds = np.geomspace(0.01, 1.5, 400)
env = [first_turing_curve(eq, d).eps_star for d in ds]
series = [(np.log10(ds), env, "eps_*(d)")]
for k in range(1, 5):
    branch = [eps_star(eq, d, k) if d > d_threshold(eq, k) else np.nan for d in ds]
    series.append((np.log10(ds), branch, f"branch k={k}"))
text = svg.line_plot(series, "first Turing curve", "log10 d", "eps", ylim=(0.0, 0.125))
(OUT / "turing_curve.svg").write_text(text)
print("wrote", OUT / "turing_curve.svg")
