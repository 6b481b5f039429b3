"""Third-order normal form, planar unfolding and bifurcation lines at the d=0.5 point.

The point is rounded to four decimals first, matching the reference tables;
the exact point gives the same numbers except that a1's alpha1 coefficient
(and the L2 slope) collapse to zero.
"""

from thb.hopf import turing_hopf_point
from thb.normal_form import analyze

thp = turing_hopf_point(0.1, 0.9, 0.5)
for label, point in (("rounded", thp.rounded(4)), ("exact", thp)):
    nfa = analyze(point)
    c, pu = nfa.coefficients, nfa.unfolding
    print(f"\n[{label}] eps={point.eps_star:.6g} tau={point.tau_star:.6g} omega={point.omega_star:.6g}")
    print(f"  a1(alpha)  = {c.a1_alpha[0]:.5g} alpha1 + {c.a1_alpha[1]:.5g} alpha2")
    print(f"  b2(alpha)  = ({c.b2_alpha[0]:.5g}) alpha1")
    print(f"  a111 = {c.a111:.5g}  a123 = {c.a123:.5g}")
    print(f"  b112 = {c.b112:.5g}  b223 = {c.b223:.5g}")
    print(f"  b0 = {pu.b0:.5g}  c0 = {pu.c0:.5g}  d0 = {pu.d0:+d}  d0-b0c0 = {pu.discriminant:.4g}  "
          f"case {pu.case_label}")
    for ln in nfa.lines:
        slope = "vertical" if ln.slope is None else f"{ln.slope:.5g}"
        print(f"  {ln.name}: slope {slope:>12}  {ln.description}")

nfa = analyze(thp.rounded(4))
print("\nregion predictions (offsets from the point):")
for da, de in ((-0.05, 0.05), (0.05, 0.05), (0.05, -0.0063), (0.05, -0.03)):
    r = nfa.region(thp.tau_star + da, thp.eps_star + de)
    print(f"  dtau={da:+.4f} deps={de:+.4f}: {r.label}  stable: {', '.join(r.stable) or 'none'}")
