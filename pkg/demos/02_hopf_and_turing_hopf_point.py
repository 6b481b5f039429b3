"""Hopf data at eps = eps_*(d) and the Turing-Hopf point for d = 0.5 and d = 0.05."""

from thb.hopf import hopf_modes, hopf_thresholds, transversality, turing_hopf_point

for d in (0.5, 0.05):
    thp = turing_hopf_point(0.1, 0.9, d)
    p = thp.params
    th = hopf_thresholds(p)
    print(f"\nd = {d}: eps_* = {thp.eps_star:.6f}, K0 = {th.K0:.4f}, K* = {th.Kstar:.4f}")
    for m in hopf_modes(p):
        print(f"  mode {m.k}: omega+ = {m.omega_plus:.4f}, tau = {m.tau_k:.4f}, "
              f"transversality {transversality(p, m.k):+d}")
    r1, r2 = thp.residuals()
    print(f"  Turing-Hopf point (k1, k2) = ({thp.k1}, {thp.k2}), tau* = {thp.tau_star:.6f}, "
          f"omega* = {thp.omega_star:.6f}, residuals {r1:.1e} {r2:.1e}")
