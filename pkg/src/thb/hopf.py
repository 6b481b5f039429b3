"""Delay-induced Hopf data and the codimension-two Turing-Hopf point."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import (AssumptionN3Error, DomainError, NoImaginaryRootError,
                     NonTransversalError, PreconditionError)
from .model import (PI2, Equilibrium, ModelParams, ModeCoeffs, char_value,
                    check_n0, coeffs_at, mode_coeffs)
from .turing import first_turing_curve

KSTAR_TOL = 1e-10
TIE_TOL = 1e-10


def _check_hopf_region(params: ModelParams) -> float:
    eq = params.equilibrium
    if not check_n0(eq):
        raise PreconditionError("N0 violated")
    es = first_turing_curve(eq, params.d).eps_star
    # relative slack so that eps built from eps_star itself is admissible
    if params.eps < es * (1 - 1e-12):
        raise PreconditionError(f"eps={params.eps!r} lies below the first Turing curve eps_*={es!r}")
    return es


@dataclass(frozen=True)
class HopfThresholds:
    K0: float
    Kplus: Optional[float]
    Kstar: float
    two_root_window: bool = False  # True when omega^- is positive on (K0, K_*)


def _quartic_b(c: ModeCoeffs):
    return c.s**2 - c.p**2 + 2 * c.r


def _discriminant(eq, d, eps, k) -> float:
    c = coeffs_at(eq, d, eps, k)
    return _quartic_b(c) ** 2 - 4 * (c.r**2 - c.q**2)


def k0_closed_form(eq: Equilibrium, d: float, eps: float) -> float:
    """Real wave number K^0 at which r_k^2 = q_k^2 (r_k = q_k branch)."""
    A = eps * eq.u2 - eq.uv2 - 1.0
    inner = A + math.sqrt(A * A + 4.0 * eps * eq.u2)
    return math.sqrt(inner / (2.0 * eps * d)) / math.pi


def kplus_closed_form(eq: Equilibrium, d: float, eps: float) -> Optional[float]:
    s2 = (eq.u2 - eq.uv2) ** 2
    if s2 * (eps**2 + 1.0) < 1.0:
        return None
    inner = -eps + math.sqrt(s2 * (eps**2 + 1.0) - 1.0)
    if inner < 0:
        return 0.0
    return math.sqrt(inner / ((eps**2 + 1.0) * d)) / math.pi


def hopf_thresholds(params: ModelParams) -> HopfThresholds:
    _check_hopf_region(params)
    eq, d, eps = params.equilibrium, params.d, params.eps
    K0 = k0_closed_form(eq, d, eps)
    Kp = kplus_closed_form(eq, d, eps)
    if Kp is None or K0 >= Kp:
        return HopfThresholds(K0, Kp, K0)
    Kst = _smallest_discriminant_root(eq, d, eps, K0, Kp)
    return HopfThresholds(K0, Kp, Kst, two_root_window=True)


def _smallest_discriminant_root(eq, d, eps, lo, hi, samples=400) -> float:
    f = lambda k: _discriminant(eq, d, eps, k)
    grid = np.linspace(lo, hi, samples + 1)
    vals = [f(k) for k in grid]
    brackets = [(grid[i], grid[i + 1]) for i in range(samples) if vals[i] > 0 >= vals[i + 1]
                or vals[i] < 0 <= vals[i + 1]]
    if not brackets:
        # endpoints guarantee a sign change; fall back to the full interval
        brackets = [(lo, hi)]
    if len(brackets) > 1:
        warnings.warn(f"discriminant has {len(brackets)} sign changes on (K0, K+); using the smallest root",
                      RuntimeWarning, stacklevel=3)
    a, b = brackets[0]
    return brentq(f, a, b, xtol=KSTAR_TOL, rtol=4 * np.finfo(float).eps)


def omega_pm(c: ModeCoeffs):
    """Closed-form radicals omega^+ and omega^- (None where not a positive real)."""
    B = _quartic_b(c)
    C = c.r**2 - c.q**2
    disc = B * B - 4 * C
    if disc < 0:
        return None, None
    root = math.sqrt(disc)
    out = []
    for z in (B + root, B - root):
        out.append(math.sqrt(z / 2.0) if z > 0 else None)
    return tuple(out)


def crossing_angle(c: ModeCoeffs, w: float) -> float:
    """theta in (0, 2pi] with cos/sin of omega*tau fixed by D_k(i w) = 0."""
    den = c.s**2 * w**2 + c.q**2
    cos_ = (c.q * (w**2 - c.r) - c.p * c.s * w**2) / den
    sin_ = (c.s * w * (w**2 - c.r) + c.p * c.q * w) / den
    theta = math.atan2(sin_, cos_)
    if theta <= 0:
        theta += 2 * math.pi
    return theta


@dataclass(frozen=True)
class HopfMode:
    k: int
    omega_plus: float
    tau_k: float
    omega_minus: Optional[float] = None
    tau_minus: Optional[float] = None

    def tau_seq(self, j: int) -> float:
        """tau_k^(j) = tau_k + 2 pi j / omega_k^+."""
        return self.tau_k + 2 * math.pi * j / self.omega_plus

    def tau_seq_minus(self, j: int) -> float:
        if self.omega_minus is None:
            raise NoImaginaryRootError(f"mode {self.k} has no omega^- root")
        return self.tau_minus + 2 * math.pi * j / self.omega_minus


def hopf_mode(params: ModelParams, k: int, th: Optional[HopfThresholds] = None) -> HopfMode:
    th = th or hopf_thresholds(params)
    if not 0 <= k < th.Kstar:
        raise NoImaginaryRootError(f"no pure-imaginary root at mode {k}: admissible range is [0, {th.Kstar:.6g})")
    c = mode_coeffs(params, k)
    wp, wm = omega_pm(c)
    if wp is None:
        raise NoImaginaryRootError(f"no pure-imaginary root at mode {k}")
    tau = crossing_angle(c, wp) / wp
    tau_m = None
    if th.two_root_window and th.K0 <= k < th.Kstar and wm is not None:
        tau_m = crossing_angle(c, wm) / wm
    else:
        wm = None
    return HopfMode(k, wp, tau, wm, tau_m)


def hopf_modes(params: ModelParams) -> List[HopfMode]:
    th = hopf_thresholds(params)
    n = math.ceil(th.Kstar)
    return [hopf_mode(params, k, th) for k in range(n) if k < th.Kstar]


def min_hopf_mode(params: ModelParams):
    """(k2, tau_k2): the unique mode with the smallest critical delay (assumption N3)."""
    modes = hopf_modes(params)
    if not modes:
        raise PreconditionError("no admissible Hopf mode below K*")
    taus = np.array([m.tau_k for m in modes])
    i = int(np.argmin(taus))
    ties = np.flatnonzero(np.abs(taus - taus[i]) <= TIE_TOL * max(1.0, taus[i]))
    if len(ties) > 1:
        raise AssumptionN3Error(f"assumption N3 fails: modes {[modes[j].k for j in ties]} share tau={taus[i]!r}")
    return modes[i].k, modes[i].tau_k


def crossing_speed(params: ModelParams, k: int, omega: float, tau: float) -> complex:
    """d lambda / d tau at lambda = i*omega by implicit differentiation of D_k = 0."""
    c = mode_coeffs(params, k)
    lam = 1j * omega
    e = np.exp(-lam * tau)
    dD_dlam = 2 * lam + c.p + c.s * e - tau * (c.s * lam + c.q) * e
    dD_dtau = -lam * (c.s * lam + c.q) * e
    if abs(dD_dlam) < 1e-14:
        raise NonTransversalError(f"dD/dlambda vanishes at mode {k}")
    return -dD_dtau / dD_dlam


def transversality(params: ModelParams, k: int, j: int = 0, branch: str = "+") -> int:
    """Sign of dRe(lambda)/dtau at the crossing tau_k^(j) (or tau_k^(j-) for branch '-')."""
    m = hopf_mode(params, k)
    if branch == "+":
        w, tau = m.omega_plus, m.tau_seq(j)
    elif branch == "-":
        w, tau = m.omega_minus, m.tau_seq_minus(j)
    else:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    re = crossing_speed(params, k, w, tau).real
    if abs(re) < 1e-14:
        raise NonTransversalError(f"non-transversal crossing at mode {k}, j={j}")
    return 1 if re > 0 else -1


@dataclass(frozen=True)
class TuringHopfPoint:
    k1: int
    k2: int
    eps_star: float
    tau_star: float
    omega_star: float
    a: float
    b: float
    d: float

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.a, self.b, self.d, self.eps_star, self.tau_star)

    @property
    def equilibrium(self) -> Equilibrium:
        return self.params.equilibrium

    def rounded(self, ndigits: int = 4) -> "TuringHopfPoint":
        """The same point with (eps*, tau*, omega*) rounded to ``ndigits`` decimals."""
        return TuringHopfPoint(self.k1, self.k2, round(self.eps_star, ndigits),
                               round(self.tau_star, ndigits), round(self.omega_star, ndigits),
                               self.a, self.b, self.d)

    def residuals(self):
        p = self.params
        return abs(char_value(p, self.k1, 0.0)), abs(char_value(p, self.k2, 1j * self.omega_star))


def turing_hopf_point(a: float, b: float, d: float) -> TuringHopfPoint:
    """Locate (k1, k2, eps*, tau*, omega*) for fixed kinetics (a, b) and diffusion d."""
    base = ModelParams(a, b, d, 1.0)
    eq = base.equilibrium
    if not check_n0(eq):
        raise PreconditionError("N0 violated")
    tc = first_turing_curve(eq, d)
    at_curve = base.with_(eps=tc.eps_star)
    k2, tau = min_hopf_mode(at_curve)
    w = hopf_mode(at_curve, k2).omega_plus
    return TuringHopfPoint(tc.k1, k2, tc.eps_star, tau, w, a, b, d)
