"""Third-order normal form at a (k1, 0)-mode Turing-Hopf point.

The delay is normalised to one (t -> t/tau*), so the centre eigenvalues are
0 (mode k1) and +-i*omega0 with omega0 = tau* omega* (mode 0).  Coordinates
on the centre manifold are (z1, z2, conj z2); the normal form reads

    z1' = a1(alpha) z1 + a111 z1^3 + a123 z1 |z2|^2
    z2' = i omega0 z2 + b2(alpha) z2 + b112 z1^2 z2 + b223 z2 |z2|^2

with unfolding parameters alpha = (tau - tau*, eps - eps*).  Quadratic
coefficients a11, a23, b12 vanish identically for k1 != 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (BoundaryError, DegenerateUnfoldingError, ResonanceError,
                     UnsupportedModePairError)
from .hopf import TuringHopfPoint
from .model import CharacteristicMatrix, mu

RESONANCE_TOL = 1e-10
SQRT2 = math.sqrt(2.0)
VALIDITY_RADIUS = 0.1
ONE_MINUS_ONE = np.array([1.0, -1.0])


class ExpSum:
    """A C^2-valued function theta -> sum_j v_j exp(rate_j * theta) on [-1, 0]."""

    def __init__(self, terms: Sequence[Tuple[complex, np.ndarray]]):
        self.terms = tuple((complex(r), np.asarray(v, dtype=complex)) for r, v in terms)

    def __call__(self, theta: float) -> np.ndarray:
        out = np.zeros(2, dtype=complex)
        for rate, vec in self.terms:
            out += vec * np.exp(rate * theta)
        return out

    def conj(self) -> "ExpSum":
        return ExpSum([(np.conj(r), np.conj(v)) for r, v in self.terms])

    def __mul__(self, c) -> "ExpSum":
        return ExpSum([(r, c * v) for r, v in self.terms])

    __rmul__ = __mul__

    def __add__(self, other: "ExpSum") -> "ExpSum":
        return ExpSum(self.terms + other.terms)


# --------------------------------------------------------------------- eigen-data

@dataclass(frozen=True)
class EigenData:
    p1_0: float
    q1_0: float
    p2_0: complex
    q2_0: complex
    N1: float
    N2: complex
    omega0: float

    def phi1(self, theta: float = 0.0) -> np.ndarray:
        return np.array([1.0, self.p1_0], dtype=complex)

    def phi2(self, theta: float = 0.0) -> np.ndarray:
        return np.array([1.0, self.p2_0]) * np.exp(1j * self.omega0 * theta)

    def phi2_bar(self, theta: float = 0.0) -> np.ndarray:
        return np.conj(self.phi2(theta))

    @property
    def psi1(self) -> np.ndarray:
        """psi_1(0) as a row vector."""
        return np.array([1.0, self.q1_0], dtype=complex) / self.N1

    @property
    def psi2(self) -> np.ndarray:
        return np.array([1.0, self.q2_0]) / self.N2

    @property
    def psi2_bar(self) -> np.ndarray:
        return np.conj(self.psi2)


def _require_k2_zero(thp: TuringHopfPoint):
    if thp.k2 != 0 or thp.k1 == 0:
        raise UnsupportedModePairError(
            f"unsupported mode pair (k1, k2) = ({thp.k1}, {thp.k2}); only k1 != 0, k2 = 0 is implemented")


def eigen_data(thp: TuringHopfPoint) -> EigenData:
    """Centre eigenvectors phi_i and adjoint rows psi_i(0), normalised to <psi_i, phi_i> = 1."""
    _require_k2_zero(thp)
    eq = thp.equilibrium
    u, v, uv2, u2 = eq.u_star, eq.v_star, eq.uv2, eq.u2
    tau, w = thp.tau_star, thp.omega_star
    mu1 = mu(thp.k1)
    # null vectors of the k1 block at lambda = 0
    g1 = 1.0 - uv2 + thp.d * thp.eps_star * mu1
    p1 = g1 / u2
    q1 = -g1 / uv2
    E = np.exp(1j * tau * w)
    g2 = (1.0 - uv2 / E - thp.d * thp.eps_star * mu(thp.k2) + 1j * w) * E
    p2 = g2 / u2
    q2 = -g2 / uv2
    N1 = 1.0 + p1 * q1 + tau * u * (2 * v + u * p1) * (1.0 - q1)
    N2 = 1.0 + p2 * q2 + tau * u * (2 * v + u * p2) * (1.0 - q2) / E
    return EigenData(p1, q1, complex(p2), complex(q2), N1, complex(N2), tau * w)


def bilinear_pairing(ed: EigenData, thp: TuringHopfPoint, psi0: np.ndarray, phi0: np.ndarray,
                     rate: complex) -> complex:
    """<psi, phi> for psi(s) = psi0 e^{-rate s}, phi(theta) = phi0 e^{rate theta} (closed form)."""
    B = CharacteristicMatrix(thp.params, 0).delayed * thp.tau_star
    return complex(psi0 @ phi0 + np.exp(-rate) * (psi0 @ B @ phi0))


# --------------------------------------------------------------- multilinear forms

@dataclass(frozen=True)
class MultilinearForms:
    """Second and third differentials of the kinetics along centre directions.

    Every entry is a complex multiple of (1, -1); ``scalar(name)`` returns it.
    """

    Q_11: np.ndarray
    Q_12: np.ndarray
    Q_12b: np.ndarray
    Q_22: np.ndarray
    Q_22b: np.ndarray
    Q_2b2b: np.ndarray
    C_111: np.ndarray
    C_122b: np.ndarray
    C_112: np.ndarray
    C_222b: np.ndarray

    def scalar(self, name: str) -> complex:
        return complex(getattr(self, name)[0])


def quadratic_form(eq, tau: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Q(X, Y), given the delayed samples X(-1), Y(-1)."""
    val = 2 * tau * (eq.v_star * x[0] * y[0] + eq.u_star * (x[0] * y[1] + x[1] * y[0]))
    return val * ONE_MINUS_ONE


def cubic_form(eq, tau: float, x, y, z) -> np.ndarray:
    """C(X, Y, Z), given the delayed samples."""
    val = 2 * tau * (x[0] * y[0] * z[1] + x[0] * y[1] * z[0] + x[1] * y[0] * z[0])
    return val * ONE_MINUS_ONE


def multilinear(ed: EigenData, thp: TuringHopfPoint) -> MultilinearForms:
    eq, tau = thp.equilibrium, thp.tau_star
    f1, f2, f2b = ed.phi1(-1), ed.phi2(-1), ed.phi2_bar(-1)
    Q = lambda x, y: quadratic_form(eq, tau, x, y)
    C = lambda x, y, z: cubic_form(eq, tau, x, y, z)
    return MultilinearForms(
        Q(f1, f1), Q(f1, f2), Q(f1, f2b), Q(f2, f2), Q(f2, f2b), Q(f2b, f2b),
        C(f1, f1, f1), C(f1, f2, f2b), C(f1, f1, f2), C(f2, f2, f2b))


# ------------------------------------------------------------------------ h-terms

# multi-index factorials i! j! l! of h_{ijl}; the tabulated values in the
# literature are quoted with this factor applied
_FACTORIAL = {"h200_0": 2, "h200_2k1": 2, "h011_0": 1, "h011_2k1": 1,
              "h020_0": 2, "h002_0": 2, "h110_k1": 1, "h101_k1": 1}


@dataclass(frozen=True)
class HTerms:
    """Second-order centre-manifold corrections, as closed-form evaluators."""

    h200_0: ExpSum
    h200_2k1: ExpSum
    h011_0: ExpSum
    h011_2k1: ExpSum
    h020_0: ExpSum
    h002_0: ExpSum
    h110_k1: ExpSum
    h101_k1: ExpSum

    def table(self, factorial: bool = False) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
        """{name: (h(0), h(-1))}; ``factorial=True`` multiplies by i! j! l!."""
        out = {}
        for name, scale in _FACTORIAL.items():
            h = getattr(self, name)
            c = scale if factorial else 1
            out[name] = (c * h(0.0), c * h(-1.0))
        return out


def _resolvent(M: np.ndarray, what: str) -> np.ndarray:
    det = np.linalg.det(M)
    if abs(det) < RESONANCE_TOL:
        raise ResonanceError(f"resonance: {what} is singular (|det| = {abs(det):.3g})")
    return np.linalg.inv(M)


def h_terms(ed: EigenData, mf: MultilinearForms, thp: TuringHopfPoint) -> HTerms:
    p, tau, w0, k1 = thp.params, thp.tau_star, ed.omega0, thp.k1
    eta = lambda k, lam: CharacteristicMatrix(p, k).eta(np.exp(-lam), scale=tau)
    R0 = _resolvent(eta(0, 0.0), "int d eta_0")
    R2k = _resolvent(eta(2 * k1, 0.0), f"int d eta_{2 * k1}")
    R020 = _resolvent(2j * w0 * np.eye(2) - eta(0, 2j * w0), "2i w0 I - int e^{2i w0 theta} d eta_0")
    R110 = _resolvent(1j * w0 * np.eye(2) - eta(k1, 1j * w0), f"i w0 I - int e^{{i w0 theta}} d eta_{k1}")

    f2, f2b = ed.phi2(0.0), ed.phi2_bar(0.0)
    psi2, psi2b = ed.psi2, ed.psi2_bar

    def proj(v, c_plus, c_minus):
        # c_plus * phi2(theta) psi2(0) v + c_minus * conj(phi2)(theta) conj(psi2)(0) v
        return [(1j * w0, c_plus * f2 * (psi2 @ v)), (-1j * w0, c_minus * f2b * (psi2b @ v))]

    Q11, Q22b, Q22, Q12 = mf.Q_11, mf.Q_22b, mf.Q_22, mf.Q_12
    h200_0 = ExpSum([(0, -0.5 * R0 @ Q11)] + proj(Q11, 1 / (2j * w0), -1 / (2j * w0)))
    h200_2k = ExpSum([(0, -1 / (2 * SQRT2) * (R2k @ Q11))])
    h011_0 = ExpSum([(0, -(R0 @ Q22b))] + proj(Q22b, 1 / (1j * w0), -1 / (1j * w0)))
    h011_2k = ExpSum([(0, np.zeros(2))])
    h020_0 = ExpSum([(2j * w0, 0.5 * (R020 @ Q22))] + proj(Q22, -1 / (2j * w0), -1 / (3 * 2j * w0)))
    phi1_psi1_Q12 = ed.phi1(0.0) * (ed.psi1 @ Q12)
    h110 = ExpSum([(1j * w0, R110 @ Q12), (0, -phi1_psi1_Q12 / (1j * w0))])
    return HTerms(h200_0, h200_2k, h011_0, h011_2k, h020_0, h020_0.conj(), h110, h110.conj())


# ------------------------------------------------------------------ coefficients

@dataclass(frozen=True)
class NormalForm:
    a1_alpha: Tuple[float, float]
    b2_alpha: Tuple[complex, complex]
    a111: float
    a123: float
    b112: complex
    b223: complex
    omega0: float
    imag_residue: float = 0.0  # largest |Im| discarded from a111, a123
    a11: float = field(default=0.0, init=False)
    a23: float = field(default=0.0, init=False)
    b12: complex = field(default=0.0, init=False)

    def a1(self, alpha) -> float:
        return self.a1_alpha[0] * alpha[0] + self.a1_alpha[1] * alpha[1]

    def b2(self, alpha) -> complex:
        return self.b2_alpha[0] * alpha[0] + self.b2_alpha[1] * alpha[1]


def _linear_part(ed: EigenData, thp: TuringHopfPoint, phi, psi, k: int):
    """Coefficients of alpha1, alpha2 in (1/2) psi(0) (L1(alpha) phi - mu_k D1(alpha) phi(0))."""
    cm = CharacteristicMatrix(thp.params, k)
    A_kin = np.diag([-1.0, 0.0])
    f0, fm1 = phi(0.0), phi(-1.0)
    m = mu(k)
    L1_tau = 2 * (A_kin @ f0 + cm.delayed @ fm1)
    D1_tau = 2 * thp.d * np.diag([thp.eps_star, 1.0])
    D1_eps = 2 * thp.d * np.diag([thp.tau_star, 0.0])
    c_tau = 0.5 * psi @ (L1_tau - m * D1_tau @ f0)
    c_eps = 0.5 * psi @ (-m * D1_eps @ f0)
    return complex(c_tau), complex(c_eps)


def nf_coefficients(ed: EigenData, mf: MultilinearForms, ht: HTerms, thp: TuringHopfPoint) -> NormalForm:
    eq, tau, w0 = thp.equilibrium, thp.tau_star, ed.omega0
    psi1, psi2, psi2b = ed.psi1, ed.psi2, ed.psi2_bar
    f1, f2, f2b = ed.phi1(-1), ed.phi2(-1), ed.phi2_bar(-1)
    Qh = lambda x, h: quadratic_form(eq, tau, x, h(-1.0))

    a1 = _linear_part(ed, thp, ed.phi1, psi1, thp.k1)
    b2 = _linear_part(ed, thp, ed.phi2, psi2, thp.k2)

    P1 = lambda v: complex(psi1 @ v)
    P2 = lambda v: complex(psi2 @ v)
    P2b = lambda v: complex(psi2b @ v)

    a111 = (0.25 * P1(mf.C_111)
            + (1 / w0) * (1j * P1(mf.Q_12) * P2(mf.Q_11)).real
            + P1(Qh(f1, ht.h200_0) + Qh(f1, ht.h200_2k1) / SQRT2))
    a123 = (P1(mf.C_122b)
            + (2 / w0) * (1j * P1(mf.Q_12) * P2(mf.Q_22b)).real
            + P1(Qh(f1, ht.h011_0) + Qh(f1, ht.h011_2k1) / SQRT2
                 + Qh(f2, ht.h101_k1) + Qh(f2b, ht.h110_k1)))
    b112 = (0.5 * P2(mf.C_112)
            + 1 / (2j * w0) * (2 * P2(mf.Q_11) * P1(mf.Q_12)
                               - P2(mf.Q_22) * P2(mf.Q_11) + P2(mf.Q_22b) * P2b(mf.Q_11))
            + P2(Qh(f1, ht.h110_k1) + Qh(f2, ht.h200_0)))
    b223 = (0.5 * P2(mf.C_222b)
            + 1 / (4j * w0) * ((2 / 3) * P2(mf.Q_2b2b) * P2b(mf.Q_22)
                               - 2 * P2(mf.Q_22) * P2(mf.Q_22b) + 4 * P2(mf.Q_22b) * P2b(mf.Q_22b))
            + P2(Qh(f2, ht.h011_0) + Qh(f2b, ht.h020_0)))

    residue = max(abs(a111.imag), abs(a123.imag), abs(a1[0].imag), abs(a1[1].imag))
    return NormalForm((a1[0].real, a1[1].real), b2, a111.real, a123.real, b112, b223, w0, residue)


# ------------------------------------------------------------- planar unfolding

# columns of the twelve-case table: (d0, sign b0, sign c0, sign(d0 - b0 c0))
UNFOLDING_TABLE = {
    (+1, +1, +1, +1): "Ia", (+1, +1, +1, -1): "Ib", (+1, +1, -1, +1): "II",
    (+1, -1, +1, +1): "III", (+1, -1, -1, +1): "IVa", (+1, -1, -1, -1): "IVb",
    (-1, +1, +1, -1): "V", (-1, +1, -1, +1): "VIa", (-1, +1, -1, -1): "VIb",
    (-1, -1, +1, +1): "VIIa", (-1, -1, +1, -1): "VIIb", (-1, -1, -1, -1): "VIII",
}


def unfolding_case(d0: int, b0: float, c0: float) -> str:
    """Label of the planar unfolding r' = r(e1 + r^2 + b0 z^2), z' = z(e2 + c0 r^2 + d0 z^2)."""
    key = (int(d0), int(np.sign(b0)), int(np.sign(c0)), int(np.sign(d0 - b0 * c0)))
    if 0 in key:
        raise DegenerateUnfoldingError(f"degenerate sign pattern {key}")
    try:
        return UNFOLDING_TABLE[key]
    except KeyError:
        raise DegenerateUnfoldingError(f"sign pattern {key} is not realisable") from None


@dataclass(frozen=True)
class PlanarUnfolding:
    eps1_alpha: Tuple[float, float]
    eps2_alpha: Tuple[float, float]
    b0: float
    c0: float
    d0: int
    sign_re_b223: int
    case_label: str

    @property
    def discriminant(self) -> float:
        """d0 - b0 c0."""
        return self.d0 - self.b0 * self.c0

    def eps1(self, alpha) -> float:
        return self.eps1_alpha[0] * alpha[0] + self.eps1_alpha[1] * alpha[1]

    def eps2(self, alpha) -> float:
        return self.eps2_alpha[0] * alpha[0] + self.eps2_alpha[1] * alpha[1]


def planar_unfolding(nf: NormalForm) -> PlanarUnfolding:
    quantities = {"a111": nf.a111, "a123": nf.a123, "Re b112": nf.b112.real, "Re b223": nf.b223.real}
    for name, val in quantities.items():
        if val == 0:
            raise DegenerateUnfoldingError(f"degenerate unfolding: {name} vanishes")
    s = 1 if nf.b223.real > 0 else -1
    b0 = nf.b112.real / abs(nf.a111) * s
    c0 = nf.a123 / abs(nf.b223.real) * s
    d0 = int(np.sign(nf.a111 * nf.b223.real))
    if d0 - b0 * c0 == 0:
        raise DegenerateUnfoldingError("degenerate unfolding: d0 - b0 c0 vanishes")
    eps1 = (s * nf.b2_alpha[0].real, s * nf.b2_alpha[1].real)
    eps2 = (s * nf.a1_alpha[0], s * nf.a1_alpha[1])
    return PlanarUnfolding(eps1, eps2, b0, c0, d0, s, unfolding_case(d0, b0, c0))


# ------------------------------------------------------------ bifurcation lines

@dataclass(frozen=True)
class BifurcationLine:
    """Half-line from (tau*, eps*) along ``direction`` in the (tau, eps) plane."""

    name: str
    description: str
    normal: Tuple[float, float]  # n . alpha = 0 defines the full line
    direction: Tuple[float, float]

    @property
    def slope(self) -> Optional[float]:
        """d eps / d tau, or None for a vertical line."""
        dt, de = self.direction
        if abs(dt) < 1e-15 * max(1.0, abs(de)):
            return None
        return de / dt

    def angle(self) -> float:
        return math.atan2(self.direction[1], self.direction[0])


def _half_line(name, desc, n, side_form, side_sign) -> BifurcationLine:
    """Line n . alpha = 0, keeping the half where side_sign * side_form(alpha) > 0."""
    n1, n2 = n
    if n1 == 0 and n2 == 0:
        raise DegenerateUnfoldingError(f"{name}: singular linear form")
    t = np.array([-n2, n1], dtype=float)
    t /= np.hypot(*t)
    val = side_form(t)
    if val == 0:
        raise DegenerateUnfoldingError(f"{name}: half-line orientation undetermined")
    if np.sign(val) != side_sign:
        t = -t
    return BifurcationLine(name, desc, (float(n1), float(n2)), (float(t[0]), float(t[1])))


def bifurcation_lines(pu: PlanarUnfolding, nf: NormalForm) -> List[BifurcationLine]:
    """The six boundary half-lines L1..L6 emanating from the Turing-Hopf point.

    L1/L5: Hopf line Re b2(alpha) = 0 with the Turing-stable / unstable side.
    L2/L6: Turing line a1(alpha) = 0 on the Hopf-unstable / stable side.
    L3: pitchfork of the periodic orbit, eps2 = c0 eps1 with eps1 < 0.
    L4: Hopf of the inhomogeneous steady states, eps2 = eps1 / b0 with d0 eps2 < 0.
    """
    if pu.case_label != "Ia":
        warnings.warn(f"case {pu.case_label}: only the algebraic boundary lines are produced; "
                      "cycle and heteroclinic curves are not computed", RuntimeWarning, stacklevel=2)
    re_b2 = (nf.b2_alpha[0].real, nf.b2_alpha[1].real)
    a1 = nf.a1_alpha
    e1, e2 = pu.eps1_alpha, pu.eps2_alpha
    if e2 == (0.0, 0.0):
        raise DegenerateUnfoldingError("singular linear form: eps2(alpha) vanishes identically")
    dot = lambda c: (lambda t: c[0] * t[0] + c[1] * t[1])
    c0, b0 = pu.c0, pu.b0
    n3 = (e2[0] - c0 * e1[0], e2[1] - c0 * e1[1])
    n4 = (e2[0] - e1[0] / b0, e2[1] - e1[1] / b0)
    return [
        _half_line("L1", "Hopf bifurcation of the equilibrium", re_b2, dot(a1), -1),
        _half_line("L2", "Turing bifurcation of the equilibrium", a1, dot(re_b2), +1),
        _half_line("L3", "Turing bifurcation of the homogeneous periodic orbit", n3, dot(e1), -1),
        _half_line("L4", "Hopf bifurcation of the inhomogeneous steady states", n4, dot(e2), -pu.d0),
        _half_line("L5", "Hopf bifurcation of the equilibrium (Turing-unstable side)", re_b2, dot(a1), +1),
        _half_line("L6", "Turing bifurcation of the equilibrium (Hopf-stable side)", a1, dot(re_b2), -1),
    ]


# ----------------------------------------------------------------- region query

EQUILIBRIUM = "equilibrium"
HOMOGENEOUS_ORBIT = "spatially homogeneous periodic orbit"
INHOMOGENEOUS_STEADY = "pair of spatially inhomogeneous steady states"
INHOMOGENEOUS_ORBITS = "pair of spatially inhomogeneous periodic orbits"


@dataclass(frozen=True)
class RegionPrediction:
    label: Optional[str]
    alpha: Tuple[float, float]
    objects: Dict[str, bool]  # invariant object -> asymptotically stable?

    @property
    def stable(self) -> List[str]:
        return [k for k, v in self.objects.items() if v]


def planar_objects(pu: PlanarUnfolding, alpha) -> Dict[str, bool]:
    """Existing invariant objects and their stability in the original time direction."""
    e1, e2 = pu.eps1(alpha), pu.eps2(alpha)
    b, c, d, s = pu.b0, pu.c0, pu.d0, pu.sign_re_b223
    stable = lambda eigs: all(s * ev < 0 for ev in eigs)
    out = {EQUILIBRIUM: stable([e1, e2])}
    if e1 < 0:
        out[HOMOGENEOUS_ORBIT] = stable([-2 * e1, e2 - c * e1])
    if -e2 / d > 0:
        out[INHOMOGENEOUS_STEADY] = stable([e1 - b * e2 / d, -2 * e2])
    den = d - b * c
    r2 = (b * e2 - d * e1) / den
    z2 = (c * e1 - e2) / den
    if r2 > 0 and z2 > 0:
        tr, det = 2 * (r2 + d * z2), 4 * r2 * z2 * den
        ev = np.roots([1.0, -tr, det])
        out[INHOMOGENEOUS_ORBITS] = stable(ev.real)
    return out


def region_of(pu: PlanarUnfolding, lines: List[BifurcationLine], thp: TuringHopfPoint,
              tau: float, eps: float, radius: float = VALIDITY_RADIUS) -> RegionPrediction:
    """Which sector D1..D6 contains (tau, eps), and what the amplitude system predicts there."""
    alpha = (tau - thp.tau_star, eps - thp.eps_star)
    r = max(abs(alpha[0]), abs(alpha[1]))
    if r > radius:
        warnings.warn(f"({tau}, {eps}) lies outside the neighbourhood of validity (radius {radius})",
                      RuntimeWarning, stacklevel=2)
    if r == 0:
        raise BoundaryError("the query point is the Turing-Hopf point itself")
    a = np.asarray(alpha, dtype=float)
    for ln in lines:
        t = np.asarray(ln.direction)
        along = a @ t
        dist = abs(a[0] * t[1] - a[1] * t[0])
        # relative distance: lines with tiny slopes must still resolve points
        if along > 0 and dist <= 1e-9 * max(np.hypot(*a), 1e-300):
            raise BoundaryError(f"on bifurcation boundary {ln.name}")
    objects = planar_objects(pu, alpha)
    return RegionPrediction(_sector_label(lines, a), alpha, objects)


def _sector_label(lines: List[BifurcationLine], a: np.ndarray) -> Optional[str]:
    angles = np.array([ln.angle() for ln in lines])
    order = np.argsort(angles)
    cyc = [int(i) for i in order]
    # L1..L6 must appear in cyclic order (either orientation) for the Di labels to apply
    i1 = cyc.index(0)
    ccw = cyc[i1:] + cyc[:i1]
    if ccw == [0, 1, 2, 3, 4, 5]:
        orient = 1
    elif ccw == [0, 5, 4, 3, 2, 1]:
        orient = -1
    else:
        warnings.warn("bifurcation lines are not in the L1..L6 cyclic order; no D-label assigned",
                      RuntimeWarning, stacklevel=3)
        return None
    phi = math.atan2(a[1], a[0])
    # sector D_{i+1} sweeps from L_i to L_{i+1} in the orientation of the order
    for i in range(6):
        start, end = angles[i], angles[(i + 1) % 6]
        span = (orient * (end - start)) % (2 * math.pi)
        off = (orient * (phi - start)) % (2 * math.pi)
        if 0 < off < span:
            return f"D{(i + 1) % 6 + 1}"
    return None


# ------------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class NormalFormAnalysis:
    point: TuringHopfPoint
    eigen: EigenData
    forms: MultilinearForms
    h: HTerms
    coefficients: NormalForm
    unfolding: PlanarUnfolding
    lines: List[BifurcationLine]

    def region(self, tau: float, eps: float, radius: float = VALIDITY_RADIUS) -> RegionPrediction:
        return region_of(self.unfolding, self.lines, self.point, tau, eps, radius)


def analyze(thp: TuringHopfPoint) -> NormalFormAnalysis:
    """Run eigen-data -> multilinear forms -> h-terms -> coefficients -> unfolding -> lines."""
    ed = eigen_data(thp)
    mf = multilinear(ed, thp)
    ht = h_terms(ed, mf, thp)
    nf = nf_coefficients(ed, mf, ht, thp)
    pu = planar_unfolding(nf)
    return NormalFormAnalysis(thp, ed, mf, ht, nf, pu, bifurcation_lines(pu, nf))
