"""Diffusion-driven (Turing) instability thresholds and the first Turing curve."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DomainError, PreconditionError, WaveNumberRangeError
from .model import PI2, Equilibrium, ModelParams, check_n0, coeffs_at

K_SCAN_MAX = 10_000
ON_CURVE_RTOL = 1e-9


def _require_n0(eq: Equilibrium):
    if not check_n0(eq):
        raise PreconditionError(
            f"N0 violated: need u*^2 > 2u*v* - 1 > 0 at (u*, v*) = ({eq.u_star}, {eq.v_star})")


@dataclass(frozen=True)
class TuringThresholds:
    eps1: float
    eps2_of_d: float
    epsB_of_d: float
    d0: float


def thresholds(eq: Equilibrium, d: float) -> TuringThresholds:
    """eps_1, eps_2(d), eps_B(d) and the crossover abscissa d0."""
    _require_n0(eq)
    if not d > 0:
        raise DomainError(f"d must be positive, got {d!r}")
    g = eq.uv2 - 1.0
    root = math.sqrt(eq.uv2) - 1.0
    eps1 = root**2 / eq.u2
    eps2 = g / (PI2 * d + eq.u2)
    d0 = 2.0 * eq.u2 / (PI2 * root)
    epsB = eps1 if d <= d0 else eps2
    return TuringThresholds(eps1, eps2, epsB, d0)


def d_threshold(eq: Equilibrium, k: int) -> float:
    """d_k: the curve eps_*(k, d) is defined (positive) only for d > d_k."""
    return eq.u2 / ((eq.uv2 - 1.0) * k * k * PI2)


def d_peak(eq: Equilibrium, k: int) -> float:
    """d_M(k), where eps_*(k, d) attains its maximum eps_1."""
    return eq.u2 / ((math.sqrt(eq.uv2) - 1.0) * k * k * PI2)


def d_corner(eq: Equilibrium, k: int) -> float:
    """Abscissa d_{k,k+1} where the k and k+1 branches of eps_* meet.

    ``d_corner(eq, 0)`` is +inf by convention.
    """
    _require_n0(eq)
    if k == 0:
        return math.inf
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    g = eq.uv2 - 1.0
    s = 1.0 / k**2 + 1.0 / (k + 1) ** 2
    bracket = s + math.sqrt(s * s + 4.0 * g / (k**2 * (k + 1) ** 2))
    return eq.u2 / (2.0 * PI2 * g) * bracket


def eps_star(eq: Equilibrium, d: float, k: int) -> float:
    """eps_*(k, d): the diffusion ratio at which DET_k vanishes."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not d > d_threshold(eq, k):
        raise DomainError(f"eps_*({k}, d) undefined for d={d!r} <= d_{k}={d_threshold(eq, k)!r}")
    m = d * k * k * PI2
    return ((eq.uv2 - 1.0) * m - eq.u2) / (m * (m + eq.u2))


@dataclass(frozen=True)
class TuringCurvePoint:
    k1: int
    d: float
    eps_star: float
    interval: Tuple[float, float]


def first_turing_curve(eq: Equilibrium, d: float) -> TuringCurvePoint:
    """Active wave number and eps_*(d) on the piecewise first Turing curve.

    Corner intervals are half-open, [d_{k,k+1}, d_{k-1,k}), so the corner
    d_{k,k+1} belongs to branch k (both branches give the same eps_* there).
    """
    _require_n0(eq)
    if not d > 0:
        raise DomainError(f"d must be positive, got {d!r}")
    upper = math.inf
    for k in range(1, K_SCAN_MAX + 1):
        lower = d_corner(eq, k)
        if lower <= d < upper:
            return TuringCurvePoint(k, d, eps_star(eq, d, k), (lower, upper))
        upper = lower
    raise WaveNumberRangeError(f"wave number out of range: d={d!r} lies below d_{{k,k+1}} for all k <= {K_SCAN_MAX}")


class TuringState(enum.Enum):
    STABLE = "StableNoTuring"
    ON_CURVE = "OnTuringCurve"
    UNSTABLE = "TuringUnstable"


@dataclass(frozen=True)
class TuringVerdict:
    state: TuringState
    k1: Optional[int] = None

    def __str__(self):
        return f"{self.state.value}({self.k1})" if self.k1 is not None else self.state.value


def classify_turing(params: ModelParams, rtol: float = ON_CURVE_RTOL) -> TuringVerdict:
    eq = params.equilibrium
    _require_n0(eq)
    pt = first_turing_curve(eq, params.d)
    if abs(params.eps - pt.eps_star) <= rtol * abs(pt.eps_star):
        return TuringVerdict(TuringState.ON_CURVE, pt.k1)
    if params.eps > pt.eps_star:
        return TuringVerdict(TuringState.STABLE)
    return TuringVerdict(TuringState.UNSTABLE, pt.k1)


def det_k(eq: Equilibrium, d: float, eps: float, k) -> float:
    c = coeffs_at(eq, d, eps, k)
    return c.r + c.q
