"""Schnakenberg kinetics with delayed autocatalysis on (0, 1).

    u_t = eps*d*u_xx + a - u + u(t-tau)^2 v(t-tau)
    v_t =     d*v_xx + b     - u(t-tau)^2 v(t-tau)

with zero-flux boundaries.  Spatial modes are cos(k*pi*x) with Laplacian
eigenvalue mu_k = (k*pi)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

PI2 = math.pi**2
ROOT_TOL = 1e-8


def mu(k) -> float:
    """Eigenvalue of -d^2/dx^2 on (0, 1) with Neumann conditions (real k allowed)."""
    return k * k * PI2


@dataclass(frozen=True)
class Equilibrium:
    u_star: float
    v_star: float

    @property
    def uv2(self) -> float:
        """2 u* v*, the linearised autocatalytic gain."""
        return 2.0 * self.u_star * self.v_star

    @property
    def u2(self) -> float:
        return self.u_star**2


@dataclass(frozen=True)
class ModelParams:
    a: float
    b: float
    d: float
    eps: float
    tau: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "d", "eps"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise DomainError(f"{name} must be positive and finite, got {val!r}")
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise DomainError(f"tau must be nonnegative, got {self.tau!r}")

    @property
    def equilibrium(self) -> Equilibrium:
        return equilibrium(self.a, self.b)

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def equilibrium(a: float, b: float) -> Equilibrium:
    """The unique positive constant steady state (a + b, b / (a + b)^2)."""
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got a={a!r}, b={b!r}")
    u = a + b
    return Equilibrium(u, b / u**2)


def check_n0(eq: Equilibrium) -> bool:
    """Assumption N0: u*^2 > 2 u* v* - 1 > 0."""
    g = eq.uv2 - 1.0
    return bool(eq.u2 > g > 0.0)


@dataclass(frozen=True)
class ModeCoeffs:
    k: float
    p: float
    r: float
    s: float
    q: float

    @property
    def det(self) -> float:
        return self.r + self.q

    @property
    def tr(self) -> float:
        return -(self.p + self.s)


def coeffs_at(eq: Equilibrium, d: float, eps: float, k) -> ModeCoeffs:
    """Mode coefficients with ``k`` extended to real (or array) wave numbers."""
    m = d * mu(k)
    p = (eps + 1.0) * m + 1.0
    r = eps * m * m + m
    s = eq.u2 - eq.uv2
    q = (eps * eq.u2 - eq.uv2) * m + eq.u2
    return ModeCoeffs(k, p, r, s, q)


def mode_coeffs(params: ModelParams, k: int) -> ModeCoeffs:
    """Coefficients (p_k, r_k, s_k, q_k) of the k-th characteristic quasi-polynomial."""
    if k < 0 or int(k) != k:
        raise DomainError(f"wave number must be a nonnegative integer, got {k!r}")
    return coeffs_at(params.equilibrium, params.d, params.eps, int(k))


def char_value(params: ModelParams, k: int, lam: complex) -> complex:
    """D_k(lam, tau, eps) = lam^2 + p lam + r + (s lam + q) exp(-lam tau)."""
    c = mode_coeffs(params, k)
    lam = complex(lam)
    return lam * lam + c.p * lam + c.r + (c.s * lam + c.q) * np.exp(-lam * params.tau)


def char_derivative(params: ModelParams, k: int, lam: complex) -> complex:
    """Partial derivative of D_k with respect to lam."""
    c = mode_coeffs(params, k)
    lam = complex(lam)
    e = np.exp(-lam * params.tau)
    return 2 * lam + c.p + c.s * e - params.tau * (c.s * lam + c.q) * e


@dataclass(frozen=True)
class CharacteristicMatrix:
    """Per-mode linear operator split into instantaneous and delayed parts.

    ``instantaneous + delayed * w`` is the matrix the measure eta_k produces on
    a test function whose delayed sample carries the weight ``w`` relative to
    its present value; Delta_k(lam) = lam*I - (instantaneous + delayed*exp(-lam*tau)).
    """

    params: ModelParams
    k: int

    @property
    def instantaneous(self) -> np.ndarray:
        p = self.params
        m = p.d * mu(self.k)
        return np.array([[-p.eps * m - 1.0, 0.0], [0.0, -m]])

    @property
    def delayed(self) -> np.ndarray:
        eq = self.params.equilibrium
        return np.array([[eq.uv2, eq.u2], [-eq.uv2, -eq.u2]])

    def eta(self, weight: complex = 1.0, scale: float = 1.0) -> np.ndarray:
        """``scale * (A + B*weight)``; scale = tau gives the delay-normalised system."""
        return scale * (self.instantaneous + self.delayed * weight)

    def __call__(self, lam: complex) -> np.ndarray:
        w = np.exp(-complex(lam) * self.params.tau)
        return complex(lam) * np.eye(2) - self.eta(w)

    def det(self, lam: complex) -> complex:
        return complex(np.linalg.det(self(lam)))


def newton_root(params: ModelParams, k: int, lam0: complex, tol: float = 1e-13,
                maxiter: int = 100) -> complex:
    """Refine a characteristic root of D_k by Newton iteration."""
    lam = complex(lam0)
    for _ in range(maxiter):
        step = char_value(params, k, lam) / char_derivative(params, k, lam)
        lam -= step
        if abs(step) <= tol * max(1.0, abs(lam)):
            return lam
    raise ArithmeticError(f"Newton iteration for D_{k} did not converge from {lam0}")
