import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thb.errors import DomainError
from thb.model import (CharacteristicMatrix, ModelParams, char_derivative, char_value,
                       check_n0, equilibrium, mode_coeffs, mu, newton_root)


def test_equilibrium_example():
    eq = equilibrium(0.1, 0.9)
    assert eq.u_star == pytest.approx(1.0)
    assert eq.v_star == pytest.approx(0.9)
    assert check_n0(eq)


def test_n0_boundary_fails():
    # 2 u* v* = 1 exactly
    assert not check_n0(equilibrium(0.5, 0.5))


@pytest.mark.parametrize("kw", [dict(a=-1), dict(d=0), dict(eps=float("inf")), dict(tau=-0.1)])
def test_params_domain(kw):
    base = dict(a=0.1, b=0.9, d=0.5, eps=0.1, tau=0.0)
    base.update(kw)
    with pytest.raises(DomainError):
        ModelParams(**base)


def test_mode_coeffs_rejects_fractional_k():
    with pytest.raises(DomainError):
        mode_coeffs(ModelParams(0.1, 0.9, 0.5, 0.1), 1.5)


def test_mode_coeffs_closed_forms():
    c = mode_coeffs(ModelParams(0.1, 0.9, 0.5, 0.1007), 1)
    m = 0.5 * np.pi**2
    assert c.p == pytest.approx(1.1007 * m + 1)
    assert c.r == pytest.approx(0.1007 * m * m + m)
    assert c.s == pytest.approx(-0.8)
    assert c.q == pytest.approx((0.1007 - 1.8) * m + 1)


@settings(max_examples=60, deadline=None)
@given(k=st.integers(0, 6), re=st.floats(-2, 2), im=st.floats(-3, 3), tau=st.floats(0, 2))
def test_matrix_determinant_is_quasipolynomial(k, re, im, tau):
    p = ModelParams(0.1, 0.9, 0.5, 0.12, tau)
    lam = complex(re, im)
    det = CharacteristicMatrix(p, k).det(lam)
    assert abs(det - char_value(p, k, lam)) <= 1e-9 * max(1.0, abs(det))


@settings(max_examples=40, deadline=None)
@given(k=st.integers(0, 4), re=st.floats(-1, 1), im=st.floats(-2, 2))
def test_char_derivative_matches_finite_difference(k, re, im):
    p = ModelParams(0.1, 0.9, 0.5, 0.12, 0.3)
    lam, h = complex(re, im), 1e-6
    fd = (char_value(p, k, lam + h) - char_value(p, k, lam - h)) / (2 * h)
    assert abs(fd - char_derivative(p, k, lam)) < 1e-6 * max(1.0, abs(fd))


def test_newton_root_converges_to_root():
    p = ModelParams(0.1, 0.9, 0.5, 0.09, 0.1)
    lam = newton_root(p, 1, 0.05)
    assert abs(char_value(p, 1, lam)) < 1e-12


def test_mu():
    assert mu(2) == pytest.approx(4 * np.pi**2)
