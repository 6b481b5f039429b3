import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from thb.errors import DomainError, PreconditionError, WaveNumberRangeError
from thb.model import ModelParams, check_n0, equilibrium
from thb.turing import (TuringState, classify_turing, d_corner, d_peak, d_threshold,
                        det_k, eps_star, first_turing_curve, thresholds)

EQ = equilibrium(0.1, 0.9)

kinetics = st.tuples(st.floats(0.01, 0.5), st.floats(0.3, 3.0)).map(lambda ab: equilibrium(*ab)).filter(check_n0)


def test_thresholds_example():
    th = thresholds(EQ, 0.5)
    assert th.eps1 == pytest.approx(0.116718, abs=1e-6)
    assert th.d0 == pytest.approx(0.593145, abs=1e-6)
    assert th.epsB_of_d == th.eps1


def test_corners_example():
    vals = [d_corner(EQ, k) for k in (1, 2, 3)]
    assert vals == pytest.approx([0.1765, 0.0525, 0.0255], abs=1e-4)
    assert d_corner(EQ, 0) == math.inf


def test_eps_star_examples():
    assert eps_star(EQ, 0.5, 1) == pytest.approx(0.1007, abs=1e-4)
    assert eps_star(EQ, 0.05, 3) == pytest.approx(0.1056, abs=1e-4)


def test_first_curve_examples():
    assert first_turing_curve(EQ, 0.5).k1 == 1
    assert first_turing_curve(EQ, 0.05).k1 == 3


def test_corner_assignment_follows_interval():
    dc = d_corner(EQ, 1)
    pt = first_turing_curve(EQ, dc)
    assert pt.interval[0] <= dc < pt.interval[1]
    assert eps_star(EQ, dc, 1) == pytest.approx(eps_star(EQ, dc, 2), abs=1e-12)


def test_eps_star_undefined_below_threshold():
    with pytest.raises(DomainError):
        eps_star(EQ, 0.5 * d_threshold(EQ, 1), 1)


def test_wave_number_out_of_range():
    with pytest.raises(WaveNumberRangeError):
        first_turing_curve(EQ, 1e-12)


def test_n0_violation():
    with pytest.raises(PreconditionError, match="N0 violated"):
        thresholds(equilibrium(0.5, 0.5), 0.5)


@settings(max_examples=50, deadline=None)
@given(eq=kinetics, k=st.integers(1, 12))
def test_corner_continuity(eq, k):
    """Branches k and k+1 meet at d_{k,k+1}."""
    dc = d_corner(eq, k)
    e1, e2 = eps_star(eq, dc, k), eps_star(eq, dc, k + 1)
    assert abs(e1 - e2) <= 1e-12 * max(1.0, abs(e1))


@settings(max_examples=50, deadline=None)
@given(eq=kinetics, k=st.integers(1, 12))
def test_branch_peak(eq, k):
    """eps_*(k, d) peaks at d_M(k) with value eps_1."""
    dm = d_peak(eq, k)
    top = eps_star(eq, dm, k)
    assert top == pytest.approx(thresholds(eq, 1.0).eps1, rel=1e-12)
    assert eps_star(eq, dm * 1.01, k) < top and eps_star(eq, dm * 0.99, k) < top


@settings(max_examples=40, deadline=None)
@given(eq=kinetics, logd=st.floats(-3.5, 0.5))
def test_first_curve_dominates_every_branch(eq, logd):
    d = 10.0**logd
    pt = first_turing_curve(eq, d)
    det = det_k(eq, d, pt.eps_star, pt.k1)
    assert abs(det) < 1e-10 * max(1.0, abs(det_k(eq, d, 1.0, pt.k1)))
    for k in range(1, 201):
        if d > d_threshold(eq, k):
            assert eps_star(eq, d, k) <= pt.eps_star * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(logd=st.floats(-2.5, 0.5), rel=st.floats(0.5, 1.5))
def test_classification_matches_brute_force(logd, rel):
    d = 10.0**logd
    eps = first_turing_curve(EQ, d).eps_star * rel
    assume(abs(rel - 1) > 1e-6)
    v = classify_turing(ModelParams(0.1, 0.9, d, eps))
    dets = np.array([det_k(EQ, d, eps, k) for k in range(1, 201)])
    if v.state is TuringState.STABLE:
        assert (dets > 0).all()
    else:
        assert v.state is TuringState.UNSTABLE
        assert dets[v.k1 - 1] < 0


def test_on_curve_verdict():
    pt = first_turing_curve(EQ, 0.5)
    v = classify_turing(ModelParams(0.1, 0.9, 0.5, pt.eps_star))
    assert v.state is TuringState.ON_CURVE and v.k1 == 1
    assert str(v) == "OnTuringCurve(1)"


def test_first_curve_monotone_between_peaks():
    """Along a single branch the curve rises up to d_M and falls after it."""
    ds = np.linspace(d_corner(EQ, 1) * 1.001, 3.0, 400)
    vals = np.array([first_turing_curve(EQ, d).eps_star for d in ds])
    i = int(np.argmax(vals))
    assert ds[i] == pytest.approx(d_peak(EQ, 1), rel=0.02)
    assert (np.diff(vals[: i + 1]) >= -1e-15).all()
    assert (np.diff(vals[i:]) <= 1e-15).all()
