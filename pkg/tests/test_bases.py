import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavebasis.bases import (
    AiryImproved,
    BasisKind,
    basis_derivative,
    cos_sqrt,
    eval_basis,
    parse_basis_kind,
    sinc_sqrt,
    solution_from_ic,
)
from wavebasis.errors import ConfigError
from wavebasis.oracle import Grid, integrate_ivp
from wavebasis.profiles import KsqProfile, PiecewiseConstant, PowerLaw, SingularPowerLaw


def const_profile(k, half=20.0):
    return KsqProfile(PiecewiseConstant((-half, half), (-(k * k),)), prefactor=1.0)


HARM = KsqProfile(PowerLaw(1.0, 2.0))


def test_cos_sqrt_examples():
    assert cos_sqrt(0.0) == 1.0
    assert cos_sqrt(math.pi**2) == pytest.approx(-1.0, abs=1e-15)
    assert cos_sqrt(-1.0) == pytest.approx(math.cosh(1.0), rel=1e-15)


def test_sinc_sqrt_examples():
    assert sinc_sqrt(0.0) == 1.0
    assert sinc_sqrt(math.pi**2) == pytest.approx(0.0, abs=1e-15)
    assert sinc_sqrt(-1.0) == pytest.approx(math.sinh(1.0), rel=1e-15)


@pytest.mark.parametrize("w", [1e-4, -1e-4])
def test_series_branch_continuity(w):
    r = math.sqrt(abs(w))
    direct_c = math.cos(r) if w > 0 else math.cosh(r)
    direct_s = (math.sin(r) if w > 0 else math.sinh(r)) / r
    below = np.nextafter(w, 0.0)
    assert abs(cos_sqrt(below) - direct_c) <= 1e-12
    assert abs(sinc_sqrt(below) - direct_s) <= 1e-12
    assert abs(cos_sqrt(w) - direct_c) <= 1e-12


def test_complex_argument():
    w = 2.0 + 1.5j
    assert cos_sqrt(w) == pytest.approx(np.cos(np.sqrt(w)), rel=1e-14)
    assert sinc_sqrt(w) == pytest.approx(np.sin(np.sqrt(w)) / np.sqrt(w), rel=1e-14)


@given(k=st.floats(0.05, 5), x=st.floats(-4, 4))
def test_new_bases_constant_k(k, x):
    ev = eval_basis(BasisKind.NEW, const_profile(k), 0.0, x)
    assert ev.finite
    assert abs(ev.C - math.cos(k * x)) <= 1e-12
    assert abs(ev.S - math.sin(k * x) / k) <= 1e-12


@given(x=st.floats(0.0, 3.0), E=st.floats(0.1, 5.0), sing=st.booleans())
def test_parity(x, E, sing):
    prof = KsqProfile(SingularPowerLaw(1.0, 0.5)) if sing else HARM
    E = -E if sing else E
    a = eval_basis(BasisKind.NEW, prof, E, x)
    b = eval_basis(BasisKind.NEW, prof, E, -x)
    assert abs(a.C - b.C) <= 1e-10
    assert abs(a.S + b.S) <= 1e-10


def test_initial_conditions():
    for prof, E in ((HARM, 1.0), (KsqProfile(PowerLaw(2.0, 4.0)), 3.0)):
        ev = eval_basis(BasisKind.NEW, prof, E, 0.0)
        dC, dS = basis_derivative(BasisKind.NEW, prof, E, 0.0)
        assert abs(ev.C - 1) <= 1e-8 and abs(ev.S) <= 1e-8
        assert abs(dC) <= 1e-8 and abs(dS - 1) <= 1e-8


def test_derivative_constant_k():
    k, x = 1.7, 0.9
    dC, dS = basis_derivative(BasisKind.NEW, const_profile(k), 0.0, x)
    assert dC == pytest.approx(-k * math.sin(k * x), rel=1e-8)
    assert dS == pytest.approx(math.cos(k * x), rel=1e-8)


def test_continuity_across_turning_point():
    x = 1.0 + 1e-6 * np.arange(-1000, 1001)
    ev = eval_basis(BasisKind.NEW, HARM, 1.0, x)
    assert np.all(ev.finite)
    assert np.max(np.abs(np.diff(ev.C))) <= 1e-6
    assert np.max(np.abs(np.diff(ev.S))) <= 1e-6
    for side in (1.0 - 1e-3, 1.0 + 1e-3):
        dC, dS = basis_derivative(BasisKind.NEW, HARM, 1.0, side)
        assert math.isfinite(dC) and math.isfinite(dS)


def test_solution_from_ic_examples():
    assert solution_from_ic(BasisKind.NEW, HARM, 1.0, 1.0, 0.0, 0.0) == 1.0
    k = 2.3
    assert solution_from_ic(BasisKind.NEW, const_profile(k), 0.0, 0.0, 1.0, 0.8) == pytest.approx(
        math.sin(k * 0.8) / k, rel=1e-13
    )


def test_solution_continuous_through_turning_point():
    # harmonic well, E = 1: xi = 1; compare the new-basis trace and RK4 near xi
    x = np.linspace(0.9, 1.1, 201)
    u = solution_from_ic(BasisKind.NEW, HARM, 1.0, 1.0, 0.0, x)
    assert np.all(np.isfinite(u))
    assert np.max(np.abs(np.diff(u))) < 5e-3
    ref = integrate_ivp(HARM, 1.0, 1.0, 0.0, Grid(0.0, 1.1, 1101))[900:, 0]
    # an approximation, not exact: near xi the error is of order 10%
    assert np.max(np.abs(u - ref)) < 0.15


def test_wkb_constant_unit_k():
    ev = eval_basis(BasisKind.WKB, const_profile(1.0), 0.0, math.pi)
    assert ev.C == pytest.approx(-1.0, abs=1e-10)
    assert ev.S == pytest.approx(0.0, abs=1e-10)


def test_simple_wkb_constant_k():
    ev = eval_basis(BasisKind.SIMPLE_WKB, const_profile(2.0), 0.0, 0.7)
    assert ev.C == pytest.approx(math.cos(1.4), abs=1e-10)
    assert ev.S == pytest.approx(math.sin(1.4), abs=1e-10)


def test_wkb_divergence_flag():
    ev = eval_basis(BasisKind.WKB, HARM, 1.0, 1.0)
    assert not ev.finite
    assert math.isinf(ev.C) and math.isinf(ev.S)
    near = eval_basis(BasisKind.WKB, HARM, 1.0, 1.0 - 1e-6)
    assert near.finite
    assert eval_basis(BasisKind.NEW, HARM, 1.0, 1.0).finite


def test_wkb_envelope_growth():
    # envelope |k|^(-1/2) ~ (2 d)^(-1/4) for the unit harmonic well at E = 1
    env = []
    ds = [1e-4, 1e-8, 1e-13]
    for d in ds:
        ev = eval_basis(BasisKind.WKB, HARM, 1.0, 1.0 - d)
        env.append(math.hypot(ev.C, ev.S))
        assert env[-1] == pytest.approx((2 * d) ** -0.25, rel=1e-3)
    assert env[-1] > 1e3


def test_wkb_singular_origin():
    prof = KsqProfile(SingularPowerLaw(1.0, 0.5))
    ev = eval_basis(BasisKind.WKB, prof, -1.0, 0.0)
    assert ev.finite and ev.C == 0.0


def test_solution_propagates_divergence():
    u = solution_from_ic(BasisKind.WKB, HARM, 1.0, 1.0, 0.0, 1.0)
    assert math.isinf(u)


def test_airy_printed_vs_langer_at_turning_point():
    for form in ("printed", "langer"):
        ev = eval_basis(AiryImproved(1.0, form), HARM, 1.0, 1.0)
        left = eval_basis(AiryImproved(1.0, form), HARM, 1.0, 1.0 - 1e-7)
        right = eval_basis(AiryImproved(1.0, form), HARM, 1.0, 1.0 + 1e-7)
        assert ev.finite
        assert ev.C == pytest.approx(left.C, rel=1e-3)
        assert ev.C == pytest.approx(right.C, rel=1e-3)


def test_airy_langer_solves_ode_near_turning_point():
    # the Langer form is a uniform approximation: check the ODE residual is small near xi
    kind = AiryImproved(1.0, "langer")
    x = np.array([0.8, 0.9, 1.1, 1.2])
    h = 1e-3
    for t in x:
        vals = [eval_basis(kind, HARM, 1.0, t + s * h).C for s in (-1, 0, 1)]
        upp = (vals[0] - 2 * vals[1] + vals[2]) / h**2
        resid = upp + HARM.ksq(1.0, t) * vals[1]
        assert abs(resid) < 0.1 * max(1.0, abs(upp))


def test_airy_sign_convention():
    # allowed zone (x < xi): negative Airy argument -> oscillatory Ai
    kind = AiryImproved(1.0)
    inside = eval_basis(kind, HARM, 1.0, 0.2)
    outside = eval_basis(kind, HARM, 1.0, 1.8)
    assert outside.C > 0 and outside.S > 0
    assert inside.finite


def test_parse_basis_kind():
    assert parse_basis_kind("new") is BasisKind.NEW
    assert parse_basis_kind("simple-wkb") is BasisKind.SIMPLE_WKB
    assert parse_basis_kind("airy", xi=2.0) == AiryImproved(2.0)
    with pytest.raises(ConfigError):
        parse_basis_kind("airy")
    with pytest.raises(ConfigError):
        parse_basis_kind("bogus")
    with pytest.raises(ConfigError):
        AiryImproved(1.0, "other")
