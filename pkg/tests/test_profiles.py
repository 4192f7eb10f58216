import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavebasis.errors import (
    ConfigError,
    DomainError,
    ForbiddenRegionError,
    NoTurningPointError,
    PreconditionError,
    SingularPointError,
)
from wavebasis.profiles import (
    NORMALIZED,
    HardWall,
    Harmonic,
    KsqProfile,
    OpticalSpec,
    PhysicalScales,
    PiecewiseConstant,
    PowerLaw,
    SingularPowerLaw,
    Tabulated,
    integrate_k,
    integrate_ksq,
    ksq_at,
    load_potential,
    potential_from_dict,
    turning_point,
)

HARM = KsqProfile(PowerLaw(1.0, 2.0))
SING = KsqProfile(SingularPowerLaw(1.0, 0.5))


def test_normalized_scales():
    assert NORMALIZED.ksq_factor == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        PhysicalScales(mass=-1.0)


def test_ksq_at_examples():
    assert ksq_at(HARM, 1.0, 0.0) == 1.0
    assert ksq_at(HARM, 1.0, 1.0) == 0.0
    assert ksq_at(SING, -1.17474, 0.25) == pytest.approx(0.82526, abs=1e-12)


def test_ksq_at_errors():
    with pytest.raises(SingularPointError):
        ksq_at(SING, -1.0, 0.0)
    with pytest.raises(DomainError):
        ksq_at(KsqProfile(HardWall(1.0)), 1.0, 1.5)


def test_potential_validation():
    with pytest.raises(ConfigError):
        SingularPowerLaw(1.0, 1.0)
    with pytest.raises(ConfigError):
        PowerLaw(-1.0, 2.0)
    with pytest.raises(ConfigError):
        Tabulated((0.0, 0.0, 1.0), (1.0, 2.0, 3.0))
    with pytest.raises(ConfigError):
        PiecewiseConstant((0.0, 1.0), (1.0, 2.0))


def test_harmonic_maps_to_power_law():
    prof = KsqProfile(Harmonic(2.0))
    assert isinstance(prof.potential, PowerLaw)
    assert prof.potential.U == pytest.approx(0.5 * 0.5 * 4.0)


def test_turning_point_examples():
    assert turning_point(HARM, 4.0).xi == pytest.approx(2.0)
    assert turning_point(SING, -1.17474).xi == pytest.approx((1 / 1.17474) ** 2, rel=1e-12)
    assert turning_point(KsqProfile(HardWall(1.0)), 3.0).xi == 1.0


def test_turning_point_errors():
    with pytest.raises(PreconditionError):
        turning_point(HARM, -1.0)
    with pytest.raises(PreconditionError):
        turning_point(SING, 0.5)
    tab = KsqProfile(Tabulated((-1.0, 0.0, 1.0), (0.0, 0.0, 0.0)))
    with pytest.raises(NoTurningPointError):
        turning_point(tab, 1.0)


def test_turning_point_singular_matches_bisection():
    E = -1.17474
    xi = turning_point(SING, E).xi
    from wavebasis.profiles import _bisect_sign_change

    root = _bisect_sign_change(lambda t: SING.ksq(E, t), 0.1, 3.0)
    assert root == pytest.approx(xi, rel=1e-11)


def test_tabulated_turning_point_bisection():
    x = np.linspace(-2, 2, 41)
    prof = KsqProfile(Tabulated(tuple(x), tuple(x**2)))
    tp = turning_point(prof, 1.0)
    assert abs(prof.ksq(1.0, tp.xi)) <= 1e-10
    assert tp.left == pytest.approx(-tp.xi)


def test_integrate_ksq_examples():
    const = KsqProfile(PiecewiseConstant((-5.0, 5.0), (-4.0,)), prefactor=1.0)
    assert integrate_ksq(const, 0.0, 0.0, 3.0) == pytest.approx(12.0)
    assert integrate_ksq(HARM, 1.0, 0.0, 1.0) == pytest.approx(2 / 3)
    assert integrate_ksq(SING, -1.0, 0.0, 1.0) == pytest.approx(1.0)


def test_integrate_ksq_quad_agrees_with_analytic():
    for prof, E in ((HARM, 1.3), (KsqProfile(PowerLaw(2.0, 1.5)), 0.7), (SING, -0.8)):
        a = integrate_ksq(prof, E, -1.1, 0.9)
        q = integrate_ksq(prof, E, -1.1, 0.9, method="quad")
        assert q == pytest.approx(a, rel=1e-8)


def test_integrate_k_examples():
    const = KsqProfile(PiecewiseConstant((-5.0, 5.0), (-4.0,)), prefactor=1.0)
    assert integrate_k(const, 0.0, 0.0, 3.0) == pytest.approx(6.0)
    assert integrate_k(HARM, 1.0, -1.0, 1.0) == pytest.approx(math.pi / 2, abs=1e-10)
    assert integrate_k(KsqProfile(PowerLaw(1.0, 1.0)), 1.0, 0.0, 1.0) == pytest.approx(2 / 3, abs=1e-10)


def test_integrate_k_through_singular_point():
    # int_{-1}^{1} |x|^(-1/4) dx = 2 * 4/3 at E = 0
    assert integrate_k(SING, 0.0, -1.0, 1.0) == pytest.approx(8 / 3, rel=1e-9)


def test_integrate_k_forbidden():
    with pytest.raises(ForbiddenRegionError):
        integrate_k(HARM, 1.0, 0.0, 2.0)


@given(
    a=st.floats(-3, 3),
    b=st.floats(-3, 3),
    c=st.floats(-3, 3),
    E=st.floats(-2, 2),
    kind=st.sampled_from(["harm", "quartic", "sing", "piece", "tab"]),
)
def test_additivity(a, b, c, E, kind):
    a, b, c = sorted((a, b, c))
    prof = {
        "harm": HARM,
        "quartic": KsqProfile(PowerLaw(0.5, 4.0)),
        "sing": SING,
        "piece": KsqProfile(PiecewiseConstant((-4.0, -1.0, 1.0, 4.0), (2.0, -1.0, 2.0))),
        "tab": KsqProfile(Tabulated(tuple(np.linspace(-4, 4, 9)), tuple(np.linspace(-4, 4, 9) ** 2))),
    }[kind]
    total = integrate_ksq(prof, E, a, c)
    parts = integrate_ksq(prof, E, a, b) + integrate_ksq(prof, E, b, c)
    assert total == pytest.approx(parts, abs=1e-9)


@given(x=st.floats(0.01, 3), E=st.floats(-2, 2))
def test_even_symmetry(x, E):
    for prof in (HARM, SING):
        assert integrate_ksq(prof, E, -x, 0.0) == pytest.approx(integrate_ksq(prof, E, 0.0, x), abs=1e-9)


@given(E=st.floats(0.01, 50), U=st.floats(0.1, 5), alpha=st.floats(0.5, 6))
def test_turning_point_is_zero_of_ksq(E, U, alpha):
    prof = KsqProfile(PowerLaw(U, alpha))
    xi = turning_point(prof, E).xi
    assert abs(ksq_at(prof, E, xi)) <= 1e-9 * prof.prefactor * abs(E)


def test_potential_json_roundtrip(tmp_path):
    doc = {"type": "singular", "U": 1.0, "beta": 0.5, "scales": {"mass": 0.5, "hbar": 1.0}}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    prof = load_potential(path)
    assert prof.potential == SingularPowerLaw(1.0, 0.5)
    pot, _ = potential_from_dict(prof.potential.to_dict())
    assert pot == prof.potential


def test_potential_json_rejects_unknown():
    with pytest.raises(ConfigError):
        potential_from_dict({"type": "power_law", "U": 1, "alpha": 2, "gamma": 3})
    with pytest.raises(ConfigError):
        potential_from_dict({"type": "nope"})
    with pytest.raises(ConfigError):
        potential_from_dict({"type": "harmonic", "omega": 1, "scales": {"c": 3}})


def test_optical_spec():
    eps = PiecewiseConstant((-1.0, 1.0), (2.25,))
    spec = OpticalSpec(omega=3e8, epsilon=eps, N=1.0)
    prof = spec.to_ksq()
    assert prof.ksq(spec.energy, 0.0) == pytest.approx((3e8 / 299_792_458.0) ** 2 * 1.25)
