import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavebasis.errors import PreconditionError
from wavebasis.profiles import HardWall, KsqProfile, PhysicalScales, PowerLaw, SingularPowerLaw
from wavebasis.spectra import (
    EnergyLevel,
    EnergySpectrum,
    QuantizationRule,
    RuleKind,
    compare_spectra,
    harmonic_exact_energy,
    infinite_well_energy,
    power_law_energy,
    singular_energy,
    solve_quantization,
    wkb_quarkonium_energy,
)


def test_singular_closed_form_values():
    assert singular_energy(1.0, 0.5, 0) == pytest.approx(-1.17474, abs=1e-5)
    assert singular_energy(1.0, 0.5, 1) == pytest.approx(-0.56475, abs=1e-5)


def test_harmonic_and_well():
    assert power_law_energy(1.0, 2.0, 0) == pytest.approx(math.pi * math.sqrt(1.5) / 4, rel=1e-14)
    assert harmonic_exact_energy(2.0, 3) == 7.0
    assert infinite_well_energy(1) == pytest.approx(math.pi**2 / 4)
    with pytest.raises(PreconditionError):
        infinite_well_energy(0)


def test_quarkonium_ratio():
    for n in range(4):
        r = power_law_energy(1.0, 1.0, n) / wkb_quarkonium_energy(1.0, n)
        assert r == pytest.approx((8 / 9) ** (1 / 3), rel=1e-14)


def test_large_alpha_tends_to_box():
    E = power_law_energy(1.0, 1e8, 2)
    assert E == pytest.approx(math.pi**2 / 4 * 2.5**2, rel=1e-6)


@given(U=st.floats(0.1, 10), alpha=st.floats(0.5, 8), n=st.integers(0, 20), lam=st.floats(0.2, 5))
def test_power_law_scaling(U, alpha, n, lam):
    a = power_law_energy(lam * U, alpha, n)
    b = power_law_energy(U, alpha, n)
    assert a / b == pytest.approx(lam ** (2 / (alpha + 2)), rel=1e-12)
    m = power_law_energy(U, alpha, n, PhysicalScales(mass=lam * 0.5))
    assert m / b == pytest.approx(lam ** (-alpha / (alpha + 2)), rel=1e-12)


@given(U=st.floats(0.1, 10), beta=st.floats(0.05, 0.95), n=st.integers(0, 20), lam=st.floats(0.2, 5))
def test_singular_scaling(U, beta, n, lam):
    a = singular_energy(lam * U, beta, n)
    b = singular_energy(U, beta, n)
    assert a / b == pytest.approx(lam ** (2 / (2 - beta)), rel=1e-12)
    assert b < 0


def test_singular_diverges_as_beta_to_one():
    vals = [abs(singular_energy(1.0, b, 0)) for b in (0.9, 0.99, 0.999, 0.9999)]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert vals[-1] > 1e4
    with pytest.raises(PreconditionError):
        singular_energy(1.0, 1.0, 0)


@pytest.mark.parametrize(
    "pot, n",
    [(PowerLaw(1.0, 2.0), 0), (PowerLaw(1.0, 2.0), 4), (PowerLaw(2.0, 1.0), 3), (PowerLaw(0.5, 6.0), 2)],
)
def test_quantization_matches_power_law(pot, n):
    lv = solve_quantization(KsqProfile(pot), QuantizationRule(), n)
    assert lv.E == pytest.approx(power_law_energy(pot.U, pot.alpha, n), rel=1e-10)


@pytest.mark.parametrize("n", [0, 1, 5])
def test_quantization_matches_singular(n):
    lv = solve_quantization(KsqProfile(SingularPowerLaw(1.0, 0.5)), QuantizationRule(), n)
    assert lv.E == pytest.approx(singular_energy(1.0, 0.5, n), rel=1e-10)


def test_wkb_rule_harmonic_is_exact():
    lv = solve_quantization(KsqProfile(PowerLaw(1.0, 2.0)), QuantizationRule(RuleKind.WKB), 3)
    assert lv.E == pytest.approx(7.0, rel=1e-9)


def test_wkb_rule_quarkonium():
    lv = solve_quantization(KsqProfile(PowerLaw(1.0, 1.0)), QuantizationRule("wkb"), 2)
    assert lv.E == pytest.approx(wkb_quarkonium_energy(1.0, 2), rel=1e-9)


def test_hard_wall_rule():
    prof = KsqProfile(HardWall(1.0))
    lv = solve_quantization(prof, QuantizationRule(), 2)
    assert lv.E == pytest.approx(infinite_well_energy(2), rel=1e-10)
    with pytest.raises(PreconditionError):
        solve_quantization(prof, QuantizationRule(), 0)


def test_rule_validation():
    with pytest.raises(PreconditionError):
        QuantizationRule(phase_shift=0.25)
    with pytest.raises(PreconditionError):
        solve_quantization(KsqProfile(PowerLaw(1.0, 2.0)), QuantizationRule(), -1)


def test_compare_spectra():
    a = EnergySpectrum((EnergyLevel(1, 2.2, "x"), EnergyLevel(0, 1.1, "x")))
    b = EnergySpectrum((EnergyLevel(0, 1.0, "y"), EnergyLevel(1, 2.0, "y"), EnergyLevel(2, 3.0, "y")))
    assert a.ns == [0, 1]
    cmp = compare_spectra(a, b)
    assert set(cmp.rel_errors) == {0, 1}
    assert cmp.max_error == pytest.approx(0.1)
    with pytest.raises(KeyError):
        a.energy(5)
    with pytest.raises(PreconditionError):
        compare_spectra(a, EnergySpectrum((EnergyLevel(9, 1.0, "z"),)))
