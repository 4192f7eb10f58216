import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavebasis.bloch import (
    PeriodicProfile,
    homogenization_error,
    kappa_exact,
    kappa_new,
    kappa_wkb,
    monodromy,
)
from wavebasis.errors import ConfigError, ForbiddenRegionError, PreconditionError
from wavebasis.oracle import two_layer_cos_kl

CELL = PeriodicProfile.two_layer(1.0, 1.0, 3.0, 1.0)


def test_examples():
    assert kappa_new(CELL).kappa_re == pytest.approx(math.sqrt(5.0), rel=1e-14)
    assert kappa_wkb(CELL).kappa_re == pytest.approx(2.0, rel=1e-14)
    ex = kappa_exact(CELL)
    assert ex.kappa_re == pytest.approx(math.acos(two_layer_cos_kl(1, 1, 3, 1)) / 2, rel=1e-12)
    assert not ex.in_gap


def test_homogeneous_cell():
    p = PeriodicProfile.homogeneous(0.25, L=2.0)
    for fn in (kappa_new, kappa_wkb, kappa_exact):
        assert fn(p).kappa_re == pytest.approx(0.5, rel=1e-12)


@given(
    k1=st.floats(0.2, 4), a=st.floats(0.1, 2), k2=st.floats(0.2, 4), b=st.floats(0.1, 2)
)
def test_trace_matches_closed_form(k1, a, k2, b):
    M = monodromy(PeriodicProfile.two_layer(k1, a, k2, b), n_segments=64)
    assert 0.5 * M.trace.real == pytest.approx(two_layer_cos_kl(k1, a, k2, b), abs=1e-10)
    assert M.det == pytest.approx(1.0, abs=1e-8 * max(1.0, np.abs(M.matrix).max() ** 4))


def test_gap_detection():
    # strong contrast at the first Bragg condition opens a gap
    p = PeriodicProfile.two_layer(1.0, 1.0, 8.0, 0.2, drive=1.5)
    c = two_layer_cos_kl(1.5, 1.0, 12.0, 0.2)
    ex = kappa_exact(p)
    assert abs(c) > 1
    assert ex.in_gap
    assert ex.kappa_im == pytest.approx(math.acosh(abs(c)) / p.L, rel=1e-9)
    assert ex.kappa_re in (0.0, pytest.approx(math.pi / p.L))


def test_kappa_new_imaginary_mean():
    p = PeriodicProfile.homogeneous(-4.0)
    k = kappa_new(p)
    assert k.in_gap and k.kappa_im == pytest.approx(2.0)
    with pytest.raises(ForbiddenRegionError):
        kappa_wkb(p)


def test_unaligned_convergence():
    p = PeriodicProfile.two_layer(1.0, 0.7, 2.0, 1.3)
    exact = two_layer_cos_kl(1.0, 0.7, 2.0, 1.3)
    ns = [64, 256, 1024]
    errs = [abs(0.5 * monodromy(p, n, align=False).trace.real - exact) for n in ns]
    order = -np.polyfit(np.log(ns), np.log(errs), 1)[0]
    assert order >= 1.5
    assert errs[-1] < 1e-5


def test_homogenization_ordering():
    err_new, err_wkb = homogenization_error(CELL, 1e-2)
    assert err_new < err_wkb
    assert err_new < 1e-3


def test_validation():
    with pytest.raises(ConfigError):
        PeriodicProfile.two_layer(1.0, -1.0, 1.0, 1.0)
    with pytest.raises(PreconditionError):
        CELL.with_drive(0.0)
