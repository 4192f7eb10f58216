import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from wavebasis.airy import AI0, AIP0, airy_ai, airy_bi


def test_values_at_zero():
    ai, aip, bi, _ = special.airy(0.0)
    assert AI0 == pytest.approx(ai, rel=1e-15)
    assert AIP0 == pytest.approx(-aip, rel=1e-15)
    assert airy_bi(0.0) == pytest.approx(bi, rel=1e-14)


def test_against_library_on_grid():
    z = np.linspace(-30, 30, 6001)
    ai, _, bi, _ = special.airy(z)
    assert np.max(np.abs(airy_ai(z) - ai)) < 1e-10
    pos = z > 0
    assert np.max(np.abs(airy_ai(z[pos]) / ai[pos] - 1)) < 1e-10
    assert np.max(np.abs(airy_bi(z[pos]) / bi[pos] - 1)) < 1e-10
    assert np.max(np.abs(airy_bi(z[~pos]) - bi[~pos])) < 1e-10


@given(z=st.floats(-40, 40))
def test_airy_equation(z):
    # Ai'' = z Ai via the Wronskian-free identity on a small stencil
    h = 1e-3
    a = [airy_ai(z + s * h) for s in (-1, 0, 1)]
    second = (a[0] - 2 * a[1] + a[2]) / h**2
    assert second == pytest.approx(z * a[1], abs=1e-5 * max(1.0, abs(z)))


def test_scalar_and_array_shapes():
    assert isinstance(airy_ai(1.0), float)
    assert airy_ai(np.array([0.0, 1.0])).shape == (2,)
