import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kpzlab import specfun as sf
from kpzlab.errors import DomainError, RangeError


def test_bessel_i0_series_oracle():
    oracle = sum(1 / math.factorial(k) ** 2 for k in range(30))
    assert abs(float(sf.bessel_i(0, 2)) - oracle) < 1e-14
    assert abs(float(sf.bessel_i(0, 2)) - 2.2795853023360673) < 1e-15


@given(st.integers(1, 30), st.floats(0.05, 60.0))
def test_bessel_recurrence(nu, x):
    ctx = sf.PrecisionContext(128)
    lhs = sf.bessel_i(nu - 1, x, ctx) - sf.bessel_i(nu + 1, x, ctx)
    rhs = 2 * nu / ctx.mpf(x) * sf.bessel_i(nu, x, ctx)
    assert abs(lhs - rhs) <= 1e-25 * max(abs(rhs), abs(sf.bessel_i(nu - 1, x, ctx)))


def test_bessel_matches_mpmath():
    for nu in (0, 1, 5, 20):
        for x in (0.0, 0.3, 4.0, 40.0):
            assert float(sf.bessel_i(nu, x)) == pytest.approx(float(mpmath.besseli(nu, x)), rel=1e-14, abs=0)


def test_bessel_domain():
    with pytest.raises(DomainError):
        sf.bessel_i(-1, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_i(0, -1.0)
    with pytest.raises(RangeError):
        sf.bessel_i(0, 2e6)


def test_airy_at_zero():
    ai, aip = sf.airy_ai(0.0)
    assert abs(ai - 0.3550280538878172) < 1e-12
    assert abs(aip + 0.2588194037928068) < 1e-12


@given(st.floats(-15.0, 20.0))
def test_airy_matches_mpmath(x):
    ai, _ = sf.airy_ai(x)
    exact = float(mpmath.airyai(x))
    # oscillatory side: compare against the amplitude envelope
    envelope = abs(x) ** -0.25 / math.sqrt(math.pi) if x < -1 else abs(exact)
    assert abs(ai - exact) <= 1e-10 * max(envelope, 1e-300)


def test_airy_range():
    with pytest.raises(RangeError):
        sf.airy_ai(25.0)
    with pytest.raises(RangeError):
        sf.airy_ai(float("nan"))


def test_airy_mp():
    ai, _ = sf.airy_ai_mp(8, sf.PrecisionContext(200))
    assert abs(float(ai) - sf.airy_ai(8.0)[0]) < 1e-20


def test_periodic_quadrature_moment():
    assert sf.periodic_quadrature(lambda t: (2 * np.cos(t)) ** 4) == pytest.approx(6.0, abs=1e-13)


def test_periodic_quadrature_bessel():
    val = sf.periodic_quadrature(lambda t: np.exp(2 * np.cos(t)))
    assert abs(val - float(sf.bessel_i(0, 2))) < 1e-12


def test_periodic_quadrature_2d():
    val = sf.periodic_quadrature(lambda a, b: np.cos(a) ** 2 * np.cos(b) ** 2, dims=2)
    assert val == pytest.approx(0.25, abs=1e-14)


def test_periodic_quadrature_dims():
    with pytest.raises(DomainError):
        sf.periodic_quadrature(lambda *a: 1.0, dims=5)


def test_integrate_ode_exponential():
    traj = sf.integrate_ode(lambda t, y: y, [1.0], (0.0, 1.0), tol=1e-12)
    assert abs(traj.y[0, -1] - math.e) < 1e-10


def test_integrate_ode_dense_backwards():
    traj = sf.integrate_ode(lambda t, y: -y, [1.0], (0.0, -2.0), tol=1e-12, dense=True)
    assert abs(traj(-1.0)[0] - math.e) < 1e-9


def test_precision_env(monkeypatch):
    monkeypatch.setenv(sf.PRECISION_ENV, "200")
    assert sf.default_bits() == 200
    assert sf.PrecisionContext().bits == 200
    monkeypatch.setenv(sf.PRECISION_ENV, "12")
    with pytest.raises(DomainError):
        sf.default_bits()
    with pytest.raises(DomainError):
        sf.PrecisionContext(40)
