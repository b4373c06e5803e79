import numpy as np
import pytest
from scipy.special import airy

from kpzlab import painleve2 as p2
from kpzlab.errors import DomainError, RangeError

Q_FROZEN = {-8.0: -1.9995071978114654, -4.0: -1.411176929362394, 0.0: -0.3670615515480784,
            2.0: -0.03492814926459572}
F_GUE_FROZEN = {-4.0: 0.003544553595509199, -2.0: 0.41322414250512257, 0.0: 0.9693728283552626,
                2.0: 0.9998875536983092}


def test_right_tail_is_airy(grid):
    assert abs(grid.interp("q", 8.0) + airy(8.0)[0]) < 1e-9


def test_q_zero(grid):
    assert grid.interp("q", 0.0) == pytest.approx(-0.36706, abs=1e-4)


def test_left_asymptote(grid):
    assert grid.interp("q", -8.0) / -2.0 == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("s", sorted(Q_FROZEN))
def test_q_frozen(grid, s):
    assert grid.interp("q", s) == pytest.approx(Q_FROZEN[s], abs=1e-10)


def test_residual(grid):
    assert np.max(np.abs(grid.residual())) < 1e-6


def test_rk_solver_agrees():
    rk = p2.hastings_mcleod(-6.0, 8.0, method="rk")
    assert rk.interp("q", 0.0) == pytest.approx(Q_FROZEN[0.0], abs=1e-4)


def test_solver_domain():
    with pytest.raises(DomainError):
        p2.hastings_mcleod(-5.0, 6.0)
    with pytest.raises(DomainError):
        p2.hastings_mcleod(tol=1e-6)
    with pytest.raises(DomainError):
        p2.hastings_mcleod(method="euler")


def test_interp_range(grid):
    with pytest.raises(RangeError):
        grid.interp("q", 11.0)


def test_right_tail_cdf(grid):
    assert grid.f_gue(10.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("s", sorted(F_GUE_FROZEN))
def test_f_gue_vs_fredholm(grid, s):
    assert abs(grid.f_gue(s) - p2.fredholm_oracle(s)) < 1e-6
    assert grid.f_gue(s) == pytest.approx(F_GUE_FROZEN[s], abs=1e-10)


def test_fredholm_right_end():
    assert p2.fredholm_oracle(6.0) == pytest.approx(1.0, abs=1e-8)


def test_fredholm_node_doubling():
    assert abs(p2._airy_kernel_det(0.0, 60) - p2._airy_kernel_det(0.0, 120)) < 1e-8


def test_fredholm_range():
    with pytest.raises(RangeError):
        p2.fredholm_oracle(-9.0)


def test_density_two_ways(grid):
    s = np.linspace(-6, 4, 21)
    h = 1e-4
    fd = (grid.f_gue(s + h) - grid.f_gue(s - h)) / (2 * h)
    assert np.max(np.abs(fd - grid.dgue_ds(s))) < 1e-6


def test_gse_identity(grid):
    goe, gse = grid.f_goe_gse()
    assert np.max(np.abs(gse - 0.5 * (goe + grid.f_gue() / goe))) < 1e-12


def test_frozen_goe_gse(grid):
    goe, gse = grid.f_goe_gse(0.0)
    assert goe == pytest.approx(0.8319080662029519, abs=1e-10)
    assert gse == pytest.approx(0.9985741973581685, abs=1e-10)


def test_densities_nonnegative(grid):
    for F in (grid.f_gue(), *grid.f_goe_gse()):
        assert np.min(np.diff(F)) >= -1e-9


def test_convention(grid):
    p2.check_convention(grid)
