import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzlab import groupavg as ga
from kpzlab import opuc
from kpzlab.errors import DomainError, IllConditionedError
from kpzlab.specfun import PrecisionContext, bessel_i

R_T1 = [-0.697774657964008, 0.3598915275570012, -0.12910779285455348, 0.033997517454948965,
        -0.007039640415476338]


@pytest.fixture(scope="module")
def seq1():
    return opuc.discrete_p2(1.0, 30)


def test_first_coefficient_is_bessel_ratio(seq1):
    assert seq1.r_float(1) == pytest.approx(-float(bessel_i(1, 2) / bessel_i(0, 2)), abs=1e-15)


def test_frozen_coefficients(seq1):
    assert [seq1.r_float(n) for n in range(1, 6)] == pytest.approx(R_T1, abs=1e-14)


def test_recurrence_holds(seq1):
    mp = seq1.ctx.mp
    t = mp.mpf(1)
    for n in range(1, 25):
        r = seq1.r
        lhs = -(n / t) * r[n] / (1 - r[n] ** 2)
        assert abs(lhs - (r[n + 1] + r[n - 1])) < mp.mpf(10) ** -30


def test_d2(seq1):
    i0, i1 = bessel_i(0, 2), bessel_i(1, 2)
    assert abs(opuc.d_l(seq1, 2) - (i0 ** 2 - i1 ** 2)) < 1e-25
    assert float(opuc.d_l(seq1, 2)) == pytest.approx(2.66638, abs=1e-4)


def test_d_l_range(seq1):
    with pytest.raises(DomainError):
        opuc.d_l(seq1, 100)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_toeplitz_crosscheck(t):
    assert opuc.crosscheck_toeplitz(opuc.discrete_p2(t, 21), 20, 1e-8) < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 6.0))
def test_sign_and_modulus_monitors(t):
    seq = opuc.discrete_p2(t, 40)
    for n in range(1, 41):
        assert abs(seq.r[n]) < 1
        assert (-1) ** n * seq.r[n] > 0


def test_poly_first_degree(seq1):
    z = seq1.ctx.mpf("0.3")
    pp = opuc.pi_eval(seq1, 1, z)
    assert abs(pp.pi - (z + seq1.r[1])) < 1e-30
    for n in range(0, 8):
        assert opuc.pi_eval(seq1, n, 0).pi_star == 1


def test_poly_derivative_finite_difference():
    seq = opuc.discrete_p2(1.0, 8)
    mp = seq.ctx.mp
    z, h = mp.mpf("-0.7"), mp.mpf(10) ** -20
    pp = opuc.pi_eval(seq, 6, z, with_derivative=True)
    fd = (opuc.pi_eval(seq, 6, z + h).pi - opuc.pi_eval(seq, 6, z - h).pi) / (2 * h)
    fds = (opuc.pi_eval(seq, 6, z + h).pi_star - opuc.pi_eval(seq, 6, z - h).pi_star) / (2 * h)
    assert abs(pp.dpi - fd) < 1e-12
    assert abs(pp.dpi_star - fds) < 1e-12


def test_tilde_d_vs_toeplitz(seq1):
    a = float(opuc.tilde_d(seq1, 1, 0.3, 0.2))
    b = ga.heine_average(ga.SpectralWeight.boundary(1.0, 0.3, 0.2), 1)
    assert a == pytest.approx(b, rel=1e-10)
    assert a == pytest.approx(3.2116788477948957, rel=1e-12)


def test_tilde_d_degenerate_branch():
    seq = opuc.discrete_p2(0.5, 8)
    ap = 1.25
    near = float(opuc.tilde_d(seq, 3, ap, 1 / ap))
    off = float(opuc.tilde_d(seq, 3, ap, 1 / ap - 1e-6))
    assert near == pytest.approx(off, rel=1e-4)
    with pytest.raises(IllConditionedError):
        opuc.tilde_d(seq, 3, ap, 1 / ap + 5e-9)


def test_boundary_l0():
    t, ap, am = 0.5, 0.4, 0.3
    assert opuc.boundary_cdf(t, ap, am, 0) == pytest.approx(math.exp(-(ap + am) * t - t * t), rel=1e-13)


@pytest.mark.parametrize("l", range(6))
def test_boundary_reduces_to_hammersley(l):
    assert opuc.boundary_cdf(0.8, 0.0, 0.0, l) == pytest.approx(ga.hammersley_cdf_exact(0.8, l), abs=1e-13)


def test_boundary_cdf_monotone():
    vals = [opuc.boundary_cdf(0.5, 0.4, 0.3, l, with_origin=True) for l in range(10)]
    assert all(0 <= v <= 1 for v in vals)
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(1.0, abs=1e-8)


def test_boundary_domain():
    with pytest.raises(DomainError):
        opuc.boundary_cdf(1.0, 2.0, 0.6, 1)
    with pytest.raises(DomainError):
        opuc.boundary_cdf(0.0, 0.1, 0.1, 1)


def test_gue_scaled_converges(grid):
    errs = [abs(opuc.gue_scaled(t, 0.0)[0] - float(grid.f_gue(0.0))) for t in (8.0, 16.0, 32.0)]
    assert errs[0] > errs[1] > errs[2]


def test_precision_widened_for_large_t():
    seq = opuc.discrete_p2(20.0, 80, PrecisionContext(64))
    ref = opuc.discrete_p2(20.0, 80, PrecisionContext(512))
    assert seq.ctx.bits >= 64 + opuc.lost_bits(20.0, 80)
    assert abs(seq.r_float(60) - ref.r_float(60)) < 1e-12


def test_sequence_csv(seq1):
    lines = seq1.to_csv().splitlines()
    assert lines[0] == "t,n,r,logD"
    assert len(lines) == seq1.n_max + 2


def test_unmonitored_recursion_breaks_at_double_precision():
    r, _ = opuc.forward_recursion(1.0, 40, PrecisionContext(53))
    assert opuc.first_violation(r) is not None


def test_wrong_initial_sign_fails_crosscheck():
    ctx = PrecisionContext(256)
    r, logD = opuc.forward_recursion(1.0, 21, ctx, r1=-opuc.initial_r1(1.0, ctx))
    bad = opuc.OpucSequence(1.0, tuple(r), tuple(logD), ctx, 0, 21)
    with pytest.raises(Exception):
        opuc.crosscheck_toeplitz(bad, 20, 1e-8)


def test_tilde_d_degenerate_at_one():
    seq = opuc.discrete_p2(1.0, 8)
    limit = float(opuc.tilde_d(seq, 4, 1.0, 1.0))
    generic = float(opuc.tilde_d(seq, 4, 1.0001, 1 / 1.0001 - 1e-6))
    assert generic == pytest.approx(limit, rel=1e-3)


def test_exact_lattice_distance_to_gue(grid):
    # Kolmogorov distance of the exact scaled law of L at lambda = 40 from F_GUE
    lam = 40.0
    seq = opuc.discrete_p2(lam, 100)
    mp = seq.ctx.mp
    F = [float(mp.exp(seq.logD[l] - mp.mpf(lam) ** 2)) for l in range(100)]
    worst = 0.0
    for l in range(1, 100):
        s = (l - 2 * lam) / lam ** (1 / 3)
        if -10 <= s <= 10:
            tw = float(grid.f_gue(s))
            worst = max(worst, abs(F[l] - tw), abs(F[l - 1] - tw))
    assert worst == pytest.approx(0.13327281862451884, abs=1e-8)
