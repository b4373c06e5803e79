import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpzlab import combinat as cb
from kpzlab import groupavg as ga
from kpzlab.errors import BoundExceededError, DomainError
from kpzlab.specfun import bessel_i

I0_2 = float(bessel_i(0, 2))
I1_2 = float(bessel_i(1, 2))

# frozen reference values (z = lambda = 1)
HAMMERSLEY = [0.36787944117144233, 0.8386125671260257, 0.9809076893280114, 0.9987407159242518]
DIAG = {0.0: [0.9359257154242789, 0.9945845185048757, 0.9997236249161101],
        0.5: [0.7838338208091532, 0.9546689434883978, 0.993382899915362]}
ANTIDIAG = {0.0: [0.6065306597126334, 0.9647700208064074, 0.9647700208064074],
            0.5: [0.6065306597126334, 0.9078902351292705, 0.9647700208064074]}
BOTHDIAGS = [0.22313016014842982, 0.6172132123061341, 0.6861037616388643, 0.9064063436396217]
CENTRAL = [0.308508322553671, 0.703271037741703, 0.8226015154610218]


def test_heine_l1_is_bessel():
    assert abs(ga.heine_average(ga.SpectralWeight.exp_cos(1.0), 1) - I0_2) < 1e-10


def test_heine_l2():
    assert abs(ga.heine_average(ga.SpectralWeight.exp_cos(1.0), 2) - (I0_2 ** 2 - I1_2 ** 2)) < 1e-10


@pytest.mark.parametrize("l", [1, 2, 3])
def test_heine_vs_weyl(l):
    w = ga.SpectralWeight.boundary(0.5, 0.4, 0.3)
    assert abs(ga.heine_average(w, l) - ga.weyl_average(symbol=w, group="U", l=l).real) < 1e-9


def test_orthogonal_one():
    z = 0.7
    sym = lambda t: np.exp(z * np.exp(1j * t))
    assert abs(ga.weyl_average(symbol=sym, group="O", l=1) - math.cosh(z)) < 1e-12
    assert abs(ga.weyl_average(symbol=sym, group="O+", l=1) - math.exp(z)) < 1e-12
    assert abs(ga.weyl_average(symbol=sym, group="O-", l=1) - math.exp(-z)) < 1e-12


def test_symplectic_one():
    val = ga.weyl_average(symbol=lambda t: np.exp(np.exp(1j * t)), group="Sp", l=1)
    assert abs(val - I1_2) < 1e-8
    assert abs(val - 1.59064) < 1e-5


def test_weyl_bound():
    with pytest.raises(BoundExceededError):
        ga.weyl_average(symbol=lambda t: 1.0, group="U", l=6)
    with pytest.raises(DomainError):
        ga.weyl_average(group="U", l=1)


def test_hammersley_examples():
    assert abs(ga.hammersley_cdf_exact(1.0, 1) - math.exp(-1) * I0_2) < 1e-12
    catalan = sum(math.comb(2 * n, n) / (n + 1) / math.factorial(n) ** 2 for n in range(40))
    assert abs(ga.hammersley_cdf_exact(1.0, 2) - math.exp(-1) * catalan) < 1e-12


@pytest.mark.parametrize("l", range(4))
def test_hammersley_frozen(l):
    assert ga.hammersley_cdf_exact(1.0, l) == pytest.approx(HAMMERSLEY[l], abs=1e-12)


def test_diag_series():
    z = 1.0
    assert abs(ga.symmetrized_cdf_exact(z, 0, 0, 1, "diag") - math.exp(-z * z / 2) * math.cosh(z)) < 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.5])
def test_diag_frozen(alpha):
    got = [ga.symmetrized_cdf_exact(1.0, alpha, 0.0, l, "diag") for l in (1, 2, 3)]
    assert got == pytest.approx(DIAG[alpha], abs=1e-10)


@pytest.mark.parametrize("beta", [0.0, 0.5])
def test_antidiag_frozen(beta):
    got = [ga.symmetrized_cdf_exact(1.0, 0.0, beta, l, "antidiag") for l in (1, 2, 3)]
    assert got == pytest.approx(ANTIDIAG[beta], abs=1e-10)


def test_antidiag_odd_bound():
    assert abs(ga.symmetrized_cdf_exact(1.0, 0, 0, 3, "antidiag") - math.exp(-0.5) * I1_2) < 1e-8


def test_bothdiags_and_central_frozen():
    got = [ga.symmetrized_cdf_exact(1.0, 0.5, 0.3, l, "bothdiags") for l in (1, 2, 3, 4)]
    assert got == pytest.approx(BOTHDIAGS, abs=1e-10)
    got = [ga.symmetrized_cdf_exact(1.0, 0.0, 0.0, l, "central") for l in (1, 2, 3)]
    assert got == pytest.approx(CENTRAL, abs=1e-12)


def test_symmetrized_domain():
    with pytest.raises(DomainError):
        ga.symmetrized_cdf_exact(-1.0, 0, 0, 1)
    with pytest.raises(DomainError):
        ga.symmetrized_cdf_exact(1.0, 0, 1.5, 1, "antidiag")
    assert ga.symmetrized_cdf_exact(1.0, 0, 0, -1) == 0.0


def test_johansson_frozen():
    assert ga.johansson_cdf_exact([0.2, 0.5], [0.3, 0.6], 2) == pytest.approx(0.9377896749759995, abs=1e-10)


def test_johansson_domain():
    with pytest.raises(DomainError):
        ga.johansson_cdf_exact([2.0], [0.6], 1)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 3.0))
def test_hammersley_monotone_in_l(lam):
    vals = [ga.hammersley_cdf_exact(lam, l) for l in range(0, 8)]
    assert all(0 <= v <= 1 for v in vals)
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert abs(vals[0] - math.exp(-lam * lam)) < 1e-12


def test_schur_identities():
    pairs = [ga.schur_identity_unitary([0.3, 0.7], [0.7, 0.3], 2)]
    pairs += [ga.schur_identity_orthogonal([0.3, 0.7], a, 2) for a in (0.0, 0.5)]
    for n in (1, 2):
        pairs += [ga.schur_identity_symplectic([0.3, 0.7][:n], 0.4, 1, odd) for odd in (False, True)]
    for lhs, rhs in pairs:
        assert abs(lhs - rhs) < 1e-8


def test_poisson_mixture_of_exact_counts():
    # Pr(l <= 1) mixes 1/N! over Poisson(1): e^{-1} sum 1/(N!)^2
    series = math.exp(-1) * sum(float(cb.brute_cdf(n, 1)) / math.factorial(n) for n in range(9))
    assert abs(series - ga.hammersley_cdf_exact(1.0, 1)) < 1e-5


def test_dist_table_csv():
    tab = ga.dist_table("hammersley", 1.0, 3)
    lines = tab.to_csv().splitlines()
    assert lines[0] == "param,alpha,beta,symmetry,l,cdf"
    assert len(lines) == 5
    assert tab.cdf == pytest.approx(HAMMERSLEY, abs=1e-12)


def test_dist_table_workers_identical():
    a = ga.dist_table("symmetrized", 1.0, 4, alpha=0.5, symmetry="diag")
    b = ga.dist_table("symmetrized", 1.0, 4, alpha=0.5, symmetry="diag", workers=2)
    assert a.to_csv() == b.to_csv()
