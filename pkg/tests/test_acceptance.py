"""Exit criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Seeds and tolerances are fixed here and must not be changed to make a
criterion pass.
"""
import time

import numpy as np
import pytest

from conftest import record_criterion
from kpzlab import combinat as cb
from kpzlab import groupavg as ga
from kpzlab import montecarlo as mc
from kpzlab import opuc, painleve2, verify
from kpzlab import kpz_scaling as kz

pytestmark = pytest.mark.acceptance

EXACT_TOL = 1e-8
SIGMAS = 3.0
FREDHOLM_TOL = 1e-6
GSE_TOL = 1e-12
KS_BOUND = 0.12
MEAN_TOL = 1e-3
TAIL_TOL = 1e-3
REFLECTION_TOL = 1e-6
VARIANCE_TOL = 1e-4


def test_criterion_01_exact_vs_enumeration():
    t0 = time.perf_counter()
    bad = [(n, l) for n in range(0, 9) for l in range(0, n + 1) if cb.tableau_cdf(n, l) != cb.brute_cdf(n, l)]
    secs = time.perf_counter() - t0
    ok = not bad and secs < 30
    record_criterion(1, ok, f"tableau sums = enumeration for N <= 8 (exact), mismatches {bad}, {secs:.1f} s")
    assert ok


def test_criterion_02_dual_route_determinants():
    t0 = time.perf_counter()
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        worst = max(worst, opuc.crosscheck_toeplitz(opuc.discrete_p2(t, 21), 20, EXACT_TOL))
    secs = time.perf_counter() - t0
    ok = worst <= EXACT_TOL and secs < 10
    record_criterion(2, ok, f"max |log D_l| recursion vs Toeplitz {worst:.2e} (tol 1e-8), {secs:.1f} s")
    assert ok


def test_criterion_03_group_identities():
    pairs = {"U(2), l=2": ga.schur_identity_unitary([0.3, 0.7], [0.7, 0.3], 2)}
    for a in (0.0, 0.5):
        pairs[f"O, n=2, l=2, alpha={a}"] = ga.schur_identity_orthogonal([0.3, 0.7], a, 2)
    for n in (1, 2):
        for odd in (False, True):
            pairs[f"Sp, n={n}, l=1, odd={odd}"] = ga.schur_identity_symplectic([0.3, 0.7][:n], 0.4, 1, odd)
    worst = max(abs(a - b) for a, b in pairs.values())
    ok = worst <= EXACT_TOL
    record_criterion(3, ok, f"{len(pairs)} tableau/quadrature identities, max discrepancy {worst:.2e} (tol 1e-8)")
    assert ok


@pytest.mark.slow
def test_criterion_04_monte_carlo_vs_exact():
    t0 = time.perf_counter()
    worst = {}
    for name, (sample, exact) in verify.MC_CASES.items():
        _, worst[name] = verify.mc_versus_exact(sample(), exact, SIGMAS)
    secs = time.perf_counter() - t0
    top = max(worst, key=worst.get)
    ok = all(w <= SIGMAS for w in worst.values()) and secs < 300
    record_criterion(4, ok, f"{len(worst)} cases at 1e6 trials, worst {worst[top]:.2f} sigma ({top}), {secs:.0f} s")
    assert ok, worst


def test_criterion_05_png_lis():
    mismatches = 0
    for T in (2.0, 5.0, 10.0):
        for seed in range(1000):
            h, l, _ = mc.png_simulate(T, seed)
            mismatches += h != l
    ok = mismatches == 0
    record_criterion(5, ok, f"h(0,T) = LIS for 1000 seeds x T in {{2, 5, 10}}, {mismatches} mismatches")
    assert ok


def test_criterion_06_johansson_rsk():
    rng = mc.block_rng(6, 0)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(0, 5)) + 1
        a = rng.uniform(0.05, 0.95, n + 1)
        b = rng.uniform(0.05, 0.95, n + 1)
        X, L = mc.johansson_lpp(a, b, rng=rng)
        P = cb.rsk_matrix(X.tolist())[0]
        mismatches += (len(P[0]) if P else 0) != L
    ok = mismatches == 0
    record_criterion(6, ok, f"first RSK row = last-passage value, 1000 instances, {mismatches} mismatches")
    assert ok


def test_criterion_07_painleve_cross_method():
    t0 = time.perf_counter()
    g = painleve2.default_grid()
    fred = max(abs(float(g.f_gue(s)) - painleve2.fredholm_oracle(s)) for s in (-4.0, -2.0, 0.0, 2.0))
    goe, gse = g.f_goe_gse()
    ident = float(np.max(np.abs(gse - 0.5 * (goe + g.f_gue() / goe))))
    secs = time.perf_counter() - t0
    ok = fred <= FREDHOLM_TOL and ident <= GSE_TOL and secs < 30
    record_criterion(7, ok, f"F_GUE vs Fredholm {fred:.2e} (tol 1e-6), GSE identity {ident:.2e} (tol 1e-12), "
                            f"{secs:.1f} s")
    assert ok


@pytest.mark.slow
def test_criterion_08_scaled_limits():
    t0 = time.perf_counter()
    dists = {name: verify.scaled_distances(*case) for name, case in verify.SCALED_CASES.items()}
    secs = time.perf_counter() - t0
    ok = all(d[1] < KS_BOUND and d[1] < d[0] for d in dists.values()) and secs < 600
    detail = ", ".join(f"{name} {d[0]:.3f} -> {d[1]:.3f}" for name, d in dists.items())
    record_criterion(8, ok, f"Kolmogorov distance at rate 20 -> 40 (bound 0.12): {detail}, {secs:.0f} s")
    assert ok, dists


def test_criterion_09_discrete_to_continuous():
    g = painleve2.default_grid()
    errs = {}
    for s in (-1.0, 0.0, 1.0):
        errs[s] = [abs(opuc.painleve_scaled(t, s)[0] - g.interp("q", s)) for t in (8.0, 16.0, 32.0)]
    ok = all(e[0] > e[1] > e[2] for e in errs.values())
    detail = "; ".join(f"s={s:g}: " + ", ".join(f"{x:.2e}" for x in e) for s, e in errs.items())
    record_criterion(9, ok, f"|t^(1/3) (-1)^(n-1) r_n - q(s)| over t = 8, 16, 32: {detail}")
    assert ok, errs


def test_criterion_10_baik_rains():
    t0 = time.perf_counter()
    mean_err = 0.0
    for y in (0.0, 0.5, 1.0):
        tab = kz.baik_rains_table(y)
        mean_err = max(mean_err, abs(tab.mean_tilde - y * y), abs(tab.mean_shifted))
        if y == 0.0:
            var0 = tab.variance_shifted
    fields = kz.scaling_fields(0.5)
    gf = kz.g_function(fields)
    i = int(np.argmin(np.abs(gf.s - 8.0)))
    tail = abs(gf.g[i] - (8.0 - 0.25))
    refl = float(np.max(kz.reflection_residual(fields)))
    fine = kz.baik_rains_table(0.0, painleve2.hastings_mcleod(step=painleve2.DEFAULT_STEP / 2))
    dvar = abs(fine.variance_shifted - var0)
    secs = time.perf_counter() - t0
    ok = mean_err <= MEAN_TOL and tail < TAIL_TOL and refl <= REFLECTION_TOL and dvar <= VARIANCE_TOL and secs < 120
    record_criterion(10, ok, f"means {mean_err:.1e} (tol 1e-3), tail {tail:.1e}, reflection {refl:.1e}, "
                             f"Var F_0 = {var0:.10f} change under halving {dvar:.1e}, {secs:.1f} s")
    assert ok
