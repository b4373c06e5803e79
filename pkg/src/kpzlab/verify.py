"""Cross-module invariant checks with a machine-readable report.

``quick`` runs enumeration, dual-route and identity checks; ``full`` adds the
Monte Carlo comparisons against exact CDFs and the scaled-limit checks.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import combinat as cb
from . import groupavg as ga
from . import kernels, kpz_scaling, montecarlo, opuc, painleve2
from .errors import AccuracyError, BoundExceededError, KpzLabError
from .specfun import PrecisionContext

MC_TRIALS = 10**6
SCALED_TRIALS = 20000
SIGMAS = 3.0
KS_BOUND = 0.12


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class Report:
    level: str
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> list:
        return [r.name for r in self.results if not r.passed]

    def to_json(self) -> str:
        return json.dumps({"level": self.level, "passed": self.passed, "failed": self.failed,
                           "checks": [asdict(r) for r in self.results]}, indent=2)


# ---------------------------------------------------------------------------
# quick checks: each returns (passed, detail)
# ---------------------------------------------------------------------------

def check_lis_layers():
    for n in range(1, 7):
        for p in permutations(range(1, n + 1)):
            if not cb.lis(p) == cb.lis_quadratic(p) == len(cb.lis_layers(p)) == len(cb.rsk(p)[0][0]):
                return False, f"disagreement at {p}"
    return True, "lis = layers = quadratic DP = first RSK row for |p| <= 6"


def check_rsk_roundtrip():
    for n in range(1, 7):
        for p in permutations(range(1, n + 1)):
            if cb.inverse_rsk(*cb.rsk(p)) != tuple(p):
                return False, f"round trip fails at {p}"
    return True, "inverse_rsk(rsk(p)) = p for |p| <= 6"


def check_reversal_duality():
    for n in range(1, 7):
        for p in permutations(range(1, n + 1)):
            if cb.shape(cb.rsk(cb.reverse(p))[0]) != cb.shape(cb.rsk(p)[0]).conjugate():
                return False, f"fails at {p}"
    return True, "shape(rsk(reverse p)) = conjugate shape for |p| <= 6"


def check_involution_fixed_points():
    for n in range(1, 8):
        for p in cb.involutions(n):
            P, Q = cb.rsk(p)
            if P != Q or cb.fixed_points(p) != cb.shape(P).alternating_sum():
                return False, f"fails at {p}"
    return True, "P = Q and #fixed = alternating row sum for involutions, n <= 7"


def check_evacuation_involution():
    for n in range(1, 7):
        for mu in cb.partitions(n):
            for t in cb.standard_tableaux(mu):
                if cb.evacuation(cb.evacuation(t)) != t:
                    return False, f"fails at {t}"
    return True, "evacuation is an involution on SYT, n <= 6"


def check_hook_length():
    for n in range(0, 9):
        for mu in cb.partitions(n):
            if cb.hook_length_count(mu) != cb.num_standard(tuple(mu)):
                return False, f"fails at {mu}"
    return True, "hook length formula = enumeration, n <= 8"


def check_plain_tableau_vs_brute():
    for n in range(0, 8):
        for l in range(0, n + 1):
            if cb.tableau_cdf(n, l) != cb.brute_cdf(n, l):
                return False, f"n={n}, l={l}"
    return True, "tableau sums = permutation enumeration (exact), n <= 7"


def check_symmetric_tableau_vs_brute():
    for cls in (cb.SymmetryClass.DIAG, cb.SymmetryClass.ANTIDIAG):
        for n in range(0, 7):
            for l in range(0, n + 1):
                if cb.tableau_cdf(n, l, cls) != cb.brute_cdf(n, l, cls):
                    return False, f"{cls.name} n={n} l={l}"
    for cls in (cb.SymmetryClass.BOTHDIAGS, cb.SymmetryClass.CENTRAL):
        for n in (2, 4, 6):
            for l in range(0, n + 1):
                if cb.tableau_cdf(n, l, cls) != cb.brute_cdf(n, l, cls):
                    return False, f"{cls.name} n={n} l={l}"
    return True, "symmetrized tableau sums = enumeration for all classes, n <= 6"


def check_symmetry_counts():
    for n in range(0, 8):
        for m in range(0, n // 2 + 1):
            if cb.s_count(n, m) != sum(1 for _ in cb.enumerate_class(n, "diag", m=m)):
                return False, f"s_count({n},{m})"
    return True, "s_{n,m} = enumerated involution counts, n <= 7"


def check_heine_vs_weyl():
    for weight in (ga.SpectralWeight.exp_cos(0.7), ga.SpectralWeight.boundary(0.5, 0.4, 0.3),
                   ga.SpectralWeight.johansson([0.2, 0.5], [0.3, 0.6])):
        for l in (1, 2, 3):
            a = ga.heine_average(weight, l)
            b = ga._real(ga.weyl_average(symbol=weight, group="U", l=l))
            if abs(a - b) > 1e-9:
                return False, f"{weight} l={l}: {a} vs {b}"
    return True, "Toeplitz determinant = U(l) quadrature to 1e-9, l <= 3"


def check_hammersley_series():
    # Poisson mixture of the exact finite-N probabilities, truncated at N = 14
    lam = 1.0
    for l in (1, 2):
        series = 0.0
        for n in range(0, 15):
            pn = 1.0 if n <= l else (float(_cdf_small(n, l)))
            series += math.exp(-lam * lam) * lam ** (2 * n) / math.factorial(n) * pn
        exact = ga.hammersley_cdf_exact(lam, l)
        if abs(series - exact) > 1e-9:
            return False, f"l={l}: {series} vs {exact}"
    return True, "Poissonized counts (decreasing / Catalan) = exact CDF at lambda=1"


def _cdf_small(n, l):
    if l == 1:
        return Fraction(1, math.factorial(n))
    if l == 2:
        return Fraction(math.comb(2 * n, n) // (n + 1), math.factorial(n))
    raise ValueError(l)


def check_schur_identities():
    worst = 0.0
    pairs = [ga.schur_identity_unitary([0.3, 0.7], [0.7, 0.3], 2)]
    pairs += [ga.schur_identity_orthogonal([0.3, 0.7], a, 2) for a in (0.0, 0.5)]
    for n in (1, 2):
        q = [0.3, 0.7][:n]
        pairs += [ga.schur_identity_symplectic(q, 0.4, 1, odd) for odd in (False, True)]
    for lhs, rhs in pairs:
        worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-8, f"max tableau/group discrepancy {worst:.2e}"


def check_walker_quadrature():
    from .specfun import periodic_quadrature

    def integrand(a, b):
        vdm = np.abs(np.exp(1j * a) - np.exp(1j * b)) ** 2
        return vdm * (2 * np.cos(a) + 2 * np.cos(b)) ** 4 / 2

    quad = periodic_quadrature(integrand, 2)
    dp = cb.walker_count(2, 4)
    return abs(quad - dp) < 1e-10, f"G_(2,4): DP {dp}, quadrature {quad:.12g}"


def check_opuc_dual_route(fault: bool = False):
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        if fault:
            ctx = PrecisionContext(256)
            r1 = -opuc.initial_r1(t, ctx)
            r, logD = opuc.forward_recursion(t, 21, ctx, r1=r1)
            seq = opuc.OpucSequence(t, tuple(r), tuple(logD), ctx, 0, 21)
        else:
            seq = opuc.discrete_p2(t, 21)
        try:
            worst = max(worst, opuc.crosscheck_toeplitz(seq, 20, 1e-8))
        except AccuracyError as exc:
            return False, str(exc)
    return True, f"|log D_l| recursion vs Toeplitz max {worst:.2e}, l <= 20"


def check_opuc_monitors():
    for t in (0.5, 1.0, 2.0, 8.0):
        seq = opuc.discrete_p2(t, 60)
        bad = opuc.first_violation(seq.r[:61])
        if bad is not None:
            return False, f"t={t}, n={bad}"
    return True, "|r_n| < 1 and (-1)^n r_n > 0 for n <= 60"


def check_boundary_reduction():
    worst = 0.0
    for l in range(0, 6):
        worst = max(worst, abs(opuc.boundary_cdf(0.8, 0.0, 0.0, l) - ga.hammersley_cdf_exact(0.8, l)))
        a = opuc.tilde_d(opuc.discrete_p2(0.5, 8), l, 0.4, 0.3)
        b = ga.heine_average(ga.SpectralWeight.boundary(0.5, 0.4, 0.3), l)
        worst = max(worst, abs(float(a) - b) / abs(b))
    return worst < 1e-9, f"boundary model: alpha=0 and Toeplitz reductions agree to {worst:.2e}"


def check_painleve_residual():
    res = float(np.max(np.abs(painleve2.default_grid().residual())))
    return res < 1e-6, f"max |q'' - s q - 2 q^3| = {res:.2e}"


def check_painleve_fredholm():
    g = painleve2.default_grid()
    worst = max(abs(float(g.f_gue(s)) - painleve2.fredholm_oracle(s)) for s in (-4.0, -2.0, 0.0, 2.0))
    return worst < 1e-6, f"F_GUE vs Airy-kernel determinant max {worst:.2e}"


def check_tw_identity():
    g = painleve2.default_grid()
    goe, gse = g.f_goe_gse()
    gue = g.f_gue()
    err = float(np.max(np.abs(gse - 0.5 * (goe + gue / goe))))
    return err < 1e-12, f"F_GSE = (F_GOE + F_GUE/F_GOE)/2 to {err:.2e}"


def check_tw_convention():
    try:
        painleve2.check_convention(painleve2.default_grid())
    except KpzLabError as exc:
        return False, str(exc)
    return True, "F_GUE, F_GOE, F_GSE valid CDFs with the expected ordering"


def check_baik_rains_mean():
    worst = 0.0
    for y in (0.0, 0.5, 1.0):
        tab = kpz_scaling.baik_rains_table(y)
        worst = max(worst, abs(tab.mean_tilde - y * y), abs(tab.mean_shifted))
    return worst < 1e-3, f"|mean F~_y - y^2|, |mean F_y| max {worst:.2e}"


def check_scaling_reflection():
    f = kpz_scaling.scaling_fields(0.5)
    worst = float(np.max(kpz_scaling.reflection_residual(f)))
    return worst < 1e-6, f"a(s,y) = -b(s,-y) exp(y^3/3 - s y): relative {worst:.2e}"


def check_scaling_s_equation():
    f = kpz_scaling.scaling_fields(0.5)
    err = kpz_scaling.s_equation_residual(f)
    return err < 1e-4, f"|da/ds - q b| = {err:.2e}"


def check_g_routes():
    f = kpz_scaling.scaling_fields(0.5)
    g = kpz_scaling.g_function(f)
    i = int(np.argmin(np.abs(f.s - 8.0)))
    tail = abs(g.g[i] - (8.0 - 0.25))
    return g.max_discrepancy < 1e-3 and tail < 1e-3, \
        f"route discrepancy {g.max_discrepancy:.2e}, tail g - (s - y^2) at s=8: {tail:.2e}"


def check_johansson_rsk():
    rng = montecarlo.block_rng(2024, 0)
    for _ in range(200):
        n = int(rng.integers(1, 6))
        X, L = montecarlo.johansson_lpp(np.full(n + 1, 0.6), np.full(n + 1, 0.6), rng=rng)
        P = cb.rsk_matrix(X.tolist())[0]
        if (len(P[0]) if P else 0) != L:
            return False, f"mismatch for\n{X}"
    return True, "first RSK row = last-passage value, 200 instances"


def check_png_lis():
    for T in (2.0, 5.0, 10.0):
        for seed in range(100):
            h, l, _ = montecarlo.png_simulate(T, seed)
            if h != l:
                return False, f"T={T}, seed={seed}: h={h}, lis={l}"
    return True, "PNG height = light-cone LIS, 100 seeds per T in {2, 5, 10}"


def check_kernels_agree():
    rng = montecarlo.block_rng(99, 0)
    vals = rng.integers(0, 6, 400).astype(float)
    off = np.array([0, 0, 5, 50, 51, 400])
    X = rng.integers(0, 4, (20, 4, 4))
    out = []
    for impl in kernels.IMPLEMENTATIONS.values():
        out.append((tuple(impl.lis_segments(vals, off, False)), tuple(impl.lis_segments(vals, off, True)),
                    tuple(impl.last_passage_batch(X))))
    return all(o == out[0] for o in out), f"backends {sorted(kernels.IMPLEMENTATIONS)} agree"


def check_discrete_to_continuous():
    g = painleve2.default_grid()
    errs = []
    for t in (8.0, 16.0, 32.0):
        val, _ = opuc.painleve_scaled(t, 0.0)
        errs.append(abs(val - float(g.interp("q", 0.0))))
    return errs[0] > errs[1] > errs[2], f"|t^(1/3) R_n - q(0)| = {', '.join(f'{e:.3g}' for e in errs)}"


QUICK = {
    "lis_layers_rsk": check_lis_layers,
    "rsk_roundtrip": check_rsk_roundtrip,
    "reversal_duality": check_reversal_duality,
    "involution_fixed_points": check_involution_fixed_points,
    "evacuation_involution": check_evacuation_involution,
    "hook_length": check_hook_length,
    "plain_tableau_vs_enumeration": check_plain_tableau_vs_brute,
    "symmetric_tableau_vs_enumeration": check_symmetric_tableau_vs_brute,
    "symmetry_counts": check_symmetry_counts,
    "heine_vs_weyl": check_heine_vs_weyl,
    "hammersley_series": check_hammersley_series,
    "schur_group_identities": check_schur_identities,
    "walker_quadrature": check_walker_quadrature,
    "opuc_dual_route": check_opuc_dual_route,
    "opuc_monitors": check_opuc_monitors,
    "boundary_reductions": check_boundary_reduction,
    "painleve_residual": check_painleve_residual,
    "painleve_vs_fredholm": check_painleve_fredholm,
    "tracy_widom_identity": check_tw_identity,
    "tracy_widom_convention": check_tw_convention,
    "discrete_to_continuous_q": check_discrete_to_continuous,
    "baik_rains_mean": check_baik_rains_mean,
    "scaling_reflection": check_scaling_reflection,
    "scaling_s_equation": check_scaling_s_equation,
    "g_routes_and_tail": check_g_routes,
    "johansson_rsk": check_johansson_rsk,
    "png_lis_identity": check_png_lis,
    "kernels_agree": check_kernels_agree,
}


# ---------------------------------------------------------------------------
# full-level checks
# ---------------------------------------------------------------------------

def mc_versus_exact(batch, exact, sigmas: float = SIGMAS):
    """Largest ``|p_hat - p| / sqrt(p (1 - p) / n)`` over ``l = 0..max(L)``.

    Values of ``l`` whose exact CDF is out of reach (too many free angles
    for the group quadrature) are skipped.
    """
    emp = montecarlo.empirical_cdf(batch)
    worst = 0.0
    for l in emp.l:
        try:
            p = exact(int(l))
        except BoundExceededError:
            continue
        worst = max(worst, abs(montecarlo.binomial_z(emp.at(int(l)), p, batch.trials)))
    return worst <= sigmas, worst


MC_CASES = {
    "mc_plain": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 101),
                 lambda l: ga.hammersley_cdf_exact(1.0, l)),
    "mc_diag_alpha0": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 102, "diag", alpha=0.0),
                       lambda l: ga.symmetrized_cdf_exact(1.0, 0.0, 0.0, l, "diag")),
    "mc_diag_alpha05": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 103, "diag", alpha=0.5),
                        lambda l: ga.symmetrized_cdf_exact(1.0, 0.5, 0.0, l, "diag")),
    "mc_antidiag_beta0": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 104, "antidiag", beta=0.0),
                          lambda l: ga.symmetrized_cdf_exact(1.0, 0.0, 0.0, l, "antidiag")),
    "mc_antidiag_beta05": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 105, "antidiag", beta=0.5),
                           lambda l: ga.symmetrized_cdf_exact(1.0, 0.0, 0.5, l, "antidiag")),
    "mc_central": (lambda: montecarlo.simulate_hammersley(1.0, MC_TRIALS, 106, "central"),
                   lambda l: ga.symmetrized_cdf_exact(1.0, 0.0, 0.0, l, "central")),
    "mc_boundary": (lambda: montecarlo.sample_boundary(0.5, 0.4, 0.3, True, trials=MC_TRIALS, seed=107),
                    lambda l: opuc.boundary_cdf(0.5, 0.4, 0.3, l, with_origin=True)),
}


def _mc_check(name):
    sample, exact = MC_CASES[name]

    def run():
        ok, worst = mc_versus_exact(sample(), exact)
        return ok, f"max deviation {worst:.2f} sigma"
    return run


def tw_cdfs():
    """Callables for F_GUE, F_GOE, F_GSE extended by 0 / 1 outside the grid."""
    g = painleve2.default_grid()

    def ext(fn):
        def F(s):
            s = np.asarray(s, dtype=float)
            out = np.where(s > g.s_max, 1.0, 0.0)
            inside = (s >= g.s_min) & (s <= g.s_max)
            out[inside] = fn(s[inside])
            return out
        return F
    return {"GUE": ext(g.f_gue), "GOE": ext(lambda s: g.f_goe_gse(s)[0]),
            "GSE": ext(lambda s: g.f_goe_gse(s)[1])}


SCALED_CASES = {
    "scaled_plain_gue": ("plain", 0.0, 0.0, "GUE", 201),
    "scaled_diag_gse": ("diag", 0.0, 0.0, "GSE", 202),
    "scaled_antidiag_goe": ("antidiag", 0.0, 0.0, "GOE", 203),
}


def scaled_distances(cls, alpha, beta, law, seed, rates=(20.0, 40.0), trials=SCALED_TRIALS):
    F = tw_cdfs()[law]
    out = []
    for k, rate in enumerate(rates):
        batch = montecarlo.simulate_hammersley(rate, trials, seed * 100 + k, cls, alpha=alpha, beta=beta)
        out.append(montecarlo.kolmogorov_distance(montecarlo.scaled(batch.values, rate), F))
    return out


def _scaled_check(name):
    def run():
        d = scaled_distances(*SCALED_CASES[name])
        return d[-1] < KS_BOUND and d[-1] < d[0], f"Kolmogorov distances {d[0]:.4f} -> {d[1]:.4f}"
    return run


FULL = dict(QUICK)
FULL.update({name: _mc_check(name) for name in MC_CASES})
FULL.update({name: _scaled_check(name) for name in SCALED_CASES})


def run_checks(level: str = "quick", fault: str | None = None, only=None) -> Report:
    """Run the named checks.

    ``fault="r1_sign"`` runs the OPUC dual-route check on a sequence whose
    first coefficient has the wrong sign (the check must fail).
    """
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    table = dict(QUICK if level == "quick" else FULL)
    if fault == "r1_sign":
        table["opuc_dual_route"] = lambda: check_opuc_dual_route(fault=True)
    elif fault is not None:
        raise ValueError(f"unknown fault {fault!r}")
    results = []
    for name, fn in table.items():
        if only is not None and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, round(time.perf_counter() - t0, 3)))
    return Report(level, results)
