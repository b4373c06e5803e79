"""Classical-group eigenvalue averages and the exact finite-size CDFs built on them.

U(l) averages of product class functions are Toeplitz determinants of the
Fourier coefficients of the symbol (Heine identity).  Averages over O+(l),
O-(l) and Sp(l) are computed by quadrature over the explicit eigenvalue
densities, with the eigenvalues paired as conjugates ``e^{+-i theta}`` and
the forced eigenvalues at 1 and -1 substituted directly.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._format import write_csv
from .combinat import SymmetryClass, partitions, schur_enumerate
from .errors import BoundExceededError, DomainError, IllConditionedError
from .specfun import PrecisionContext, bessel_i, periodic_quadrature

FFT_POINTS = 4096
FFT_MAX_POINTS = 1 << 18
FFT_TOL = 1e-12
MAX_FREE_ANGLES = 4
RESIDUAL_TOL = 1e-6


class SpectralWeight:
    """A symbol ``f(theta)`` on the unit circle with cached Fourier coefficients.

    Parameters
    ----------
    symbol : callable
        Vectorized ``f(theta)``; may be complex valued.
    exact_coefficient : callable, optional
        ``exact_coefficient(k, ctx) -> mpf`` used when the determinant has
        to be recomputed in multiprecision.
    npoints : int
        Initial FFT size; it is doubled until two successive grids agree to
        ``1e-12`` relative to the largest coefficient.
    """

    def __init__(self, symbol: Callable, exact_coefficient: Callable | None = None,
                 npoints: int = FFT_POINTS, name: str = "weight"):
        self.symbol = symbol
        self.exact_coefficient = exact_coefficient
        self.npoints = int(npoints)
        self.name = name
        self._coeffs = None
        self.fft_points_used = None

    def __repr__(self):
        return f"SpectralWeight({self.name})"

    def __call__(self, theta):
        return self.symbol(theta)

    def _fft(self, m):
        theta = 2.0 * np.pi * np.arange(m) / m
        vals = np.asarray(self.symbol(theta), dtype=complex)
        return np.fft.fft(vals) / m

    def coefficients(self) -> np.ndarray:
        """All coefficients ``f_k`` of the converged grid, indexed modulo its size."""
        if self._coeffs is None:
            m = self.npoints
            cur = self._fft(m)
            while True:
                nxt = self._fft(2 * m)
                half = m // 2
                idx = np.r_[0:half, -half:0]
                scale = max(np.max(np.abs(nxt)), 1e-300)
                if np.max(np.abs(cur[idx] - nxt[idx])) <= FFT_TOL * scale:
                    break
                m *= 2
                cur = nxt
                if m > FFT_MAX_POINTS:
                    raise IllConditionedError(f"Fourier coefficients of {self.name} did not converge")
            self._coeffs = cur
            self.fft_points_used = m
        return self._coeffs

    def coefficient(self, k: int) -> complex:
        c = self.coefficients()
        if abs(k) >= len(c) // 2:
            return 0j
        return c[k]

    def toeplitz(self, l: int) -> np.ndarray:
        c = self.coefficients()
        if l >= len(c) // 2:
            raise BoundExceededError("Toeplitz size exceeds the Fourier grid")
        j = np.arange(l)
        return c[(j[:, None] - j[None, :]) % len(c)]

    @property
    def is_real_symbol(self) -> bool:
        theta = np.linspace(-np.pi, np.pi, 17)
        return bool(np.all(np.abs(np.imag(self.symbol(theta))) == 0))

    # factories -----------------------------------------------------------
    @classmethod
    def exp_cos(cls, t: float) -> "SpectralWeight":
        """``e^{2 t cos theta}`` with exact coefficients ``I_k(2t)``."""
        t = float(t)
        return cls(lambda th: np.exp(2.0 * t * np.cos(th)),
                   exact_coefficient=lambda k, ctx: bessel_i(abs(k), 2 * ctx.mpf(t), ctx),
                   name=f"exp_cos(t={t})")

    @classmethod
    def boundary(cls, t: float, alpha_plus: float, alpha_minus: float) -> "SpectralWeight":
        """``(1 + a+ e^{i theta})(1 + a- e^{-i theta}) e^{2 t cos theta}``."""
        t, ap, am = float(t), float(alpha_plus), float(alpha_minus)

        def exact(k, ctx):
            b = lambda j: bessel_i(abs(j), 2 * ctx.mpf(t), ctx)
            return b(k) + ap * b(k - 1) + am * b(k + 1) + ap * am * b(k)

        return cls(lambda th: (1 + ap * np.exp(1j * th)) * (1 + am * np.exp(-1j * th)) * np.exp(2 * t * np.cos(th)),
                   exact_coefficient=exact, name=f"boundary(t={t}, a+={ap}, a-={am})")

    @classmethod
    def bothdiags(cls, z: float, alpha: float, beta: float) -> "SpectralWeight":
        """``(1 + alpha e^{i theta}) / (1 - beta e^{i theta}) e^{2 z cos theta}``."""
        z, alpha, beta = float(z), float(alpha), float(beta)
        _check_beta(beta)
        return cls(lambda th: (1 + alpha * np.exp(1j * th)) / (1 - beta * np.exp(1j * th)) * np.exp(2 * z * np.cos(th)),
                   name=f"bothdiags(z={z}, alpha={alpha}, beta={beta})")

    @classmethod
    def johansson(cls, a, b) -> "SpectralWeight":
        """``prod_j (1 + a_j e^{i theta})(1 + b_j e^{-i theta})``."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)

        def symbol(th):
            e = np.exp(1j * np.asarray(th))
            out = np.ones_like(e)
            for aj in a:
                out = out * (1 + aj * e)
            for bj in b:
                out = out * (1 + bj / e)
            return out

        return cls(symbol, name=f"johansson(a={a.tolist()}, b={b.tolist()})")


def _check_beta(beta):
    if not 0 <= beta < 1:
        raise DomainError(f"beta must lie in [0, 1), got {beta}")


# ---------------------------------------------------------------------------
# Heine / Toeplitz route
# ---------------------------------------------------------------------------

def _mp_logdet(weight: SpectralWeight, l: int, ctx: PrecisionContext):
    mp = ctx.mp
    if weight.exact_coefficient is not None:
        coef = {k: weight.exact_coefficient(k, ctx) for k in range(-(l - 1), l)}
        M = mp.matrix(l, l)
        for j in range(l):
            for k in range(l):
                M[j, k] = coef[j - k]
    else:
        T = weight.toeplitz(l)
        if np.all(T.imag == 0):
            M = mp.matrix(T.real.tolist())
        else:
            M = mp.matrix([[mp.mpc(v.real, v.imag) for v in row] for row in T])
    d = mp.det(M)
    return d


def heine_average(weight: SpectralWeight, l: int, log: bool = False, ctx: PrecisionContext | None = None):
    """U(l) average of ``prod_j f(theta_j)`` as the Toeplitz determinant ``det[f_{j-k}]``.

    The double precision determinant is accepted when the condition number is
    small; otherwise it is recomputed in multiprecision (exact Bessel
    coefficients when the weight provides them) at the working precision and
    at twice that, and the two must agree to ``1e-6``.

    Parameters
    ----------
    log : bool
        Return ``log(det)`` instead (real part for real averages), which stays
        finite where the determinant itself overflows.

    Raises
    ------
    IllConditionedError
        When the escalated evaluations still disagree.
    """
    l = int(l)
    if l < 0:
        raise DomainError("l must be non-negative")
    if l == 0:
        return 0.0 if log else 1.0
    T = weight.toeplitz(l)
    real = bool(np.max(np.abs(T.imag)) <= 1e-14 * np.max(np.abs(T)))
    M = T.real if real else T
    with np.errstate(all="ignore"):
        cond = np.linalg.cond(M)
    if np.isfinite(cond) and cond * np.finfo(float).eps < 1e-10:
        sign, logdet = np.linalg.slogdet(M)
        if log:
            if real and sign < 0:
                raise IllConditionedError("negative determinant for a log evaluation")
            return float(logdet) if real else logdet + np.log(sign)
        val = sign * np.exp(logdet)
        return float(val.real) if real else complex(val)

    ctx = ctx or PrecisionContext()
    d1 = _mp_logdet(weight, l, ctx)
    d2 = _mp_logdet(weight, l, ctx.widen(ctx.bits))
    mp = ctx.widen(ctx.bits).mp
    if d2 == 0 or abs(d1 - d2) > RESIDUAL_TOL * abs(d2):
        raise IllConditionedError(
            f"Toeplitz determinant of size {l} for {weight.name} is ill-conditioned (cond ~ {cond:.3g})")
    if log:
        if real:
            if d2 <= 0:
                raise IllConditionedError("non-positive determinant for a log evaluation")
            return float(mp.log(mp.re(d2)))
        return complex(mp.log(d2))
    return float(mp.re(d2)) if real else complex(d2)


# ---------------------------------------------------------------------------
# Weyl densities
# ---------------------------------------------------------------------------

GROUPS = ("U", "O+", "O-", "O", "Sp")


def _pair_product(half):
    """prod_{j<k} |e^{i a_j} - e^{i a_k}|^2 |1 - e^{i(a_j + a_k)}|^2."""
    out = 1.0
    for j in range(len(half)):
        for k in range(j + 1, len(half)):
            out = out * np.abs(np.exp(1j * half[j]) - np.exp(1j * half[k])) ** 2 \
                * np.abs(1 - np.exp(1j * (half[j] + half[k]))) ** 2
    return out


def _layout(group: str, l: int):
    """Return ``(free, build)`` where ``build(free_angles) -> (angles, density_factor, const)``."""
    if group == "U":
        def build(a):
            vdm = 1.0
            for j in range(l):
                for k in range(j + 1, l):
                    vdm = vdm * np.abs(np.exp(1j * a[k]) - np.exp(1j * a[j])) ** 2
            return list(a), vdm, 1.0 / math.factorial(l)
        return l, build
    if group == "Sp":
        def build(a):
            dens = _pair_product(a)
            for x in a:
                dens = dens * np.abs(np.exp(1j * x) - np.exp(-1j * x)) ** 2
            return list(a) + [-x for x in a], dens, 1.0 / (2 ** l * math.factorial(l))
        return l, build
    if group == "O+":
        p = l // 2
        if l % 2 == 0:
            def build(a):
                return list(a) + [-x for x in a], _pair_product(a), 2.0 ** (1 - p) / math.factorial(p)
        else:
            def build(a):
                dens = _pair_product(a)
                for x in a:
                    dens = dens * np.abs(1 - np.exp(1j * x)) ** 2
                return list(a) + [-x for x in a] + [0.0], dens, 2.0 ** (-p) / math.factorial(p)
        return p, build
    if group == "O-":
        if l % 2 == 0:
            p = l // 2 - 1

            def build(a):
                dens = _pair_product(a)
                for x in a:
                    dens = dens * np.abs(1 - np.exp(2j * x)) ** 2
                return list(a) + [-x for x in a] + [0.0, np.pi], dens, 2.0 ** (-p) / math.factorial(p)
            return p, build
        p = l // 2

        def build(a):
            dens = _pair_product(a)
            for x in a:
                dens = dens * np.abs(1 + np.exp(1j * x)) ** 2
            return list(a) + [-x for x in a] + [np.pi], dens, 2.0 ** (-p) / math.factorial(p)
        return p, build
    raise DomainError(f"unknown group {group!r}; expected one of {GROUPS}")


def free_angles(group: str, l: int) -> int:
    if group == "O":
        return max(free_angles("O+", l), free_angles("O-", l))
    return _layout(group, l)[0]


def weyl_average(f: Callable | None = None, group: str = "U", l: int = 1, *, symbol: Callable | None = None,
                 points: int | None = None):
    """Average of a class function over the eigenvalue density of a classical group.

    Parameters
    ----------
    f : callable, optional
        ``f(angles) -> array`` receiving the full list of eigenangles (as
        broadcastable arrays or scalars).
    symbol : callable, optional
        Per-eigenvalue symbol ``g(theta)``; the class function is ``prod_j g(theta_j)``.
    group : {"U", "O+", "O-", "O", "Sp"}
        For ``Sp`` the size ``l`` counts conjugate pairs (``2l`` eigenvalues).
    points : int, optional
        Quadrature points per free angle.

    Raises
    ------
    BoundExceededError
        More than four free angles.
    """
    if (f is None) == (symbol is None):
        raise DomainError("give exactly one of f or symbol")
    if symbol is not None:
        def f(angles):
            out = 1.0
            for a in angles:
                out = out * symbol(a)
            return out
    l = int(l)
    if l < 0:
        raise DomainError("group size must be non-negative")
    if group == "O":
        return 0.5 * (weyl_average(f, "O+", l, points=points) + weyl_average(f, "O-", l, points=points))
    if l == 0:
        return complex(f([]))
    free, build = _layout(group, l)
    if free > MAX_FREE_ANGLES:
        raise BoundExceededError(f"{group}({l}) has {free} free angles; at most {MAX_FREE_ANGLES} supported")
    if free == 0:
        angles, dens, const = build([])
        return complex(f(angles)) * dens * const

    def integrand(*a):
        angles, dens, const = build(list(a))
        return f(angles) * dens * const

    return complex(periodic_quadrature(integrand, free, points))


def _real(x, tol=1e-8):
    x = complex(x)
    if abs(x.imag) > tol * max(1.0, abs(x.real)):
        raise IllConditionedError(f"average expected real, got {x}")
    return x.real


# ---------------------------------------------------------------------------
# exact CDFs
# ---------------------------------------------------------------------------

def hammersley_cdf_exact(lam: float, l: int, ctx: PrecisionContext | None = None) -> float:
    """``Pr(LIS <= l)`` for Poisson(lam^2) uniform points: ``e^{-lam^2} D_l(lam)``."""
    lam = float(lam)
    if lam < 0:
        raise DomainError("lambda must be non-negative")
    if l < 0:
        return 0.0
    logd = heine_average(SpectralWeight.exp_cos(lam), l, log=True, ctx=ctx)
    return float(min(1.0, math.exp(logd - lam * lam)))


def symmetrized_cdf_exact(z: float, alpha: float, beta: float, l: int,
                          cls: SymmetryClass | str = SymmetryClass.DIAG, points: int | None = None) -> float:
    """``Pr(LIS <= l)`` for the symmetrized Poisson processes.

    Parameters
    ----------
    z : float
        Time parameter of the symmetrized process.
    alpha, beta : float
        Rates of points on the diagonal and on the anti-diagonal.
    cls : SymmetryClass
        DIAG uses an O(l) average, ANTIDIAG Sp averages split by the parity
        of ``l``, BOTHDIAGS a Toeplitz determinant in U(floor(l/2)), CENTRAL
        products of the plain CDF.  PLAIN is accepted and ignores the rates.
    """
    cls = SymmetryClass.parse(cls)
    z, alpha, beta, l = float(z), float(alpha), float(beta), int(l)
    if z < 0 or alpha < 0:
        raise DomainError("z and alpha must be non-negative")
    _check_beta(beta)
    if l < 0:
        return 0.0
    if cls is SymmetryClass.PLAIN:
        return hammersley_cdf_exact(z, l)
    if cls is SymmetryClass.CENTRAL:
        k = l // 2
        if l % 2 == 0:
            return hammersley_cdf_exact(z, k) ** 2
        return hammersley_cdf_exact(z, k + 1) * hammersley_cdf_exact(z, k)
    if cls is SymmetryClass.DIAG:
        if free_angles("O", l) > MAX_FREE_ANGLES:
            raise BoundExceededError(f"O({l}) average needs more than {MAX_FREE_ANGLES} free angles")
        avg = weyl_average(symbol=lambda th: (1 + alpha * np.exp(1j * th)) * np.exp(z * np.exp(1j * th)),
                           group="O", l=l, points=points)
        return _clip(math.exp(-alpha * z - z * z / 2) * _real(avg))
    if cls is SymmetryClass.ANTIDIAG:
        k = l // 2
        if k > MAX_FREE_ANGLES:
            raise BoundExceededError(f"Sp({k}) average needs more than {MAX_FREE_ANGLES} free angles")
        if l % 2 == 0:
            avg = weyl_average(symbol=lambda th: np.exp(z * np.exp(1j * th)) / (1 - beta * np.exp(-1j * th)),
                               group="Sp", l=k, points=points)
            return _clip(math.exp(-beta * z - z * z / 2) * _real(avg))
        avg = weyl_average(symbol=lambda th: np.exp(z * np.exp(1j * th)), group="Sp", l=k, points=points)
        return _clip(math.exp(-z * z / 2) * _real(avg))
    # BOTHDIAGS
    k = l // 2
    b = beta if l % 2 == 0 else 0.0
    weight = SpectralWeight.bothdiags(z, alpha, b)
    avg = heine_average(weight, k)
    return _clip(math.exp(-z * z - alpha * z - b * z) * _real(avg))


def _clip(p):
    # round-off can push a probability a hair outside [0, 1]
    if -1e-12 < p < 0:
        return 0.0
    if 1 < p < 1 + 1e-12:
        return 1.0
    return p


def johansson_cdf_exact(a, b, l: int) -> float:
    """``Pr(L(n,n) <= l)`` for the geometric last-passage model with parameters ``a_i b_j``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    prod = np.prod(1 - np.outer(a, b))
    if np.any(np.outer(a, b) >= 1) or np.any(a < 0) or np.any(b < 0):
        raise DomainError("need 0 <= a_i b_j < 1")
    if l < 0:
        return 0.0
    return _clip(float(prod * _real(heine_average(SpectralWeight.johansson(a, b), l))))


# ---------------------------------------------------------------------------
# Schur-sum identities (tableau side vs group side)
# ---------------------------------------------------------------------------

def _bounded_shapes(max_first: int, max_len: int):
    for n in range(max_first * max_len + 1):
        for mu in partitions(n, max_first):
            if len(mu) <= max_len:
                yield mu


def _poly_symbol(q, conj=False):
    sign = -1j if conj else 1j
    return lambda th: np.prod([1 + x * np.exp(sign * th) for x in q], axis=0)


def schur_identity_unitary(a, b, l: int):
    """``sum_{mu_1 <= l} s_mu(a) s_mu(b)`` and the U(l) average of ``prod (1 + a_j e^{i th})(1 + b_j e^{-i th})``.

    Returns ``(tableau_side, group_side)``.  Only shapes with at most
    ``len(a)`` rows contribute, so the left side is a finite sum.
    """
    if len(a) != len(b):
        raise DomainError("a and b need the same length")
    lhs = sum(schur_enumerate(mu, a) * schur_enumerate(mu, b) for mu in _bounded_shapes(l, len(a)))
    fa, fb = _poly_symbol(a), _poly_symbol(b, conj=True)
    rhs = weyl_average(symbol=lambda th: fa(th) * fb(th), group="U", l=l)
    return float(lhs), _real(rhs)


def schur_identity_orthogonal(q, alpha: float, l: int):
    """``sum_{mu_1 <= l} alpha^{alt(mu)} s_mu(q)`` and the O(l) average of ``prod (1 + alpha e^{i th}) prod_j (1 + q_j e^{i th})``."""
    lhs = sum(alpha ** mu.alternating_sum() * schur_enumerate(mu, q) for mu in _bounded_shapes(l, len(q)))
    fq = _poly_symbol(q)
    rhs = weyl_average(symbol=lambda th: (1 + alpha * np.exp(1j * th)) * fq(th), group="O", l=l)
    return float(lhs), _real(rhs)


def schur_identity_symplectic(q, beta: float, l: int, odd: bool = False):
    """Tableau and Sp(l) sides of the column-alternating Schur sums.

    Even bound ``mu_1 <= 2l``: group side is the Sp(l) average of
    ``prod_j (1 + q_j e^{i th}) / (1 - beta e^{-i th})``.  Odd bound
    ``mu_1 <= 2l + 1``: ``prod_j (1 + beta q_j)`` times the Sp(l) average of
    ``prod_j (1 + q_j e^{i th})``.
    """
    _check_beta(beta)
    bound = 2 * l + 1 if odd else 2 * l
    lhs = sum(beta ** mu.conjugate().alternating_sum() * schur_enumerate(mu, q)
              for mu in _bounded_shapes(bound, len(q)))
    fq = _poly_symbol(q)
    if odd:
        rhs = float(np.prod([1 + beta * x for x in q])) * weyl_average(symbol=fq, group="Sp", l=l)
    else:
        rhs = weyl_average(symbol=lambda th: fq(th) / (1 - beta * np.exp(-1j * th)), group="Sp", l=l)
    return float(lhs), _real(rhs)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

@dataclass
class DistTable:
    """A CDF in ``l`` at fixed parameters."""

    param: float
    alpha: float = 0.0
    beta: float = 0.0
    symmetry: str = "plain"
    rows: list = field(default_factory=list)

    HEADER = ("param", "alpha", "beta", "symmetry", "l", "cdf")

    @property
    def l(self):
        return [r[0] for r in self.rows]

    @property
    def cdf(self):
        return [r[1] for r in self.rows]

    def check(self, tol: float = 1e-9):
        """Validate monotonicity and range; returns self."""
        prev = -math.inf
        for l, p in self.rows:
            if not (-tol <= p <= 1 + tol):
                raise DomainError(f"CDF value {p} at l={l} outside [0, 1]")
            if p < prev - tol:
                raise DomainError(f"CDF decreases at l={l}")
            prev = p
        return self

    def to_csv(self, dest=None) -> str:
        rows = [(self.param, self.alpha, self.beta, self.symmetry, l, p) for l, p in self.rows]
        return write_csv(self.HEADER, rows, dest)


def dist_table(kind: str, param: float, l_max: int, *, alpha: float = 0.0, beta: float = 0.0,
               symmetry: SymmetryClass | str = SymmetryClass.PLAIN, alpha_minus: float = 0.0,
               l_min: int = 0, workers: int = 1) -> DistTable:
    """Tabulate an exact CDF for ``l = l_min..l_max``.

    ``kind`` is ``"hammersley"``, ``"symmetrized"`` or ``"boundary"``; for the
    boundary model ``alpha`` and ``alpha_minus`` are the two source rates.
    Rows are computed independently and assembled in ``l`` order.
    """
    if l_max < l_min:
        raise DomainError("l_max must be at least l_min")
    if kind == "hammersley":
        fn = lambda l: hammersley_cdf_exact(param, l)
        sym = "plain"
    elif kind == "symmetrized":
        cls = SymmetryClass.parse(symmetry)
        fn = lambda l: symmetrized_cdf_exact(param, alpha, beta, l, cls)
        sym = cls.value
    elif kind == "boundary":
        from .opuc import boundary_cdf, discrete_p2
        seq = discrete_p2(param, max(l_max + 2, 2))
        fn = lambda l: boundary_cdf(param, alpha, alpha_minus, l, with_origin=False, seq=seq)
        sym = "boundary"
        beta = alpha_minus
    else:
        raise DomainError(f"unknown table kind {kind!r}")
    ls = list(range(l_min, l_max + 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(fn, ls))
    else:
        values = [fn(l) for l in ls]
    return DistTable(float(param), float(alpha), float(beta), sym, list(zip(ls, values))).check()
