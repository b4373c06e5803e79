"""Special functions and numerical primitives.

Multiprecision arithmetic is delegated to :mod:`mpmath`; a
:class:`PrecisionContext` pins the mantissa width so that results do not
depend on global state.  Double precision work (Airy on a bounded interval,
periodic quadrature, adaptive Runge-Kutta) uses numpy and scipy.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, RangeError, StiffnessError

PRECISION_ENV = "KPZLAB_PRECISION_BITS"
DEFAULT_BITS = 128


def default_bits() -> int:
    """Working precision in bits, overridable through ``KPZLAB_PRECISION_BITS``."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return DEFAULT_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise DomainError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if bits < 53:
        raise DomainError(f"{PRECISION_ENV} must be at least 53, got {bits}")
    return bits


@lru_cache(maxsize=32)
def _mp_context(bits: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable handle on a binary floating-point precision (round to nearest).

    Parameters
    ----------
    bits : int
        Mantissa width, at least 53.
    """

    bits: int = field(default_factory=default_bits)

    def __post_init__(self):
        if int(self.bits) < 53:
            raise DomainError(f"precision must be at least 53 bits, got {self.bits}")
        object.__setattr__(self, "bits", int(self.bits))

    @property
    def mp(self) -> mpmath.ctx_mp.MPContext:
        """An :mod:`mpmath` context fixed at this precision (shared, do not mutate)."""
        return _mp_context(self.bits)

    def mpf(self, x):
        return self.mp.mpf(x)

    def widen(self, extra: int) -> "PrecisionContext":
        return PrecisionContext(self.bits + int(extra))

    @property
    def eps(self):
        return self.mp.ldexp(1, 1 - self.bits)


def _ctx(ctx):
    return ctx if ctx is not None else PrecisionContext()


# ---------------------------------------------------------------------------
# modified Bessel functions
# ---------------------------------------------------------------------------

BESSEL_MAX_ORDER = 64
BESSEL_MAX_ARG = 1.0e6


def bessel_i(nu: int, x, ctx: PrecisionContext | None = None):
    """Modified Bessel function ``I_nu(x)`` for integer ``nu >= 0`` and ``x >= 0``.

    Sums the ascending series ``sum_k (x/2)^(nu+2k) / (k! (nu+k)!)`` with
    guard bits and stops once a term no longer changes the rounded sum.
    All terms are positive, so there is no cancellation.

    Returns an ``mpf`` at the context precision.
    """
    ctx = _ctx(ctx)
    if int(nu) != nu or nu < 0 or nu > BESSEL_MAX_ORDER:
        raise DomainError(f"order must be an integer in [0, {BESSEL_MAX_ORDER}], got {nu}")
    nu = int(nu)
    guard = 16 + int(math.log2(float(x) + 2.0))
    mp = ctx.widen(guard).mp
    x = mp.mpf(x)
    if x < 0:
        raise DomainError("bessel_i is implemented for x >= 0 only")
    if x > BESSEL_MAX_ARG:
        raise RangeError(f"x = {x} exceeds the supported range {BESSEL_MAX_ARG}")
    if x == 0:
        return ctx.mpf(1 if nu == 0 else 0)
    half = x / 2
    q = half * half
    term = half ** nu / mp.factorial(nu)
    total = term
    k = 0
    while True:
        k += 1
        term = term * q / (k * (nu + k))
        new = total + term
        if new == total:
            break
        total = new
    return ctx.mpf(total)


# ---------------------------------------------------------------------------
# Airy function on a bounded interval
# ---------------------------------------------------------------------------

AIRY_RANGE = (-15.0, 20.0)
AIRY_SERIES_LIMIT = 8.0


@lru_cache(maxsize=1)
def _airy_asymptotic_coeffs(n=40):
    # u_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)), v_k = -(6k+1)/(6k-1) u_k
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return u, v


def _asymptotic_sum(coeffs, zeta, alternate, parity=None):
    total = 0.0
    prev = math.inf
    for k, c in enumerate(coeffs):
        if parity is not None and k % 2 != parity:
            continue
        term = c / zeta ** k
        if abs(term) > prev:
            break
        prev = abs(term)
        if alternate == "all":
            sign = (-1) ** k
        elif alternate == "pair":
            sign = (-1) ** (k // 2)
        else:
            sign = 1
        total += sign * term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _airy_series(x: float):
    mp = _mp_context(64 + 4 * int(abs(x) ** 1.5 + 1))
    x = mp.mpf(x)
    c1 = 1 / (mp.cbrt(9) * mp.gamma(mp.mpf(2) / 3))
    c2 = 1 / (mp.cbrt(3) * mp.gamma(mp.mpf(1) / 3))
    x3 = x ** 3
    # f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
    f = fterm = mp.mpf(1)
    g = gterm = x
    fp = mp.mpf(0)
    fpterm = None
    gp = gpterm = mp.mpf(1)
    k = 0
    while True:
        k += 1
        fterm = fterm * x3 / ((3 * k - 1) * (3 * k))
        gterm = gterm * x3 / ((3 * k) * (3 * k + 1))
        fpterm = x ** 2 / 2 if k == 1 else fpterm * x3 / ((3 * k - 3) * (3 * k - 1))
        gpterm = gpterm * x3 / ((3 * k - 2) * (3 * k))
        f += fterm
        g += gterm
        fp += fpterm
        gp += gpterm
        if k > 5 and max(abs(fterm), abs(gterm), abs(fpterm), abs(gpterm)) < mp.mpf(10) ** -40:
            break
    ai = c1 * f - c2 * g
    aip = c1 * fp - c2 * gp
    return float(ai), float(aip)


def airy_ai(x: float) -> tuple[float, float]:
    """Airy function and derivative ``(Ai(x), Ai'(x))`` on ``[-15, 20]``.

    Uses the Maclaurin series (summed in extended precision to absorb the
    cancellation) for ``|x| <= 8`` and the standard asymptotic expansions in
    ``zeta = 2/3 |x|^(3/2)`` beyond.  Relative error is below 1e-10 of the
    local envelope.
    """
    x = float(x)
    if not (AIRY_RANGE[0] <= x <= AIRY_RANGE[1]) or math.isnan(x):
        raise RangeError(f"airy_ai supports {AIRY_RANGE[0]} <= x <= {AIRY_RANGE[1]}, got {x}")
    if abs(x) <= AIRY_SERIES_LIMIT:
        return _airy_series(x)
    u, v = _airy_asymptotic_coeffs()
    if x > 0:
        zeta = 2.0 / 3.0 * x ** 1.5
        pre = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
        ai = pre * x ** -0.25 * _asymptotic_sum(u, zeta, "all")
        aip = -pre * x ** 0.25 * _asymptotic_sum(v, zeta, "all")
        return ai, aip
    ax = -x
    zeta = 2.0 / 3.0 * ax ** 1.5
    phase = zeta + math.pi / 4
    s, c = math.sin(phase), math.cos(phase)
    u_even = _asymptotic_sum(u, zeta, "pair", parity=0)
    u_odd = _asymptotic_sum(u, zeta, "pair", parity=1)
    v_even = _asymptotic_sum(v, zeta, "pair", parity=0)
    v_odd = _asymptotic_sum(v, zeta, "pair", parity=1)
    pre = 1.0 / math.sqrt(math.pi)
    ai = pre * ax ** -0.25 * (s * u_even - c * u_odd)
    aip = -pre * ax ** 0.25 * (c * v_even + s * v_odd)
    return ai, aip


def airy_ai_mp(x, ctx: PrecisionContext | None = None):
    """``(Ai(x), Ai'(x))`` as ``mpf`` at the context precision (any real ``x``)."""
    mp = _ctx(ctx).mp
    x = mp.mpf(x)
    return mp.airyai(x), mp.airyai(x, derivative=1)


# ---------------------------------------------------------------------------
# periodic quadrature
# ---------------------------------------------------------------------------

def default_points(dims: int) -> int:
    return 256 if dims <= 2 else 64


def periodic_quadrature(f, dims: int = 1, points: int | None = None, chunk: int = 1 << 20):
    """Normalized tensor trapezoid rule ``(2 pi)^-dims * integral over [-pi, pi]^dims``.

    ``f`` receives ``dims`` broadcastable angle arrays and returns values of
    the same shape (real or complex).  Spectrally accurate for smooth
    periodic integrands.  Grids beyond ``chunk`` nodes are processed in
    slabs along the first axis.
    """
    if not 1 <= dims <= 4:
        raise DomainError(f"periodic_quadrature supports 1..4 dimensions, got {dims}")
    m = default_points(dims) if points is None else int(points)
    if m < 1:
        raise DomainError("need at least one point per axis")
    theta = -np.pi + 2.0 * np.pi * np.arange(m) / m
    if dims == 1:
        return np.sum(f(theta)) / m
    rest = np.meshgrid(*([theta] * (dims - 1)), indexing="ij", sparse=True)
    per_slab = m ** (dims - 1)
    step = max(1, chunk // per_slab)
    total = 0.0
    for start in range(0, m, step):
        first = theta[start:start + step].reshape((-1,) + (1,) * (dims - 1))
        vals = f(first, *rest)
        total = total + np.sum(np.broadcast_to(vals, (len(first),) + (m,) * (dims - 1)))
    return total / m ** dims


# ---------------------------------------------------------------------------
# adaptive ODE integration
# ---------------------------------------------------------------------------

@dataclass
class Trajectory:
    """Result of :func:`integrate_ode`: nodes ``t``, states ``y`` (n_state x n_nodes)."""

    t: np.ndarray
    y: np.ndarray
    sol: object = None
    nfev: int = 0

    def __call__(self, t):
        if self.sol is None:
            raise DomainError("trajectory was computed without dense output")
        return self.sol(t)


def integrate_ode(rhs, y0, span, tol: float = 1e-10, dense: bool = False, t_eval=None,
                  atol: float | None = None, vectorized: bool = False) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` with the embedded 8(5,3) Dormand-Prince pair.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y) -> dy/dt``.
    y0 : array_like
        Initial state at ``span[0]``; ``span[1] < span[0]`` integrates backwards.
    tol : float
        Local relative tolerance; the absolute tolerance defaults to ``tol * 1e-3``.
    dense : bool
        Keep the continuous extension for evaluation between steps.

    Raises
    ------
    StiffnessError
        When the step size underflows or the solver otherwise gives up.
    """
    if atol is None:
        atol = tol * 1e-3
    res = solve_ivp(rhs, tuple(span), np.asarray(y0), method="DOP853", rtol=tol, atol=atol,
                    dense_output=dense, t_eval=t_eval, vectorized=vectorized)
    if res.status != 0:
        reached = res.t[-1] if res.t.size else span[0]
        raise StiffnessError(f"integration over {tuple(span)} stopped at t={reached:.6g}: {res.message}")
    return Trajectory(res.t, res.y, res.sol, res.nfev)
