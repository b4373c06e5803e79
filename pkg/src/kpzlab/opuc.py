"""Orthogonal polynomials on the unit circle for the weight ``e^{2t cos theta}``.

The coefficients ``r_n = pi_n(0)`` obey the discrete Painleve II recursion

    -(n/t) r_n / (1 - r_n^2) = r_{n+1} + r_{n-1},   r_0 = 1,  r_1 = -I_1(2t)/I_0(2t),

which is run forward in multiprecision.  The forward direction amplifies
rounding error by roughly ``(n!/t^n)^2``, so the working precision grows
with ``n_max`` and two monitors (``|r_n| < 1`` and the alternating sign
pattern ``(-1)^n r_n > 0``) trigger one escalation before giving up.

Norms follow from ``h_0 = I_0(2t)`` and ``h_n = h_{n-1} (1 - r_n^2)``; the
Toeplitz determinant is ``D_l = h_0 h_1 ... h_{l-1}``, accumulated in logs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._format import write_csv
from .errors import AccuracyError, DomainError, IllConditionedError, InstabilityError
from .specfun import PrecisionContext, bessel_i, default_bits

N_MAX_LIMIT = 400
DEGENERATE_TOL = 1e-8


@dataclass(frozen=True)
class OpucSequence:
    """Recurrence data for the weight ``e^{2t cos theta}``.

    Attributes
    ----------
    t : float
    r : tuple of mpf
        ``r_0 .. r_{n_max+1}`` (one extra so that derivatives at ``n_max`` work).
    logD : tuple of mpf
        ``log D_0 .. log D_{n_max+1}``.
    ctx : PrecisionContext
        Precision the sequence was computed at.
    escalations : int
        Number of precision escalations that were needed.
    """

    t: float
    r: tuple
    logD: tuple
    ctx: PrecisionContext
    escalations: int = 0
    n_max: int = field(default=0)

    def r_float(self, n: int) -> float:
        return float(self.r[n])

    def to_csv(self, dest=None) -> str:
        rows = [(self.t, n, self.r[n], self.logD[n]) for n in range(self.n_max + 1)]
        return write_csv(("t", "n", "r", "logD"), rows, dest)


def lost_bits(t: float, n_max: int) -> float:
    """Estimated bits of accuracy destroyed by the forward recursion up to ``n_max``."""
    return 2.0 * sum(math.log2(max(1.0, k / t)) for k in range(1, n_max + 2))


def initial_r1(t, ctx: PrecisionContext):
    return -bessel_i(1, 2 * ctx.mpf(t), ctx) / bessel_i(0, 2 * ctx.mpf(t), ctx)


def forward_recursion(t: float, n_max: int, ctx: PrecisionContext, r1=None):
    """Run the recursion with no monitoring; returns ``(r, logD)`` lists of length ``n_max + 2``.

    ``r1`` overrides the initial value (used for fault injection).
    """
    mp = ctx.mp
    T = mp.mpf(t)
    r = [mp.mpf(1), initial_r1(t, ctx) if r1 is None else mp.mpf(r1)]
    for n in range(1, n_max + 1):
        rn = r[n]
        r.append(-(n / T) * rn / (1 - rn * rn) - r[n - 1])
    logD = [mp.mpf(0)]
    logh = mp.log(bessel_i(0, 2 * T, ctx))
    for k in range(n_max + 1):
        if k:
            one_minus = 1 - r[k] * r[k]
            logh = logh + (mp.log(one_minus) if one_minus > 0 else mp.nan)
        logD.append(logD[-1] + logh)
    return r, logD


def first_violation(r) -> int | None:
    """Index of the first ``r_n`` breaking ``|r_n| < 1`` or ``(-1)^n r_n > 0``, else None."""
    for n in range(1, len(r)):
        v = r[n]
        if not (abs(v) < 1) or (v * (-1) ** n) <= 0:
            return n
    return None


def discrete_p2(t: float, n_max: int, ctx: PrecisionContext | None = None) -> OpucSequence:
    """Compute ``r_0..r_{n_max+1}`` and ``log D_0..log D_{n_max+1}``.

    The starting precision is ``max(ctx.bits, 4 n_max, 64 + lost_bits)``.
    On a monitor violation the recursion is repeated once at twice that
    plus the loss estimate.

    Raises
    ------
    InstabilityError
        If the escalated run still violates a monitor; ``last_trusted`` is
        the last index before the violation.
    """
    t = float(t)
    n_max = int(n_max)
    if not t > 0:
        raise DomainError("t must be positive")
    if not 0 <= n_max <= N_MAX_LIMIT:
        raise DomainError(f"n_max must lie in [0, {N_MAX_LIMIT}]")
    base = ctx.bits if ctx is not None else default_bits()
    need = int(math.ceil(lost_bits(t, n_max)))
    bits = max(base, 4 * n_max, 64 + need)
    escalations = 0
    for attempt in range(2):
        work = PrecisionContext(bits)
        r, logD = forward_recursion(t, n_max, work)
        bad = first_violation(r)
        if bad is None:
            return OpucSequence(t, tuple(r), tuple(logD), work, escalations, n_max)
        if attempt == 0:
            escalations += 1
            bits = 2 * bits + need
    raise InstabilityError(f"discrete Painleve II recursion unstable at n={bad} (t={t}, {bits} bits)",
                           last_trusted=bad - 1)


def d_l(seq: OpucSequence, l: int, log: bool = False):
    """Toeplitz determinant ``D_l(t)`` (``mpf``), or its logarithm."""
    if not 0 <= l <= seq.n_max + 1:
        raise DomainError(f"l={l} outside the computed range 0..{seq.n_max + 1}")
    val = seq.logD[l]
    return val if log else seq.ctx.mp.exp(val)


def gue_scaled(t: float, s: float, seq: OpucSequence | None = None) -> tuple[float, int]:
    """``e^{-t^2} D_n(t)`` at ``n = floor(2t + t^(1/3) s)``; returns ``(value, n)``."""
    n = int(math.floor(2 * t + t ** (1.0 / 3.0) * s))
    if seq is None or seq.n_max + 1 < n:
        seq = discrete_p2(t, max(n, 1))
    mp = seq.ctx.mp
    return float(mp.exp(seq.logD[n] - mp.mpf(t) ** 2)), n


def painleve_scaled(t: float, s: float, seq: OpucSequence | None = None) -> tuple[float, int]:
    """``t^(1/3) (-1)^(n-1) r_n`` at ``n = floor(2t + t^(1/3) s)``; returns ``(value, n)``."""
    n = int(math.floor(2 * t + t ** (1.0 / 3.0) * s))
    if seq is None or seq.n_max + 1 < n:
        seq = discrete_p2(t, max(n, 1))
    return float(t ** (1.0 / 3.0) * (-1) ** (n - 1) * seq.r[n]), n


# ---------------------------------------------------------------------------
# polynomial evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyPair:
    """``pi_n(z)``, ``pi_n^*(z)`` and optionally their derivatives."""

    n: int
    z: object
    pi: object
    pi_star: object
    dpi: object = None
    dpi_star: object = None


def pi_eval(seq: OpucSequence, n: int, z, with_derivative: bool = False) -> PolyPair:
    """Evaluate ``pi_n`` and ``pi_n^*`` by the Szego recurrences.

    Derivatives come from the closed differential relations in ``z``, which
    involve ``r_n``, ``r_{n+1}`` and powers of ``1/z``.
    """
    if not 0 <= n <= seq.n_max:
        raise DomainError(f"n={n} outside 0..{seq.n_max}")
    mp = seq.ctx.mp
    z = mp.mpmathify(z)
    if with_derivative and z == 0:
        raise DomainError("derivatives are not available at z = 0")
    p = ps = mp.mpf(1)
    for k in range(n):
        rk = seq.r[k + 1]
        p, ps = z * p + rk * ps, rk * z * p + ps
    if not with_derivative:
        return PolyPair(n, z, p, ps)
    t = mp.mpf(seq.t)
    rn, rn1 = seq.r[n], seq.r[n + 1]
    dp = (n / z + t / z ** 2 - rn1 * rn * t / z) * p + (rn1 * t / z - rn * t / z ** 2) * ps
    dps = (-rn1 * t / z + rn * t) * p + (-t + rn1 * rn * t / z) * ps
    return PolyPair(n, z, p, ps, dp, dps)


def tilde_d(seq: OpucSequence, l: int, alpha_plus: float, alpha_minus: float, log: bool = False):
    """Bordered average ``<prod (1 + a+ e^{i th})(1 + a- e^{-i th}) e^{2t cos th}>_{U(l)}``.

    Uses the Christoffel-Darboux type quotient in ``pi_l``, ``pi_l^*`` at
    ``-alpha_pm``.  When ``alpha_plus * alpha_minus`` is within ``1e-8`` of 1
    the quotient is replaced by its limit, which needs ``pi_l'``; this
    branch requires ``alpha_plus == 1/alpha_minus``.
    """
    ap, am = float(alpha_plus), float(alpha_minus)
    if ap < 0 or am < 0:
        raise DomainError("boundary rates must be non-negative")
    if l == 0:
        return seq.ctx.mpf(0) if log else seq.ctx.mpf(1)
    mp = seq.ctx.mp
    D = d_l(seq, l)
    prod = ap * am
    if abs(1 - prod) < DEGENERATE_TOL:
        if am == 0 or abs(ap - 1 / am) > 1e-12 * max(1.0, ap):
            raise IllConditionedError("alpha_plus * alpha_minus is near 1 but not an exact reciprocal pair")
        a = mp.mpf(ap)
        u = pi_eval(seq, l, -a, with_derivative=True)
        v = pi_eval(seq, l, -1 / a, with_derivative=True)
        ratio = (1 - l) * u.pi * v.pi - a * u.dpi * v.pi - u.pi * v.dpi / a
    else:
        u = pi_eval(seq, l, -mp.mpf(ap))
        v = pi_eval(seq, l, -mp.mpf(am))
        ratio = (u.pi_star * v.pi_star - mp.mpf(ap) * am * u.pi * v.pi) / (1 - mp.mpf(ap) * am)
    val = ratio * D
    return mp.log(val) if log else val


def boundary_cdf(t: float, alpha_plus: float, alpha_minus: float, l: int, with_origin: bool = False,
                 seq: OpucSequence | None = None) -> float:
    """``Pr(L <= l)`` for the Hammersley process with sources on both axes.

    ``with_origin`` includes the geometric weight at the corner (``L^+``);
    otherwise the corner is removed and
    ``Pr(L <= l) = e^{-(a+ + a-) t - t^2} (Dt_l - a+ a- Dt_{l-1})``.
    """
    t, ap, am = float(t), float(alpha_plus), float(alpha_minus)
    if ap < 0 or am < 0:
        raise DomainError("boundary rates must be non-negative")
    if ap * am >= 1:
        raise DomainError("need alpha_plus * alpha_minus < 1 (geometric corner weight diverges)")
    if not t > 0:
        raise DomainError("t must be positive")
    if l < 0:
        return 0.0
    if seq is None or seq.n_max < l:
        seq = discrete_p2(t, max(l, 1))
    mp = seq.ctx.mp
    pre = mp.exp(-(mp.mpf(ap) + am) * t - mp.mpf(t) ** 2)
    cur = tilde_d(seq, l, ap, am)
    if with_origin:
        val = (1 - mp.mpf(ap) * am) * pre * cur
    else:
        prev = tilde_d(seq, l - 1, ap, am) if l >= 1 else 0
        val = pre * (cur - mp.mpf(ap) * am * prev)
    val = float(val)
    if -1e-12 < val < 0:
        val = 0.0
    if 1 < val < 1 + 1e-12:
        val = 1.0
    return val


def crosscheck_toeplitz(seq: OpucSequence, l_max: int = 20, tol: float = 1e-8) -> float:
    """Largest ``|log D_l(recursion) - log D_l(Toeplitz)|`` for ``l <= l_max``.

    Raises
    ------
    AccuracyError
        If the discrepancy exceeds ``tol``.
    """
    from .groupavg import SpectralWeight, heine_average

    weight = SpectralWeight.exp_cos(seq.t)
    worst = 0.0
    for l in range(1, min(l_max, seq.n_max + 1) + 1):
        ref = heine_average(weight, l, log=True)
        diff = abs(float(seq.logD[l]) - ref) if math.isfinite(float(seq.logD[l])) else math.inf
        worst = max(worst, diff)
    if not worst <= tol:
        raise AccuracyError(f"recursion and Toeplitz log D_l disagree by {worst:.3g} (t={seq.t})")
    return worst
