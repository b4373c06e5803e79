"""Hastings-McLeod solution of Painleve II and the Tracy-Widom distributions.

``q'' = s q + 2 q^3`` with ``q(s) ~ -Ai(s)`` as ``s -> +inf``.  The solution
is obtained by shooting backwards from an Airy seed.  Backward integration
of this connection problem amplifies errors by about ``1e15`` between
``s = 8`` and ``s = -10``, so the primary solver is a fixed-step Taylor
series method in multiprecision; the adaptive double precision Runge-Kutta
solver is kept as an independent second method for the range where it is
accurate.

Along with ``q`` the integrator carries

    U(s) = -int_s^inf q,     W(s) = int_s^inf q^2,     V(s) = int_s^inf (t - s) q^2 dt,

so that ``U' = q``, ``W' = -q^2`` and ``V' = -W``.  Their values at the seed
come from closed forms for the Airy tail.  Then

    F_GUE = exp(-V),   F_GOE = sqrt(F_GUE) exp(-U/2),   F_GSE = sqrt(F_GUE) cosh(U/2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import airy

from .errors import AccuracyError, BlowUpError, ConventionError, DomainError, RangeError
from .specfun import PrecisionContext, airy_ai, airy_ai_mp, integrate_ode

DEFAULT_S_MIN = -10.0
DEFAULT_S_MAX = 10.0
DEFAULT_STEP = 0.01
TAYLOR_SEED = 12.0
TAYLOR_STEP = 0.05
TAYLOR_ORDER = 30
TAYLOR_BITS = 160
RK_SEED = 8.0


def airy_tail_integrals(x, mp):
    """``(int_x^inf Ai, int_x^inf Ai^2, int_x^inf (t - x) Ai(t)^2 dt)`` in multiprecision."""
    x = mp.mpf(x)
    a, ap = mp.airyai(x), mp.airyai(x, derivative=1)
    int_ai = mp.quad(mp.airyai, [x, mp.inf])
    w = ap * ap - x * a * a
    v = (2 * x * x * a * a - 2 * x * ap * ap - a * ap) / 3
    return int_ai, w, v


@dataclass(frozen=True)
class PainleveGrid:
    """Hastings-McLeod solution sampled on a uniform grid.

    Attributes
    ----------
    s, q, dq, U, W, V : ndarray
        Grid and sampled functions (see module docstring).
    settings : dict
        Solver provenance.
    """

    s: np.ndarray
    q: np.ndarray
    dq: np.ndarray
    U: np.ndarray
    W: np.ndarray
    V: np.ndarray
    settings: dict = field(default_factory=dict)

    @property
    def s_min(self) -> float:
        return float(self.s[0])

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    @cached_property
    def _splines(self):
        s, q = self.s, self.q
        ddq = s * q + 2 * q ** 3
        return {
            "q": CubicHermiteSpline(s, q, self.dq),
            "dq": CubicHermiteSpline(s, self.dq, ddq),
            "U": CubicHermiteSpline(s, self.U, q),
            "W": CubicHermiteSpline(s, self.W, -q * q),
            "V": CubicHermiteSpline(s, self.V, -self.W),
        }

    def _check(self, s):
        arr = np.asarray(s, dtype=float)
        if np.any(arr < self.s_min - 1e-12) or np.any(arr > self.s_max + 1e-12):
            raise RangeError(f"s outside the grid range [{self.s_min}, {self.s_max}]")
        return arr

    def interp(self, name: str, s):
        """Cubic Hermite interpolation (exact derivative data) of ``q, dq, U, W, V``."""
        arr = self._check(s)
        out = self._splines[name](arr)
        return float(out) if np.ndim(out) == 0 else out

    def residual(self) -> np.ndarray:
        """ODE residual ``q'' - s q - 2 q^3`` from fourth-order central differences."""
        q, h = self.q, self.step
        d2 = (-q[4:] + 16 * q[3:-1] - 30 * q[2:-2] + 16 * q[1:-3] - q[:-4]) / (12 * h * h)
        s = self.s[2:-2]
        return d2 - s * q[2:-2] - 2 * q[2:-2] ** 3

    def f_gue(self, s=None):
        if s is None:
            return np.exp(-self.V)
        return np.exp(-self.interp("V", s))

    def f_goe_gse(self, s=None):
        if s is None:
            V, U = self.V, self.U
        else:
            V, U = self.interp("V", s), self.interp("U", s)
        root = np.exp(-0.5 * V)
        return root * np.exp(-0.5 * U), root * np.cosh(0.5 * U)

    def dgue_ds(self, s):
        """Analytic density ``F_GUE(s) * int_s^inf q^2``."""
        return self.f_gue(s) * self.interp("W", s)


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------

def _exact(x, mp):
    frac = Fraction(repr(float(x)))
    return mp.mpf(frac.numerator) / frac.denominator


def _taylor_solve(s_min, s_max, step, seed, taylor_step, order, bits):
    ctx = PrecisionContext(bits)
    mp = ctx.mp
    sub = int(round(taylor_step / step))
    if sub < 1 or abs(sub * step - taylor_step) > 1e-12:
        raise DomainError("taylor_step must be a positive multiple of the grid step")
    n_total = int(round((seed - s_min) / step))
    if abs(n_total * step - (seed - s_min)) > 1e-9:
        raise DomainError("seed - s_min must be a multiple of the grid step")
    n_grid = int(round((s_max - s_min) / step)) + 1
    # decimal grid parameters are made exact: an s-offset of one ulp would be
    # amplified by the backward instability just like an error in q
    h = _exact(step, mp)
    seed_mp = _exact(seed, mp)
    ai, aip = airy_ai_mp(seed_mp, ctx)
    int_ai, w0, v0 = airy_tail_integrals(seed_mp, mp)
    # state at the current node: q, p = q', U, W, V
    q, p, U, W, V = -ai, -aip, int_ai, w0, v0
    out = np.empty((5, n_grid))
    idx_top = n_total  # index of the seed counted from s_min in grid steps

    def store(i, vals):
        if 0 <= i < n_grid:
            out[:, i] = [float(v) for v in vals]

    store(idx_top, (q, p, U, W, V))
    i = idx_top
    while i > 0:
        s0 = seed_mp - (idx_top - i) * h
        c = [q, p]
        q2 = []
        q3 = []
        for k in range(order - 1):
            q2.append(mp.fsum(c[j] * c[k - j] for j in range(k + 1)))
            q3.append(mp.fsum(q2[j] * c[k - j] for j in range(k + 1)))
            prev = c[k - 1] if k >= 1 else 0
            c.append((s0 * c[k] + prev + 2 * q3[k]) / ((k + 1) * (k + 2)))
        for k in range(order - 1, order + 1):
            q2.append(mp.fsum(c[j] * c[k - j] for j in range(k + 1)))
        cu = [U] + [c[k] / (k + 1) for k in range(order)]
        cw = [W] + [-q2[k] / (k + 1) for k in range(order)]
        cv = [V] + [-cw[k] / (k + 1) for k in range(order)]
        nsteps = min(sub, i)
        for j in range(1, nsteps + 1):
            x = -j * h
            qv = mp.polyval(c[::-1], x)
            pv = mp.polyval([k * c[k] for k in range(len(c) - 1, 0, -1)], x)
            uv = mp.polyval(cu[::-1], x)
            wv = mp.polyval(cw[::-1], x)
            vv = mp.polyval(cv[::-1], x)
            store(i - j, (qv, pv, uv, wv, vv))
            if not mp.isfinite(qv) or qv >= 0:
                raise BlowUpError(f"solution left the Hastings-McLeod branch near s={float(s0 + x):.4g}",
                                  last_valid=float(s0 + x + h))
        q, p, U, W, V = qv, pv, uv, wv, vv
        i -= nsteps
    return out


def _rk_solve(s_min, s_max, step, seed, tol):
    a, ap = airy_ai(seed)
    from .specfun import _mp_context
    int_ai, w0, v0 = (float(v) for v in airy_tail_integrals(seed, _mp_context(80)))
    n_grid = int(round((s_max - s_min) / step)) + 1
    grid = s_min + step * np.arange(n_grid)

    def rhs(s, y):
        q, p, U, W, V = y
        return [p, s * q + 2 * q ** 3, q, -q * q, -W]

    if seed < s_max:
        raise DomainError("RK seed must not lie below s_max")
    y0 = [-a, -ap, int_ai, w0, v0]
    traj = integrate_ode(rhs, y0, (seed, s_min), tol=tol, atol=1e-30, dense=True)
    out = np.asarray(traj(grid[grid <= seed]))
    if not np.all(np.isfinite(out)) or np.any(out[0] >= 0):
        bad = grid[grid <= seed][~(np.isfinite(out[0]) & (out[0] < 0))]
        raise BlowUpError("RK solution left the Hastings-McLeod branch", last_valid=float(bad.max()) + step)
    return out


def hastings_mcleod(s_min: float = DEFAULT_S_MIN, s_max: float = DEFAULT_S_MAX, tol: float = 1e-12, *,
                    step: float = DEFAULT_STEP, method: str = "taylor", seed: float | None = None,
                    taylor_step: float = TAYLOR_STEP, order: int = TAYLOR_ORDER,
                    bits: int = TAYLOR_BITS) -> PainleveGrid:
    """Sample the Hastings-McLeod solution and its integrals on ``[s_min, s_max]``.

    Parameters
    ----------
    method : {"taylor", "rk"}
        ``"taylor"``: order-``order`` Taylor steps of size ``taylor_step`` in
        ``bits``-bit arithmetic, seeded at ``s = 12``.  ``"rk"``: adaptive
        DOP853 at tolerance ``tol`` in double precision, seeded at ``s = 8``
        with the double precision Airy routine; reliable only down to about
        ``s = -6``.

    Raises
    ------
    BlowUpError
        If the trajectory leaves the branch (``q >= 0`` or non-finite).
    """
    if s_max < 8:
        raise DomainError("s_max must be at least 8 (Airy seeding regime)")
    if tol > 1e-9:
        raise DomainError("tol must be at most 1e-9")
    if s_min >= s_max:
        raise DomainError("need s_min < s_max")
    if method == "taylor":
        seed = TAYLOR_SEED if seed is None else float(seed)
        seed = max(seed, s_max)
        data = _taylor_solve(s_min, s_max, step, seed, taylor_step, order, bits)
        settings = dict(method="taylor", seed=seed, taylor_step=taylor_step, order=order, bits=bits)
    elif method == "rk":
        seed = RK_SEED if seed is None else float(seed)
        seed = max(seed, s_max)
        data = _rk_solve(s_min, s_max, step, seed, tol)
        settings = dict(method="rk", seed=seed, tol=tol)
    else:
        raise DomainError(f"unknown method {method!r}")
    n_grid = data.shape[1]
    s = s_min + step * np.arange(n_grid)
    settings.update(s_min=s_min, s_max=s_max, step=step)
    grid = PainleveGrid(s, *data, settings=settings)
    return grid


_DEFAULT_GRID = None


def default_grid() -> PainleveGrid:
    """The module-wide grid on [-10, 10] with step 0.01 (computed once)."""
    global _DEFAULT_GRID
    if _DEFAULT_GRID is None:
        _DEFAULT_GRID = hastings_mcleod()
    return _DEFAULT_GRID


def f_gue(grid: PainleveGrid, s):
    """``F_GUE(s) = exp(-int_s^inf (t - s) q(t)^2 dt)``."""
    return grid.f_gue(s)


def f_goe_gse(grid: PainleveGrid, s):
    """``(F_GOE(s), F_GSE(s))`` from ``V`` and ``U = -int_s^inf q``."""
    return grid.f_goe_gse(s)


def check_convention(grid: PainleveGrid, density_tol: float = 1e-9, tail_tol: float = 1e-6,
                     goe_order_from: float = -3.0) -> dict:
    """Verify that the three distributions are valid CDFs on the grid.

    Checks range, monotonicity (no decrease beyond ``density_tol`` between
    neighbours), the right tail, ``F_GSE >= F_GUE`` everywhere and
    ``F_GUE >= F_GOE`` for ``s >= goe_order_from``.  The latter order is
    reversed in the far left tail, where ``F_GOE`` decays like
    ``exp(-|s|^3/24)`` and ``F_GUE`` like ``exp(-|s|^3/12)``.

    Raises
    ------
    ConventionError
    """
    gue = grid.f_gue()
    goe, gse = grid.f_goe_gse()
    report = {}
    for name, F in (("gue", gue), ("goe", goe), ("gse", gse)):
        if np.any(F < -density_tol) or np.any(F > 1 + density_tol):
            raise ConventionError(f"F_{name.upper()} leaves [0, 1]")
        drop = float(np.min(np.diff(F)))
        if drop < -density_tol:
            raise ConventionError(f"F_{name.upper()} decreases by {-drop:.3g}")
        if 1 - F[-1] > tail_tol:
            raise ConventionError(f"F_{name.upper()}(s_max) = {F[-1]} is not within {tail_tol} of 1")
        report[name] = dict(min_increment=drop, tail_gap=float(1 - F[-1]))
    if np.any(gse < gue - density_tol):
        raise ConventionError("F_GSE < F_GUE somewhere on the grid")
    mask = grid.s >= goe_order_from
    if np.any(goe[mask] > gue[mask] + density_tol):
        raise ConventionError("F_GOE > F_GUE on the right of the crossing region")
    cross = grid.s[goe > gue + density_tol]
    report["goe_above_gue_max_s"] = float(cross.max()) if cross.size else None
    return report


# ---------------------------------------------------------------------------
# Fredholm determinant oracle
# ---------------------------------------------------------------------------

FREDHOLM_RANGE = (-8.0, 6.0)


def _airy_kernel_det(s: float, m: int) -> float:
    u, w = np.polynomial.legendre.leggauss(m)
    # map (-1, 1) onto (s, inf)
    phi = np.pi * (u + 1) / 4
    x = s + 10.0 * np.tan(phi)
    wx = w * 10.0 * (np.pi / 4) / np.cos(phi) ** 2
    ai, aip, _, _ = airy(x)
    dx = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        K = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / dx
    diag = aip ** 2 - x * ai ** 2
    K[np.diag_indices(m)] = diag
    sw = np.sqrt(wx)
    A = np.eye(m) - sw[:, None] * K * sw[None, :]
    return float(np.linalg.det(A))


def fredholm_oracle(s: float, nodes: int = 60, tol: float = 1e-8, max_nodes: int = 480) -> float:
    """``det(I - K_Ai)`` on ``L^2(s, inf)`` by Gauss-Legendre Nystrom discretization.

    The half line is mapped to ``(-1, 1)`` by ``x = s + 10 tan(pi (u + 1) / 4)``.
    The node count is doubled until two successive values agree to ``tol``.
    """
    s = float(s)
    if not FREDHOLM_RANGE[0] <= s <= FREDHOLM_RANGE[1]:
        raise RangeError(f"fredholm_oracle supports {FREDHOLM_RANGE[0]} <= s <= {FREDHOLM_RANGE[1]}")
    m = int(nodes)
    cur = _airy_kernel_det(s, m)
    while True:
        nxt = _airy_kernel_det(s, 2 * m)
        if abs(nxt - cur) <= tol:
            return nxt
        m *= 2
        cur = nxt
        if m > max_nodes:
            raise AccuracyError(f"Fredholm determinant at s={s} not converged with {m} nodes")
