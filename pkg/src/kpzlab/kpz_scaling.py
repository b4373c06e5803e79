"""Scaling fields of the boundary-source Hammersley process and the Baik-Rains family.

For each ``s`` the pair ``(a, b)`` solves the linear system in ``y``

    da/dy = q^2 a - (q' + y q) b,
    db/dy = (q' - y q) a + (y^2 - s - q^2) b,

started from ``a(s, 0) = -b(s, 0) = exp(-U(s))``.  The ``s``-equations
``da/ds = q b``, ``db/ds = q a - y b`` are *not* imposed and serve as an
independent check.  From the fields

    g(s, y) = a(s, -y) d_y a(s, y) - b(s, -y) d_y b(s, y)
            = int_{-inf}^s a(s', y) a(s', -y) ds',

    F~_y(s) = d/ds (g F_GUE) = a(s, y) a(s, -y) F_GUE(s) + g(s, y) F_GUE(s) int_s^inf q^2,

and ``F_y(s) = F~_y(s + y^2)`` has mean zero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import CubicSpline

from ._format import fmt, write_csv
from .errors import AccuracyError, ConventionError, DomainError, StiffnessError
from .painleve2 import DEFAULT_S_MAX, DEFAULT_S_MIN, PainleveGrid, default_grid, hastings_mcleod
from .specfun import integrate_ode

Y_LIMIT = 2.0
ROUTE_TOL = 1e-3
DENSITY_TOL = 1e-6


@dataclass
class ScalingFields:
    """``a(s, +-y)``, ``b(s, +-y)`` on the grid of a :class:`PainleveGrid`."""

    y: float
    grid: PainleveGrid
    a: np.ndarray
    b: np.ndarray
    a_neg: np.ndarray
    b_neg: np.ndarray

    @property
    def s(self) -> np.ndarray:
        return self.grid.s

    def dy(self, sign: int = 1):
        """``(d_y a, d_y b)`` at ``+y`` (``sign=1``) or ``-y`` from the right-hand side of the y-system."""
        y = sign * self.y
        a, b = (self.a, self.b) if sign > 0 else (self.a_neg, self.b_neg)
        q, dq, s = self.grid.q, self.grid.dq, self.grid.s
        da = q * q * a - (dq + y * q) * b
        db = (dq - y * q) * a + (y * y - s - q * q) * b
        return da, db


def init_fields(grid: PainleveGrid | None = None) -> ScalingFields:
    """Fields at ``y = 0``: ``a = exp(-U)``, ``b = -a``."""
    grid = grid or default_grid()
    a = np.exp(-grid.U)
    return ScalingFields(0.0, grid, a, -a, a.copy(), -a.copy())


def _evolve(grid: PainleveGrid, a0, b0, y_end, tol):
    q, dq, s = grid.q, grid.dq, grid.s
    n = len(s)

    def rhs(y, state):
        a, b = state[:n], state[n:]
        return np.concatenate([q * q * a - (dq + y * q) * b,
                               (dq - y * q) * a + (y * y - s - q * q) * b])

    traj = integrate_ode(rhs, np.concatenate([a0, b0]), (0.0, y_end), tol=tol, atol=tol * 1e-6)
    end = traj.y[:, -1]
    return end[:n], end[n:]


def _evolve_single(grid, i, a0, b0, y_end, tol):
    q, dq, s = grid.q[i], grid.dq[i], grid.s[i]

    def rhs(y, st):
        a, b = st
        return [q * q * a - (dq + y * q) * b, (dq - y * q) * a + (y * y - s - q * q) * b]

    traj = integrate_ode(rhs, [a0, b0], (0.0, y_end), tol=tol, atol=tol * 1e-6)
    return traj.y[:, -1]


def evolve_y(fields: ScalingFields, y_target: float, tol: float = 1e-11) -> ScalingFields:
    """Integrate the y-system from ``y = 0`` to ``+y_target`` and ``-y_target``.

    All grid points are advanced together as one decoupled linear system
    (the coupling is only within each ``s``).  If the joint solve fails the
    points are retried one at a time and the failing ``s`` values reported.

    Raises
    ------
    StiffnessError
        Lists the ``s`` values whose integration failed.
    """
    y_target = float(y_target)
    if abs(y_target) > Y_LIMIT:
        raise DomainError(f"|y| <= {Y_LIMIT} supported, got {y_target}")
    if tol > 1e-9:
        raise DomainError("tol must be at most 1e-9")
    if fields.y != 0:
        raise DomainError("evolve_y starts from the y = 0 fields")
    grid = fields.grid
    if y_target == 0:
        return ScalingFields(0.0, grid, fields.a.copy(), fields.b.copy(), fields.a_neg.copy(), fields.b_neg.copy())
    out = []
    for y_end in (y_target, -y_target):
        try:
            out.append(_evolve(grid, fields.a, fields.b, y_end, tol))
        except StiffnessError:
            failed, a_res, b_res = [], np.empty_like(fields.a), np.empty_like(fields.b)
            for i in range(len(grid.s)):
                try:
                    a_res[i], b_res[i] = _evolve_single(grid, i, fields.a[i], fields.b[i], y_end, tol)
                except StiffnessError:
                    failed.append(float(grid.s[i]))
            if failed:
                raise StiffnessError(f"y-integration to {y_end} failed at s = {failed}") from None
            out.append((a_res, b_res))
    (a, b), (a_neg, b_neg) = out
    return ScalingFields(y_target, grid, a, b, a_neg, b_neg)


def scaling_fields(y: float, grid: PainleveGrid | None = None, tol: float = 1e-11) -> ScalingFields:
    return evolve_y(init_fields(grid), y, tol)


@dataclass
class GFunction:
    """``g(s, y)`` by the derivative formula (primary) and the cumulative integral."""

    s: np.ndarray
    g: np.ndarray
    g_integral: np.ndarray
    max_discrepancy: float


def g_function(fields: ScalingFields, tol: float = ROUTE_TOL) -> GFunction:
    """Evaluate ``g(s, y)`` by both routes.

    Raises
    ------
    AccuracyError
        If the two routes differ by more than ``tol`` anywhere on the grid.
    """
    da, db = fields.dy(+1)
    g = fields.a_neg * da - fields.b_neg * db
    integrand = fields.a * fields.a_neg
    g_int = cumulative_simpson(integrand, x=fields.s, initial=0.0)
    # the integrand is below 1e-12 at s = -10, so the part below the grid is dropped
    disc = float(np.max(np.abs(g - g_int)))
    if disc > tol:
        raise AccuracyError(f"g(s, y={fields.y}) routes disagree by {disc:.3g}")
    return GFunction(fields.s, g, g_int, disc)


@dataclass
class BaikRainsTable:
    """``F~_y`` and ``F_y`` on the grid, with moments."""

    y: float
    s: np.ndarray
    f_tilde: np.ndarray
    f_shifted: np.ndarray
    mean_tilde: float
    mean_shifted: float
    variance_shifted: float
    g_discrepancy: float = 0.0
    extras: dict = field(default_factory=dict)

    HEADER = ("y", "s", "f_tilde", "f_shifted")

    def rows(self, step: float | None = None):
        stride = 1 if step is None else max(1, int(round(step / (self.s[1] - self.s[0]))))
        for i in range(0, len(self.s), stride):
            yield self.y, self.s[i], self.f_tilde[i], self.f_shifted[i]

    def to_csv(self, dest=None, step: float | None = None) -> str:
        return write_csv(self.HEADER, self.rows(step), dest)

    def moments(self) -> dict:
        return {"y": self.y, "mean_tilde": self.mean_tilde, "mean_shifted": self.mean_shifted,
                "variance_shifted": self.variance_shifted}

    def moments_json(self) -> str:
        # 12 significant digits, like the CSV output
        return json.dumps({k: float(fmt(v)) for k, v in self.moments().items()})


def _cdf_moments(s, F):
    """Mean and variance of the law with CDF ``F`` on ``[s[0], s[-1]]`` via integration by parts."""
    lo, hi = s[0], s[-1]
    m1 = hi * F[-1] - lo * F[0] - simpson(F, x=s)
    m2 = hi * hi * F[-1] - lo * lo * F[0] - 2 * simpson(s * F, x=s)
    return m1, m2 - m1 * m1


def baik_rains(fields: ScalingFields, grid: PainleveGrid | None = None, check: bool = True) -> BaikRainsTable:
    """Tabulate ``F~_y`` (product-rule form) and the shifted ``F_y``.

    Raises
    ------
    ConventionError
        If a numerical density of ``F~_y`` is below ``-1e-6``.
    """
    grid = grid or fields.grid
    gf = g_function(fields)
    F = grid.f_gue()
    ft = fields.a * fields.a_neg * F + gf.g * F * grid.W
    s = grid.s
    if check:
        dens = np.diff(ft)
        if np.min(dens) < -DENSITY_TOL:
            raise ConventionError(f"F~_y decreases by {-np.min(dens):.3g} (y={fields.y})")
        if np.min(ft) < -DENSITY_TOL or np.max(ft) > 1 + DENSITY_TOL:
            raise ConventionError("F~_y leaves [0, 1]")
    y2 = fields.y ** 2
    spline = CubicSpline(s, ft)
    shifted = np.where(s + y2 <= s[-1], spline(np.minimum(s + y2, s[-1])), 1.0)
    mean_t, var_t = _cdf_moments(s, ft)
    return BaikRainsTable(fields.y, s, ft, shifted, float(mean_t), float(mean_t - y2), float(var_t),
                          g_discrepancy=gf.max_discrepancy)


def baik_rains_table(y: float, grid: PainleveGrid | None = None) -> BaikRainsTable:
    """Fields at ``y`` and the resulting table.

    Without an explicit grid the default one is used for ``|y| <= 1``; for
    larger ``|y|`` the law of ``F~_y`` is centred at ``y^2`` and the upper
    end of the grid is moved out to ``10 + 2 y^2`` so the tail is captured.
    """
    if grid is None:
        grid = default_grid() if abs(y) <= 1 else hastings_mcleod(DEFAULT_S_MIN, DEFAULT_S_MAX + math.ceil(2 * y * y))
    fields = scaling_fields(y, grid)
    return baik_rains(fields)


def reflection_residual(fields: ScalingFields) -> np.ndarray:
    """Relative residual of ``a(s, y) = -b(s, -y) exp(y^3/3 - s y)`` on the grid."""
    y, s = fields.y, fields.s
    rhs = -fields.b_neg * np.exp(y ** 3 / 3 - s * y)
    return np.abs(fields.a - rhs) / np.maximum(np.abs(rhs), 1e-300)


def s_equation_residual(fields: ScalingFields) -> float:
    """Max of ``|da/ds - q b|`` using fourth-order central differences."""
    a, h = fields.a, fields.grid.step
    da = (-a[4:] + 8 * a[3:-1] - 8 * a[1:-3] + a[:-4]) / (12 * h)
    return float(np.max(np.abs(da - fields.grid.q[2:-2] * fields.b[2:-2])))


def integrand_identity(fields: ScalingFields) -> float:
    """Max of ``|a(s, y) a(s, -y) - b(s, y) b(s, -y)|`` on the grid."""
    return float(np.max(np.abs(fields.a * fields.a_neg - fields.b * fields.b_neg)))


def product_rule_discrepancy(fields: ScalingFields, table: BaikRainsTable) -> float:
    """Max of ``|F~_y - d/ds (g F_GUE)|`` with the derivative taken by fourth-order differences."""
    G = g_function(fields).g * fields.grid.f_gue()
    h = fields.grid.step
    dG = (-G[4:] + 8 * G[3:-1] - 8 * G[1:-3] + G[:-4]) / (12 * h)
    return float(np.max(np.abs(dG - table.f_tilde[2:-2])))


def b_tail_error(fields: ScalingFields, s: float = 8.0) -> float:
    """Relative error of ``b(s, y) ~ -exp(y^3/3 - y s)`` at the grid point nearest ``s``.

    Once ``q`` has decayed the y-system reduces to ``db/dy = (y^2 - s) b``,
    so the ``y``-dependent constant ``exp(y^3/3)`` is part of the tail.
    """
    i = int(np.argmin(np.abs(fields.s - s)))
    y = fields.y
    ref = -np.exp(y ** 3 / 3 - y * fields.s[i])
    return float(abs(fields.b[i] - ref) / abs(ref))
