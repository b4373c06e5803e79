"""Simulators for the Poisson Hammersley family, PNG droplet growth and geometric last passage.

Randomness comes from counter-based Philox streams.  Trials are grouped in
blocks of :data:`BLOCK`; block ``k`` of a run with master seed ``seed`` is
drawn from a generator keyed by ``(seed, k)`` only, so a trial's value does
not depend on the total trial count, the worker count or the order in which
blocks are evaluated.

Chains are up/right: a point ``(x2, y2)`` may follow ``(x1, y1)`` when
``x2 > x1`` and ``y2 > y1`` (strict) or ``x2 >= x1`` and ``y2 >= y1`` (weak,
used for points on the axes of the boundary model).  Configurations are sorted
by ``(x, y)`` before the LIS of the ``y`` sequence is taken, so points sharing
an ``x`` coordinate are ordered by ``y``.
"""
from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from ._format import write_csv
from .combinat import SymmetryClass
from .errors import DomainError

BLOCK = 1024
MAX_PNG_TIME = 40.0


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Philox generator keyed by ``(seed, block)``."""
    if seed < 0 or block < 0:
        raise DomainError("seed and block index must be non-negative")
    return np.random.Generator(np.random.Philox(key=[seed & (2**64 - 1), block]))


# ---------------------------------------------------------------------------
# point configurations
# ---------------------------------------------------------------------------

@dataclass
class PointConfig:
    """Points of one configuration, with the number of points placed on symmetry axes."""

    x: np.ndarray
    y: np.ndarray
    cls: SymmetryClass = SymmetryClass.PLAIN
    on_diagonal: int = 0
    on_antidiagonal: int = 0
    weak: bool = False
    origin: int = 0

    def __len__(self) -> int:
        return len(self.x)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    def is_closed(self, atol: float = 0.0) -> bool:
        """True when the point set is invariant under the symmetries of its class."""
        pts = self.points
        images = {
            SymmetryClass.PLAIN: [],
            SymmetryClass.DIAG: [pts[:, ::-1]],
            SymmetryClass.ANTIDIAG: [1 - pts[:, ::-1]],
            SymmetryClass.CENTRAL: [1 - pts],
            SymmetryClass.BOTHDIAGS: [pts[:, ::-1], 1 - pts[:, ::-1], 1 - pts],
        }[self.cls]
        key = np.lexsort(pts.T[::-1])
        ref = pts[key]
        for img in images:
            img = img[np.lexsort(img.T[::-1])]
            if img.shape != ref.shape or not np.allclose(img, ref, rtol=0, atol=atol):
                return False
        return True


def _uniform_pairs(rng, n):
    return rng.random(n), rng.random(n)


def _below_diagonal(rng, n):
    u, v = _uniform_pairs(rng, n)
    return np.maximum(u, v), np.minimum(u, v)


def _below_antidiagonal(rng, n):
    # (x, y) with x + y < 1
    x, y = _below_diagonal(rng, n)
    return 1 - x, y


def _bottom_quarter(rng, n):
    # below both diagonals: y < x and x + y < 1
    x, y = _below_diagonal(rng, n)
    flip = x + y > 1
    return np.where(flip, 1 - y, x), np.where(flip, 1 - x, y)


def sample_points(rate: float, cls: SymmetryClass | str = SymmetryClass.PLAIN, alpha: float = 0.0,
                  beta: float = 0.0, seed: int | None = None, rng: np.random.Generator | None = None) -> PointConfig:
    """Sample one Poisson configuration in the unit square.

    Parameters
    ----------
    rate : float
        ``lambda`` for PLAIN, ``z`` for the symmetrized classes.
    cls : SymmetryClass
        PLAIN: Poisson(lambda^2) uniform points.  DIAG: Poisson(z^2/2) points
        below the diagonal with their mirror images and Poisson(alpha z)
        points on the diagonal.  ANTIDIAG: the same about the anti-diagonal
        with rate beta.  BOTHDIAGS: Poisson(z^2) points below both diagonals
        with their three images, Poisson(alpha z) points on the lower half of
        the diagonal and Poisson(beta z) on the lower half of the
        anti-diagonal, each with its image.  CENTRAL: Poisson(2 z^2) points
        in the left half with their images through the centre.
    seed, rng
        Either a seed (block 0 of that seed is used) or a generator.
    """
    cls = SymmetryClass.parse(cls)
    if rate < 0 or alpha < 0 or beta < 0:
        raise DomainError("rates must be non-negative")
    if rng is None:
        rng = block_rng(0 if seed is None else int(seed), 0)
    z = float(rate)
    n_diag = n_anti = 0
    if cls is SymmetryClass.PLAIN:
        x, y = _uniform_pairs(rng, rng.poisson(z * z))
    elif cls is SymmetryClass.DIAG:
        bx, by = _below_diagonal(rng, rng.poisson(z * z / 2))
        n_diag = rng.poisson(alpha * z)
        d = rng.random(n_diag)
        x, y = np.concatenate([bx, by, d]), np.concatenate([by, bx, d])
    elif cls is SymmetryClass.ANTIDIAG:
        bx, by = _below_antidiagonal(rng, rng.poisson(z * z / 2))
        n_anti = rng.poisson(beta * z)
        d = rng.random(n_anti)
        x, y = np.concatenate([bx, 1 - by, d]), np.concatenate([by, 1 - bx, 1 - d])
    elif cls is SymmetryClass.CENTRAL:
        bx = rng.random(rng.poisson(2 * z * z)) / 2
        by = rng.random(len(bx))
        x, y = np.concatenate([bx, 1 - bx]), np.concatenate([by, 1 - by])
    else:
        bx, by = _bottom_quarter(rng, rng.poisson(z * z))
        m_plus = rng.poisson(alpha * z)
        m_minus = rng.poisson(beta * z)
        d = rng.random(m_plus) / 2
        a = rng.random(m_minus) / 2
        x = np.concatenate([bx, by, 1 - by, 1 - bx, d, 1 - d, a, 1 - a])
        y = np.concatenate([by, bx, 1 - bx, 1 - by, d, 1 - d, 1 - a, a])
        n_diag, n_anti = 2 * m_plus, 2 * m_minus
    return PointConfig(np.asarray(x, dtype=float), np.asarray(y, dtype=float), cls, n_diag, n_anti)


def sample_boundary_config(t: float, alpha_plus: float, alpha_minus: float, with_origin: bool = False,
                           seed: int | None = None, rng: np.random.Generator | None = None) -> PointConfig:
    """Bulk Poisson(t^2) points, Poisson(alpha_+ t) on ``x = 0``, Poisson(alpha_- t) on ``y = 0``.

    With ``with_origin`` the origin carries a geometric weight with
    ``Pr(chi = k) = (1 - q) q^k``, ``q = alpha_+ alpha_-``.
    """
    _check_boundary(t, alpha_plus, alpha_minus)
    if rng is None:
        rng = block_rng(0 if seed is None else int(seed), 0)
    bx, by = _uniform_pairs(rng, rng.poisson(t * t))
    up = rng.random(rng.poisson(alpha_plus * t))
    right = rng.random(rng.poisson(alpha_minus * t))
    chi = int(rng.geometric(1 - alpha_plus * alpha_minus) - 1) if with_origin else 0
    x = np.concatenate([bx, np.zeros(len(up)), right])
    y = np.concatenate([by, up, np.zeros(len(right))])
    return PointConfig(x, y, SymmetryClass.PLAIN, weak=True, origin=chi)


def _check_boundary(t, ap, am):
    if t < 0 or ap < 0 or am < 0:
        raise DomainError("t and the boundary rates must be non-negative")
    if ap * am >= 1:
        raise DomainError(f"need alpha_+ alpha_- < 1, got {ap * am}")


def lis_of_config(cfg: PointConfig) -> int:
    """Longest up/right chain of the configuration (plus the origin weight, if any)."""
    if len(cfg) == 0:
        return cfg.origin
    order = np.lexsort((cfg.y, cfg.x))
    return kernels.lis_length(cfg.y[order], cfg.weak) + cfg.origin


# ---------------------------------------------------------------------------
# vectorized block samplers: each returns the observable for BLOCK trials
# ---------------------------------------------------------------------------

def _segments(trial, x, y, weak):
    order = np.lexsort((y, x, trial))
    counts = np.bincount(trial, minlength=BLOCK)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    return kernels.lis_segments(y[order], offsets, weak)


def _block_hammersley(rng, rate, cls, alpha, beta):
    cls = SymmetryClass.parse(cls)
    z = rate

    def pois(mean):
        n = rng.poisson(mean, BLOCK)
        return n, np.repeat(np.arange(BLOCK), n)

    if cls is SymmetryClass.PLAIN:
        _, tr = pois(z * z)
        x, y = _uniform_pairs(rng, len(tr))
        return _segments(tr, x, y, False)
    if cls is SymmetryClass.DIAG:
        _, tb = pois(z * z / 2)
        bx, by = _below_diagonal(rng, len(tb))
        _, td = pois(alpha * z)
        d = rng.random(len(td))
        return _segments(np.concatenate([tb, tb, td]), np.concatenate([bx, by, d]), np.concatenate([by, bx, d]), False)
    if cls is SymmetryClass.ANTIDIAG:
        _, tb = pois(z * z / 2)
        bx, by = _below_antidiagonal(rng, len(tb))
        _, td = pois(beta * z)
        d = rng.random(len(td))
        return _segments(np.concatenate([tb, tb, td]), np.concatenate([bx, 1 - by, d]),
                         np.concatenate([by, 1 - bx, 1 - d]), False)
    if cls is SymmetryClass.CENTRAL:
        _, tb = pois(2 * z * z)
        bx = rng.random(len(tb)) / 2
        by = rng.random(len(tb))
        return _segments(np.concatenate([tb, tb]), np.concatenate([bx, 1 - bx]), np.concatenate([by, 1 - by]), False)
    _, tb = pois(z * z)
    bx, by = _bottom_quarter(rng, len(tb))
    _, tp = pois(alpha * z)
    _, tm = pois(beta * z)
    d = rng.random(len(tp)) / 2
    a = rng.random(len(tm)) / 2
    trial = np.concatenate([tb, tb, tb, tb, tp, tp, tm, tm])
    x = np.concatenate([bx, by, 1 - by, 1 - bx, d, 1 - d, a, 1 - a])
    y = np.concatenate([by, bx, 1 - bx, 1 - by, d, 1 - d, 1 - a, a])
    return _segments(trial, x, y, False)


def _block_boundary(rng, t, ap, am, with_origin):
    nb = rng.poisson(t * t, BLOCK)
    tb = np.repeat(np.arange(BLOCK), nb)
    bx, by = _uniform_pairs(rng, len(tb))
    nu = rng.poisson(ap * t, BLOCK)
    tu = np.repeat(np.arange(BLOCK), nu)
    up = rng.random(len(tu))
    nr = rng.poisson(am * t, BLOCK)
    tr = np.repeat(np.arange(BLOCK), nr)
    right = rng.random(len(tr))
    chi = rng.geometric(1 - ap * am, BLOCK) - 1
    trial = np.concatenate([tb, tu, tr])
    x = np.concatenate([bx, np.zeros(len(tu)), right])
    y = np.concatenate([by, up, np.zeros(len(tr))])
    lis = _segments(trial, x, y, True)
    return lis + chi if with_origin else lis


def _block_johansson(rng, a, b):
    p = np.outer(a, b)
    x = rng.geometric(1 - p, size=(BLOCK,) + p.shape) - 1
    return kernels.last_passage_batch(x)


def _block_png(rng, T):
    return np.array([png_height(T, rng=rng) for _ in range(BLOCK)], dtype=np.int64)


_BLOCK_SAMPLERS = {
    "hammersley": _block_hammersley,
    "boundary": _block_boundary,
    "johansson": _block_johansson,
    "png": _block_png,
}


def _run_block(args):
    kind, seed, block, params = args
    return _BLOCK_SAMPLERS[kind](block_rng(seed, block), *params)


# ---------------------------------------------------------------------------
# batches
# ---------------------------------------------------------------------------

@dataclass
class TrialBatch:
    """Observable values of ``trials`` independent trials under one master seed."""

    seed: int
    kind: str
    params: dict
    values: np.ndarray
    seeds: tuple = field(default=())

    HEADER = ("seed", "trial", "observable")

    def __post_init__(self):
        if not self.seeds:
            self.seeds = (self.seed,)

    @property
    def trials(self) -> int:
        return len(self.values)

    def rows(self):
        for i, v in enumerate(self.values):
            yield self.seed, i, int(v)

    def to_csv(self, dest=None) -> str:
        return write_csv(self.HEADER, self.rows(), dest)

    def merge(self, other: "TrialBatch") -> "TrialBatch":
        """Pool two batches of the same experiment drawn under different seeds.

        Raises
        ------
        DomainError
            If the batches share a seed (their values would be duplicates) or
            describe different experiments.
        """
        if set(self.seeds) & set(other.seeds):
            raise DomainError(f"batches share seeds {sorted(set(self.seeds) & set(other.seeds))}")
        if self.kind != other.kind or self.params != other.params:
            raise DomainError("batches come from different experiments")
        return TrialBatch(self.seed, self.kind, self.params, np.concatenate([self.values, other.values]),
                          self.seeds + other.seeds)


def run_trials(kind: str, params: tuple, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Evaluate ``trials`` trials block by block; the result is independent of ``workers``."""
    if trials < 0:
        raise DomainError("trials must be non-negative")
    if seed < 0:
        raise DomainError("seed must be non-negative")
    nblocks = -(-trials // BLOCK)
    jobs = [(kind, int(seed), k, params) for k in range(nblocks)]
    if workers > 1 and nblocks > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_block, jobs))
    else:
        parts = [_run_block(j) for j in jobs]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)[:trials].astype(np.int64)


def simulate_hammersley(rate: float, trials: int, seed: int, cls: SymmetryClass | str = SymmetryClass.PLAIN,
                        alpha: float = 0.0, beta: float = 0.0, workers: int = 1) -> TrialBatch:
    """LIS of ``trials`` Poisson configurations of the given symmetry class."""
    cls = SymmetryClass.parse(cls)
    if rate < 0 or alpha < 0 or beta < 0:
        raise DomainError("rates must be non-negative")
    values = run_trials("hammersley", (float(rate), cls, float(alpha), float(beta)), trials, seed, workers)
    return TrialBatch(seed, "hammersley", {"rate": rate, "class": cls.name, "alpha": alpha, "beta": beta}, values)


def sample_boundary(t: float, alpha_plus: float, alpha_minus: float, with_origin: bool = False, *,
                    trials: int = 1, seed: int = 0, workers: int = 1) -> TrialBatch:
    """Longest weak chain ``L`` (or ``L + chi`` with the origin) of the boundary-source model."""
    _check_boundary(t, alpha_plus, alpha_minus)
    values = run_trials("boundary", (float(t), float(alpha_plus), float(alpha_minus), bool(with_origin)),
                        trials, seed, workers)
    return TrialBatch(seed, "boundary", {"t": t, "alpha_plus": alpha_plus, "alpha_minus": alpha_minus,
                                         "with_origin": with_origin}, values)


def _check_johansson(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape or len(a) == 0:
        raise DomainError("a and b must be equal-length non-empty vectors")
    p = np.outer(a, b)
    if np.any(a < 0) or np.any(b < 0) or np.any(p >= 1):
        raise DomainError("need a_i, b_j >= 0 and a_i b_j < 1")
    return a, b


def johansson_lpp(a, b, seed: int | None = None, rng: np.random.Generator | None = None):
    """Sample ``x_{ij}`` with ``Pr(x = k) = (1 - a_i b_j)(a_i b_j)^k`` on the grid ``0..n`` and return ``(X, L(n, n))``.

    ``a`` and ``b`` have length ``n + 1``.
    """
    a, b = _check_johansson(a, b)
    if rng is None:
        rng = block_rng(0 if seed is None else int(seed), 0)
    x = rng.geometric(1 - np.outer(a, b)) - 1
    return x.astype(np.int64), kernels.last_passage(x)


def simulate_johansson(a, b, trials: int, seed: int, workers: int = 1) -> TrialBatch:
    a, b = _check_johansson(a, b)
    values = run_trials("johansson", (a, b), trials, seed, workers)
    return TrialBatch(seed, "johansson", {"a": tuple(a), "b": tuple(b)}, values)


# ---------------------------------------------------------------------------
# PNG droplet
# ---------------------------------------------------------------------------

def png_nucleations(T: float, rng: np.random.Generator) -> np.ndarray:
    """Unit-intensity nucleation events ``(x, t)`` in the droplet region ``|x| < t < T - |x|``.

    The region is the square ``0 < t + x, t - x < T`` of area ``T^2 / 2``.
    """
    n = rng.poisson(T * T / 2)
    u, v = rng.random(n) * T, rng.random(n) * T
    return np.column_stack([(u - v) / 2, (u + v) / 2])


def png_evolve(events, T: float):
    """Event-driven PNG: returns the step positions ``(position, direction)`` at time ``T``.

    A nucleation at ``(x, t)`` creates an up-step moving left and a
    down-step moving right.  A down-step that meets an up-step coming from
    the right annihilates with it.  Collisions are taken from a heap of
    candidate times between neighbouring steps; stale entries are skipped.
    """
    if T < 0 or T > MAX_PNG_TIME:
        raise DomainError(f"PNG time must lie in [0, {MAX_PNG_TIME}]")
    events = sorted(map(tuple, np.asarray(events, dtype=float).reshape(-1, 2)), key=lambda e: e[1])
    # each step: [x0, t0, direction, alive]; position at time s is x0 + direction (s - t0)
    steps: list[list] = []
    order: list[int] = []  # step ids sorted by current position
    heap: list = []

    def pos(k, s):
        x0, t0, d, _ = steps[k]
        return x0 + d * (s - t0)

    def push(i, now):
        # neighbours order[i] (down, moving right) and order[i + 1] (up, moving left)
        if i < 0 or i + 1 >= len(order):
            return
        a, b = order[i], order[i + 1]
        if steps[a][2] == 1 and steps[b][2] == -1:
            gap = pos(b, now) - pos(a, now)
            heapq.heappush(heap, (now + gap / 2, a, b))

    def index_at(x, now):
        lo, hi = 0, len(order)
        while lo < hi:
            mid = (lo + hi) // 2
            if pos(order[mid], now) < x:
                lo = mid + 1
            else:
                hi = mid
        return lo

    ev = 0
    while True:
        t_nuc = events[ev][1] if ev < len(events) else math.inf
        while heap and not (steps[heap[0][1]][3] and steps[heap[0][2]][3]):
            heapq.heappop(heap)
        t_col = heap[0][0] if heap else math.inf
        now = min(t_nuc, t_col)
        if now >= T:
            break
        if t_col <= t_nuc:
            _, a, b = heapq.heappop(heap)
            i = order.index(a)
            if i + 1 >= len(order) or order[i + 1] != b:
                continue
            steps[a][3] = steps[b][3] = False
            del order[i:i + 2]
            push(i - 1, now)
        else:
            x, t = events[ev]
            ev += 1
            i = index_at(x, now)
            steps.append([x, t, -1, True])
            steps.append([x, t, 1, True])
            order[i:i] = [len(steps) - 2, len(steps) - 1]
            push(i - 1, now)
            push(i, now)
            push(i + 1, now)
    return [(pos(k, T), steps[k][2]) for k in order]


def png_height_from_steps(steps, x: float = 0.0) -> int:
    """``h(x) = #down-steps - #up-steps`` to the right of ``x`` (the height vanishes far right)."""
    return int(sum(1 if d == 1 else -1 for p, d in steps if p > x))


def png_height(T: float, seed: int | None = None, rng: np.random.Generator | None = None,
               events=None, profile: bool = False):
    """Height ``h(0, T)`` of the PNG droplet; with ``profile`` also the step list at time ``T``."""
    if rng is None and events is None:
        rng = block_rng(0 if seed is None else int(seed), 0)
    if events is None:
        events = png_nucleations(T, rng)
    steps = png_evolve(events, T)
    h = png_height_from_steps(steps)
    return (h, steps) if profile else h


def png_config(events, T: float) -> PointConfig:
    """The nucleations as a unit-square configuration in light-cone coordinates ``((t+x)/T, (t-x)/T)``."""
    e = np.asarray(events, dtype=float).reshape(-1, 2)
    return PointConfig((e[:, 1] + e[:, 0]) / T, (e[:, 1] - e[:, 0]) / T)


def png_simulate(T: float, seed: int):
    """One PNG run: returns ``(h(0, T), lis_of_config(light-cone configuration), events)``."""
    events = png_nucleations(T, block_rng(int(seed), 0))
    h = png_height(T, events=events)
    return h, lis_of_config(png_config(events, T)), events


def simulate_png(T: float, trials: int, seed: int, workers: int = 1) -> TrialBatch:
    if T < 0 or T > MAX_PNG_TIME:
        raise DomainError(f"PNG time must lie in [0, {MAX_PNG_TIME}]")
    values = run_trials("png", (float(T),), trials, seed, workers)
    return TrialBatch(seed, "png", {"T": T}, values)


# ---------------------------------------------------------------------------
# empirical laws
# ---------------------------------------------------------------------------

@dataclass
class EmpiricalCdf:
    l: np.ndarray
    cdf: np.ndarray
    stderr: np.ndarray
    trials: int

    HEADER = ("l", "empirical_cdf", "stderr")

    def rows(self):
        for row in zip(self.l, self.cdf, self.stderr):
            yield int(row[0]), row[1], row[2]

    def to_csv(self, dest=None) -> str:
        return write_csv(self.HEADER, self.rows(), dest)

    def at(self, l: int) -> float:
        if l < self.l[0]:
            return 0.0
        if l > self.l[-1]:
            return 1.0
        return float(self.cdf[int(l - self.l[0])])


def empirical_cdf(batch: TrialBatch | np.ndarray, l_max: int | None = None) -> EmpiricalCdf:
    """Empirical ``Pr(L <= l)`` for ``l = 0..l_max`` with standard errors ``sqrt(p (1 - p) / n)``."""
    values = batch.values if isinstance(batch, TrialBatch) else np.asarray(batch)
    n = len(values)
    if n == 0:
        raise DomainError("empty batch")
    top = int(values.max()) if l_max is None else int(l_max)
    ls = np.arange(0, max(top, 0) + 1)
    counts = np.bincount(np.clip(values, 0, None), minlength=len(ls))[:len(ls)]
    p = np.cumsum(counts) / n
    return EmpiricalCdf(ls, p, np.sqrt(p * (1 - p) / n), n)


def binomial_z(p_hat: float, p: float, n: int) -> float:
    """Deviation of ``p_hat`` from ``p`` in units of the binomial standard error ``sqrt(p (1 - p) / n)``."""
    sd = math.sqrt(p * (1 - p) / n)
    if sd == 0:
        return 0.0 if p_hat == p else math.copysign(math.inf, p_hat - p)
    return (p_hat - p) / sd


def kolmogorov_distance(samples, cdf) -> float:
    """``sup |F_emp - F|`` over the jump points, comparing both one-sided limits of the empirical law."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = len(x)
    if n == 0:
        raise DomainError("no samples")
    uniq, first = np.unique(x, return_index=True)
    last = np.append(first[1:], n)
    F = np.asarray(cdf(uniq), dtype=float)
    upper = np.abs(last / n - F)
    lower = np.abs(first / n - F)
    return float(max(upper.max(), lower.max()))


def scaled(values, rate: float) -> np.ndarray:
    """``(L - 2 rate) / rate^{1/3}``."""
    return (np.asarray(values, dtype=float) - 2 * rate) / rate ** (1 / 3)
