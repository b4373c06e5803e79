"""Exact combinatorics of permutations, tableaux and symmetry classes.

Everything here is exact: integers, tuples and :class:`fractions.Fraction`.
Permutations are tuples in one-line notation with 1-based images, so
``(5, 3, 7, 4, 1, 6, 2)`` maps 1 to 5.  Tableaux are tuples of row tuples.

The brute-force routines (:func:`brute_cdf`, :func:`brute_distribution`)
enumerate whole symmetry classes and serve as the oracle for every exact
formula elsewhere in the package.
"""
from __future__ import annotations

import enum
import itertools
import math
from bisect import bisect_left
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import BoundExceededError, DomainError

Permutation = tuple
Tableau = tuple

DEFAULT_MAX_SIZE = 10


class SymmetryClass(enum.Enum):
    """Reflection symmetry imposed on a point configuration of the unit square."""

    PLAIN = "plain"
    DIAG = "diag"            # invariant under reflection in y = x
    ANTIDIAG = "antidiag"    # invariant under reflection in y = 1 - x
    BOTHDIAGS = "bothdiags"  # invariant under both reflections
    CENTRAL = "central"      # invariant under rotation by pi about (1/2, 1/2)

    @classmethod
    def parse(cls, value: "SymmetryClass | str") -> "SymmetryClass":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown symmetry class {value!r}") from None


class Partition(tuple):
    """A weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts if p != 0)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def alternating_sum(self) -> int:
        """``mu_1 - mu_2 + mu_3 - ...``, the number of odd-length columns of the conjugate."""
        return sum(p if i % 2 == 0 else -p for i, p in enumerate(self))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)})"


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Yield the partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(rest, bound):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, bound), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for p in rec(n, max_part):
        yield Partition(p)


# ---------------------------------------------------------------------------
# permutations and longest increasing subsequences
# ---------------------------------------------------------------------------

def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def _check_permutation(p):
    p = tuple(int(v) for v in p)
    if not is_permutation(p):
        raise DomainError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def lis(p: Sequence[int]) -> int:
    """Length of the longest strictly increasing subsequence (patience sorting)."""
    tops: list = []
    for v in p:
        k = bisect_left(tops, v)
        if k == len(tops):
            tops.append(v)
        else:
            tops[k] = v
    return len(tops)


def lis_layers(p: Sequence[int]) -> list[list[int]]:
    """Split ``p`` into decreasing subsequences greedily from the left.

    Each value joins the first layer whose last element exceeds it.  The
    number of layers equals :func:`lis`; these are the PNG layers of the
    permutation (5374162 gives (531)(742)(6)).
    """
    layers: list[list[int]] = []
    lasts: list = []
    for v in p:
        k = bisect_left(lasts, v)
        if k == len(layers):
            layers.append([v])
            lasts.append(v)
        else:
            layers[k].append(v)
            lasts[k] = v
    return layers


def lis_quadratic(p: Sequence[int]) -> int:
    """O(n^2) dynamic-programming LIS; oracle for :func:`lis`."""
    best = [1] * len(p)
    for i in range(len(p)):
        for j in range(i):
            if p[j] < p[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return max(best, default=0)


def longest_chain(points: Sequence[tuple[float, float]], weights=None, weak: bool = False):
    """Maximum total weight of a chain increasing in both coordinates, by O(n^2) DP.

    With ``weak`` the order is componentwise ``<=`` (distinct points);
    otherwise both coordinates must increase strictly.  Independent of the
    sorting-based kernels, so it doubles as their oracle.
    """
    pts = list(points)
    w = [1] * len(pts) if weights is None else list(weights)
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))
    best = {}
    for a, i in enumerate(order):
        xi, yi = pts[i]
        value = w[i]
        for j in order[:a]:
            xj, yj = pts[j]
            if weak:
                ok = xj <= xi and yj <= yi
            else:
                ok = xj < xi and yj < yi
            if ok and best[j] + w[i] > value:
                value = best[j] + w[i]
        best[i] = value
    return max(best.values(), default=0)


def reverse(p: Sequence[int]) -> Permutation:
    return tuple(reversed(p))


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, v in enumerate(p, start=1):
        inv[v - 1] = i
    return tuple(inv)


def fixed_points(p: Sequence[int]) -> int:
    return sum(1 for i, v in enumerate(p, start=1) if v == i)


def anti_fixed_points(p: Sequence[int]) -> int:
    n = len(p)
    return sum(1 for i, v in enumerate(p, start=1) if v == n + 1 - i)


# ---------------------------------------------------------------------------
# tableaux and RSK
# ---------------------------------------------------------------------------

def shape(t: Tableau) -> Partition:
    return Partition(len(row) for row in t)


def transpose(t: Tableau) -> Tableau:
    if not t:
        return ()
    return tuple(tuple(t[i][j] for i in range(len(t)) if j < len(t[i])) for j in range(len(t[0])))


def is_semistandard(t: Tableau) -> bool:
    for i, row in enumerate(t):
        if any(a > b for a, b in zip(row, row[1:])):
            return False
        if i and (len(row) > len(t[i - 1]) or any(row[j] <= t[i - 1][j] for j in range(len(row)))):
            return False
    return True


def is_standard(t: Tableau) -> bool:
    entries = sorted(v for row in t for v in row)
    if entries != list(range(1, len(entries) + 1)):
        return False
    return is_semistandard(t) and all(a < b for row in t for a, b in zip(row, row[1:]))


def _row_insert(rows: list[list[int]], x) -> tuple[int, int]:
    """Schensted row insertion (bump the leftmost entry strictly larger)."""
    i = 0
    while True:
        if i == len(rows):
            rows.append([x])
            return i, 0
        row = rows[i]
        k = bisect_left(row, x + 1) if isinstance(x, int) else _first_greater(row, x)
        if k == len(row):
            row.append(x)
            return i, k
        row[k], x = x, row[k]
        i += 1


def _first_greater(row, x):
    for k, v in enumerate(row):
        if v > x:
            return k
    return len(row)


def _freeze(rows):
    return tuple(tuple(r) for r in rows)


def rsk(p: Sequence[int]) -> tuple[Tableau, Tableau]:
    """Row-insertion Robinson-Schensted: permutation -> (P, Q) standard tableaux."""
    p = _check_permutation(p)
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for step, v in enumerate(p, start=1):
        i, _ = _row_insert(P, v)
        if i == len(Q):
            Q.append([])
        Q[i].append(step)
    return _freeze(P), _freeze(Q)


def rsk_matrix(X) -> tuple[Tableau, Tableau]:
    """RSK for a non-negative integer matrix.

    Row ``i`` (0-based) of ``X`` contributes ``X[i][j]`` copies of the
    biletter ``(i + 1, j + 1)``.  The column labels are row-inserted into P
    and the row labels recorded in Q, so both are semistandard with entries
    in ``1..n``.  For a permutation matrix with ones at ``(j, p(j))`` this is
    :func:`rsk` of ``p``.
    """
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for i, row in enumerate(X):
        for j, mult in enumerate(row):
            mult = int(mult)
            if mult < 0:
                raise DomainError("matrix entries must be non-negative")
            for _ in range(mult):
                r, _ = _row_insert(P, j + 1)
                if r == len(Q):
                    Q.append([])
                Q[r].append(i + 1)
    return _freeze(P), _freeze(Q)


def permutation_matrix(p: Sequence[int]) -> list[list[int]]:
    n = len(p)
    X = [[0] * n for _ in range(n)]
    for j, v in enumerate(p):
        X[j][v - 1] = 1
    return X


def inverse_rsk(P: Tableau, Q: Tableau) -> Permutation:
    """Recover the permutation from its pair of standard tableaux."""
    if shape(P) != shape(Q):
        raise DomainError("P and Q must have the same shape")
    rows = [list(r) for r in P]
    where = {v: (i, j) for i, row in enumerate(Q) for j, v in enumerate(row)}
    n = len(where)
    out = [0] * n
    for k in range(n, 0, -1):
        i, j = where[k]
        x = rows[i].pop()
        if not rows[i]:
            rows.pop()
        for r in range(i - 1, -1, -1):
            row = rows[r]
            pos = bisect_left(row, x) - 1
            row[pos], x = x, row[pos]
        out[k - 1] = x
    return tuple(out)


def evacuation(t: Tableau) -> Tableau:
    """Schutzenberger involution of a standard tableau via jeu de taquin.

    Repeatedly delete the smallest remaining entry from the corner, slide the
    hole out to an outer corner, and label the vacated cell n, n-1, ...
    """
    rows = [list(r) for r in t]
    out = [[0] * len(r) for r in t]
    n = sum(len(r) for r in rows)
    for k in range(n, 0, -1):
        i = j = 0
        while True:
            right = rows[i][j + 1] if j + 1 < len(rows[i]) else None
            down = rows[i + 1][j] if i + 1 < len(rows) and j < len(rows[i + 1]) else None
            if right is None and down is None:
                break
            if down is None or (right is not None and right < down):
                rows[i][j] = right
                j += 1
            else:
                rows[i][j] = down
                i += 1
        rows[i].pop()
        if not rows[i]:
            rows.pop()
        out[i][j] = k
    return _freeze(out)


def standardize(t: Tableau) -> Tableau:
    """Relabel a semistandard tableau 1..n, equal entries left to right."""
    cells = sorted(((v, j, i) for i, row in enumerate(t) for j, v in enumerate(row)))
    out = [list(r) for r in t]
    for label, (_, j, i) in enumerate(cells, start=1):
        out[i][j] = label
    return _freeze(out)


def evacuation_ssyt(t: Tableau, max_entry: int) -> Tableau:
    """Evacuation of a semistandard tableau with entries in ``1..max_entry``.

    Standardize, evacuate, then destandardize with the reversed content
    (value ``v`` becomes ``max_entry + 1 - v``).
    """
    content = Counter(v for row in t for v in row)
    n = sum(content.values())
    label_value = {}
    start = 1
    for v in range(1, max_entry + 1):
        c = content.get(v, 0)
        for label in range(start, start + c):
            label_value[n + 1 - label] = max_entry + 1 - v
        start += c
    e = evacuation(standardize(t))
    return tuple(tuple(label_value[x] for x in row) for row in e)


def standard_tableaux(mu: Sequence[int]) -> Iterator[Tableau]:
    """Yield all standard tableaux of shape ``mu`` (largest entry placed last)."""
    mu = Partition(mu)
    n = mu.size
    if n == 0:
        yield ()
        return

    def rec(lengths, k, cells):
        if k == 0:
            rows = [[0] * m for m in mu]
            for v, (i, j) in cells.items():
                rows[i][j] = v
            yield _freeze(rows)
            return
        for i, m in enumerate(lengths):
            if m == 0:
                continue
            below = lengths[i + 1] if i + 1 < len(lengths) else 0
            if m > below:
                lengths[i] -= 1
                cells[k] = (i, m - 1)
                yield from rec(lengths, k - 1, cells)
                del cells[k]
                lengths[i] += 1

    yield from rec(list(mu), n, {})


@lru_cache(maxsize=None)
def num_standard(mu: tuple) -> int:
    """f^mu by enumeration of standard tableaux."""
    return sum(1 for _ in standard_tableaux(mu))


def hook_length_count(mu: Sequence[int]) -> int:
    """f^mu by the hook length formula (secondary oracle only)."""
    mu = Partition(mu)
    conj = mu.conjugate()
    hooks = 1
    for i, m in enumerate(mu):
        for j in range(m):
            hooks *= (m - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(mu.size) // hooks


@lru_cache(maxsize=None)
def num_self_dual(mu: tuple) -> int:
    """Number of standard tableaux of shape ``mu`` fixed by evacuation."""
    return sum(1 for t in standard_tableaux(mu) if evacuation(t) == t)


# ---------------------------------------------------------------------------
# Schur polynomials by tableau enumeration
# ---------------------------------------------------------------------------

def semistandard_tableaux(mu: Sequence[int], max_entry: int) -> Iterator[Tableau]:
    """Yield semistandard tableaux of shape ``mu`` with entries in ``1..max_entry``."""
    mu = Partition(mu)
    cells = [(i, j) for i, m in enumerate(mu) for j in range(m)]
    rows = [[0] * m for m in mu]

    def rec(k):
        if k == len(cells):
            yield _freeze(rows)
            return
        i, j = cells[k]
        lo = 1
        if j:
            lo = max(lo, rows[i][j - 1])
        if i:
            lo = max(lo, rows[i - 1][j] + 1)
        # room for the column below
        hi = max_entry - (len([1 for r in mu[i + 1:] if r > j]))
        for v in range(lo, hi + 1):
            rows[i][j] = v
            yield from rec(k + 1)
        rows[i][j] = 0

    yield from rec(0)


def _size_guard(mu, limit):
    if Partition(mu).size > limit:
        raise BoundExceededError(f"shape of size {Partition(mu).size} exceeds enumeration limit {limit}")


def schur_polynomial(mu: Sequence[int], num_vars: int, limit: int = 10) -> Counter:
    """Monomial expansion of s_mu(w_1..w_N): exponent tuple -> coefficient."""
    _size_guard(mu, limit)
    poly: Counter = Counter()
    for t in semistandard_tableaux(mu, num_vars):
        content = [0] * num_vars
        for row in t:
            for v in row:
                content[v - 1] += 1
        poly[tuple(content)] += 1
    return poly


def self_dual_schur_polynomial(mu: Sequence[int], n: int, limit: int = 10) -> Counter:
    """Monomial expansion in q_1..q_n of the sum over self-dual tableaux with entries in 1..2n.

    For a self-dual tableau #j = #(2n+1-j), so only the counts of 1..n enter.
    """
    _size_guard(mu, limit)
    poly: Counter = Counter()
    for t in semistandard_tableaux(mu, 2 * n):
        if evacuation_ssyt(t, 2 * n) != t:
            continue
        content = [0] * n
        for row in t:
            for v in row:
                if v <= n:
                    content[v - 1] += 1
        poly[tuple(content)] += 1
    return poly


def evaluate_polynomial(poly: Counter, values: Sequence):
    total = 0
    for exps, coeff in poly.items():
        term = coeff
        for x, e in zip(values, exps):
            if e:
                term = term * x ** e
        total = total + term
    return total


def schur_enumerate(mu: Sequence[int], weights: Sequence | None = None, *, num_vars: int | None = None,
                    self_dual: bool = False, coefficient: bool = False, limit: int = 10):
    """Schur polynomial by direct tableau enumeration.

    With ``weights`` return the value ``s_mu(w)`` (or the self-dual variant in
    ``q_1..q_n``).  With ``coefficient=True`` return the coefficient of
    ``w_1 w_2 ... w_N`` instead, which equals ``f^mu`` (resp. the number of
    self-dual standard tableaux of content 2n).
    """
    if num_vars is None:
        if weights is None:
            raise DomainError("give weights or num_vars")
        num_vars = len(weights)
    if self_dual:
        poly = self_dual_schur_polynomial(mu, num_vars, limit)
    else:
        poly = schur_polynomial(mu, num_vars, limit)
    if coefficient:
        return poly.get((1,) * num_vars, 0)
    if weights is None:
        raise DomainError("weights required for evaluation")
    return evaluate_polynomial(poly, weights)


# ---------------------------------------------------------------------------
# symmetry classes
# ---------------------------------------------------------------------------

def s_count(n: int, m: int) -> int:
    """Number of involutions of 1..n with exactly m two-cycles."""
    if m < 0 or 2 * m > n:
        raise DomainError(f"need 0 <= 2m <= n, got n={n}, m={m}")
    return math.comb(n, 2 * m) * math.factorial(2 * m) // (2 ** m * math.factorial(m))


def t_count(n: int, m_plus: int, m_minus: int) -> int:
    """Number of permutations of 1..2n symmetric under both diagonals with
    ``m_plus`` fixed and ``m_minus`` anti-fixed points among 1..n."""
    gap = n - m_plus - m_minus
    if m_plus < 0 or m_minus < 0 or gap < 0:
        raise DomainError(f"need m_plus + m_minus <= n, got {n}, {m_plus}, {m_minus}")
    if gap % 2:
        raise DomainError(f"n - m_plus - m_minus must be even, got {gap}")
    return math.factorial(n) // (math.factorial(m_plus) * math.factorial(m_minus) * math.factorial(gap // 2))


def symmetry_counts(n: int, m: int | tuple[int, int]) -> int:
    """``s_{n,m}`` for an integer ``m`` or ``t_{n,m+,m-}`` for a pair."""
    if isinstance(m, tuple):
        return t_count(n, *m)
    return s_count(n, m)


def involutions(n: int) -> Iterator[Permutation]:
    """Yield all involutions of 1..n."""
    def rec(p, free):
        if not free:
            yield tuple(p)
            return
        i = free[0]
        rest = free[1:]
        p[i] = i + 1
        yield from rec(p, rest)
        for k, j in enumerate(rest):
            p[i], p[j] = j + 1, i + 1
            yield from rec(p, rest[:k] + rest[k + 1:])
        p[i] = 0

    yield from rec([0] * n, list(range(n)))


def _central(n2: int) -> Iterator[Permutation]:
    n = n2 // 2

    def rec(p, used, i):
        if i == n:
            yield tuple(p)
            return
        for v in range(1, n2 + 1):
            w = n2 + 1 - v
            if v in used or w in used:
                continue
            p[i], p[n2 - 1 - i] = v, w
            used.add(v)
            used.add(w)
            yield from rec(p, used, i + 1)
            used.discard(v)
            used.discard(w)

    yield from rec([0] * n2, set(), 0)


def is_in_class(p: Sequence[int], cls: SymmetryClass | str) -> bool:
    cls = SymmetryClass.parse(cls)
    n = len(p)
    if cls is SymmetryClass.PLAIN:
        return is_permutation(p)
    diag = all(p[p[i] - 1] == i + 1 for i in range(n))
    anti = all(p[n - p[j - 1]] == n + 1 - j for j in range(1, n + 1))
    if cls is SymmetryClass.DIAG:
        return diag
    if cls is SymmetryClass.ANTIDIAG:
        return anti
    if cls is SymmetryClass.BOTHDIAGS:
        return diag and anti and n % 2 == 0
    return n % 2 == 0 and all(p[n - i] == n + 1 - p[i - 1] for i in range(1, n + 1))


def class_statistics(p: Sequence[int], cls: SymmetryClass | str) -> dict:
    """Diagonal statistics that label the constrained sub-classes."""
    cls = SymmetryClass.parse(cls)
    n = len(p)
    if cls is SymmetryClass.DIAG:
        return {"m": (n - fixed_points(p)) // 2}
    if cls is SymmetryClass.ANTIDIAG:
        return {"m": (n - anti_fixed_points(p)) // 2}
    if cls is SymmetryClass.BOTHDIAGS:
        half = n // 2
        return {
            "m_plus": sum(1 for i in range(1, half + 1) if p[i - 1] == i),
            "m_minus": sum(1 for i in range(1, half + 1) if p[i - 1] == n + 1 - i),
        }
    return {}


def enumerate_class(n: int, cls: SymmetryClass | str = SymmetryClass.PLAIN, *, m: int | None = None,
                    m_plus: int | None = None, m_minus: int | None = None,
                    max_size: int = DEFAULT_MAX_SIZE) -> Iterator[Permutation]:
    """Yield every permutation of 1..n in the symmetry class.

    ``n`` is always the permutation length (even for BOTHDIAGS and CENTRAL).
    ``m`` filters DIAG/ANTIDIAG by the number of off-(anti)diagonal pairs,
    ``m_plus``/``m_minus`` filter BOTHDIAGS by (anti-)fixed points among
    ``1..n/2``.
    """
    cls = SymmetryClass.parse(cls)
    if n > max_size:
        raise BoundExceededError(f"refusing to enumerate size {n} > max_size={max_size}")
    if n < 0:
        raise DomainError("size must be non-negative")
    if cls in (SymmetryClass.BOTHDIAGS, SymmetryClass.CENTRAL) and n % 2:
        raise DomainError(f"{cls.value} permutations have even length, got {n}")

    if cls is SymmetryClass.PLAIN:
        yield from itertools.permutations(range(1, n + 1))
    elif cls is SymmetryClass.DIAG:
        for p in involutions(n):
            if m is None or fixed_points(p) == n - 2 * m:
                yield p
    elif cls is SymmetryClass.ANTIDIAG:
        for p in involutions(n):
            q = reverse(p)
            if m is None or anti_fixed_points(q) == n - 2 * m:
                yield q
    elif cls is SymmetryClass.BOTHDIAGS:
        for p in involutions(n):
            if not is_in_class(p, cls):
                continue
            stats = class_statistics(p, cls)
            if m_plus is not None and stats["m_plus"] != m_plus:
                continue
            if m_minus is not None and stats["m_minus"] != m_minus:
                continue
            yield p
    else:
        yield from _central(n)


@lru_cache(maxsize=None)
def _distribution(n, cls, m, m_plus, m_minus, max_size):
    counts = Counter(lis(p) for p in enumerate_class(n, cls, m=m, m_plus=m_plus, m_minus=m_minus,
                                                       max_size=max_size))
    return tuple(sorted(counts.items()))


def brute_distribution(n: int, cls: SymmetryClass | str = SymmetryClass.PLAIN, *, m=None, m_plus=None,
                       m_minus=None, max_size: int = DEFAULT_MAX_SIZE) -> Counter:
    """Counter of LIS values over the (filtered) class, by exhaustive enumeration."""
    cls = SymmetryClass.parse(cls)
    return Counter(dict(_distribution(n, cls, m, m_plus, m_minus, max_size)))


def brute_cdf(n: int, l: int, cls: SymmetryClass | str = SymmetryClass.PLAIN, *, m=None, m_plus=None,
              m_minus=None, max_size: int = DEFAULT_MAX_SIZE) -> Fraction:
    """Exact ``Pr(LIS <= l)`` for a uniformly chosen member of the class."""
    dist = brute_distribution(n, cls, m=m, m_plus=m_plus, m_minus=m_minus, max_size=max_size)
    total = sum(dist.values())
    if total == 0:
        raise DomainError("empty class for the given constraints")
    return Fraction(sum(c for v, c in dist.items() if v <= l), total)


def tableau_cdf(n: int, l: int, cls: SymmetryClass | str = SymmetryClass.PLAIN, *, m=None, m_plus=None,
                m_minus=None, by_columns: bool = False) -> Fraction:
    """``Pr(LIS <= l)`` from sums over tableau counts instead of permutations.

    PLAIN sums ``(f^mu)^2`` over ``mu_1 <= l`` (or ``mu'_1 <= l`` with
    ``by_columns``).  DIAG / ANTIDIAG sum ``f^mu`` over shapes whose
    alternating row (column) sum equals the number of (anti-)fixed points.
    BOTHDIAGS and CENTRAL use self-dual counts; ``n`` is the permutation
    length throughout.
    """
    cls = SymmetryClass.parse(cls)
    total = 0
    if cls is SymmetryClass.PLAIN:
        for mu in partitions(n):
            key = mu.conjugate()[0] if (by_columns and mu) else (mu[0] if mu else 0)
            if key <= l:
                total += num_standard(tuple(mu)) ** 2
        return Fraction(total, math.factorial(n))
    if cls in (SymmetryClass.DIAG, SymmetryClass.ANTIDIAG):
        norm = 0
        for mu in partitions(n):
            alt = mu.alternating_sum() if cls is SymmetryClass.DIAG else mu.conjugate().alternating_sum()
            if m is not None and alt != n - 2 * m:
                continue
            f = num_standard(tuple(mu))
            norm += f
            if (mu[0] if mu else 0) <= l:
                total += f
        if m is not None and norm != s_count(n, m):
            raise AssertionError("tableau count disagrees with s_{n,m}")
        return Fraction(total, norm)
    half = n // 2
    if n % 2:
        raise DomainError("BOTHDIAGS/CENTRAL need even length")
    if cls is SymmetryClass.CENTRAL:
        for mu in partitions(n):
            if (mu[0] if mu else 0) <= l:
                total += num_self_dual(tuple(mu)) ** 2
        return Fraction(total, 2 ** half * math.factorial(half))
    norm = 0
    for mu in partitions(n):
        fixed = mu.alternating_sum()
        anti = mu.conjugate().alternating_sum()
        if m_plus is not None and fixed != 2 * m_plus:
            continue
        if m_minus is not None and anti != 2 * m_minus:
            continue
        f = num_self_dual(tuple(mu))
        norm += f
        if (mu[0] if mu else 0) <= l:
            total += f
    if norm == 0:
        raise DomainError("empty class for the given constraints")
    return Fraction(total, norm)


# ---------------------------------------------------------------------------
# random turns vicious walkers
# ---------------------------------------------------------------------------

def walker_count(l: int, n: int, w_plus: Sequence | None = None, w_minus: Sequence | None = None):
    """Weighted count of random-turns vicious walker paths returning to start.

    ``l`` walkers start at heights 0, -1, ..., -(l-1).  At each of ``n`` ticks
    exactly one walker steps up (weight ``w_plus[k]``) or down (weight
    ``w_minus[k]``) onto an empty site.  Weights default to 1; arithmetic
    follows the weight type (ints stay exact).
    """
    if l < 0 or n < 0:
        raise DomainError("l and n must be non-negative")
    if l > 6 or n > 40:
        raise BoundExceededError("walker transfer DP limited to l <= 6, n <= 40")
    w_plus = [1] * n if w_plus is None else list(w_plus)
    w_minus = [1] * n if w_minus is None else list(w_minus)
    if len(w_plus) != n or len(w_minus) != n:
        raise DomainError("need one weight pair per tick")
    start = tuple(-k for k in range(l))
    if l == 0:
        return 1 if n == 0 else 0
    states = {start: 1}
    for k in range(n):
        nxt: dict = {}
        for pos, w in states.items():
            for i, y in enumerate(pos):
                if w_plus[k] and (i == 0 or pos[i - 1] > y + 1):
                    new = pos[:i] + (y + 1,) + pos[i + 1:]
                    nxt[new] = nxt.get(new, 0) + w * w_plus[k]
                if w_minus[k] and (i == l - 1 or pos[i + 1] < y - 1):
                    new = pos[:i] + (y - 1,) + pos[i + 1:]
                    nxt[new] = nxt.get(new, 0) + w * w_minus[k]
        states = nxt
    return states.get(start, 0)
