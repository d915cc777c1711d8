"""Density bookkeeping for counting experiments.

A valuation cuts an infinite set into finite balls S_k; a property picks out
P_k inside each ball.  ``DensitySeries`` stores the cumulative pairs
(|P_k|, |S_k|) and ``density_ratios`` turns them into exact rationals.  When
the plain ratio sequence oscillates, the shell-averaged ``annular_density``

    rho_k = (X_{k-1}/S_{k-1} + X_k/S_k) / 2

often still settles down; ``strict_annular_estimate`` reports its tail mean
together with an oscillation diagnostic instead of pretending to know the
limit.

The two concrete experiments implemented here:

* visible lattice points -- (x, y) with gcd(x, y) = 1 -- in scaled squares
  and disks, whose density tends to 6/pi^2, and
* reduced words in the rank-2 free group whose abelianization is a visible
  point, where the plain ratios split by parity and only the annular
  sequence converges (to the same 6/pi^2).

Counts are exhaustive and exact; ratios are ``Fraction`` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import BudgetExceededError

# exhaustive-enumeration ceiling for the free-group experiment
FREE_GROUP_MAX_LEN = 14

REGIONS = ("square", "disk")


@dataclass(frozen=True)
class DensitySeries:
    """Cumulative counts (k, hits, total) with hits <= total, totals nondecreasing."""

    points: tuple

    def __post_init__(self):
        pts = tuple((int(k), int(h), int(t)) for k, h, t in self.points)
        object.__setattr__(self, "points", pts)
        prev_total = 0
        for k, h, t in pts:
            if not 0 <= h <= t:
                raise ValueError(f"hits {h} not in [0, total {t}] at k={k}")
            if t < prev_total:
                raise ValueError(f"totals must be nondecreasing (k={k})")
            prev_total = t


@dataclass(frozen=True)
class AnnularSeries:
    """Per-shell counts (k, X_k, S_k) at consecutive integer valuations."""

    points: tuple

    def __post_init__(self):
        pts = tuple((int(k), int(x), int(s)) for k, x, s in self.points)
        object.__setattr__(self, "points", pts)
        for i, (k, x, s) in enumerate(pts):
            if not 0 <= x <= s:
                raise ValueError(f"shell count X={x} not in [0, S={s}] at k={k}")
            if i > 0 and k != pts[i - 1][0] + 1:
                raise ValueError("shell valuations must be consecutive integers")


def density_ratios(series: DensitySeries) -> list:
    """|P_k| / |S_k| per point, as exact Fractions.  No monotonicity implied."""
    if not series.points:
        raise ValueError("empty series")
    out = []
    for k, h, t in series.points:
        if t == 0:
            raise ValueError(f"zero total at k={k}")
        out.append(Fraction(h, t))
    return out


def annular_density(series: AnnularSeries) -> list:
    """[(k, rho_k)] with rho_k the mean of the two adjacent shell ratios."""
    pts = series.points
    if len(pts) < 2:
        raise ValueError("need at least two shells")
    out = []
    for (k0, x0, s0), (k1, x1, s1) in zip(pts, pts[1:]):
        if s0 == 0 or s1 == 0:
            raise ValueError(f"zero shell count at k={k0 if s0 == 0 else k1}")
        out.append((k1, Fraction(x0, s0) / 2 + Fraction(x1, s1) / 2))
    return out


@dataclass(frozen=True)
class StrictDensityEstimate:
    value: Fraction          # mean of the last `tail` annular densities
    oscillation: Fraction    # max - min over the same tail
    converged: bool          # oscillation <= tol
    tail: int
    tol: Fraction


def strict_annular_estimate(series: AnnularSeries, tail: int = 3,
                            tol=Fraction(1, 20)) -> StrictDensityEstimate:
    """Tail average of rho_k plus an oscillation diagnostic.

    Only the limit of rho_k is meaningful mathematically; this reports the
    mean of the last ``tail`` values and flags whether they have settled to
    within ``tol`` of each other.  No convergence rate is asserted.
    """
    rhos = [r for _, r in annular_density(series)]
    if len(rhos) < tail:
        raise ValueError(f"need at least {tail} annular densities")
    window = rhos[-tail:]
    osc = max(window) - min(window)
    mean = sum(window, Fraction(0)) / tail
    return StrictDensityEstimate(mean, osc, osc <= Fraction(tol), tail, Fraction(tol))


def is_visible(x: int, y: int) -> bool:
    """Lattice point visible from the origin: gcd(|x|, |y|) = 1.

    gcd(0, n) is |n|, so the axis points (+-1, 0), (0, +-1) are visible and
    the origin never is.
    """
    return gcd(abs(x), abs(y)) == 1


def visible_count(region: str, t: int, workers: int = 1) -> int:
    """Visible points inside the scaled region.

    ``square`` counts 1 <= x, y <= t;  ``disk`` counts 0 < x^2 + y^2 <= t^2.
    """
    if region not in REGIONS:
        raise ValueError(f"region must be one of {REGIONS}")
    if t < 1:
        raise ValueError("t must be >= 1")
    if workers > 1:
        return _visible_count_sharded(region, t, workers)
    if region == "square":
        return _visible_square_rows(1, t, t)
    return _visible_disk_rows(-t, t, t)


def _visible_square_rows(x_lo: int, x_hi: int, t: int) -> int:
    cnt = 0
    for x in range(x_lo, x_hi + 1):
        for y in range(1, t + 1):
            if gcd(x, y) == 1:
                cnt += 1
    return cnt


def _visible_disk_rows(x_lo: int, x_hi: int, t: int) -> int:
    t_sq = t * t
    cnt = 0
    for x in range(x_lo, x_hi + 1):
        ymax = isqrt(t_sq - x * x)
        for y in range(-ymax, ymax + 1):
            if x == 0 and y == 0:
                continue
            if gcd(abs(x), abs(y)) == 1:
                cnt += 1
    return cnt


def _visible_count_sharded(region: str, t: int, workers: int) -> int:
    # row-range shards, merged in shard order: worker count never changes the sum
    from concurrent.futures import ThreadPoolExecutor

    lo, hi = (1, t) if region == "square" else (-t, t)
    span = hi - lo + 1
    bounds = [(lo + i * span // workers, lo + (i + 1) * span // workers - 1)
              for i in range(workers)]
    fn = _visible_square_rows if region == "square" else _visible_disk_rows
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda b: fn(b[0], b[1], t), bounds))
    return sum(parts)


def visible_series(region: str, t_max: int) -> DensitySeries:
    """Cumulative visible counts for t = 1..t_max."""
    shells = visible_shell_series(region, t_max)
    pts = []
    hits = total = 0
    for k, x, s in shells.points:
        hits += x
        total += s
        pts.append((k, hits, total))
    return DensitySeries(tuple(pts))


def visible_shell_series(region: str, t_max: int) -> AnnularSeries:
    """Per-shell counts; shell k holds the points first captured at scale k."""
    if region not in REGIONS:
        raise ValueError(f"region must be one of {REGIONS}")
    pts = []
    if region == "square":
        # valuation of (x, y) is max(x, y)
        for k in range(1, t_max + 1):
            s = 2 * k - 1
            x = sum(1 for y in range(1, k + 1) if gcd(k, y) == 1) * 2 - (1 if k == 1 else 0)
            pts.append((k, x, s))
    else:
        # valuation shell k: k-1 < sqrt(x^2+y^2) <= k
        for k in range(1, t_max + 1):
            pts.append((k, *_disk_shell(k)))
    return AnnularSeries(tuple(pts))


def _disk_shell(k: int):
    """(visible, total) over the annulus k-1 < |(x, y)| <= k."""
    vis = tot = 0
    km1_sq = (k - 1) * (k - 1)
    k_sq = k * k
    for x in range(-k, k + 1):
        hi_sq = k_sq - x * x
        hi = isqrt(hi_sq)
        lo_sq = km1_sq - x * x
        lo = isqrt(lo_sq) if lo_sq >= 0 else -1
        ax = abs(x)
        for y in range(lo + 1, hi + 1):
            if y == 0:
                if x == 0:
                    continue  # the origin is never visible and never counted
                tot += 1
                vis += 1 if gcd(ax, 0) == 1 else 0
            else:
                tot += 2
                vis += 2 if gcd(ax, y) == 1 else 0
    return vis, tot


# ---------------------------------------------------------------------------
# Reduced words in F_2 whose abelianization is visible
# ---------------------------------------------------------------------------

_F2_STEP = ((1, 0), (-1, 0), (0, 1), (0, -1))   # a, a^-1, b, b^-1
_F2_INV = (1, 0, 3, 2)


def free_group_abelianization_experiment(max_len: int, rank: int = 2) -> AnnularSeries:
    """Shell counts (l, X_l, S_l) for reduced words of exact length l <= max_len.

    S_l = 4 * 3^(l-1) is the number of reduced words; X_l counts those whose
    abelianization (#a - #a^-1, #b - #b^-1) is a visible point of Z^2.  The
    enumeration is exhaustive: the dynamic program walks every reduced word
    once, grouped by (abelianization, final letter).
    """
    if rank != 2:
        raise ValueError("only rank 2 is implemented")
    if not 1 <= max_len <= FREE_GROUP_MAX_LEN:
        raise BudgetExceededError(
            f"max_len {max_len} outside [1, {FREE_GROUP_MAX_LEN}]")
    state = {}
    for g, (dx, dy) in enumerate(_F2_STEP):
        state[(dx, dy, g)] = state.get((dx, dy, g), 0) + 1
    pts = []
    for ell in range(1, max_len + 1):
        total = sum(state.values())
        vis = sum(c for (x, y, _), c in state.items() if is_visible(x, y))
        pts.append((ell, vis, total))
        if ell == max_len:
            break
        nxt = {}
        for (x, y, g), c in state.items():
            for h, (dx, dy) in enumerate(_F2_STEP):
                if h == _F2_INV[g]:
                    continue
                key = (x + dx, y + dy, h)
                nxt[key] = nxt.get(key, 0) + c
        state = nxt
    return AnnularSeries(tuple(pts))


def enumerate_reduced_words(length: int):
    """Yield every reduced word of the given exact length as a letter tuple.

    Letters are indices into (a, a^-1, b, b^-1).  Used as the brute-force
    cross-check for the dynamic program above; exponential, keep l small.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    stack = [(g,) for g in range(4)]
    while stack:
        w = stack.pop()
        if len(w) == length:
            yield w
            continue
        for h in range(4):
            if h != _F2_INV[w[-1]]:
                stack.append(w + (h,))


def abelianization(word) -> tuple:
    x = y = 0
    for g in word:
        dx, dy = _F2_STEP[g]
        x += dx
        y += dy
    return x, y
