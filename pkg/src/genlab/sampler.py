"""Uniform-by-norm sampling of PSL(2,Z) through the upper half-plane.

The recipe: matrices of squared Frobenius norm <= N^2 displace the basepoint
i by hyperbolic distance at most arccosh(N^2/2) (the exact identity is
||M||^2 = 2 cosh d(i, M i)).  So sample a point uniformly w.r.t. hyperbolic
area in the disk of radius arccosh(N^2/2) + slack around i, reduce it into
the standard fundamental domain |Re z| <= 1/2, |z| >= 1 by alternating
integer translations and inversions, and keep the group element that carries
the fundamental domain to the sampled point whenever its norm fits the
bound.  Larger slack makes the law more uniform and the rejection rate
higher; both effects are measured, not proved, by ``uniformity_report``.

Reduction cannot tell M from -M (they move i identically), so elements are
reported in PSL(2,Z): canonical sign, and the census used for comparison is
folded accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import IntMatrix
from .census import iter_norm_ball
from .errors import RejectionRateError

BOUNDARY_TOL = 1e-12
MAX_REDUCE_STEPS = 10 ** 4
_MIN_ATTEMPTS_BEFORE_GIVING_UP = 20000


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the upper half-plane (y > 0)."""

    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("upper half-plane needs y > 0")


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of fundamental-domain reduction.

    ``element`` maps ``reduced_point`` back to the input point; it is the
    candidate group element of the sampling scheme.  Its sign is whatever
    the accumulated translation/inversion word produced; the sampling path
    canonicalizes to PSL afterwards, since the action cannot tell M from -M.
    """

    element: IntMatrix
    reduced_point: HPoint
    steps: int


def hyperbolic_distance(z: HPoint, w: HPoint) -> float:
    arg = 1.0 + ((z.x - w.x) ** 2 + (z.y - w.y) ** 2) / (2.0 * z.y * w.y)
    return math.acosh(arg)


def apply_moebius(m: IntMatrix, z: HPoint) -> HPoint:
    """(az + b) / (cz + d) for a real matrix acting on the upper half-plane."""
    (a, b), (c, d) = m.rows
    den = (c * z.x + d) ** 2 + (c * z.y) ** 2
    x = ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den
    y = (a * d - b * c) * z.y / den
    return HPoint(x, y)


def sample_disk_point(R: float, rng) -> HPoint:
    """Uniform w.r.t. hyperbolic area in the disk of radius R around i.

    The angle is uniform and the radial CDF is (cosh r - 1)/(cosh R - 1),
    inverted exactly; the point is produced in the Poincare disk around 0
    and carried to the half-plane by the Cayley map w -> i(1+w)/(1-w).
    """
    if not R > 0:
        raise ValueError("radius must be positive")
    u = rng.random()
    r = math.acosh(1.0 + u * (math.cosh(R) - 1.0))
    theta = rng.random() * 2.0 * math.pi
    rho = math.tanh(r / 2.0)
    wx = rho * math.cos(theta)
    wy = rho * math.sin(theta)
    den = (1.0 - wx) ** 2 + wy ** 2
    return HPoint(2.0 * wy / den, (1.0 - wx * wx - wy * wy) / den)


def _reduce_raw(zx: float, zy: float):
    """Reduction loop on raw coordinates.

    Returns ((a, b, c, d), zx, zy, steps) where the integer matrix maps the
    reduced point back to the input.  Translations subtract the nearest
    integer; inversions apply z -> -1/z and strictly increase y, which is
    what makes the loop terminate.
    """
    ga, gb, gc, gd = 1, 0, 0, 1   # accumulated map input -> current
    steps = 0
    while steps < MAX_REDUCE_STEPS:
        n = math.floor(zx + 0.5)
        if n != 0:
            zx -= n
            ga, gb = ga - n * gc, gb - n * gd
            steps += 1
        r2 = zx * zx + zy * zy
        if r2 < 1.0 - BOUNDARY_TOL:
            zx, zy = -zx / r2, zy / r2
            ga, gb, gc, gd = -gc, -gd, ga, gb
            steps += 1
        elif abs(zx) <= 0.5 + BOUNDARY_TOL:
            # element = inverse of the accumulated reduction word
            return (gd, -gb, -gc, ga), zx, zy, steps
    raise RuntimeError(f"no convergence within {MAX_REDUCE_STEPS} reduction steps")


def in_fundamental_domain(z: HPoint, tol: float = BOUNDARY_TOL) -> bool:
    return abs(z.x) <= 0.5 + tol and z.x * z.x + z.y * z.y >= 1.0 - tol


def gauss_reduce(z: HPoint) -> ReductionResult:
    """Carry a point into the standard fundamental domain.

    Alternates integer translations (nearest integer to Re z) with
    inversions z -> -1/z until |Re z| <= 1/2 and |z| >= 1, accumulating the
    word as an integer matrix.  The returned element, applied to the reduced
    point, reproduces the input.
    """
    if not z.y > 1e-15:
        raise ValueError("input point is degenerately close to the boundary")
    m, zx, zy, steps = _reduce_raw(z.x, z.y)
    return ReductionResult(element=IntMatrix(((m[0], m[1]), (m[2], m[3]))),
                           reduced_point=HPoint(zx, zy), steps=steps)


def psl_canonical(m):
    """Canonical sign representative of {M, -M}, on flat 4-tuples."""
    neg = (-m[0], -m[1], -m[2], -m[3])
    return m if m >= neg else neg


def disk_radius(N: float, slack: float) -> float:
    """arccosh(N^2/2) + slack: norm-N elements displace i by the first term."""
    if N < 2:
        raise ValueError("norm bound must be >= 2")
    return math.acosh(N * N / 2.0) + slack


def sample_uniform_norm_ball(N: int, rng, slack: float = 1.0) -> IntMatrix:
    """One PSL(2,Z) element of Frobenius norm <= N, approximately uniform.

    Rejection-samples reduction candidates from the slack-padded disk; the
    residual non-uniformity decreases with slack (see uniformity_report).
    Raises RejectionRateError if essentially nothing is accepted, which
    signals a mis-sized slack.
    """
    m, _ = _sample_with_attempts(N, rng, slack)
    return IntMatrix(((m[0], m[1]), (m[2], m[3])))


def _sample_with_attempts(N, rng, slack):
    R = disk_radius(N, slack)
    n_sq = N * N
    cosh_r = math.cosh(R) - 1.0
    attempts = 0
    while True:
        attempts += 1
        u = rng.random()
        r = math.acosh(1.0 + u * cosh_r)
        theta = rng.random() * 2.0 * math.pi
        rho = math.tanh(r / 2.0)
        wx = rho * math.cos(theta)
        wy = rho * math.sin(theta)
        den = (1.0 - wx) ** 2 + wy ** 2
        m, _, _, _ = _reduce_raw(2.0 * wy / den, (1.0 - wx * wx - wy * wy) / den)
        a, b, c, d = m
        if a * a + b * b + c * c + d * d <= n_sq:
            return psl_canonical(m), attempts
        if attempts >= _MIN_ATTEMPTS_BEFORE_GIVING_UP:
            # far beyond a 0.999 rejection rate; the slack is mis-sized
            raise RejectionRateError(
                f"0 acceptances in {attempts} attempts at N={N}, slack={slack}")


def psl_norm_ball(N: int):
    """Sorted PSL(2,Z) representatives of the ball of norm <= N."""
    return sorted({psl_canonical(t) for t in iter_norm_ball(N * N)})


@dataclass(frozen=True)
class UniformityReport:
    """Empirical sampler statistics against the exact folded census."""

    N: int
    slack: float
    seed: int
    samples: int
    attempts: int
    n_cells: int
    counts: dict                  # PSL tuple -> hit count
    tv_distance: float
    chi_square: float
    acceptance_rate: float


def uniformity_report(N: int, samples: int, slack: float, seed: int) -> UniformityReport:
    """Draw ``samples`` accepted elements and compare to the exact census.

    TV and chi-square are computed against the uniform distribution on the
    +-folded norm ball enumerated exactly by the census module.  Fully
    deterministic for a fixed seed.
    """
    import random

    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    cells = psl_norm_ball(N)
    n_cells = len(cells)
    if n_cells == 0:
        raise ValueError(f"no elements of norm <= {N}")
    counts = {}
    attempts_total = 0
    for _ in range(samples):
        m, attempts = _sample_with_attempts(N, rng, slack)
        counts[m] = counts.get(m, 0) + 1
        attempts_total += attempts
    cell_set = set(cells)
    stray = sum(v for k, v in counts.items() if k not in cell_set)
    if stray:
        raise AssertionError("sampler produced an element outside the norm ball")
    expected = samples / n_cells
    tv = sum(abs(counts.get(e, 0) - expected) for e in cells) / (2.0 * samples)
    chi2 = sum((counts.get(e, 0) - expected) ** 2 / expected for e in cells)
    return UniformityReport(
        N=N, slack=slack, seed=seed, samples=samples, attempts=attempts_total,
        n_cells=n_cells, counts=counts, tv_distance=tv, chi_square=chi2,
        acceptance_rate=samples / attempts_total)
