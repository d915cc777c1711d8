"""Exhaustive Frobenius-norm census of SL(2,Z).

An element [[a, b], [c, d]] with ad - bc = 1 is measured by the squared
Frobenius norm a^2 + b^2 + c^2 + d^2, always compared against a squared
bound so that no square root is ever taken.

Enumeration strategy: the first column (a, c) of an SL(2,Z) matrix is a
primitive vector, and for fixed (a, c) the second columns form the line
(b, d) = (b0 + t*a, d0 + t*c) through one Bezout solution.  Intersecting
that line with the residual norm budget is a quadratic inequality in t, so
each matrix is produced exactly once and the whole ball costs
O(bound^2 + output) instead of a four-fold loop.

Two independent counts of the trace +-2 (parabolic) elements are provided:
one reads them off the column enumeration, the other counts integer points
(B, C, D) with C^2 = B^2 + D^2, D even, C^2 <= bound^2 - 2, which correspond
bijectively to the parabolic matrices through the linear change of variables
A = a + d, B = b + c, C = b - c, D = a - d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .algebra import IntMatrix, char_poly
from .errors import BudgetExceededError

ENUMERATION_MAX_K = 2000


@dataclass(frozen=True)
class CensusRecord:
    """Counts for the ball of squared norm <= norm_sq_bound."""

    k: int                # the requested bound (norm <= k)
    norm_sq_bound: int
    total: int
    parabolic: int        # trace in {+2, -2}; includes +-I and all +-L^n, +-U^n

    @property
    def reducible(self) -> int:
        # the characteristic polynomial of M in SL(2,Z) factors over Z
        # exactly when |tr M| = 2, so these counts coincide
        return self.parabolic

    @property
    def parabolic_ratio(self) -> Fraction:
        if self.total == 0:
            raise ValueError("empty census has no ratio")
        return Fraction(self.parabolic, self.total)


@dataclass(frozen=True)
class ABCDQuad:
    """Linear reparametrization A = a+d, B = b+c, C = b-c, D = a-d.

    For a determinant-1 matrix these satisfy A^2 + C^2 - B^2 - D^2 = 4 with
    A = D and B = C mod 2, and the map is a bijection onto such quadruples.
    """

    A: int
    B: int
    C: int
    D: int

    def __post_init__(self):
        if self.A * self.A + self.C * self.C - self.B * self.B - self.D * self.D != 4:
            raise ValueError("quadruple does not satisfy A^2 + C^2 - B^2 - D^2 = 4")
        if (self.A - self.D) % 2 != 0 or (self.B - self.C) % 2 != 0:
            raise ValueError("parity constraints A = D, B = C (mod 2) violated")

    def to_matrix(self) -> IntMatrix:
        a = (self.A + self.D) // 2
        d = (self.A - self.D) // 2
        b = (self.B + self.C) // 2
        c = (self.B - self.C) // 2
        return IntMatrix(((a, b), (c, d)))


def abcd_transform(m: IntMatrix) -> ABCDQuad:
    """Reparametrize a determinant-1 2x2 matrix; A is the trace."""
    if m.n != 2:
        raise ValueError("expected a 2x2 matrix")
    (a, b), (c, d) = m.rows
    if a * d - b * c != 1:
        raise ValueError("determinant must be 1")
    return ABCDQuad(a + d, b + c, b - c, a - d)


def _ext_gcd(a: int, b: int):
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _t_range(A2: int, B2: int, C2: int):
    """Integer solutions of A2 t^2 + 2 B2 t + C2 <= 0 (A2 > 0), or None.

    isqrt only approximates the roots, so the candidates get a short exact
    scan; the window always contains the true endpoints.
    """
    disc = B2 * B2 - A2 * C2
    if disc < 0:
        return None
    s = isqrt(disc)
    lo = None
    start = -((B2 + s) // A2) - 2
    for t in range(start, start + 5):
        if A2 * t * t + 2 * B2 * t + C2 <= 0:
            lo = t
            break
    if lo is None:
        return None
    hi = None
    start = (s - B2) // A2 + 2
    for t in range(start, start - 5, -1):
        if A2 * t * t + 2 * B2 * t + C2 <= 0:
            hi = t
            break
    if hi is None or hi < lo:
        return None
    return lo, hi


def _columns(norm_sq_bound: int):
    """Primitive first columns (a, c) with their Bezout second column.

    Yields (a, c, b0, d0, t_lo, t_hi): the matrices with first column (a, c)
    inside the ball are exactly [[a, b0 + t*a], [c, d0 + t*c]] for t in
    [t_lo, t_hi].
    """
    amax = isqrt(norm_sq_bound)
    for a in range(-amax, amax + 1):
        ra = norm_sq_bound - a * a
        cmax = isqrt(ra)
        for c in range(-cmax, cmax + 1):
            if gcd(a, c) != 1:
                continue
            rem = ra - c * c
            _, x, y = _ext_gcd(a, c)
            d0, b0 = x, -y          # a*d0 - c*b0 = 1
            tr = _t_range(a * a + c * c, a * b0 + c * d0,
                          b0 * b0 + d0 * d0 - rem)
            if tr is None:
                continue
            yield a, c, b0, d0, tr[0], tr[1]


def iter_norm_ball(norm_sq_bound) -> "iter":
    """Yield every (a, b, c, d) in SL(2,Z) with a^2+b^2+c^2+d^2 <= bound, once.

    The bound may be any nonnegative integer (or Fraction; only its floor
    matters since squared norms are integers).
    """
    bound = int(norm_sq_bound)
    if bound < 0:
        return
    for a, c, b0, d0, t_lo, t_hi in _columns(bound):
        for t in range(t_lo, t_hi + 1):
            yield a, b0 + t * a, c, d0 + t * c


def enumerate_norm_ball(k: int):
    """Stream of IntMatrix over the ball of Frobenius norm <= k."""
    if k > ENUMERATION_MAX_K:
        raise BudgetExceededError(f"k={k} exceeds the enumeration budget {ENUMERATION_MAX_K}")
    for a, b, c, d in iter_norm_ball(k * k):
        yield IntMatrix(((a, b), (c, d)))


def _census_columns(norm_sq_bound: int, a_lo: int, a_hi: int):
    """(total, parabolic) contributed by first columns with a in [a_lo, a_hi]."""
    total = 0
    para = 0
    for a in range(a_lo, a_hi + 1):
        ra = norm_sq_bound - a * a
        if ra < 0:
            continue
        cmax = isqrt(ra)
        for c in range(-cmax, cmax + 1):
            if gcd(a, c) != 1:
                continue
            rem = ra - c * c
            _, x, y = _ext_gcd(a, c)
            d0, b0 = x, -y
            tr = _t_range(a * a + c * c, a * b0 + c * d0,
                          b0 * b0 + d0 * d0 - rem)
            if tr is None:
                continue
            t_lo, t_hi = tr
            total += t_hi - t_lo + 1
            if c == 0:
                # (a, c) = (+-1, 0): the whole family is +-(upper unipotent)
                para += t_hi - t_lo + 1
            else:
                for target in (2, -2):
                    num = target - a - d0
                    if num % c == 0 and t_lo <= num // c <= t_hi:
                        para += 1
    return total, para


def census(k: int, workers: int = 1) -> CensusRecord:
    """Exact ball counts at norm <= k without materializing the elements."""
    if k > ENUMERATION_MAX_K:
        raise BudgetExceededError(f"k={k} exceeds the enumeration budget {ENUMERATION_MAX_K}")
    norm_sq = k * k
    amax = isqrt(norm_sq) if norm_sq >= 0 else -1
    if workers <= 1 or amax < 0:
        total, para = _census_columns(norm_sq, -amax, amax)
    else:
        from concurrent.futures import ThreadPoolExecutor

        span = 2 * amax + 1
        bounds = [(-amax + i * span // workers, -amax + (i + 1) * span // workers - 1)
                  for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda b: _census_columns(norm_sq, b[0], b[1]), bounds))
        total = sum(p[0] for p in parts)
        para = sum(p[1] for p in parts)
    return CensusRecord(k=k, norm_sq_bound=norm_sq, total=total, parabolic=para)


def census_norm_sq(norm_sq_bound: int) -> CensusRecord:
    """Census against an explicit squared-norm bound (handles non-integer k)."""
    bound = int(norm_sq_bound)
    amax = isqrt(bound) if bound >= 0 else -1
    total, para = _census_columns(bound, -amax, amax) if amax >= 0 else (0, 0)
    return CensusRecord(k=isqrt(bound), norm_sq_bound=bound, total=total, parabolic=para)


def count_parabolic(k: int) -> int:
    """Number of elements with trace +-2 and norm <= k, by full enumeration."""
    return census(k).parabolic


def _spf_sieve(n: int):
    spf = list(range(n + 1))
    for i in range(2, isqrt(n) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _hypotenuse_representations(C: int, spf) -> int:
    """Number of (B, D) in Z^2 with B^2 + D^2 = C^2 and D even, for C >= 1.

    The total count of representations of C^2 is 4 * prod (2 e_p + 1) over
    the primes p = 1 (mod 4) dividing C.  When C is odd exactly one of B, D
    is even in each representation, so half of them have D even; when C is
    even both are even, so all of them do.
    """
    m = C
    f = 1
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if p % 4 == 1:
            f *= 2 * e + 1
    r2 = 4 * f
    return r2 if C % 2 == 0 else r2 // 2


def pythagorean_parabolic_count(k: int) -> int:
    """Trace +-2 count via integer points on C^2 = B^2 + D^2.

    A parabolic matrix with trace +2 corresponds, through the (A, B, C, D)
    change of variables, to a solution of C^2 = B^2 + D^2 with D even; its
    squared norm is 2 + C^2.  The trace -2 elements double the count (the
    map M -> -M), which is the final factor of two below.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lim = k * k - 2
    if lim < 0:
        return 0
    cmax = isqrt(lim)
    spf = _spf_sieve(max(cmax, 1))
    tot = 1  # C = 0 contributes only B = D = 0, i.e. the identity
    for C in range(1, cmax + 1):
        tot += 2 * _hypotenuse_representations(C, spf)  # C and -C
    return 2 * tot


def parabolic_counts_to(k_max: int) -> list:
    """count_parabolic(k) for every k = 0..k_max from one enumeration pass.

    Each parabolic element is bucketed at the smallest integer k whose ball
    contains it; the cumulative sums are the per-k counts.
    """
    if k_max > ENUMERATION_MAX_K:
        raise BudgetExceededError(f"k_max={k_max} exceeds {ENUMERATION_MAX_K}")
    buckets = [0] * (k_max + 1)
    norm_sq = k_max * k_max
    for a, c, b0, d0, t_lo, t_hi in _columns(norm_sq):
        if c == 0:
            ts = range(t_lo, t_hi + 1)
        else:
            ts = []
            for target in (2, -2):
                num = target - a - d0
                if num % c == 0 and t_lo <= num // c <= t_hi:
                    ts.append(num // c)
        for t in ts:
            b = b0 + t * a
            d = d0 + t * c
            nsq = a * a + b * b + c * c + d * d
            kmin = isqrt(nsq)
            if kmin * kmin < nsq:
                kmin += 1
            if kmin <= k_max:
                buckets[kmin] += 1
    out = []
    acc = 0
    for k in range(k_max + 1):
        acc += buckets[k]
        out.append(acc)
    return out


def pythagorean_counts_to(k_max: int) -> list:
    """pythagorean_parabolic_count(k) for every k = 0..k_max, one sieve pass."""
    lim = k_max * k_max - 2
    cmax = isqrt(lim) if lim >= 0 else -1
    buckets = [0] * (k_max + 1)
    if cmax >= 0:
        spf = _spf_sieve(max(cmax, 1))
        for C in range(0, cmax + 1):
            cnt = 1 if C == 0 else 2 * _hypotenuse_representations(C, spf)
            nsq = C * C + 2
            kmin = isqrt(nsq)
            if kmin * kmin < nsq:
                kmin += 1
            if kmin <= k_max:
                buckets[kmin] += 2 * cnt
    out = []
    acc = 0
    for k in range(k_max + 1):
        acc += buckets[k]
        out.append(acc)
    return out


def is_reducible_over_z(m: IntMatrix) -> bool:
    """Whether the characteristic polynomial of a 2x2 det-1 matrix factors over Z.

    Decided by the rational-root test at +-1: x^2 - t x + 1 has integer roots
    exactly when it vanishes at 1 or -1.
    """
    chi = char_poly(m)
    return chi(1) == 0 or chi(-1) == 0


def reducible_density(k: int, verify_elements: bool = False) -> Fraction:
    """parabolic / total at norm <= k, as an exact rational.

    With verify_elements=True, walks the ball and checks element by element
    that the characteristic polynomial factors over Z exactly when the trace
    is +-2, raising if a single exception is found.
    """
    rec = census(k)
    if rec.total == 0:
        raise ValueError(f"no elements at norm <= {k}")
    if verify_elements:
        for a, b, c, d in iter_norm_ball(k * k):
            m = IntMatrix(((a, b), (c, d)))
            if is_reducible_over_z(m) != (abs(a + d) == 2):
                raise AssertionError(f"reducibility/trace mismatch at {(a, b, c, d)}")
    return rec.parabolic_ratio
