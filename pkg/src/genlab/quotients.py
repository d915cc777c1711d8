"""Finite quotients SL(2, Z/m): orders, trace counts, CRT splitting, and the
exact push-forward of graph walks.

Groups are stored as explicit element lists (flat entry tuples reduced into
[0, m)), so every probability below is an exact ``Fraction`` and total
variation distances carry no Monte Carlo or floating-point error.

The equidistribution story: walks on a recognizing graph with vertex labels
in a finite group Γ converge to uniform on Γ unless every label sits in the
same coset of a proper normal subgroup with nontrivial abelian quotient --
equivalently, some one-dimensional character sends all labels to one complex
number != 1.  ``onedim_obstruction`` decides that condition exactly by
closing the derived subgroup together with the label differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra import IntMatrix
from .errors import BudgetExceededError
from .walks import WalkGraph

FULL_ENUMERATION_MAX_P = 31
CRT_MAX_MODULUS = 30
STATE_BUDGET = 10 ** 6
OBSTRUCTION_MAX_ORDER = 1200


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def sl2_order_formula(p: int) -> int:
    """|SL(2, Z/p)| = p(p^2 - 1) for prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p * (p * p - 1)


def _inv_mod(a: int, m: int) -> int:
    g, x = _ext_gcd_pair(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible mod {m}")
    return x % m


def _ext_gcd_pair(a: int, b: int):
    old_r, r = a, b
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    return old_r, old_s


def enumerate_sl2(m: int):
    """All (a, b, c, d) with ad - bc = 1 mod m, entries in [0, m)."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    out = []
    for a in range(m):
        g = gcd(a, m)
        for b in range(m):
            for c in range(m):
                need = (1 + b * c) % m
                if g == 1:
                    out.append((a, b, c, (_inv_mod(a, m) * need) % m))
                elif need % g == 0:
                    step = m // g
                    if g == m:  # a = 0: need bc = -1 mod m, d arbitrary
                        for d in range(m):
                            out.append((a, b, c, d))
                    else:
                        d0 = (_inv_mod((a // g) % step, step) * ((need // g) % step)) % step
                        for t in range(g):
                            out.append((a, b, c, d0 + t * step))
    return out


class FiniteMatrixGroup:
    """A finite group of n x n matrices mod m, stored as flat entry tuples."""

    def __init__(self, n: int, modulus: int, elements):
        self.n = n
        self.modulus = modulus
        self.elements = tuple(elements)
        self.identity = tuple(1 if i == j else 0
                              for i in range(n) for j in range(n))
        self._index = {e: i for i, e in enumerate(self.elements)}
        if self.identity not in self._index:
            raise ValueError("element list must contain the identity")

    @classmethod
    def sl2(cls, m: int) -> "FiniteMatrixGroup":
        if m > FULL_ENUMERATION_MAX_P:
            raise BudgetExceededError(
                f"full enumeration capped at modulus {FULL_ENUMERATION_MAX_P}")
        return cls(2, m, enumerate_sl2(m))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, e):
        return e in self._index

    def index(self, e) -> int:
        return self._index[e]

    def mul(self, x, y):
        n, m = self.n, self.modulus
        return tuple(
            sum(x[i * n + k] * y[k * n + j] for k in range(n)) % m
            for i in range(n) for j in range(n))

    def inv(self, x):
        if self.n == 2:
            a, b, c, d = x
            det = (a * d - b * c) % self.modulus
            di = _inv_mod(det, self.modulus)
            m = self.modulus
            return ((d * di) % m, (-b * di) % m, (-c * di) % m, (a * di) % m)
        # fall back to the group-theoretic inverse
        acc = x
        prev = self.identity
        while acc != self.identity:
            prev = acc
            acc = self.mul(acc, x)
        return prev

    def reduce(self, m: IntMatrix):
        """Image of an integer matrix in this group."""
        if m.n != self.n:
            raise ValueError("dimension mismatch")
        e = tuple(v % self.modulus for v in m.flat())
        if e not in self._index:
            raise ValueError("reduced matrix is not in the stored group")
        return e


class CyclicGroup:
    """Z/m with additive notation; the minimal obstruction playground."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("order must be >= 1")
        self.modulus = m
        self.elements = tuple(range(m))
        self.identity = 0

    @property
    def order(self) -> int:
        return self.modulus

    def __contains__(self, e):
        return 0 <= e < self.modulus

    def mul(self, x, y):
        return (x + y) % self.modulus

    def inv(self, x):
        return (-x) % self.modulus


def group_order(p: int) -> int:
    """p(p^2 - 1), cross-checked against exhaustive enumeration."""
    value = sl2_order_formula(p)
    if p <= FULL_ENUMERATION_MAX_P:
        enumerated = len(enumerate_sl2(p))
        if enumerated != value:
            raise AssertionError(
                f"formula {value} disagrees with enumeration {enumerated} at p={p}")
    return value


def count_trace(p: int, t: int) -> int:
    """Number of elements of SL(2, Z/p) with trace = t mod p."""
    if p > FULL_ENUMERATION_MAX_P:
        raise BudgetExceededError(f"p capped at {FULL_ENUMERATION_MAX_P}")
    t %= p
    return sum(1 for a, b, c, d in enumerate_sl2(p) if (a + d) % p == t)


def crt_split_check(N: int, M: int, n: int = 2) -> bool:
    """Verify SL(2, Z/NM) = SL(2, Z/N) x SL(2, Z/M) for coprime N, M.

    Checks the order product, the bijectivity of componentwise reduction on
    the enumerated elements, and the homomorphism property on a stride of
    element pairs.  Raises on non-coprime moduli; returns True on success.
    """
    if n != 2:
        raise ValueError("only n = 2 is supported")
    if gcd(N, M) != 1:
        raise ValueError(f"moduli {N}, {M} are not coprime")
    if N * M > CRT_MAX_MODULUS:
        raise BudgetExceededError(f"product modulus capped at {CRT_MAX_MODULUS}")
    big = enumerate_sl2(N * M)
    small_n = enumerate_sl2(N)
    small_m = enumerate_sl2(M)
    if len(big) != len(small_n) * len(small_m):
        return False
    seen = set()
    for e in big:
        pair = (tuple(v % N for v in e), tuple(v % M for v in e))
        if pair in seen:
            return False
        seen.add(pair)
    # reduction commutes with multiplication on a deterministic sample
    stride = max(1, len(big) // 64)
    sample = big[::stride]
    for x in sample[:32]:
        for y in sample[:32]:
            xy = tuple(v % (N * M) for v in _mul2(x, y, N * M))
            for mod in (N, M):
                lhs = tuple(v % mod for v in xy)
                rhs = _mul2(tuple(v % mod for v in x), tuple(v % mod for v in y), mod)
                if lhs != rhs:
                    return False
    return True


def _mul2(x, y, m):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % m, (a * f + b * h) % m,
            (c * e + d * g) % m, (c * f + d * h) % m)


@dataclass(frozen=True)
class Distribution:
    """Exact probability mass over group elements; masses sum to 1."""

    mass: dict

    def __post_init__(self):
        total = Fraction(0)
        for v in self.mass.values():
            if v < 0:
                raise ValueError("negative mass")
            total += v
        if total != 1:
            raise ValueError(f"mass sums to {total}, not 1")

    def __getitem__(self, e) -> Fraction:
        return self.mass.get(e, Fraction(0))


def tv_distance(dist: Distribution, group) -> Fraction:
    """Total variation to the uniform distribution on the whole group."""
    u = Fraction(1, group.order)
    elems = set(group.elements)
    for e in dist.mass:
        if e not in elems:
            raise ValueError("distribution has mass outside the group")
    acc = Fraction(0)
    for e in group.elements:
        acc += abs(dist.mass.get(e, Fraction(0)) - u)
    return acc / 2


def exact_walk_distribution(graph: WalkGraph, labeling: dict, k: int, group) -> Distribution:
    """Exact law of the product of vertex labels along a length-k walk.

    The walk starts in the graph's start distribution and steps uniformly
    over sorted neighbor lists; the group element of a walk is the ordered
    product of the labels of the visited vertices, start vertex included.
    Dynamic programming over (current vertex, accumulated element) with
    Fraction masses: no sampling error at any k.
    """
    if k < 1:
        raise ValueError("walk length must be >= 1")
    nv = len(graph.vertices)
    if group.order * nv > STATE_BUDGET:
        raise BudgetExceededError(
            f"state space {group.order} x {nv} exceeds {STATE_BUDGET}")
    labels = []
    for tok in graph.vertices:
        if tok not in labeling:
            raise ValueError(f"token {tok!r} has no label")
        e = labeling[tok]
        if e not in group:
            raise ValueError(f"label of {tok!r} is not a group element")
        labels.append(e)
    # product cache: (element, vertex) -> element * label(vertex)
    prod_cache = {}

    def step_product(e, v):
        key = (e, v)
        out = prod_cache.get(key)
        if out is None:
            out = group.mul(e, labels[v])
            prod_cache[key] = out
        return out

    state = {}
    for v, w in zip(graph.start_states, graph.start_distribution):
        key = (v, labels[v])
        state[key] = state.get(key, Fraction(0)) + w
    nbrs = [graph.neighbors(v) for v in range(nv)]
    for _ in range(k - 1):
        nxt = {}
        for (v, e), mass in state.items():
            share = mass / len(nbrs[v])
            for w in nbrs[v]:
                key = (w, step_product(e, w))
                nxt[key] = nxt.get(key, Fraction(0)) + share
        state = nxt
    marginal = {}
    for (v, e), mass in state.items():
        marginal[e] = marginal.get(e, Fraction(0)) + mass
    return Distribution(marginal)


def derived_subgroup(group) -> frozenset:
    """The commutator subgroup, as the closure of all pairwise commutators."""
    if group.order > OBSTRUCTION_MAX_ORDER:
        raise BudgetExceededError(
            f"derived-subgroup closure capped at order {OBSTRUCTION_MAX_ORDER}")
    comms = set()
    for x in group.elements:
        xi = group.inv(x)
        for y in group.elements:
            comms.add(group.mul(group.mul(x, y),
                                group.inv(group.mul(y, x))))
    return _closure(group, comms)


def _closure(group, generators) -> frozenset:
    gens = set(generators)
    gens.add(group.identity)
    seen = set(gens)
    frontier = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def onedim_obstruction(group, labels) -> bool:
    """Exact test for the character obstruction to equidistribution.

    Walks whose labels generate the group equidistribute unless some
    one-dimensional character sends every label to the same value != 1.
    That happens precisely when the first label lies outside the subgroup
    generated by the derived subgroup together with all label differences
    l_i * l_0^{-1} (all labels are then congruent modulo that subgroup, and
    their common image in the abelian quotient is nontrivial).
    """
    labels = list(labels)
    if not labels:
        raise ValueError("need at least one label")
    for e in labels:
        if e not in group:
            raise ValueError("label is not a group element")
    gens = set(derived_subgroup(group))
    base_inv = group.inv(labels[0])
    for e in labels[1:]:
        gens.add(group.mul(e, base_inv))
    kstar = _closure(group, gens)
    return labels[0] not in kstar
