"""Recognizing graphs for walk models, and word-length statistics.

A ``WalkGraph`` is an undirected graph (loops allowed) whose vertices carry
generator tokens; the walks of length k, started from a designated set of
start states, spell the words of a language:

* the complete graph with a loop at every vertex spells the free monoid,
* the complete graph minus the inverse pairs spells the reduced words of a
  free group,
* the block graphs built for the free products C_p * C_q spell their normal
  forms.

"Property R" for an undirected recognizing graph means its adjacency matrix
has a unique eigenvalue of maximal modulus.  For symmetric adjacency this is
exactly connected + non-bipartite, so the verdict is decided combinatorially
and exactly; a floating-point spectral check lives in the test suite only.

The second half of the module handles word lengths over the generator pair
L = [[1,0],[1,1]], U = [[1,1],[0,1]]: a matrix in the nonnegative monoid
factors uniquely as U^{a0} L^{a1} U^{a2} ..., the exponents are continued
fraction partial quotients, and the word length is their sum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import GEN_L, GEN_S, GEN_U, IntMatrix


@dataclass(frozen=True)
class WalkGraph:
    """Undirected labeled graph with start states.

    ``edges`` holds normalized pairs (i, j) with i <= j; (i, i) is a loop.
    ``start_distribution`` is a tuple of Fractions over ``start_states``
    summing to exactly 1.
    """

    vertices: tuple
    edges: frozenset
    start_states: tuple
    start_distribution: tuple

    def __post_init__(self):
        n = len(self.vertices)
        if n == 0:
            raise ValueError("graph needs at least one vertex")
        if len(set(self.vertices)) != n:
            raise ValueError("vertex tokens must be distinct")
        norm = frozenset((min(i, j), max(i, j)) for i, j in self.edges)
        for i, j in norm:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("edge endpoint out of range")
        object.__setattr__(self, "edges", norm)
        if not self.start_states:
            raise ValueError("need at least one start state")
        dist = tuple(Fraction(w) for w in self.start_distribution)
        if len(dist) != len(self.start_states) or any(w < 0 for w in dist):
            raise ValueError("start distribution malformed")
        if sum(dist) != 1:
            raise ValueError("start distribution must sum to 1")
        object.__setattr__(self, "start_distribution", dist)
        nbrs = [set() for _ in range(n)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        object.__setattr__(self, "_nbrs", tuple(tuple(sorted(s)) for s in nbrs))
        reachable = self._reachable_from(set(self.start_states))
        if len(reachable) != n:
            raise ValueError("every vertex must be reachable from a start state")

    def _reachable_from(self, seeds):
        seen = set(seeds)
        frontier = list(seeds)
        while frontier:
            v = frontier.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    def neighbors(self, i: int) -> tuple:
        """Sorted neighbor list; a loop contributes the vertex itself once."""
        return self._nbrs[i]

    def adjacency_matrix(self) -> IntMatrix:
        n = len(self.vertices)
        rows = [[0] * n for _ in range(n)]
        for i, j in self.edges:
            rows[i][j] = 1
            rows[j][i] = 1
        return IntMatrix(tuple(tuple(r) for r in rows))

    def token_index(self, token: str) -> int:
        return self.vertices.index(token)

    def to_json(self) -> str:
        return json.dumps({
            "vertices": list(self.vertices),
            "edges": sorted(list(e) for e in self.edges),
            "start": list(self.start_states),
        })

    @classmethod
    def from_json(cls, text: str) -> "WalkGraph":
        data = json.loads(text)
        starts = tuple(data["start"])
        unif = Fraction(1, len(starts))
        return cls(tuple(data["vertices"]),
                   frozenset(tuple(e) for e in data["edges"]),
                   starts, tuple(unif for _ in starts))


@dataclass(frozen=True)
class Word:
    """A walk transcript: the tokens of the visited vertices, in order."""

    tokens: tuple

    @property
    def length(self) -> int:
        return len(self.tokens)


def _uniform_starts(n: int):
    return tuple(range(n)), tuple(Fraction(1, n) for _ in range(n))


def build_free_monoid_graph(tokens) -> WalkGraph:
    """Complete graph with a loop at every vertex: walks spell all words."""
    tokens = tuple(tokens)
    if not tokens:
        raise ValueError("token list must be nonempty")
    n = len(tokens)
    edges = frozenset((i, j) for i in range(n) for j in range(i, n))
    starts, dist = _uniform_starts(n)
    return WalkGraph(tokens, edges, starts, dist)


def build_free_group_graph(rank: int = 2) -> WalkGraph:
    """Reduced-word automaton: all pairs adjacent except each generator and
    its inverse, loops everywhere.  Tokens: a, A, b, B, ... with capitals the
    inverses."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    letters = "abcdefgh"
    if rank > len(letters):
        raise ValueError("rank too large")
    tokens = []
    for i in range(rank):
        tokens += [letters[i], letters[i].upper()]
    n = 2 * rank
    forbidden = {(2 * i, 2 * i + 1) for i in range(rank)}
    edges = frozenset((i, j) for i in range(n) for j in range(i, n)
                      if (i, j) not in forbidden)
    starts, dist = _uniform_starts(n)
    return WalkGraph(tuple(tokens), edges, starts, dist)


def build_free_product_graph(p: int, q: int):
    """(naive, improved) recognizing graphs for C_p * C_q.

    The naive graph has the p+q-2 vertices T, .., T^{p-1}, S, .., S^{q-1}
    with every T-power adjacent to every S-power and no loops; it is
    bipartite, which the property-R check below will flag.  The improved
    graph has the (p-1)(q-1) block tokens S^i T^j, pairwise adjacent with
    loops (consecutive blocks in a normal form are unconstrained), and the
    q-1 start states S^i T^1, uniformly weighted.
    """
    if p < 2 or q < 2:
        raise ValueError("need p, q >= 2")
    t_tokens = [f"T{i}" if i > 1 else "T" for i in range(1, p)]
    s_tokens = [f"S{j}" if j > 1 else "S" for j in range(1, q)]
    tokens = tuple(t_tokens + s_tokens)
    nt = len(t_tokens)
    edges = frozenset((i, nt + j) for i in range(nt) for j in range(len(s_tokens)))
    starts, dist = _uniform_starts(len(tokens))
    naive = WalkGraph(tokens, edges, starts, dist)

    blocks = tuple(f"S{i}T{j}" for i in range(1, q) for j in range(1, p))
    nb = len(blocks)
    block_edges = frozenset((i, j) for i in range(nb) for j in range(i, nb))
    start_states = tuple(i * (p - 1) for i in range(q - 1))  # the S^i T^1 column
    unif = Fraction(1, len(start_states))
    improved = WalkGraph(blocks, block_edges, start_states,
                         tuple(unif for _ in start_states))
    return naive, improved


PROPERTY_R_HOLDS = "holds"
PROPERTY_R_FAILS_BIPARTITE = "fails_bipartite"
PROPERTY_R_FAILS_DISCONNECTED = "fails_disconnected"


def check_property_R(g: WalkGraph) -> str:
    """Unique max-modulus adjacency eigenvalue, decided combinatorially.

    For a symmetric 0/1 adjacency matrix this is the Perron-Frobenius
    primitivity condition: the graph must be connected and non-bipartite.
    The verdict names the failure when there is one.
    """
    n = len(g.vertices)
    color = {0: 0}
    frontier = [0]
    bipartite = True
    while frontier:
        v = frontier.pop()
        for w in g.neighbors(v):
            if w not in color:
                color[w] = 1 - color[v]
                frontier.append(w)
            elif color[w] == color[v]:
                bipartite = False  # odd cycle (a loop gives w == v here)
    if len(color) != n:
        return PROPERTY_R_FAILS_DISCONNECTED
    if bipartite:
        return PROPERTY_R_FAILS_BIPARTITE
    return PROPERTY_R_HOLDS


def sample_walk(g: WalkGraph, k: int, rng) -> Word:
    """One random walk transcript of length k.

    The start vertex is drawn from the start distribution; every later step
    is uniform over the (sorted) neighbor list of the current vertex, with a
    loop counting once.  Deterministic given a seeded rng.
    """
    if k < 1:
        raise ValueError("walk length must be >= 1")
    r = rng.random()
    acc = Fraction(0)
    v = g.start_states[-1]
    for state, w in zip(g.start_states, g.start_distribution):
        acc += w
        if r < acc:
            v = state
            break
    tokens = [g.vertices[v]]
    for _ in range(k - 1):
        nbrs = g.neighbors(v)
        v = nbrs[rng.randrange(len(nbrs))]
        tokens.append(g.vertices[v])
    return Word(tuple(tokens))


def count_walks(g: WalkGraph, length: int) -> int:
    """Number of length-k walks from the start states (transfer matrix)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    counts = [0] * len(g.vertices)
    for v in g.start_states:
        counts[v] += 1
    for _ in range(length - 1):
        nxt = [0] * len(g.vertices)
        for v, c in enumerate(counts):
            if c:
                for w in g.neighbors(v):
                    nxt[w] += c
        counts = nxt
    return sum(counts)


# ---------------------------------------------------------------------------
# Word length over {L, U} and continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LUWord:
    """Factorization M = sign * S^left * (U^{a0} L^{a1} ...) * S^right.

    ``exponents`` lists the alternating monoid factors as (generator, power)
    pairs with positive powers; ``length`` is their sum, which for matrices
    in the nonnegative cone (trivial transform) is the {L, U} word length.
    The transform fields record which symmetry moved the input into the
    nonnegative monoid:

        sign  in {1, -1}      M was negated,
        left  in {0, 1}       M was multiplied by S^{-1} on the left,
        right in {0, 1}       ... by S^{-1} on the right.
    """

    exponents: tuple
    sign: int = 1
    left: int = 0
    right: int = 0

    @property
    def length(self) -> int:
        return sum(e for _, e in self.exponents)

    def monoid_matrix(self) -> IntMatrix:
        m = IntMatrix.identity(2)
        for gen, e in self.exponents:
            m = m * ((GEN_U if gen == "U" else GEN_L) ** e)
        return m

    def matrix(self) -> IntMatrix:
        m = self.monoid_matrix()
        if self.left:
            m = GEN_S * m
        if self.right:
            m = m * GEN_S
        return m if self.sign == 1 else -m


def _monoid_factor(a: int, b: int, c: int, d: int):
    """Greedy right-stripping of a nonnegative det-1 matrix into L/U powers.

    Subtracting the smaller column from the larger is the matrix form of the
    Euclidean algorithm; for entries b/d in the positivity cone the stripped
    exponents are exactly the continued fraction partial quotients of b/d.
    Returns the alternating (generator, exponent) list or None if stuck.
    """
    exps = []
    big = 10 ** 30  # stand-in for infinity when a column entry is 0
    while (a, b, c, d) != (1, 0, 0, 1):
        if b >= a and d >= c and (a or c):
            q1 = b // a if a else big
            q2 = d // c if c else big
            q = min(q1, q2)
            if q == 0:
                return None
            b -= q * a
            d -= q * c
            exps.append(("U", q))
        elif a >= b and c >= d and (b or d):
            q1 = a // b if b else big
            q2 = c // d if d else big
            q = min(q1, q2)
            if q == 0:
                return None
            a -= q * b
            c -= q * d
            exps.append(("L", q))
        else:
            return None
    exps.reverse()
    return tuple(exps)


_S_INV = IntMatrix(((0, 1), (-1, 0)))


def word_length_LU(m: IntMatrix) -> LUWord:
    """Factor a det-1 matrix through the nonnegative {L, U} monoid.

    Matrices with all entries >= 0 factor directly and the result's length
    is their true {L, U} word length.  Anything else is pushed into the
    nonnegative cone by the case table

        sign in {1, -1}, left/right multiplication by S^{-1} in {0, 1},

    tried in that fixed order; the reported exponents then describe the
    monoid core, with the applied transform recorded on the result.  Raises
    if no combination lands in the monoid.
    """
    if m.n != 2:
        raise ValueError("expected a 2x2 matrix")
    (a, b), (c, d) = m.rows
    if a * d - b * c != 1:
        raise ValueError("determinant must be 1")
    for sign in (1, -1):
        for left in (0, 1):
            for right in (0, 1):
                n = m if sign == 1 else -m
                if left:
                    n = _S_INV * n
                if right:
                    n = n * _S_INV
                (na, nb), (nc, nd) = n.rows
                if na < 0 or nb < 0 or nc < 0 or nd < 0:
                    continue
                exps = _monoid_factor(na, nb, nc, nd)
                if exps is not None:
                    return LUWord(exps, sign=sign, left=left, right=right)
    raise ValueError("matrix is outside every handled cone")


def cf_expansion(p: int, q: int) -> list:
    """Continued fraction partial quotients of p/q (q > 0), canonical form.

    Plain Euclidean division, so the final quotient is >= 2 whenever the
    expansion has more than one term; common factors of p and q cancel.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    out = []
    while q:
        out.append(p // q)
        p, q = q, p % q
    return out


def cf_sum(p: int, q: int) -> int:
    """Sum of the continued fraction partial quotients of p/q, 0 < p < q.

    The expansion is [0; a1, ..., ar]; the leading 0 contributes nothing, so
    this is just the sum of the Euclidean quotients of q by p.
    """
    if not 0 < p < q:
        raise ValueError("need 0 < p < q")
    s = 0
    while p:
        s += q // p
        q, p = p, q % p
    return s


def cf_sum_statistics(qs) -> dict:
    """Mean of cf_sum(p, q) over 0 < p < q, per q, as exact Fractions."""
    out = {}
    for q in qs:
        if q > 10 ** 5:
            raise ValueError("q exceeds the documented 1e5 budget")
        if q < 2:
            raise ValueError("q must be >= 2")
        total = sum(cf_sum(p, q) for p in range(1, q))
        out[q] = Fraction(total, q - 1)
    return out
