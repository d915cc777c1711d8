"""Certificates from factorization patterns of integer polynomials mod p.

The three verdict-producing routines are one-sided sieves:

* ``certify_irreducible`` -- irreducibility mod a single prime certifies
  irreducibility over Z; reducibility is only ever reported constructively
  (an integer root in hand).
* ``casson_certificate`` -- a square integer matrix is certified when its
  characteristic polynomial is irreducible (witnessed), not a product of
  cyclotomics, and not a polynomial in x^k for any k >= 2.
* ``galois_full_symmetric_certificate`` -- the Galois group of a squarefree
  monic polynomial is pinned to the full symmetric group from three witness
  patterns: an n-cycle {n}, a degree-(n-1) factor {1, n-1}, and a pattern
  with a single 2 and distinct odd parts (a transposition after an odd
  power).  Squarefree patterns are Frobenius cycle types; primes dividing
  the discriminant are detected and excluded from the inference.

``unknown`` is always a possible outcome: x^4 + 1 factors modulo every
prime while staying irreducible over Z, and no pattern scan will ever say
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .algebra import IntMatrix, IntPolynomial, char_poly

DEFAULT_PRIME_BUDGET = 200
_ROOT_SCAN_LIMIT = 10 ** 12


def primes_up_to(n: int) -> list:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


# ---------------------------------------------------------------------------
# dense polynomial arithmetic mod p (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = (a[i] * inv_lead) % p
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] = (a[i - db + j] - c * y) % p
    return _trim(q), _trim(a[:db])


def _pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [(x * inv) % p for x in a]


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    return _pmonic(a, p)


def _pderiv(a, p):
    return _trim([(i * x) % p for i, x in enumerate(a)][1:])


def _ppow_p(base, mod_poly, p):
    """base^p mod mod_poly over F_p (square and multiply on the exponent)."""
    result = [1]
    acc = list(base)
    e = p
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, acc, p), mod_poly, p)[1]
        e >>= 1
        if e:
            acc = _pdivmod(_pmul(acc, acc, p), mod_poly, p)[1]
    return result


def _ddf_degrees(s, p):
    """Degrees of the irreducible factors of a squarefree s, one entry each."""
    degrees = []
    f = list(s)
    h = [0, 1]  # the polynomial x
    if len(f) - 1 >= 1:
        h = _pdivmod(h, f, p)[1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppow_p(h, f, p)          # now x^(p^d) mod f
        diff = list(h) + [0] * (2 - len(h))
        diff[1] = (diff[1] - 1) % p   # h - x
        g = _pgcd(_trim(diff), f, p)
        if len(g) - 1 > 0:
            degrees.extend([d] * ((len(g) - 1) // d))
            f = _pdivmod(f, g, p)[0]
            h = _pdivmod(h, f, p)[1] if len(f) - 1 >= 1 else [0]
    if len(f) - 1 > 0:
        degrees.append(len(f) - 1)
    return degrees


def _factor_degrees(f, p):
    """Degrees (with multiplicity) of the full factorization of f over F_p."""
    f = _pmonic(list(f), p)
    if len(f) - 1 <= 0:
        return []
    deriv = _pderiv(f, p)
    if not deriv:
        # f = g(x^p) = g(x)^p over F_p: recurse and repeat p times
        g = f[::p]
        return sorted(_factor_degrees(g, p) * p)
    g = _pgcd(f, deriv, p)
    if len(g) - 1 == 0:
        return sorted(_ddf_degrees(f, p))
    s = _pdivmod(f, g, p)[0]          # product of the distinct factors
    rest = _pdivmod(f, s, p)[0]
    return sorted(_ddf_degrees(s, p) + _factor_degrees(rest, p))


@dataclass(frozen=True)
class FactorPattern:
    """Degrees of the factorization of f mod p, with multiplicity.

    When ``squarefree`` holds the multiset is the cycle type of Frobenius at
    p; otherwise p divides the discriminant and the pattern must not be used
    for Galois inference.
    """

    p: int
    degrees: tuple
    squarefree: bool


def factor_pattern_mod_p(f: IntPolynomial, p: int) -> FactorPattern:
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    if p < 2 or not _is_prime(p):
        raise ValueError("p must be prime")
    coeffs = f.mod_coeffs(p)
    deriv = _pderiv(coeffs, p)
    sq = bool(deriv) and len(_pgcd(coeffs, deriv, p)) - 1 == 0
    return FactorPattern(p=p, degrees=tuple(_factor_degrees(coeffs, p)), squarefree=sq)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# irreducibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrreducibilityResult:
    status: str                  # "irreducible" | "reducible" | "unknown"
    witness_prime: int = None
    root: int = None
    note: str = ""


def _integer_roots(f: IntPolynomial):
    """Integer roots of f, searched among divisors of the constant term."""
    if f.is_zero() or f.degree < 1:
        return []
    c0 = f.coeffs[0]
    if c0 == 0:
        return [0]
    roots = []
    a0 = abs(c0)
    if a0 <= _ROOT_SCAN_LIMIT:
        divisors = set()
        for d in range(1, isqrt(a0) + 1):
            if a0 % d == 0:
                divisors.add(d)
                divisors.add(a0 // d)
    else:
        divisors = {d for d in range(1, 1001) if a0 % d == 0}
    for d in sorted(divisors):
        for r in (d, -d):
            if f(r) == 0:
                roots.append(r)
    return roots


def certify_irreducible(f: IntPolynomial,
                        prime_budget: int = DEFAULT_PRIME_BUDGET) -> IrreducibilityResult:
    """One-sided irreducibility certificate over Z for a monic polynomial.

    Irreducibility mod any prime not dividing the discriminant... in fact mod
    any prime at all certifies irreducibility over Z for monic f, so the
    first prime whose pattern is the single block {deg f} is returned as the
    witness.  Reducibility is reported only with an integer root in hand
    (or, for degree 2 with constant term 1, the trace test |t| = 2, which is
    the same root search).  Everything else is "unknown".
    """
    if not f.is_monic() or f.degree < 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    n = f.degree
    if n == 1:
        return IrreducibilityResult("irreducible", note="degree 1")
    roots = _integer_roots(f)
    if roots:
        return IrreducibilityResult("reducible", root=roots[0])
    for p in primes_up_to(prime_budget):
        pat = factor_pattern_mod_p(f, p)
        if pat.squarefree and pat.degrees == (n,):
            return IrreducibilityResult("irreducible", witness_prime=p)
    return IrreducibilityResult("unknown",
                                note=f"no irreducible reduction for p <= {prime_budget}")


# ---------------------------------------------------------------------------
# cyclotomic products and power substitutions
# ---------------------------------------------------------------------------

def _euler_phi(m: int) -> int:
    out = m
    mm = m
    p = 2
    while p * p <= mm:
        if mm % p == 0:
            out -= out // p
            while mm % p == 0:
                mm //= p
        p += 1
    if mm > 1:
        out -= out // mm
    return out


def cyclotomic_indices(n: int) -> list:
    """All m with phi(m) <= n.  phi(m) >= sqrt(m/2), so m <= 2 n^2 suffices."""
    return [m for m in range(1, 2 * n * n + 3) if _euler_phi(m) <= n]


def is_cyclotomic_product(f: IntPolynomial) -> bool:
    """Exact test: is f a product of cyclotomic polynomials?

    Trial division by every candidate Phi_m with phi(m) <= remaining degree;
    the candidate list is finite, so this terminates with a definite answer.
    """
    if not f.is_monic():
        raise ValueError("polynomial must be monic")
    if f.degree >= 1 and f.coeffs[0] == 0:
        raise ValueError("zero constant term")
    g = f
    while g.degree > 0:
        hit = False
        for m in cyclotomic_indices(g.degree):
            phi_m = IntPolynomial.cyclotomic(m)
            if phi_m.degree <= g.degree and phi_m.divides(g):
                g = g.divmod_monic(phi_m)[0]
                hit = True
                break
        if not hit:
            return False
    return True


def is_power_substitution(f: IntPolynomial):
    """Smallest k >= 2 with f(x) = g(x^k) for some g, else None."""
    n = f.degree
    if n < 2:
        return None
    for k in range(2, n + 1):
        if n % k != 0:
            continue
        if all(c == 0 for i, c in enumerate(f.coeffs) if i % k != 0):
            return k
    return None


# ---------------------------------------------------------------------------
# Casson-style pseudo-Anosov certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CassonCertificate:
    """Verdict plus the evidence trail for each of the three conditions."""

    verdict: str                      # "certified" | "rejected" | "unknown"
    char_polynomial: IntPolynomial
    reason: str = ""
    irreducible_witness: int = None
    noncyclotomic_evidence: tuple = ()
    nonpower_evidence: tuple = ()


def casson_certificate(m: IntMatrix,
                       prime_budget: int = DEFAULT_PRIME_BUDGET) -> CassonCertificate:
    """Certify a matrix through its characteristic polynomial.

    certified  -- chi irreducible (mod-p witness recorded), not a product of
                  cyclotomics, and not of the form g(x^k) with k >= 2;
    rejected   -- one of the three conditions constructively fails;
    unknown    -- no rejection found but irreducibility not witnessed within
                  the prime budget.
    """
    chi = char_poly(m)
    cyclo_indices = tuple(cyclotomic_indices(chi.degree))
    power_candidates = tuple(k for k in range(2, chi.degree + 1)
                             if chi.degree % k == 0)
    irr = certify_irreducible(chi, prime_budget)
    if irr.status == "reducible":
        return CassonCertificate("rejected", chi,
                                 reason=f"characteristic polynomial has integer root {irr.root}",
                                 noncyclotomic_evidence=cyclo_indices,
                                 nonpower_evidence=power_candidates)
    if chi.coeffs[0] != 0 and is_cyclotomic_product(chi):
        return CassonCertificate("rejected", chi,
                                 reason="characteristic polynomial is a cyclotomic product",
                                 noncyclotomic_evidence=cyclo_indices,
                                 nonpower_evidence=power_candidates)
    k = is_power_substitution(chi)
    if k is not None:
        return CassonCertificate("rejected", chi,
                                 reason=f"characteristic polynomial is a polynomial in x^{k}",
                                 noncyclotomic_evidence=cyclo_indices,
                                 nonpower_evidence=power_candidates)
    if irr.status == "irreducible":
        return CassonCertificate("certified", chi,
                                 irreducible_witness=irr.witness_prime,
                                 noncyclotomic_evidence=cyclo_indices,
                                 nonpower_evidence=power_candidates)
    return CassonCertificate("unknown", chi,
                             reason=irr.note,
                             noncyclotomic_evidence=cyclo_indices,
                             nonpower_evidence=power_candidates)


# ---------------------------------------------------------------------------
# full-symmetric Galois certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaloisWitness:
    p: int
    degrees: tuple
    role: str          # "n_cycle" | "two_transitive" | "transposition"


@dataclass(frozen=True)
class GaloisCertificate:
    verdict: str                   # "full_symmetric" | "unknown"
    degree: int
    witnesses: tuple = ()


def _is_transposition_pattern(degrees, n: int) -> bool:
    evens = [d for d in degrees if d % 2 == 0]
    odds = [d for d in degrees if d % 2 == 1]
    return evens == [2] and len(set(odds)) == len(odds)


def is_squarefree_over_z(f: IntPolynomial) -> bool:
    """gcd(f, f') over Q is constant."""
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in f.derivative().coeffs]
    while b:
        # remainder of a by b over Q
        r = list(a)
        db = len(b) - 1
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i] / b[-1]
            if c:
                for j, y in enumerate(b):
                    r[i - db + j] -= c * y
        r = r[:db]
        while r and r[-1] == 0:
            r.pop()
        a, b = b, r
    return len(a) <= 1


def galois_full_symmetric_certificate(
        f: IntPolynomial,
        prime_budget: int = DEFAULT_PRIME_BUDGET) -> GaloisCertificate:
    """One-sided certificate that Gal(f) is the full symmetric group.

    Scans squarefree factorization patterns (Frobenius cycle types) for an
    n-cycle, a {1, n-1} pattern (2-transitivity with the n-cycle), and a
    transposition-type pattern; all three together force S_n.  For n <= 2
    the n-cycle alone decides.  The method cannot refute S_n, so the other
    verdict is "unknown".
    """
    if not f.is_monic() or f.degree < 1:
        raise ValueError("need a monic polynomial of degree >= 1")
    if not is_squarefree_over_z(f):
        raise ValueError("polynomial has a repeated factor over Z")
    n = f.degree
    if n == 1:
        return GaloisCertificate("full_symmetric", 1)
    found = {}
    for p in primes_up_to(prime_budget):
        pat = factor_pattern_mod_p(f, p)
        if not pat.squarefree:
            continue
        if "n_cycle" not in found and pat.degrees == (n,):
            found["n_cycle"] = GaloisWitness(p, pat.degrees, "n_cycle")
        if "two_transitive" not in found and pat.degrees == tuple(sorted((1, n - 1))):
            found["two_transitive"] = GaloisWitness(p, pat.degrees, "two_transitive")
        if "transposition" not in found and _is_transposition_pattern(pat.degrees, n):
            found["transposition"] = GaloisWitness(p, pat.degrees, "transposition")
        needed = {"n_cycle"} if n == 2 else {"n_cycle", "two_transitive", "transposition"}
        if needed <= set(found):
            return GaloisCertificate(
                "full_symmetric", n,
                tuple(found[r] for r in sorted(needed)))
    return GaloisCertificate("unknown", n, tuple(found[r] for r in sorted(found)))


@dataclass(frozen=True)
class IwipCertificate:
    verdict: str                   # "certified" | "rejected" | "unknown"
    char_polynomial: IntPolynomial
    reason: str = ""
    galois: GaloisCertificate = None


def iwip_certificate(m: IntMatrix,
                     prime_budget: int = DEFAULT_PRIME_BUDGET) -> IwipCertificate:
    """Certify irreducibility of all powers of a GL(n,Z) matrix's action.

    A full-symmetric Galois group for the characteristic polynomial keeps
    every power's characteristic polynomial irreducible, which is the
    homology-level ("abelianized") certificate.  Visibly reducible inputs
    (an integer root, or a repeated factor) are rejected; the rest without a
    full-symmetric certificate stay unknown.
    """
    det = m.det()
    if det not in (1, -1):
        raise ValueError("matrix must have determinant +-1")
    chi = char_poly(m)
    roots = _integer_roots(chi)
    if roots:
        return IwipCertificate("rejected", chi,
                               reason=f"characteristic polynomial has integer root {roots[0]}")
    if not is_squarefree_over_z(chi):
        return IwipCertificate("rejected", chi,
                               reason="characteristic polynomial has a repeated factor")
    cert = galois_full_symmetric_certificate(chi, prime_budget)
    if cert.verdict == "full_symmetric":
        return IwipCertificate("certified", chi, galois=cert)
    return IwipCertificate("unknown", chi,
                           reason="Galois group not pinned to the symmetric group",
                           galois=cert)
