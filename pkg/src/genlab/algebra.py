"""Exact linear algebra over Z and Q.

Three immutable value types are defined here and shared by every other
module:

* ``IntMatrix``    -- square matrix of arbitrary-precision integers,
* ``IntPolynomial`` -- integer-coefficient polynomial, constant term first,
* ``RationalMatrix`` -- square matrix of exact ``Fraction`` entries.

There is deliberately no floating point anywhere in this module.  Norms are
exposed squared (``frobenius_norm_sq``) so callers can compare against a
squared bound exactly; characteristic polynomials are computed by the
Faddeev-LeVerrier recurrence, whose divisions are exact over Z.
"""

from __future__ import annotations

from fractions import Fraction

# Faddeev-LeVerrier does n matrix products of growing entries; past this
# dimension callers should not pretend the routine is cheap.
CHAR_POLY_MAX_DIM = 16


class IntMatrix:
    """Immutable square matrix with arbitrary-precision integer entries.

    ``rows`` is a tuple of row tuples.  All arithmetic is exact; products of
    long generator words grow exponentially, which is why nothing here ever
    truncates to a machine word.
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("entries must form a nonempty square array")
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_flat(cls, n: int, flat) -> "IntMatrix":
        flat = tuple(flat)
        if len(flat) != n * n:
            raise ValueError("flat entry list has wrong length")
        return cls(tuple(flat[i * n:(i + 1) * n] for i in range(n)))

    def flat(self):
        return tuple(x for row in self.rows for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return mat_mul(self, other)

    def __add__(self, other):
        if not isinstance(other, IntMatrix) or other.n != self.n:
            return NotImplemented
        return IntMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other):
        if not isinstance(other, IntMatrix) or other.n != self.n:
            return NotImplemented
        return IntMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                               for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return IntMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def __pow__(self, e: int):
        if e < 0:
            inv = self.inverse_unimodular()
            return inv ** (-e)
        result = IntMatrix.identity(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def det(self) -> int:
        """Exact determinant, read off the characteristic polynomial."""
        chi = char_poly(self)
        c0 = chi.coeffs[0]
        return c0 if self.n % 2 == 0 else -c0

    def inverse_unimodular(self) -> "IntMatrix":
        """Inverse of a matrix with det = +-1 (integer entries again)."""
        d = self.det()
        if d not in (1, -1):
            raise ValueError("matrix is not unimodular")
        n = self.n
        if n == 1:
            return IntMatrix(((d,),))
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [[self.rows[r][c] for c in range(n) if c != j]
                         for r in range(n) if r != i]
                row.append((-1) ** (i + j) * _det_int(minor))
            cof.append(row)
        adj = IntMatrix(tuple(zip(*cof)))
        return adj if d == 1 else -adj

    def is_identity(self) -> bool:
        return all(self.rows[i][j] == (1 if i == j else 0)
                   for i in range(self.n) for j in range(self.n))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMatrix({list(map(list, self.rows))!r})"

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)


def _det_int(rows) -> int:
    """Cofactor determinant of a small list-of-lists integer matrix."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[rows[r][c] for c in range(n) if c != j] for r in range(1, n)]
        total += (-1) ** j * rows[0][j] * _det_int(minor)
    return total


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact product of two IntMatrix values of equal dimension."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    n = a.n
    bcols = tuple(zip(*b.rows))
    return IntMatrix(tuple(
        tuple(sum(ra[k] * bc[k] for k in range(n)) for bc in bcols)
        for ra in a.rows))


def frobenius_norm_sq(m: IntMatrix) -> int:
    """Sum of squared entries.  Compare against a squared bound; never sqrt."""
    return sum(x * x for row in m.rows for x in row)


def reduce_mod(m: IntMatrix, modulus: int) -> IntMatrix:
    """Entrywise reduction into [0, modulus).  A ring homomorphism."""
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    return IntMatrix(tuple(tuple(x % modulus for x in row) for row in m.rows))


def char_poly(m: IntMatrix) -> "IntPolynomial":
    """Characteristic polynomial det(xI - M), monic of degree n.

    Uses the Faddeev-LeVerrier recurrence

        M_1 = I,  c_{n-1} = -tr(A M_1),
        M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k,

    in which every division is exact over the integers.
    """
    n = m.n
    if n > CHAR_POLY_MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the documented limit {CHAR_POLY_MAX_DIM}")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = IntMatrix.identity(n)
    for k in range(1, n + 1):
        if k > 1:
            mk = m * mk + IntMatrix(tuple(
                tuple(coeffs[n - k + 1] if i == j else 0 for j in range(n))
                for i in range(n)))
        t = (m * mk).trace()
        if t % k != 0:
            raise ArithmeticError("Faddeev-LeVerrier division was not exact")
        coeffs[n - k] = -(t // k)
    return IntPolynomial(coeffs)


class IntPolynomial:
    """Integer-coefficient polynomial, coefficients stored constant term first.

    The zero polynomial has an empty coefficient tuple and degree -1.  The
    leading coefficient of a nonzero polynomial is always nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [int(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        """Evaluate by Horner; works for int and Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def at_matrix(self, m: IntMatrix) -> IntMatrix:
        """Evaluate at a square integer matrix (Horner again)."""
        acc = IntMatrix(tuple(tuple(0 for _ in range(m.n)) for _ in range(m.n)))
        ident = IntMatrix.identity(m.n)
        for c in reversed(self.coeffs):
            acc = acc * m + IntMatrix(tuple(tuple(c * e for e in row) for row in ident.rows))
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([other * c for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def divmod_monic(self, divisor: "IntPolynomial"):
        """Quotient and remainder by a monic divisor, exact over Z."""
        if not divisor.is_monic():
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        d = divisor.degree
        q = [0] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q[i - d] = c
            for j, b in enumerate(divisor.coeffs):
                rem[i - d + j] -= c * b
        return IntPolynomial(q), IntPolynomial(rem)

    def divides(self, other: "IntPolynomial") -> bool:
        """True when self (monic) divides other exactly over Z."""
        _, r = other.divmod_monic(self)
        return r.is_zero()

    def mod_coeffs(self, p: int):
        """Coefficient list reduced mod p, low degree first, trimmed."""
        out = [c % p for c in self.coeffs]
        while out and out[-1] == 0:
            out.pop()
        return out

    @classmethod
    def from_roots(cls, roots) -> "IntPolynomial":
        poly = cls((1,))
        for r in roots:
            poly = poly * cls((-r, 1))
        return poly

    @classmethod
    def x_pow(cls, k: int) -> "IntPolynomial":
        return cls([0] * k + [1])

    @classmethod
    def cyclotomic(cls, m: int) -> "IntPolynomial":
        """The m-th cyclotomic polynomial, by exact recursive division."""
        return cls(_cyclotomic_coeffs(m))

    def companion_matrix(self) -> IntMatrix:
        """Companion matrix of a monic polynomial of degree >= 1."""
        if not self.is_monic() or self.degree < 1:
            raise ValueError("companion matrix needs a monic polynomial of degree >= 1")
        n = self.degree
        rows = []
        for i in range(n):
            row = [0] * n
            if i > 0:
                row[i - 1] = 1
            row[n - 1] = -self.coeffs[i]
            rows.append(tuple(row))
        return IntMatrix(tuple(rows))

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c))
                term = f"{mag}x" if i == 1 else f"{mag}x^{i}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


_CYCLOTOMIC_CACHE: dict[int, tuple] = {}


def _cyclotomic_coeffs(m: int) -> tuple:
    if m < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if m in _CYCLOTOMIC_CACHE:
        return _CYCLOTOMIC_CACHE[m]
    # x^m - 1 divided by the cyclotomics of all proper divisors
    poly = IntPolynomial([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            q, r = poly.divmod_monic(IntPolynomial(_cyclotomic_coeffs(d)))
            if not r.is_zero():
                raise ArithmeticError("cyclotomic division must be exact")
            poly = q
    _CYCLOTOMIC_CACHE[m] = poly.coeffs
    return poly.coeffs


class RationalMatrix:
    """Immutable square matrix of exact rationals (Fraction entries)."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("entries must form a nonempty square array")
        self.n = n
        self.rows = rows

    @classmethod
    def from_int_matrix(cls, m: IntMatrix) -> "RationalMatrix":
        return cls(m.rows)

    @classmethod
    def zero(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            bcols = tuple(zip(*other.rows))
            return RationalMatrix(tuple(
                tuple(sum(ra[k] * bc[k] for k in range(self.n)) for bc in bcols)
                for ra in self.rows))
        return NotImplemented

    def __add__(self, other):
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                                    for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other):
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                                    for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return RationalMatrix(tuple(tuple(-a for a in row) for row in self.rows))

    def scale(self, s) -> "RationalMatrix":
        s = Fraction(s)
        return RationalMatrix(tuple(tuple(s * a for a in row) for row in self.rows))

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.rows for a in row)

    def flat(self):
        return tuple(x for row in self.rows for x in row)

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RationalMatrix({[[str(x) for x in row] for row in self.rows]!r})"


def commutator(x: RationalMatrix, y: RationalMatrix) -> RationalMatrix:
    """Lie bracket [x, y] = xy - yx."""
    return x * y - y * x


# The generators everything downstream keeps reaching for.
GEN_L = IntMatrix(((1, 0), (1, 1)))
GEN_U = IntMatrix(((1, 1), (0, 1)))
GEN_S = IntMatrix(((0, -1), (1, 0)))
GEN_T = IntMatrix(((1, 1), (0, 1)))  # same matrix as U; both names are in circulation
