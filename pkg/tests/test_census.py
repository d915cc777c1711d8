import random
from fractions import Fraction
from math import isqrt

import pytest

from genlab.algebra import GEN_S, GEN_U, IntMatrix, char_poly, frobenius_norm_sq
from genlab.census import (
    ABCDQuad,
    abcd_transform,
    census,
    census_norm_sq,
    count_parabolic,
    enumerate_norm_ball,
    is_reducible_over_z,
    iter_norm_ball,
    parabolic_counts_to,
    pythagorean_counts_to,
    pythagorean_parabolic_count,
    reducible_density,
)
from genlab.errors import BudgetExceededError


def brute_ball(k):
    """Independent four-loop oracle over all entries."""
    out = set()
    K = k * k
    for a in range(-k, k + 1):
        ra = K - a * a
        for b in range(-isqrt(ra), isqrt(ra) + 1):
            rb = ra - b * b
            for c in range(-isqrt(rb), isqrt(rb) + 1):
                rc = rb - c * c
                for d in range(-isqrt(rc), isqrt(rc) + 1):
                    if a * d - b * c == 1:
                        out.add((a, b, c, d))
    return out


class TestEnumeration:
    def test_k1_empty(self):
        assert census(1).total == 0

    def test_norm_sq_2_ball(self):
        # bound 1.5 squared is 2.25; integer squared norms <= 2
        elems = set(iter_norm_ball(2))
        assert elems == {(1, 0, 0, 1), (-1, 0, 0, -1), (0, -1, 1, 0), (0, 1, -1, 0)}
        assert census_norm_sq(2).total == 4

    def test_matches_brute_force(self):
        for k in (2, 3, 5, 9, 12):
            assert set(iter_norm_ball(k * k)) == brute_ball(k)

    def test_counts_match_stream(self):
        for k in (5, 20, 60):
            rec = census(k)
            elems = list(iter_norm_ball(k * k))
            assert rec.total == len(elems)
            assert len(set(elems)) == len(elems)  # no duplicates
            assert rec.parabolic == sum(1 for a, b, c, d in elems if abs(a + d) == 2)

    def test_total_even(self):
        for k in (3, 10, 25):
            assert census(k).total % 2 == 0

    def test_symmetry_involutions(self):
        ball = set(iter_norm_ball(100 * 100))
        for a, b, c, d in ball:
            assert (-a, -b, -c, -d) in ball
            assert (a, c, b, d) in ball          # transpose
            assert (d, -b, -c, a) in ball        # inverse

    def test_enumerate_yields_matrices(self):
        ms = list(enumerate_norm_ball(2))
        assert all(isinstance(m, IntMatrix) for m in ms)
        assert all(frobenius_norm_sq(m) <= 4 for m in ms)

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            census(2001)

    def test_workers_equivalent(self):
        assert census(40, workers=4) == census(40, workers=1)


class TestABCD:
    def test_examples(self):
        assert abcd_transform(IntMatrix.identity(2)) == ABCDQuad(2, 0, 0, 0)
        assert abcd_transform(GEN_U) == ABCDQuad(2, 1, 1, 0)
        q = abcd_transform(IntMatrix([[1, 2], [3, 7]]))
        assert (q.A, q.B, q.C, q.D) == (8, 5, -1, -6)
        assert 64 + 1 - 25 - 36 == 4

    def test_rejects_det_not_one(self):
        with pytest.raises(ValueError):
            abcd_transform(IntMatrix([[1, 0], [0, -1]]))

    def test_quad_validation(self):
        with pytest.raises(ValueError):
            ABCDQuad(1, 0, 0, 0)     # fails the quadratic relation
        with pytest.raises(ValueError):
            ABCDQuad(3, 3, 2, 0)     # satisfies the relation but A != D mod 2
        # A = trace
        assert abcd_transform(IntMatrix([[1, 2], [3, 7]])).A == 8

    def test_round_trip_bijection(self):
        for a, b, c, d in iter_norm_ball(20 * 20):
            m = IntMatrix(((a, b), (c, d)))
            assert abcd_transform(m).to_matrix() == m

    def test_norm_doubles_under_abcd(self):
        # A^2+B^2+C^2+D^2 = 2(a^2+b^2+c^2+d^2): exact on random elements
        rng = random.Random(13)
        ball = list(iter_norm_ball(15 * 15))
        for a, b, c, d in rng.sample(ball, 50):
            q = abcd_transform(IntMatrix(((a, b), (c, d))))
            assert (q.A ** 2 + q.B ** 2 + q.C ** 2 + q.D ** 2
                    == 2 * (a * a + b * b + c * c + d * d))


class TestParabolic:
    def test_norm_bound_2(self):
        # +-I and the eight unit-translation parabolics
        assert count_parabolic(2) == 10
        assert pythagorean_parabolic_count(2) == 10

    def test_identity_counted(self):
        elems = [(a, b, c, d) for a, b, c, d in iter_norm_ball(4) if abs(a + d) == 2]
        assert (1, 0, 0, 1) in elems
        assert (-1, 0, 0, -1) in elems

    def test_routes_agree_pointwise(self):
        kmax = 60
        assert parabolic_counts_to(kmax) == pythagorean_counts_to(kmax)

    def test_routes_agree_spot(self):
        for k in (7, 23, 100):
            assert count_parabolic(k) == pythagorean_parabolic_count(k)

    def test_counts_to_matches_single(self):
        counts = parabolic_counts_to(25)
        for k in (2, 10, 25):
            assert counts[k] == count_parabolic(k)


class TestReducibility:
    def test_s_irreducible(self):
        assert char_poly(GEN_S) == char_poly(GEN_S)  # x^2 + 1
        assert not is_reducible_over_z(GEN_S)
        assert GEN_S.trace() == 0

    def test_reducible_iff_trace_two(self):
        for a, b, c, d in iter_norm_ball(25 * 25):
            m = IntMatrix(((a, b), (c, d)))
            assert is_reducible_over_z(m) == (abs(a + d) == 2)

    def test_density_value(self):
        rec = census(30)
        assert reducible_density(30) == Fraction(rec.parabolic, rec.total)

    def test_verify_elements_passes(self):
        reducible_density(40, verify_elements=True)

    def test_empty_ball_rejected(self):
        with pytest.raises(ValueError):
            reducible_density(1)
