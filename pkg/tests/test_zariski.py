import random

import pytest

from genlab.algebra import (
    GEN_L,
    GEN_S,
    GEN_U,
    IntMatrix,
    RationalMatrix,
    commutator,
)
from genlab.zariski import (
    exp_nilpotent,
    harvest_unipotent_logs,
    is_unipotent,
    lie_closure,
    mod_p_surjective,
    nilpotent_log,
    sln_order,
    zariski_verdict,
)


def random_word(rng, length):
    gens = [GEN_L, GEN_U, GEN_L.inverse_unimodular(), GEN_U.inverse_unimodular()]
    m = IntMatrix.identity(2)
    for _ in range(length):
        m = m * rng.choice(gens)
    return m


class TestUnipotent:
    def test_examples(self):
        assert is_unipotent(GEN_U)
        assert is_unipotent(GEN_L ** 5)
        assert not is_unipotent(GEN_S)
        assert is_unipotent(IntMatrix.identity(3))

    def test_conjugates_stay_unipotent(self):
        rng = random.Random(1)
        for _ in range(30):
            g = random_word(rng, rng.randrange(1, 8))
            assert is_unipotent(g * GEN_U * g.inverse_unimodular())


class TestNilpotentLog:
    def test_log_u(self):
        assert nilpotent_log(GEN_U) == RationalMatrix([[0, 1], [0, 0]])

    def test_log_l(self):
        assert nilpotent_log(GEN_L) == RationalMatrix([[0, 0], [1, 0]])

    def test_log_of_power_scales(self):
        assert nilpotent_log(GEN_U ** 2) == RationalMatrix([[0, 2], [0, 0]])
        assert nilpotent_log(GEN_L ** 7) == RationalMatrix([[0, 0], [7, 0]])

    def test_rejects_non_unipotent(self):
        with pytest.raises(ValueError):
            nilpotent_log(GEN_S)

    def test_exp_log_round_trip_exact(self):
        rng = random.Random(2)
        for _ in range(40):
            g = random_word(rng, rng.randrange(0, 10))
            u = g * (GEN_U ** rng.randrange(1, 4)) * g.inverse_unimodular()
            back = exp_nilpotent(nilpotent_log(u))
            assert back == RationalMatrix.from_int_matrix(u)

    def test_conjugation_covariance(self):
        rng = random.Random(3)
        for _ in range(25):
            g = random_word(rng, rng.randrange(1, 11))
            u = GEN_U ** rng.randrange(1, 5)
            gq = RationalMatrix.from_int_matrix(g)
            gq_inv = RationalMatrix.from_int_matrix(g.inverse_unimodular())
            lhs = nilpotent_log(g * u * g.inverse_unimodular())
            rhs = gq * nilpotent_log(u) * gq_inv
            assert lhs == rhs


class TestLieClosure:
    def test_sl2_standard_triple(self):
        e = nilpotent_log(GEN_U)
        f = nilpotent_log(GEN_L)
        assert lie_closure([e, f], 2) == 3
        # the bracket is the diagonal h, completing the triple
        h = commutator(e, f)
        assert h == RationalMatrix([[1, 0], [0, -1]])

    def test_single_seed(self):
        assert lie_closure([nilpotent_log(GEN_U)], 2) == 1

    def test_empty(self):
        assert lie_closure([], 2) == 0

    def test_monotone_and_order_stable(self):
        e = nilpotent_log(GEN_U)
        f = nilpotent_log(GEN_L)
        h = commutator(e, f)
        assert lie_closure([e], 2) <= lie_closure([e, f], 2)
        assert lie_closure([e, f, h], 2) == lie_closure([h, f, e], 2) == 3

    def test_rejects_trace(self):
        with pytest.raises(ValueError):
            lie_closure([RationalMatrix.identity(2)], 2)


class TestModP:
    def test_lu_surjective_all_small_primes(self):
        for p in (5, 7, 11, 13):
            ok, order = mod_p_surjective([GEN_L, GEN_U], p)
            assert ok
            assert order == p * (p * p - 1)

    def test_u_alone_cyclic(self):
        assert mod_p_surjective([GEN_U], 5) == (False, 5)

    def test_squares_still_surject(self):
        assert mod_p_surjective([GEN_L ** 2, GEN_U ** 2], 5) == (True, 120)

    def test_order_formula(self):
        assert sln_order(5, 2) == 120
        assert sln_order(2, 3) == 168
        assert sln_order(3, 3) == 3 ** 3 * (3 ** 2 - 1) * (3 ** 3 - 1)

    def test_sl3_closure(self):
        l3 = IntMatrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
        u3 = IntMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        r3 = IntMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
        s3 = IntMatrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]])
        ok, order = mod_p_surjective([l3, u3, r3, s3], 2, 3)
        assert ok
        assert order == 168

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            mod_p_surjective([GEN_U], 6)


class TestVerdict:
    def test_lu_certified(self):
        v = zariski_verdict([GEN_L, GEN_U], prime=5)
        assert v.verdict == "dense_certified_modp"
        assert v.lie_dimension == 3
        assert v.lie_full
        assert v.modp_results == ((5, True, 120),)
        assert v.note  # the criterion caveat is recorded

    def test_u_not_dense_with_witness(self):
        v = zariski_verdict([GEN_U], prime=5)
        assert v.verdict == "not_dense"
        assert v.lie_dimension == 1
        assert v.witness == (1, 0)

    def test_identity_not_dense(self):
        v = zariski_verdict([IntMatrix.identity(2)], prime=5)
        assert v.verdict == "not_dense"
        assert v.lie_dimension == 0
        assert v.witness is not None

    def test_rejects_bad_determinant(self):
        with pytest.raises(ValueError):
            zariski_verdict([IntMatrix([[1, 0], [0, -1]])], prime=5)

    def test_harvest_finds_conjugate_directions(self):
        logs = harvest_unipotent_logs([GEN_L, GEN_U])
        assert len(logs) >= 3
        assert all(x.trace() == 0 for x in logs)
