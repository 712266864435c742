from __future__ import annotations

import pytest

from kborel.abelian import AdicGroup, FgAbGroup, Z
from kborel.groups import con_p, cyclic_group, symmetric_group
from kborel.repring import (
    CyclicRepRing,
    NotStabilized,
    RepRing,
    completion_rank,
    torsion_signature,
)

from oracles import vp


def s3_ring() -> RepRing:
    # basis 1, sgn, rho: sgn^2 = 1, sgn rho = rho, rho^2 = 1 + sgn + rho
    st = [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
        [[0, 0, 1], [0, 0, 1], [1, 1, 1]],
    ]
    return RepRing(st, [1, 1, 2], 6)


class TestCyclic:
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8, 9, 12])
    def test_completion_rank_matches_classes(self, m):
        g = cyclic_group(m)
        ring = CyclicRepRing(m)
        for p in ring.primes():
            expected = p ** vp(m, p) - 1
            assert completion_rank(ring, p) == expected == len(con_p(g, p))

    @pytest.mark.parametrize("n", range(1, 8))
    def test_z2_quotients(self, n):
        expected = Z if n == 1 else FgAbGroup(1, (2 ** (n - 1),))
        assert CyclicRepRing(2).quotient(n) == expected

    def test_prime_away_from_order(self):
        assert completion_rank(CyclicRepRing(4), 3) == 0

    def test_completion(self):
        assert CyclicRepRing(6).completion() == AdicGroup(1, {2: 1, 3: 2})

    def test_signature(self):
        assert torsion_signature(CyclicRepRing(3), 3, 1) == ()
        assert torsion_signature(CyclicRepRing(2), 2, 4) == (3,)

    def test_short_schedule(self):
        with pytest.raises(NotStabilized):
            completion_rank(CyclicRepRing(12), 2, range(1, 3))

    def test_trivial_group(self):
        ring = CyclicRepRing(1)
        assert ring.rank == 1 and ring.quotient(3) == Z


class TestTableRing:
    def test_s3(self):
        ring = s3_ring()
        g = symmetric_group(3)
        for p in (2, 3):
            assert completion_rank(ring, p) == len(con_p(g, p))
        assert ring.quotient(1) == Z

    def test_json_round_trip(self):
        ring = s3_ring()
        assert RepRing.from_json(ring.to_json()) == ring
        assert RepRing.from_json({"m": 5}) == CyclicRepRing(5)

    def test_no_unit(self):
        with pytest.raises(ValueError, match="unit"):
            RepRing([[[0]]], [1])

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            RepRing([[[1, 0]]], [1])

    def test_augmentation_not_multiplicative(self):
        st = s3_ring().structure
        with pytest.raises(ValueError, match="multiplicative"):
            RepRing(st, [1, 1, 1])

    def test_bad_depth(self):
        with pytest.raises(ValueError):
            CyclicRepRing(2).quotient(0)
        with pytest.raises(ValueError):
            completion_rank(CyclicRepRing(2), 4)
