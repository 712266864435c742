from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kborel.abelian import (
    ZERO,
    AdicGroup,
    DivisibleGroup,
    FgAbGroup,
    Z,
    dim_hat_p,
    direct_sum,
    euler_dim_hat_sum,
    ext_to_Z,
    group_from_json,
    hom_to_Z,
    invariant_factors,
    invert_primes,
    pontryagin_dual,
    uct_transfer,
    with_ambiguity,
)
from kborel.linalg import IntMatrix, cokernel, rank_Q

fg_groups = st.builds(
    FgAbGroup.from_orders,
    st.lists(st.integers(1, 60), max_size=5),
    st.integers(0, 4),
)


def presented(rows) -> FgAbGroup:
    return cokernel(rows).group


def resolution_hom_ext(rows) -> tuple[FgAbGroup, FgAbGroup]:
    """``hom(A, Z)`` and ``ext(A, Z)`` for ``A = coker(M)`` from the presentation.

    ``hom(A, Z) = ker(M^T)``; ``ext(A, Z)`` is the torsion of ``coker(M^T)``.
    """
    m = IntMatrix(rows)
    hom = FgAbGroup(m.rows - rank_Q(m))
    dual = cokernel(m.T).group
    return hom, FgAbGroup(0, dual.torsion)


class TestFgAbGroup:
    def test_invariant_factors(self):
        assert invariant_factors([2, 3]) == (6,)
        assert invariant_factors([4, 6, 1]) == (2, 12)
        assert invariant_factors([]) == ()

    def test_validation(self):
        with pytest.raises(ValueError):
            FgAbGroup(0, (4, 2))
        with pytest.raises(ValueError):
            FgAbGroup(-1)
        with pytest.raises(ValueError):
            FgAbGroup(0, (1,))

    def test_from_orders_zero_is_free(self):
        assert FgAbGroup.from_orders([0, 2, 0, 3]) == FgAbGroup(2, (6,))

    def test_properties(self):
        g = FgAbGroup(1, (2, 12))
        assert not g.is_finite
        with pytest.raises(ValueError):
            g.order
        assert g.torsion_primes() == {2, 3}
        assert g.p_torsion_count(2) == 2
        assert g.p_torsion_count(3) == 1
        assert g.elementary_divisors() == (2, 3, 4)
        assert FgAbGroup(0, (2, 6)).order == 12

    def test_format(self):
        g = FgAbGroup(2, (2,))
        assert g.format() == "ℤ^2 ⊕ ℤ/2"
        assert g.format(ascii=True) == "Z^2 + Z/2"
        assert ZERO.format() == "0"

    @settings(max_examples=200, deadline=None)
    @given(fg_groups)
    def test_json_round_trip(self, g):
        assert group_from_json(json.loads(json.dumps(g.to_json()))) == g


class TestHomExt:
    def test_ext_cyclic_up_to_1000(self):
        for n in range(2, 1001):
            g = FgAbGroup(0, (n,))
            assert ext_to_Z(g) == g
            # direct evaluation: 0 -> Z --n--> Z -> Z/n, apply hom(-, Z)
            assert cokernel([[n]]).group == ext_to_Z(g)
            assert hom_to_Z(g) == ZERO

    def test_componentwise_oracle_500(self):
        rng = random.Random(2024)
        for _ in range(500):
            free = rng.randint(0, 3)
            orders = [rng.randint(2, 40) for _ in range(rng.randint(0, 4))]
            g = FgAbGroup.from_orders(orders, free)
            # hom(Z, Z) = Z, hom(Z/n, Z) = 0, ext(Z, Z) = 0, ext(Z/n, Z) = Z/n
            assert hom_to_Z(g) == FgAbGroup(free)
            assert ext_to_Z(g) == FgAbGroup.from_orders(orders)

    def test_resolution_oracle(self):
        rng = random.Random(99)
        for _ in range(200):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            rows = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
            a = presented(rows)
            hom, ext = resolution_hom_ext(rows)
            assert hom_to_Z(a) == hom
            assert ext_to_Z(a) == ext


class TestUct:
    @settings(max_examples=200, deadline=None)
    @given(fg_groups, fg_groups)
    def test_round_trip(self, k0, k1):
        h0, h1 = uct_transfer(k0, k1, "cohomology->homology")
        c0, c1 = uct_transfer(h0, h1, "homology->cohomology")
        assert (c0, c1) == (k0, k1)

    @settings(max_examples=200, deadline=None)
    @given(fg_groups, fg_groups)
    def test_direct_evaluation(self, k0, k1):
        h0, h1 = uct_transfer(k0, k1)
        assert h0 == FgAbGroup(k0.free_rank, k1.torsion)
        assert h1 == FgAbGroup(k1.free_rank, k0.torsion)

    def test_bad_direction(self):
        with pytest.raises(ValueError):
            uct_transfer(Z, ZERO, "sideways")


class TestRankGroups:
    def test_canonical_ranks(self):
        a = AdicGroup(1, {3: 2, 2: 0, 5: 1})
        assert a.ranks == ((3, 2), (5, 1))
        assert a == AdicGroup(1, [(5, 1), (3, 2)])
        with pytest.raises(ValueError):
            AdicGroup(0, {4: 1})

    def test_direct_sum(self):
        a = AdicGroup(1, {2: 1}, {2})
        b = AdicGroup(0, {2: 2, 3: 1})
        assert direct_sum(a, b) == AdicGroup(1, {2: 3, 3: 1}, {2})
        with pytest.raises(TypeError):
            direct_sum(a, DivisibleGroup())

    def test_format(self):
        a = AdicGroup(1, {2: 4, 3: 2})
        assert a.format() == "ℤ ⊕ (ℤ̂_2)^4 ⊕ (ℤ̂_3)^2"
        assert a.format(ascii=True) == "Z + (Z_2^)^4 + (Z_3^)^2"
        d = DivisibleGroup(0, {3: 2})
        assert d.format() == "(ℤ/3^∞)^2"
        assert d.format(ascii=True) == "(Z/3^inf)^2"
        q = invert_primes(AdicGroup(0, {2: 1}), [2])
        assert q.format() == "ℚ̂_2" and q.format(ascii=True) == "Q_2^"

    def test_dim_hat(self):
        assert dim_hat_p(FgAbGroup(2, (4,)), 2) == 2
        assert dim_hat_p(FgAbGroup(0, (8,)), 2) == 0
        assert dim_hat_p(AdicGroup(1, {2: 3, 3: 1}), 2) == 4
        assert dim_hat_p(AdicGroup(1, {2: 3, 3: 1}), 5) == 1
        assert dim_hat_p(DivisibleGroup(1, {2: 5}), 2) == 1

    def test_euler(self):
        # 0 -> Z -> Z + Z_2^ -> Z_2^ -> 0
        seq = [Z, AdicGroup(1, {2: 1}), AdicGroup(0, {2: 1})]
        assert euler_dim_hat_sum(seq, 2) == 0
        assert euler_dim_hat_sum(seq, 3) == 0
        assert euler_dim_hat_sum([Z, Z], 2) == 0
        assert euler_dim_hat_sum([Z], 2) == 1

    def test_dual(self):
        a = AdicGroup(0, {2: 4, 3: 2}, {2, 3})
        d = pontryagin_dual(a)
        assert isinstance(d, DivisibleGroup) and d.ranks == a.ranks
        assert pontryagin_dual(d) == a
        with pytest.raises(TypeError):
            pontryagin_dual(Z)

    def test_invert_primes(self):
        assert invert_primes(FgAbGroup(1, (12,)), [2]) == FgAbGroup(1, (3,))
        d = invert_primes(DivisibleGroup(0, {2: 1, 3: 1}, {2}), [2])
        assert d.ranks == ((3, 1),) and not d.ambiguity
        a = invert_primes(AdicGroup(1, {2: 1}, {2, 5}), [2])
        assert a.rationalized and a.ambiguity == {5} and a.ranks == ((2, 1),)

    @pytest.mark.parametrize("g", [
        AdicGroup(1, {2: 1}, {2}), DivisibleGroup(0, {3: 2}, set(), True), FgAbGroup(2, (6,)),
    ])
    def test_json(self, g):
        assert group_from_json(json.loads(json.dumps(g.to_json()))) == g

    def test_with_ambiguity(self):
        assert with_ambiguity(AdicGroup(), [3]).ambiguity == {3}
