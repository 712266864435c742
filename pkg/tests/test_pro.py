from __future__ import annotations

import random
from math import gcd

import pytest

from kborel.abelian import ZERO, AdicGroup, DivisibleGroup, FgAbGroup, Z
from kborel.linalg import IntMatrix
from kborel.pro import (
    Constant,
    EventuallyZeroMaps,
    Hom,
    Level,
    PAdicQuotient,
    Tower,
    TowerMap,
    colim_hom_ext,
    is_pro_isomorphism,
    is_pro_trivial,
    lim_lim1,
    pro_pushforward_check,
)
from kborel.repring import CyclicRepRing, augmentation_tower

from oracles import cyclic_elements

POOL = [(), (2,), (3,), (4,), (6,), (2, 2), (2, 4)]
HORIZON = 8


def random_hom(rng: random.Random, src: tuple, tgt: tuple) -> list[list[int]]:
    rows = []
    for e in tgt:
        row = []
        for d in src:
            step = e // gcd(d, e)
            row.append(step * rng.randrange(0, gcd(d, e)))
        rows.append(row)
    return rows


def mat(rows, r, c) -> IntMatrix:
    return IntMatrix(rows, r, c)


def apply(m: IntMatrix, x, orders) -> tuple:
    y = m.apply(x) if m.cols else tuple(0 for _ in range(m.rows))
    return tuple(v % d for v, d in zip(y, orders))


class RawTower:
    """Levels ``1..HORIZON`` of a prefix tower with a constant tail, kept as raw matrices."""

    def __init__(self, orders: list[tuple], maps: list[IntMatrix], zero_tail: bool = False):
        self.N = len(orders)
        self.orders = orders + [orders[-1]] * (HORIZON - self.N)
        self.maps = [None] + maps  # maps[n-1] : level n -> level n-1, for n >= 2
        tail_map = mat([[0] * len(orders[-1]) for _ in orders[-1]], len(orders[-1]), len(orders[-1])) \
            if zero_tail else IntMatrix.identity(len(orders[-1]))
        self.maps += [tail_map] * (HORIZON - self.N)
        self.zero_tail = zero_tail

    def level(self, n):
        return self.orders[n - 1]

    def composite(self, n, m):
        c = IntMatrix.identity(len(self.level(n)))
        for k in range(n, m, -1):
            c = self.maps[k - 1] @ c
        return c

    def tower(self) -> Tower:
        levels = [Level(FgAbGroup.from_orders(self.orders[0]))]
        levels += [Level(FgAbGroup.from_orders(self.orders[n - 1]), self.maps[n - 1])
                   for n in range(2, self.N + 1)]
        return Tower(tuple(levels), EventuallyZeroMaps() if self.zero_tail else Constant())


def random_raw(rng: random.Random, n_levels: int, zero_tail: bool = False) -> RawTower:
    orders = [rng.choice(POOL) for _ in range(n_levels)]
    maps = [mat(random_hom(rng, orders[n], orders[n - 1]), len(orders[n - 1]), len(orders[n]))
            for n in range(1, n_levels)]
    return RawTower(orders, maps, zero_tail)


def oracle_pro_iso(S: RawTower, T: RawTower, f: list[IntMatrix]) -> bool:
    """For each m <= N+1, search n <= HORIZON with im(beta) <= im(f_m), ker(f_n) <= ker(alpha)."""
    N = max(S.N, T.N)
    for m in range(1, N + 2):
        ok = False
        img_fm = {apply(f[m - 1], x, T.level(m)) for x in cyclic_elements(S.level(m))}
        for n in range(m, HORIZON + 1):
            beta, alpha = T.composite(n, m), S.composite(n, m)
            img_beta = {apply(beta, y, T.level(m)) for y in cyclic_elements(T.level(n))}
            zero_t = tuple(0 for _ in T.level(n))
            zero_s = tuple(0 for _ in S.level(m))
            ker_ok = all(apply(alpha, x, S.level(m)) == zero_s for x in cyclic_elements(S.level(n))
                         if apply(f[n - 1], x, T.level(n)) == zero_t)
            if img_beta <= img_fm and ker_ok:
                ok = True
                break
        if not ok:
            return False
    return True


def oracle_pro_trivial(S: RawTower) -> bool:
    for m in range(1, S.N + 2):
        zero = tuple(0 for _ in S.level(m))
        if not any(all(apply(S.composite(n, m), x, S.level(m)) == zero for x in cyclic_elements(S.level(n)))
                   for n in range(m, HORIZON + 1)):
            return False
    return True


def composite_family(rng: random.Random, N: int):
    """``f_n = beta^N_n phi alpha^n_1`` for a random ``phi : G_1 -> H_N``; always strict."""
    S, T = random_raw(rng, N), random_raw(rng, N)
    phi = mat(random_hom(rng, S.level(1), T.level(N)), len(T.level(N)), len(S.level(1)))
    f = [T.composite(N, n) @ phi @ S.composite(n, 1) for n in range(1, N + 1)]
    f += [f[-1]] * (HORIZON - N)
    return S, T, f


def scalar_family(rng: random.Random, N: int):
    S = random_raw(rng, N)
    u = rng.choice([-1, 1, 2, 3, 5])
    f = [IntMatrix.identity(len(S.level(n))).scale(u) for n in range(1, HORIZON + 1)]
    return S, S, f


def generate_cases(count: int, seed: int):
    rng = random.Random(seed)
    cases = []
    while len(cases) < count:
        N = rng.randint(1, 5)
        family = composite_family if rng.random() < 0.6 else scalar_family
        S, T, f = family(rng, N)
        tm = TowerMap(S.tower(), T.tower(), tuple(f[:N]), "constant")
        cases.append((S, T, f, tm))
    return cases


class TestHom:
    def test_well_defined(self):
        with pytest.raises(ValueError):
            Hom(FgAbGroup(0, (2,)), FgAbGroup(0, (4,)), IntMatrix([[1]]))
        Hom(FgAbGroup(0, (2,)), FgAbGroup(0, (4,)), IntMatrix([[2]]))
        with pytest.raises(ValueError):
            Hom(FgAbGroup(0, (2,)), Z, IntMatrix([[1]]))

    def test_kernel_and_image(self):
        h = Hom(FgAbGroup(0, (4,)), FgAbGroup(0, (4,)), IntMatrix([[2]]))
        assert not h.is_isomorphism()
        assert h(((3,))) == (2,)
        assert Hom.identity(FgAbGroup(0, (4,))).image_contains(h)
        assert not h.image_contains(Hom.identity(FgAbGroup(0, (4,))))


class TestTowers:
    def test_padic_limit(self):
        for p in (2, 3, 5):
            t = Tower((), PAdicQuotient(Z, p))
            assert t.group(4) == FgAbGroup(0, (p ** 4,))
            res = lim_lim1(t)
            assert res.limit == AdicGroup(0, {p: 1}) and res.lim1 == ZERO
            col = colim_hom_ext(t)
            assert col.colim_hom == ZERO and col.colim_ext == DivisibleGroup(0, {p: 1})
            assert not is_pro_trivial(t)

    def test_padic_with_torsion(self):
        t = Tower((), PAdicQuotient(FgAbGroup(1, (12,)), 2))
        assert t.group(1) == FgAbGroup(0, (2, 2))
        assert t.group(5) == FgAbGroup(0, (4, 32))
        assert lim_lim1(t).limit == AdicGroup(0, {2: 1}, {2})

    def test_padic_prime_to_p_torsion_is_trivial(self):
        t = Tower((), PAdicQuotient(FgAbGroup(0, (9,)), 2))
        assert is_pro_trivial(t)
        assert lim_lim1(t).limit == ZERO

    @pytest.mark.parametrize("tower", [
        Tower((Level(FgAbGroup(0, (4,))),), EventuallyZeroMaps()),
        Tower((Level(Z), Level(Z, [[0]])), EventuallyZeroMaps()),
        Tower((), Constant(ZERO)),
    ])
    def test_pro_trivial_vanishing(self, tower):
        assert is_pro_trivial(tower)
        res, col = lim_lim1(tower), colim_hom_ext(tower)
        assert (res.limit, res.lim1, col.colim_hom, col.colim_ext) == (ZERO, ZERO, ZERO, ZERO)

    def test_constant(self):
        t = Tower((Level(FgAbGroup(0, (2,))), Level(FgAbGroup(1, (6,)), [[0, 3]])), Constant())
        assert lim_lim1(t).limit == FgAbGroup(1, (6,))
        assert colim_hom_ext(t).colim_ext == FgAbGroup(0, (6,))
        assert t.map(5).is_isomorphism()

    def test_prefix_maps_validated(self):
        with pytest.raises(ValueError):
            Tower((Level(FgAbGroup(0, (4,))), Level(FgAbGroup(0, (2,)), [[1]])))

    def test_quotient_tail_needs_junction(self):
        with pytest.raises(ValueError):
            Tower((Level(Z),), PAdicQuotient(Z, 2))

    def test_augmentation_tower(self):
        t = augmentation_tower(CyclicRepRing(2), 4)
        for n in range(1, 8):
            expected = FgAbGroup(1, (2 ** (n - 1),)) if n > 1 else Z
            assert t.group(n) == expected
        assert lim_lim1(t).limit == AdicGroup(1, {2: 1})

    def test_truncation(self):
        t = Tower((), PAdicQuotient(Z, 3)).truncated(4)
        assert t.N == 4 and t.group(9) == FgAbGroup(0, (81,))


class TestProIsomorphism:
    def test_random_against_oracle(self):
        cases = generate_cases(100, seed=5)
        results = [is_pro_isomorphism(tm) for *_, tm in cases]
        oracle = [oracle_pro_iso(S, T, f) for S, T, f, _ in cases]
        assert results == oracle
        assert 10 < sum(results) < 90  # both outcomes are exercised

    def test_random_pro_trivial_against_oracle(self):
        rng = random.Random(11)
        for _ in range(60):
            S = random_raw(rng, rng.randint(1, 5), zero_tail=rng.random() < 0.3)
            assert is_pro_trivial(S.tower()) == oracle_pro_trivial(S)

    def test_non_commuting_rejected(self):
        t = Tower((Level(FgAbGroup(0, (4,))), Level(FgAbGroup(0, (4,)), [[1]])))
        with pytest.raises(ValueError):
            TowerMap(t, t, ([[1]], [[3]]), "constant")

    def test_identity(self):
        t = Tower((), PAdicQuotient(Z, 2))
        assert is_pro_isomorphism(TowerMap.identity(t))

    def test_induced(self):
        src, tgt = Tower((), PAdicQuotient(Z, 3)), Tower((), PAdicQuotient(Z, 3))
        assert is_pro_isomorphism(TowerMap(src, tgt, (), ("induced", [[2]])))
        assert not is_pro_isomorphism(TowerMap(src, tgt, (), ("induced", [[3]])))
        assert not is_pro_isomorphism(TowerMap(src, tgt, (), ("induced", [[0]])))

    def test_shift_is_pro_iso(self):
        # {Z/2^n} -> {Z/2^n} by multiplication by 2: not levelwise iso, not pro-iso
        src = Tower((), PAdicQuotient(Z, 2))
        tm = TowerMap(src, src, (), ("induced", [[2]]))
        assert not is_pro_isomorphism(tm)

    def test_zero_map_between_trivial(self):
        a = Tower((Level(FgAbGroup(0, (2,))),), EventuallyZeroMaps())
        b = Tower((Level(FgAbGroup(0, (3,))),), EventuallyZeroMaps())
        assert is_pro_isomorphism(TowerMap(a, b, (), "zero"))

    def test_pushforward(self):
        src, tgt = Tower((), PAdicQuotient(Z, 5)), Tower((), PAdicQuotient(Z, 5))
        check = pro_pushforward_check(TowerMap(src, tgt, (), ("induced", [[2]])))
        assert check["pro_isomorphism"] and check["agree"] and check["consistent"]
