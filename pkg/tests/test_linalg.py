from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kborel.abelian import FgAbGroup
from kborel.complexes import klein_bottle_complex, rp2_complex, sphere_complex, surface_complex
from kborel.linalg import (
    ChainComplex,
    IntMatrix,
    betti,
    cokernel,
    homology,
    integer_kernel,
    lattice_basis,
    rank_fraction,
    rank_mod_p,
    rank_Q,
    smith_normal_form,
    solve_integer,
    unimodular_inverse,
)

from oracles import naive_invariant_factors, random_matrix, sympy_invariant_factors

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=m, max_size=m)))


def det(rows):
    from sympy import Matrix
    return int(Matrix(rows).det())


class TestIntMatrix:
    def test_shape_and_access(self):
        m = IntMatrix([[1, 2, 3], [4, 5, 6]])
        assert m.shape == (2, 3)
        assert m[1, 2] == 6
        assert m.T.shape == (3, 2)
        with pytest.raises(IndexError):
            m[2, 0]

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            IntMatrix([[1, 2], [3]])

    def test_empty_shapes(self):
        z = IntMatrix.zeros(0, 3)
        assert z.shape == (0, 3)
        assert (IntMatrix.zeros(2, 0) @ z).shape == (2, 3)

    def test_product_and_json(self):
        a = IntMatrix([[1, 2], [0, 1]])
        b = IntMatrix([[3], [4]])
        assert (a @ b).tolist() == [[11], [4]]
        assert IntMatrix.from_json(a.to_json()) == a
        assert hash(IntMatrix.from_json(a.to_json())) == hash(a)

    def test_unimodular_inverse(self):
        a = IntMatrix([[2, 1], [1, 1]])
        assert a @ unimodular_inverse(a) == IntMatrix.identity(2)
        with pytest.raises(ValueError):
            unimodular_inverse([[2, 0], [0, 1]])


class TestSmith:
    def test_known(self):
        sf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        assert sf.invariant_factors == (2, 6, 12)

    def test_zero_matrix(self):
        sf = smith_normal_form([[0, 0], [0, 0]])
        assert sf.invariant_factors == () and sf.rank == 0

    def test_random_against_naive_oracle(self):
        rng = random.Random(7)
        for _ in range(300):
            m = random_matrix(rng, 6, 15)
            assert list(smith_normal_form(m).invariant_factors) == naive_invariant_factors(m), m

    def test_naive_oracle_matches_sympy(self):
        rng = random.Random(8)
        for _ in range(50):
            m = random_matrix(rng, 5, 10)
            assert naive_invariant_factors(m) == sympy_invariant_factors(m)

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_transforms(self, rows):
        m = IntMatrix(rows)
        sf = smith_normal_form(m)
        d = sf.left @ m @ sf.right
        for i in range(d.rows):
            for j in range(d.cols):
                expected = sf.invariant_factors[i] if i == j and i < sf.rank else 0
                assert d[i, j] == expected
        assert sf.left @ sf.left_inverse == IntMatrix.identity(m.rows)
        assert abs(det(sf.left.tolist())) == 1
        assert abs(det(sf.right.tolist())) == 1
        f = sf.invariant_factors
        assert all(b % a == 0 for a, b in zip(f, f[1:]))
        assert sf.rank == rank_Q(m)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_determinant(self, rows):
        sf = smith_normal_form(rows)
        d = abs(det(rows))
        prod = 1
        for x in sf.invariant_factors:
            prod *= x
        assert (prod if sf.rank == len(rows) else 0) == d


class TestRanks:
    def test_rank_mod_p(self):
        m = [[2, 0], [0, 3]]
        assert rank_Q(m) == 2
        assert rank_mod_p(m, 2) == 1
        assert rank_mod_p(m, 3) == 1
        assert rank_mod_p(m, 5) == 2

    def test_rank_fraction(self):
        rows = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1)]]
        assert rank_fraction(rows) == 1

    @settings(max_examples=100, deadline=None)
    @given(matrices, st.sampled_from([2, 3, 5, 7]))
    def test_rank_mod_p_from_snf(self, rows, p):
        f = smith_normal_form(rows).invariant_factors
        assert rank_mod_p(rows, p) == sum(1 for d in f if d % p)


class TestKernelCokernel:
    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_kernel(self, rows):
        m = IntMatrix(rows)
        k = integer_kernel(m)
        assert (m @ k).is_zero()
        assert k.cols == m.cols - rank_Q(m)

    def test_solve(self):
        m = [[2, 0], [0, 3]]
        assert solve_integer(m, [4, 9]) == (2, 3)
        assert solve_integer(m, [1, 0]) is None

    def test_cokernel_group(self):
        c = cokernel([[2, 0], [0, 3], [0, 0]])
        assert c.group == FgAbGroup(1, (6,))

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_cokernel_coordinates(self, rows):
        m = IntMatrix(rows)
        c = cokernel(m)
        # columns of m map to zero in the cokernel
        for j in range(m.cols):
            assert not any(c.reduce(c.to_gens.apply(m.column(j))))
        # from_gens picks representatives of the canonical generators
        for i in range(c.group.ngens):
            e = [0] * c.group.ngens
            e[i] = 1
            assert c.reduce(c.to_gens.apply(c.from_gens.apply(e))) == tuple(e)

    def test_lattice_basis(self):
        basis = lattice_basis([(2, 4), (4, 8), (0, 3)], 2)
        assert len(basis) == 2
        assert abs(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]) == 6


class TestHomology:
    # Fixtures: cellular chain complexes with one 0-cell (textbook values).
    @pytest.mark.parametrize("cx, groups", [
        (rp2_complex(), [FgAbGroup(1), FgAbGroup(0, (2,)), FgAbGroup()]),
        (sphere_complex(2), [FgAbGroup(1), FgAbGroup(), FgAbGroup(1)]),
        (surface_complex(1), [FgAbGroup(1), FgAbGroup(2), FgAbGroup(1)]),
        (klein_bottle_complex(), [FgAbGroup(1), FgAbGroup(1, (2,)), FgAbGroup()]),
        (surface_complex(3), [FgAbGroup(1), FgAbGroup(6), FgAbGroup(1)]),
    ])
    def test_textbook(self, cx, groups):
        assert homology(cx.chain) == groups

    def test_betti_fields(self):
        c = rp2_complex().chain
        assert betti(c) == [1, 0, 0]
        assert betti(c, 2) == [1, 1, 1]
        assert betti(c, 3) == [1, 0, 0]
        k = klein_bottle_complex().chain
        assert betti(k, 2) == [1, 2, 1]

    def test_dd_must_vanish(self):
        with pytest.raises(ValueError):
            ChainComplex([1, 1, 1], [[[1]], [[1]]])

    def test_euler_and_basis_change(self):
        c = klein_bottle_complex().chain
        assert c.euler_characteristic() == 0
        c2 = c.change_basis([[[1]], [[1, 1], [0, 1]], [[1]]])
        assert homology(c2) == homology(c)

    def test_json_round_trip(self):
        c = klein_bottle_complex().chain
        assert ChainComplex.from_json(c.to_json()) == c
        dense = ChainComplex.from_json({"ranks": [1, 2, 1], "boundaries": [[[0, 0]], [[2], [0]]]})
        assert dense == c
