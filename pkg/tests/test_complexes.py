from __future__ import annotations

import pytest

from kborel.abelian import FgAbGroup
from kborel.complexes import (
    ActionError,
    CwComplex,
    GCwComplex,
    antipodal_circle,
    check_acyclicity,
    fixed_subcomplex,
    flip_interval,
    orbit_euler_characteristic,
    point_complex,
    point_with,
    quotient_complex,
    rational_quotient_cohomology,
    rotation_disk,
    rp2_complex,
    smith_consistency,
    sphere_complex,
    surface_complex,
)
from kborel.groups import cyclic_group, symmetric_group
from kborel.linalg import ChainComplex

EXAMPLES = {
    "flip": flip_interval,
    "antipodal": antipodal_circle,
    "disk2": lambda: rotation_disk(2),
    "disk3": lambda: rotation_disk(3),
    "disk6": lambda: rotation_disk(6),
    "s3_point": lambda: point_with(symmetric_group(3)),
}


def flipped_edge_base():
    return CwComplex.from_boundaries([2, 1], [[[-1], [1]]])


class TestAdmissibility:
    def test_reversed_cell_rejected(self):
        flip = [[(1, 1), (0, 1)], [(0, -1)]]
        with pytest.raises(ActionError, match="subdivide"):
            GCwComplex(flipped_edge_base(), cyclic_group(2), {1: flip})

    def test_not_equivariant(self):
        # swap vertices but keep the edge orientation: d no longer commutes
        bad = [[(1, 1), (0, 1)], [(0, 1)]]
        with pytest.raises(ActionError):
            GCwComplex(flipped_edge_base(), cyclic_group(2), {1: bad})

    def test_not_homomorphism(self):
        base = CwComplex.from_boundaries([3])
        # the generator of Z/2 acting by a 3-cycle
        with pytest.raises(ActionError, match="homomorphism"):
            GCwComplex(base, cyclic_group(2), {1: [[(1, 1), (2, 1), (0, 1)]]})

    def test_not_a_permutation(self):
        base = CwComplex.from_boundaries([2])
        with pytest.raises(ActionError):
            GCwComplex(base, cyclic_group(2), {1: [[(0, 1), (0, 1)]]})

    def test_setwise_fixed_cell(self):
        # Z/3 rotating a triangle fixes the 2-cell but none of its boundary
        d1 = [[-1, 0, 1], [1, -1, 0], [0, 1, -1]]
        base = CwComplex.from_boundaries([3, 3, 1], [d1, [[1], [1], [1]]])
        rot = [[(1, 1), (2, 1), (0, 1)], [(1, 1), (2, 1), (0, 1)], [(0, 1)]]
        x = GCwComplex(base, cyclic_group(3), {1: rot})
        with pytest.raises(ActionError, match="leaves the fixed set"):
            fixed_subcomplex(x, 1)

    def test_json(self):
        x = flip_interval()
        data = x.to_json()
        assert data["ranks"] == [3, 2]
        assert set(data["action"]) == {"1"}


class TestFixedAndQuotient:
    def test_flip(self):
        x = flip_interval()
        f = fixed_subcomplex(x, 1)
        assert f.base.ranks == (1, 0)
        assert f.group.order == 2
        assert rational_quotient_cohomology(x) == [1, 0]
        assert quotient_complex(x).homology() == [FgAbGroup(1), FgAbGroup()]

    def test_antipodal_is_free(self):
        x = antipodal_circle()
        assert fixed_subcomplex(x, 1).base.is_empty()
        assert rational_quotient_cohomology(x) == [1, 1]

    @pytest.mark.parametrize("name", list(EXAMPLES))
    def test_two_routes_agree(self, name):
        # rational invariants of the chains vs integral orbit complex
        x = EXAMPLES[name]()
        assert rational_quotient_cohomology(x) == quotient_complex(x).betti()
        assert orbit_euler_characteristic(x) == quotient_complex(x).chain.euler_characteristic()

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_rotation_disk(self, n):
        x = rotation_disk(n)
        assert check_acyclicity(x.base)
        for g in range(1, n):
            f = fixed_subcomplex(x, g)
            assert f.base.ranks == (1, 0, 0)
        assert quotient_complex(x).homology()[0] == FgAbGroup(1)

    def test_subgroup_restriction(self):
        x = rotation_disk(6)
        sub = [0, 2, 4]
        assert rational_quotient_cohomology(x, sub) == [1, 0, 0]
        y = x.restrict(sub)
        assert y.group.order == 3
        assert quotient_complex(x, sub).betti() == [1, 0, 0]

    def test_trivial_action(self):
        x = GCwComplex.trivial_action(surface_complex(2), cyclic_group(3))
        assert rational_quotient_cohomology(x) == [1, 4, 1]
        assert fixed_subcomplex(x, 1).base.ranks == (1, 4, 1)


class TestAcyclicity:
    def test_empty_is_not_acyclic(self):
        res = check_acyclicity(ChainComplex([]))
        assert not res and res.degree == -1

    def test_point(self):
        assert check_acyclicity(point_complex())

    def test_witnesses(self):
        res = check_acyclicity(sphere_complex(2))
        assert (res.degree, res.witness) == (2, FgAbGroup(1))
        res = check_acyclicity(rp2_complex())
        assert (res.degree, res.witness) == (1, FgAbGroup(0, (2,)))
        assert check_acyclicity(rp2_complex(), 3)
        res = check_acyclicity(rp2_complex(), 2)
        assert (res.degree, res.witness) == (1, 1)

    def test_two_points(self):
        res = check_acyclicity(sphere_complex(0))
        assert res.degree == 0 and res.witness == FgAbGroup(1)


class TestSmith:
    @pytest.mark.parametrize("n, p", [(2, 2), (3, 3), (4, 2), (5, 5)])
    def test_pass_on_disks(self, n, p):
        x = rotation_disk(n)
        for g in range(1, n):
            if x.group.element_order(g) in (p, p * p):
                assert smith_consistency(x, g, p)["status"] == "pass"

    def test_hypothesis_not_met(self):
        x = antipodal_circle()
        assert smith_consistency(x, 1, 2)["status"] == "hypothesis not met"

    def test_wrong_order(self):
        with pytest.raises(ValueError):
            smith_consistency(rotation_disk(6), 1, 2)


class TestSurfaces:
    @pytest.mark.parametrize("g", [0, 1, 2, 5])
    def test_betti(self, g):
        assert surface_complex(g).betti() == [1, 2 * g, 1]

    def test_negative(self):
        with pytest.raises(ValueError):
            surface_complex(-1)
