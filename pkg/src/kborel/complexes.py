"""Finite CW complexes and cellular actions of finite groups on them.

An action assigns to every group element and every dimension a signed
permutation of the cells: cell ``i`` goes to ``sign * cell image``.  Three
conditions are checked at construction:

* the assignment is a homomorphism,
* it commutes with the boundary maps,
* it is *regular*: a cell sent to plus or minus itself is sent to ``+1``
  times itself.  Regularity makes fixed sets subcomplexes and orbit sets the
  cells of the quotient; inputs violating it must be subdivided first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .abelian import FgAbGroup
from .groups import FiniteGroup, cyclic_group, trivial_group
from .linalg import ChainComplex, IntMatrix, betti, homology, rank_Q

__all__ = [
    "CwComplex",
    "GCwComplex",
    "ActionError",
    "fixed_subcomplex",
    "rational_quotient_cohomology",
    "quotient_complex",
    "orbit_euler_characteristic",
    "AcyclicityResult",
    "check_acyclicity",
    "smith_consistency",
    "surface_complex",
    "point_complex",
    "sphere_complex",
    "rp2_complex",
    "torus_complex",
    "klein_bottle_complex",
    "flip_interval",
    "antipodal_circle",
    "rotation_disk",
    "point_with",
]

SignedPerm = tuple  # tuple of (image, sign) pairs, one per cell


class ActionError(ValueError):
    """The proposed cellular action is not an admissible G-CW structure."""


@dataclass(frozen=True)
class CwComplex:
    """A cellular chain complex with optional cell labels per dimension."""

    chain: ChainComplex
    labels: tuple = ()

    def __post_init__(self):
        if self.labels:
            labels = tuple(tuple(str(x) for x in dim) for dim in self.labels)
            if tuple(len(d) for d in labels) != self.chain.ranks:
                raise ValueError("labels do not match the cell counts")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_boundaries(cls, ranks: Sequence[int], boundaries=(), labels=()) -> "CwComplex":
        return cls(ChainComplex(ranks, boundaries), tuple(labels))

    @property
    def ranks(self) -> tuple[int, ...]:
        return self.chain.ranks

    @property
    def dim(self) -> int:
        return self.chain.top_dim

    def is_empty(self) -> bool:
        return self.chain.is_empty()

    def betti(self, coeff: Union[str, int] = "Q") -> list[int]:
        return betti(self.chain, coeff)

    def homology(self) -> list[FgAbGroup]:
        return homology(self.chain)

    def to_json(self) -> dict:
        out = self.chain.to_json()
        if self.labels:
            out["labels"] = [list(d) for d in self.labels]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CwComplex":
        return cls(ChainComplex.from_json(data), tuple(data.get("labels", ())))


def _perm_matrix(perm: SignedPerm) -> IntMatrix:
    n = len(perm)
    return IntMatrix.from_triplets(n, n, [(img, i, s) for i, (img, s) in enumerate(perm)])


def _compose(a: SignedPerm, b: SignedPerm) -> SignedPerm:
    """``a`` after ``b``."""
    return tuple((a[img][0], s * a[img][1]) for img, s in b)


class GCwComplex:
    """A finite group acting cellularly and regularly on a finite CW complex.

    ``action`` maps some group elements (enough to generate the group) to one
    signed permutation per dimension.  The action of every other element is
    obtained by closing under products and then verified.
    """

    def __init__(self, base: CwComplex, group: FiniteGroup,
                 action: Mapping[int, Sequence[Sequence[Sequence[int]]]]):
        self.base = base
        self.group = group
        ranks = base.ranks
        gens: dict[int, tuple[SignedPerm, ...]] = {}
        for g, dims in action.items():
            g = int(g)
            if not 0 <= g < group.order:
                raise ActionError(f"element {g} is not in a group of order {group.order}")
            if len(dims) != len(ranks):
                raise ActionError(f"element {g}: expected {len(ranks)} dimensions of cell data")
            perms = []
            for n, perm in enumerate(dims):
                perm = tuple((int(img), int(s)) for img, s in perm)
                if len(perm) != ranks[n] or sorted(i for i, _ in perm) != list(range(ranks[n])):
                    raise ActionError(f"element {g}, dim {n}: not a permutation of the cells")
                if any(s not in (1, -1) for _, s in perm):
                    raise ActionError(f"element {g}, dim {n}: signs must be +1 or -1")
                perms.append(perm)
            gens[g] = tuple(perms)
        self._rho = self._close(gens)
        self._check_boundaries(gens)
        self._check_regular()

    def _close(self, gens):
        G = self.group
        ident = tuple(tuple((i, 1) for i in range(r)) for r in self.base.ranks)
        rho = {G.identity: ident}
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s, ps in gens.items():
                    y = G.mul(x, s)
                    if y not in rho:
                        rho[y] = tuple(_compose(a, b) for a, b in zip(rho[x], ps))
                        nxt.append(y)
            frontier = nxt
        if len(rho) != G.order:
            raise ActionError("acting elements do not generate the group")
        for x in rho:
            for s, ps in gens.items():
                if rho[G.mul(x, s)] != tuple(_compose(a, b) for a, b in zip(rho[x], ps)):
                    raise ActionError("cell action is not a homomorphism")
        return rho

    def _check_boundaries(self, gens):
        c = self.base.chain
        for g, ps in gens.items():
            for n in range(1, c.top_dim + 1):
                if _perm_matrix(ps[n - 1]) @ c.d(n) != c.d(n) @ _perm_matrix(ps[n]):
                    raise ActionError(f"element {g} does not commute with d_{n}")

    def _check_regular(self):
        for g, ps in self._rho.items():
            for n, perm in enumerate(ps):
                for i, (img, s) in enumerate(perm):
                    if img == i and s != 1:
                        raise ActionError(
                            f"element {g} reverses cell {i} in dim {n}; subdivide first")

    def rho(self, g: int, n: int) -> SignedPerm:
        return self._rho[g][n]

    def matrix(self, g: int, n: int) -> IntMatrix:
        return _perm_matrix(self._rho[g][n])

    @classmethod
    def trivial_action(cls, base: CwComplex, group: FiniteGroup) -> "GCwComplex":
        ident = [[(i, 1) for i in range(r)] for r in base.ranks]
        return cls(base, group, {g: ident for g in (group.generators or (group.identity,))})

    def restrict(self, elements: Iterable[int]) -> "GCwComplex":
        """The action of the subgroup on ``elements`` (indices in ``self.group``)."""
        elems = sorted(set(elements))
        sub = self.group.subgroup(elems)
        return GCwComplex(self.base, sub, {i: self._rho[elems[i]] for i in sub.generators})

    def to_json(self) -> dict:
        out = self.base.to_json()
        out["group"] = self.group.to_json()
        out["action"] = {str(g): {str(n): [list(x) for x in p] for n, p in enumerate(self._rho[g])}
                         for g in self.group.generators}
        return out

    def __repr__(self):
        return f"GCwComplex(ranks={list(self.base.ranks)}, group_order={self.group.order})"


def fixed_subcomplex(x: GCwComplex, g: int) -> GCwComplex:
    """Cells fixed by ``g`` (hence by ``<g>``), with the action of the centralizer."""
    c = x.base.chain
    keep = [[i for i, (img, s) in enumerate(x.rho(g, n)) if img == i]
            for n in range(len(c.ranks))]
    bds = []
    for n in range(1, c.top_dim + 1):
        d = c.d(n)
        dropped = [i for i in range(c.ranks[n - 1]) if i not in set(keep[n - 1])]
        if any(d[i, j] for i in dropped for j in keep[n]):
            raise ActionError(f"boundary of a fixed {n}-cell leaves the fixed set")
        bds.append(d.submatrix(keep[n - 1], keep[n]))
    labels = ()
    if x.base.labels:
        labels = tuple(tuple(x.base.labels[n][i] for i in k) for n, k in enumerate(keep))
    sub_base = CwComplex(ChainComplex([len(k) for k in keep], bds), labels)
    cent = sorted(x.group.centralizer(g))
    sub = x.group.subgroup(cent)
    pos = [{cell: i for i, cell in enumerate(k)} for k in keep]
    action = {}
    for i in sub.generators:
        h = cent[i]
        action[i] = [[(pos[n][x.rho(h, n)[cell][0]], x.rho(h, n)[cell][1]) for cell in k]
                     for n, k in enumerate(keep)]
    return GCwComplex(sub_base, sub, action)


def _subgroup_elements(x: GCwComplex, subgroup) -> list[int]:
    if subgroup is None:
        return list(x.group.elements())
    if isinstance(subgroup, FiniteGroup):
        if subgroup.parent_indices is None:
            raise ValueError("pass a subgroup built with FiniteGroup.subgroup, or element indices")
        return list(subgroup.parent_indices)
    return sorted(set(int(h) for h in subgroup))


def _invariant_sums(x: GCwComplex, elems: Sequence[int]) -> list[IntMatrix]:
    out = []
    for n, r in enumerate(x.base.ranks):
        acc = [[0] * r for _ in range(r)]
        for h in elems:
            for i, (img, s) in enumerate(x.rho(h, n)):
                acc[img][i] += s
        out.append(IntMatrix(acc, r, r))
    return out


def rational_quotient_cohomology(x: GCwComplex, subgroup=None) -> list[int]:
    """Rational Betti numbers of ``H \\ X`` via orbit-averaged chains.

    Over ``Q`` the coinvariants of ``C_*(X)`` are isomorphic to the
    invariants, the image of ``sum_h rho(h)``; the Betti numbers of that
    subcomplex are returned (cohomology and homology agree over a field).
    """
    elems = _subgroup_elements(x, subgroup)
    S = _invariant_sums(x, elems)
    c = x.base.chain
    dim_inv = [rank_Q(s) for s in S]
    rk = [0] * (len(S) + 1)
    for n in range(1, len(S)):
        rk[n] = rank_Q(c.d(n) @ S[n])
    return [dim_inv[n] - rk[n] - rk[n + 1] for n in range(len(S))]


def quotient_complex(x: GCwComplex, subgroup=None) -> CwComplex:
    """Integral cellular chain complex of ``H \\ X``: one cell per orbit.

    Regularity makes the orbit of a cell carry a well-defined sign relative
    to its least-index representative.
    """
    elems = _subgroup_elements(x, subgroup)
    c = x.base.chain
    orbit_of = []   # per dim: cell -> (orbit index, sign)
    reps = []
    for n, r in enumerate(c.ranks):
        where: dict[int, tuple[int, int]] = {}
        dim_reps = []
        for cell in range(r):
            if cell in where:
                continue
            k = len(dim_reps)
            dim_reps.append(cell)
            for h in elems:
                img, s = x.rho(h, n)[cell]
                if img in where and where[img] != (k, s):
                    raise ActionError(f"orbit of {n}-cell {cell} carries inconsistent signs")
                where[img] = (k, s)
        orbit_of.append(where)
        reps.append(dim_reps)
    bds = []
    for n in range(1, c.top_dim + 1):
        d = c.d(n)
        trip = []
        for k, rep in enumerate(reps[n]):
            for i in range(c.ranks[n - 1]):
                if d[i, rep]:
                    o, s = orbit_of[n - 1][i]
                    trip.append((o, k, s * d[i, rep]))
        bds.append(IntMatrix.from_triplets(len(reps[n - 1]), len(reps[n]), trip))
    return CwComplex(ChainComplex([len(r) for r in reps], bds))


def orbit_euler_characteristic(x: GCwComplex, subgroup=None) -> int:
    """``sum (-1)^dim`` over cell orbits."""
    elems = _subgroup_elements(x, subgroup)
    total = 0
    for n, r in enumerate(x.base.ranks):
        seen: set[int] = set()
        for cell in range(r):
            if cell not in seen:
                total += (-1) ** n
                seen |= {x.rho(h, n)[cell][0] for h in elems}
    return total


@dataclass(frozen=True)
class AcyclicityResult:
    acyclic: bool
    degree: Optional[int] = None
    witness: Optional[Union[FgAbGroup, int]] = None

    def __bool__(self):
        return self.acyclic

    def to_json(self) -> dict:
        w = self.witness
        return {"acyclic": self.acyclic, "degree": self.degree,
                "witness": w.to_json() if isinstance(w, FgAbGroup) else w}


def check_acyclicity(x: Union[CwComplex, ChainComplex], coeff: Union[str, int] = "Z") -> AcyclicityResult:
    """Reduced homology vanishes in every degree.

    The empty complex is not acyclic: its reduced homology is ``Z`` (or the
    field) in degree ``-1``.  Over a field the witness is the reduced Betti
    number; over ``Z`` it is the reduced homology group.
    """
    chain = x.chain if isinstance(x, CwComplex) else x
    if chain.is_empty():
        return AcyclicityResult(False, -1, FgAbGroup(1) if coeff == "Z" else 1)
    if coeff == "Z":
        groups = homology(chain)
        h0 = groups[0]
        groups[0] = FgAbGroup(h0.free_rank - 1, h0.torsion)
        for n, g in enumerate(groups):
            if not g.is_zero:
                return AcyclicityResult(False, n, g)
        return AcyclicityResult(True)
    b = betti(chain, coeff)
    b[0] -= 1
    for n, v in enumerate(b):
        if v:
            return AcyclicityResult(False, n, v)
    return AcyclicityResult(True)


def smith_consistency(x: GCwComplex, g: int, p: int) -> dict:
    """Check that the fixed set of a ``p``-power element on an ``F_p``-acyclic
    complex is non-empty and ``F_p``-acyclic, as Smith theory guarantees.

    ``status`` is ``"pass"``, ``"hypothesis not met"`` (``X`` itself is not
    ``F_p``-acyclic) or ``"internal-consistency-error"``.
    """
    k = x.group.element_order(g)
    q = k
    while q > 1 and q % p == 0:
        q //= p
    if q != 1:
        raise ValueError(f"element {g} has order {k}, not a power of {p}")
    base = check_acyclicity(x.base, p)
    fixed = fixed_subcomplex(x, g).base
    out = {
        "element": g,
        "prime": p,
        "element_order": k,
        "x_betti_mod_p": x.base.betti(p),
        "fixed_betti_mod_p": fixed.betti(p),
        "fixed_cells": list(fixed.ranks),
    }
    if not base:
        out["status"] = "hypothesis not met"
        return out
    ok = not fixed.is_empty() and bool(check_acyclicity(fixed, p))
    out["status"] = "pass" if ok else "internal-consistency-error"
    return out


# -- standard complexes -------------------------------------------------------

def point_complex() -> CwComplex:
    return CwComplex.from_boundaries([1], [], [["pt"]])


def sphere_complex(n: int) -> CwComplex:
    """``S^n`` with one 0-cell and one ``n``-cell."""
    if n == 0:
        return CwComplex.from_boundaries([2])
    ranks = [1] + [0] * (n - 1) + [1]
    return CwComplex.from_boundaries(ranks, [IntMatrix.zeros(ranks[i - 1], ranks[i])
                                             for i in range(1, n + 1)])


def rp2_complex() -> CwComplex:
    return CwComplex.from_boundaries([1, 1, 1], [[[0]], [[2]]])


def torus_complex() -> CwComplex:
    return surface_complex(1)


def klein_bottle_complex() -> CwComplex:
    """One 0-cell, edges ``a, b``, one 2-cell on ``a b a b^-1``."""
    return CwComplex.from_boundaries([1, 2, 1], [[[0, 0]], [[2], [0]]],
                                     [["v"], ["a", "b"], ["f"]])


def surface_complex(genus: int) -> CwComplex:
    """Closed orientable surface: one vertex, ``2g`` edges, one 2-cell on the
    product of commutators (whose cellular boundary is zero)."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    edges = [f"{c}{i}" for i in range(1, genus + 1) for c in "ab"]
    return CwComplex.from_boundaries([1, 2 * genus, 1],
                                     [IntMatrix.zeros(1, 2 * genus), IntMatrix.zeros(2 * genus, 1)],
                                     [["v"], edges, ["f"]])


def flip_interval() -> GCwComplex:
    """``[-1, 1]`` with vertices ``-1, 0, 1`` and edges ``[-1,0], [0,1]``;
    ``Z/2`` acts by ``x -> -x`` (the edges swap with a sign)."""
    base = CwComplex.from_boundaries(
        [3, 2], [[[-1, 0], [1, -1], [0, 1]]], [["-1", "0", "1"], ["[-1,0]", "[0,1]"]])
    flip = [[(2, 1), (1, 1), (0, 1)], [(1, -1), (0, -1)]]
    return GCwComplex(base, cyclic_group(2), {1: flip})


def antipodal_circle() -> GCwComplex:
    """Square model of ``S^1`` (4 vertices, 4 edges) with the antipodal ``Z/2``."""
    d1 = [[-1, 0, 0, 1], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]
    base = CwComplex.from_boundaries([4, 4], [d1])
    rot = [[((i + 2) % 4, 1) for i in range(4)], [((i + 2) % 4, 1) for i in range(4)]]
    return GCwComplex(base, cyclic_group(2), {1: rot})


def rotation_disk(n: int) -> GCwComplex:
    """A disk coned off an ``n``-gon, with ``Z/n`` rotating it about the cone point.

    Vertex 0 is the centre, vertices ``1..n`` the corners; edges ``0..n-1``
    run around the rim and edges ``n..2n-1`` are the spokes; triangle ``i``
    is spanned by the centre and rim edge ``i``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    d1 = [[0] * (2 * n) for _ in range(n + 1)]
    for i in range(n):
        d1[1 + (i + 1) % n][i] += 1
        d1[1 + i][i] -= 1
        d1[1 + i][n + i] += 1
        d1[0][n + i] -= 1
    d2 = [[0] * n for _ in range(2 * n)]
    for i in range(n):
        d2[i][i] += 1
        d2[n + i][i] += 1
        d2[n + (i + 1) % n][i] -= 1
    base = CwComplex.from_boundaries([n + 1, 2 * n, n], [d1, d2])
    rot = [
        [(0, 1)] + [(1 + (i + 1) % n, 1) for i in range(n)],
        [((i + 1) % n, 1) for i in range(n)] + [(n + (i + 1) % n, 1) for i in range(n)],
        [((i + 1) % n, 1) for i in range(n)],
    ]
    return GCwComplex(base, cyclic_group(n), {1 % n: rot})


def point_with(group: FiniteGroup) -> GCwComplex:
    return GCwComplex.trivial_action(point_complex(), group)
