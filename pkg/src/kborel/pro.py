"""Towers of finitely generated abelian groups and strict maps between them.

A :class:`Tower` is an explicit prefix of levels followed by a *tail rule*
that determines every later level and structure map.  Rules are chosen so
that the quantifiers in pro-triviality and pro-isomorphism ("for every m there
is an n") can be decided:

* :class:`Constant` -- the last group repeats with identity maps.
* :class:`EventuallyZeroMaps` -- a group repeats with zero maps.
* :class:`PAdicQuotient` -- ``M_n = A / p^n A`` with the projections.
* :class:`Stabilizing` -- ``M_n = R / I^n`` for a ring and ideal supplied by
  :mod:`kborel.repring`.

Homomorphisms between groups are integer matrices in the canonical
generators of :class:`~kborel.abelian.FgAbGroup` (free generators first,
then one generator per invariant factor).  Columns are images of source
generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Optional, Sequence, Union

from .abelian import ZERO, AdicGroup, DivisibleGroup, FgAbGroup, ext_to_Z, hom_to_Z
from .linalg import Cokernel, IntMatrix, as_matrix, cokernel, integer_kernel, solve_integer

__all__ = [
    "UnsupportedComputation",
    "Hom",
    "Level",
    "Constant",
    "EventuallyZeroMaps",
    "PAdicQuotient",
    "Stabilizing",
    "Tower",
    "TowerMap",
    "is_pro_trivial",
    "is_pro_isomorphism",
    "lim_lim1",
    "colim_hom_ext",
    "pro_pushforward_check",
]


class UnsupportedComputation(Exception):
    """The requested pro-computation is outside what the tail rules can decide."""


def _normalize(target: FgAbGroup, m: IntMatrix) -> IntMatrix:
    orders = target.generator_orders
    return IntMatrix([[x % n if n else x for x in row] for row, n in zip(m.tolist(), orders)],
                     m.rows, m.cols)


def _relations(g: FgAbGroup) -> IntMatrix:
    """Columns ``d_i e_i`` spanning the relations among the canonical generators."""
    n = g.ngens
    cols = [(i, d) for i, d in enumerate(g.generator_orders) if d]
    return IntMatrix.from_triplets(n, len(cols), [(i, k, d) for k, (i, d) in enumerate(cols)])


@dataclass(frozen=True)
class Hom:
    """A homomorphism ``source -> target`` between canonical groups."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape != (self.target.ngens, self.source.ngens):
            if m.rows * m.cols == 0 and self.target.ngens * self.source.ngens == 0:
                m = IntMatrix.zeros(self.target.ngens, self.source.ngens)
            else:
                raise ValueError(f"matrix shape {m.shape} does not fit "
                                 f"{self.source} -> {self.target}")
        m = _normalize(self.target, m)
        t_orders = self.target.generator_orders
        for j, d in enumerate(self.source.generator_orders):
            if not d:
                continue
            for i, t in enumerate(t_orders):
                if (d * m[i, j]) % t if t else m[i, j]:
                    raise ValueError(f"generator {j} of order {d} cannot map to "
                                     f"coordinate {i} value {m[i, j]}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, g: FgAbGroup) -> "Hom":
        return cls(g, g, IntMatrix.identity(g.ngens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "Hom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens))

    def __matmul__(self, other: "Hom") -> "Hom":
        if other.target != self.source:
            raise ValueError("cannot compose: groups do not match")
        return Hom(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        y = self.matrix.apply(x)
        return tuple(v % n if n else v for v, n in zip(y, self.target.generator_orders))

    def image_contains(self, other: "Hom") -> bool:
        """``im(other) <= im(self)``; both must land in the same group."""
        if other.target != self.target:
            raise ValueError("images live in different groups")
        span = self.matrix.hstack(_relations(self.target))
        return all(solve_integer(span, other.matrix.column(j)) is not None
                   for j in range(other.matrix.cols))

    def kernel_generators(self) -> IntMatrix:
        """Columns generate ``ker(self)`` inside ``Z^{source gens}``."""
        n = self.source.ngens
        big = self.matrix.hstack(_relations(self.target))
        k = integer_kernel(big)
        return k.submatrix(range(n), range(k.cols))

    def kills_kernel_of(self, other: "Hom") -> bool:
        """``ker(other) <= ker(self)``; both must start at the same group."""
        if other.source != self.source:
            raise ValueError("kernels live in different groups")
        gens = other.kernel_generators()
        rel = _relations(self.target)
        for j in range(gens.cols):
            img = self.matrix.apply(gens.column(j))
            if solve_integer(rel, img) is None:
                return False
        return True

    def is_isomorphism(self) -> bool:
        return self.source == self.target and self.image_contains(Hom.identity(self.target)) \
            and Hom.zero(self.source, self.source).kills_kernel_of(self)


def induced_hom(ambient: IntMatrix, source: Cokernel, target: Cokernel) -> Hom:
    """Hom between two cokernel presentations induced by an ambient matrix."""
    return Hom(source.group, target.group, target.to_gens @ ambient @ source.from_gens)


@dataclass(frozen=True)
class Level:
    group: FgAbGroup
    map: Optional[IntMatrix] = None  # to the previous level; None on level 1


@dataclass(frozen=True)
class Constant:
    """Levels beyond the prefix equal ``group`` (default: the last prefix group)
    and every later structure map is the identity."""

    group: Optional[FgAbGroup] = None
    junction: Optional[IntMatrix] = None


@dataclass(frozen=True)
class EventuallyZeroMaps:
    """Levels beyond the prefix equal ``group`` (default: the last prefix group)
    and every structure map from the first tail level on is zero."""

    group: Optional[FgAbGroup] = None


class _QuotientTail:
    """Levels ``Z^g / rel_n`` with structure maps induced by the identity of ``Z^g``."""

    junction: Optional[IntMatrix] = None

    def presentation(self, n: int) -> Cokernel:
        raise NotImplementedError

    def surjective(self) -> bool:
        return True


@dataclass(frozen=True)
class PAdicQuotient(_QuotientTail):
    """``M_n = base / p^n base`` with the canonical projections."""

    base: FgAbGroup
    p: int
    junction: Optional[IntMatrix] = None

    def presentation(self, n: int) -> Cokernel:
        orders = [self.p**n if d == 0 else gcd(d, self.p**n) for d in self.base.generator_orders]
        return cokernel(IntMatrix.diagonal(orders))

    def p_torsion(self) -> FgAbGroup:
        return FgAbGroup.from_orders(gcd(d, self.p ** d.bit_length()) for d in self.base.torsion)


@dataclass(frozen=True)
class Stabilizing(_QuotientTail):
    """``M_n = R / I^n`` for an augmented ring.

    ``source`` must provide ``presentation(n)`` and ``completion()`` (see
    :class:`kborel.repring.RepRing`).
    """

    source: object
    junction: Optional[IntMatrix] = None

    def presentation(self, n: int) -> Cokernel:
        return self.source.presentation(n)


TailRule = Union[Constant, EventuallyZeroMaps, PAdicQuotient, Stabilizing]


@dataclass(frozen=True)
class Tower:
    """An inverse system ``M_1 <- M_2 <- ...`` indexed by positive integers."""

    prefix: tuple = ()
    tail: TailRule = field(default_factory=Constant)

    def __post_init__(self):
        prefix = tuple(lv if isinstance(lv, Level) else Level(*lv) for lv in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        if isinstance(self.tail, Constant) and not prefix and self.tail.group is None:
            object.__setattr__(self, "tail", Constant(ZERO))
        for n in range(2, len(prefix) + 1):
            Hom(prefix[n - 1].group, prefix[n - 2].group, as_matrix(prefix[n - 1].map))
        if prefix and isinstance(self.tail, _QuotientTail) and self.tail.junction is None:
            raise ValueError("a quotient tail after a prefix needs a junction map")
        if prefix and isinstance(self.tail, Constant) and self.tail.group is not None \
                and self.tail.group != prefix[-1].group and self.tail.junction is None:
            raise ValueError("a constant tail with a new group needs a junction map")

    @property
    def N(self) -> int:
        return len(self.prefix)

    def group(self, n: int) -> FgAbGroup:
        if n < 1:
            raise IndexError("towers are indexed by positive integers")
        if n <= self.N:
            return self.prefix[n - 1].group
        t = self.tail
        if isinstance(t, (Constant, EventuallyZeroMaps)):
            if t.group is not None:
                return t.group
            return self.prefix[-1].group if self.prefix else ZERO
        return t.presentation(n).group

    def map(self, n: int) -> Hom:
        """``alpha_n : M_n -> M_{n-1}`` for ``n >= 2``."""
        if n < 2:
            raise IndexError("structure maps start at n = 2")
        src, dst = self.group(n), self.group(n - 1)
        if n <= self.N:
            return Hom(src, dst, as_matrix(self.prefix[n - 1].map))
        t = self.tail
        if isinstance(t, EventuallyZeroMaps):
            return Hom.zero(src, dst)
        if isinstance(t, Constant):
            if n == self.N + 1 and t.junction is not None:
                return Hom(src, dst, t.junction)
            return Hom.identity(src)
        if n == self.N + 1 and self.N:
            return Hom(src, dst, t.junction)
        return induced_hom(IntMatrix.identity(t.presentation(n).to_gens.cols),
                           t.presentation(n), t.presentation(n - 1))

    def composite(self, n: int, m: int) -> Hom:
        """``alpha_n^m : M_n -> M_m`` for ``n >= m``."""
        if n < m:
            raise ValueError("need n >= m")
        h = Hom.identity(self.group(n))
        for k in range(n, m, -1):
            h = self.map(k) @ h
        return h

    def truncated(self, length: int) -> "Tower":
        """Prefix of the first ``length`` levels, continued as a constant tower."""
        levels = [Level(self.group(1))]
        levels += [Level(self.group(n), self.map(n).matrix) for n in range(2, length + 1)]
        return Tower(tuple(levels), Constant())


@dataclass(frozen=True)
class TowerMap:
    """A strict map ``f_n : M_n -> M'_n`` of towers.

    ``maps`` lists ``f_1 .. f_N`` explicitly.  ``tail`` fixes the rest:
    ``"identity"`` (source and target agree beyond the prefix), ``"constant"``
    (``f_n = f_N``), ``"zero"``, or ``("induced", phi)`` for two
    :class:`PAdicQuotient` towers and a matrix ``phi`` between their bases.
    """

    source: Tower
    target: Tower
    maps: tuple = ()
    tail: object = "identity"

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(as_matrix(m) for m in self.maps))
        self._check_tail()
        for n in range(1, self.horizon + 3):
            self.at(n)  # well-defined
            if n >= 2:
                lhs = self.target.map(n) @ self.at(n)
                rhs = self.at(n - 1) @ self.source.map(n)
                if lhs.matrix != rhs.matrix:
                    raise ValueError(f"square at level {n} does not commute")

    def _check_tail(self):
        t = self.tail
        if t == "identity":
            if self.source.tail != self.target.tail:
                raise ValueError("identity tail needs equal tail rules")
        elif t == "constant":
            if not (isinstance(self.source.tail, Constant) and isinstance(self.target.tail, Constant)):
                raise ValueError("constant tail needs two constant towers")
            if not self.maps:
                raise ValueError("constant tail needs at least one explicit map")
        elif t == "zero":
            pass
        elif isinstance(t, tuple) and t and t[0] == "induced":
            s, g = self.source.tail, self.target.tail
            if not (isinstance(s, PAdicQuotient) and isinstance(g, PAdicQuotient) and s.p == g.p):
                raise ValueError("induced tail needs two p-adic towers for the same p")
            Hom(s.base, g.base, as_matrix(t[1]))
        else:
            raise ValueError(f"unknown map tail {t!r}")

    @property
    def horizon(self) -> int:
        return max(len(self.maps), self.source.N, self.target.N)

    def at(self, n: int) -> Hom:
        src, dst = self.source.group(n), self.target.group(n)
        if n <= len(self.maps):
            return Hom(src, dst, self.maps[n - 1])
        t = self.tail
        if t == "identity":
            if src != dst:
                raise ValueError(f"identity tail at level {n} between different groups")
            return Hom.identity(src)
        if t == "constant":
            return Hom(src, dst, self.maps[-1])
        if t == "zero":
            return Hom.zero(src, dst)
        phi = as_matrix(t[1])
        return induced_hom(phi, self.source.tail.presentation(n), self.target.tail.presentation(n))

    @classmethod
    def identity(cls, t: Tower) -> "TowerMap":
        return cls(t, t, (), "identity")


def _tail_pro_trivial(t: Tower) -> bool:
    rule = t.tail
    if isinstance(rule, EventuallyZeroMaps):
        return True
    if isinstance(rule, Constant):
        return t.group(t.N + 1).is_zero
    if isinstance(rule, PAdicQuotient):
        return rule.presentation(1).group.is_zero
    if isinstance(rule, Stabilizing):
        return rule.presentation(1).group.is_zero
    raise UnsupportedComputation(f"no decision procedure for tail {rule!r}")


def is_pro_trivial(t: Tower) -> bool:
    """Every ``M_m`` is eventually killed by the composites ``alpha_n^m``.

    Each tail rule is either eventually zero or has surjective maps onto a
    fixed nonzero group, so the tail alone decides.
    """
    return _tail_pro_trivial(t)


def _criterion(f: TowerMap, m: int, n: int) -> bool:
    beta = f.target.composite(n, m)
    alpha = f.source.composite(n, m)
    return f.at(m).image_contains(beta) and alpha.kills_kernel_of(f.at(n))


def _padic_iso(phi: Hom, p: int) -> bool:
    # {A/p^n} -> {B/p^n} is a pro-isomorphism iff ker and coker of phi are
    # finite of order prime to p.
    ker = _subgroup_structure(phi.source, phi.kernel_generators())
    coker = cokernel(phi.matrix.hstack(_relations(phi.target))).group
    for g in (ker, coker):
        if g.free_rank or g.p_torsion_count(p):
            return False
    return True


def _subgroup_structure(g: FgAbGroup, gens: IntMatrix) -> FgAbGroup:
    """Isomorphism type of the subgroup of ``g`` generated by the columns of ``gens``."""
    # subgroup = Z^k / {c : gens c in relations}
    rel = _relations(g)
    k = gens.cols
    if k == 0:
        return ZERO
    kern = integer_kernel(gens.hstack(rel))
    return cokernel(kern.submatrix(range(k), range(kern.cols))).group


def is_pro_isomorphism(f: TowerMap) -> bool:
    """Decide ``for all m exists n >= m: im(beta_n^m) <= im(f_m), ker(f_n) <= ker(alpha_n^m)``.

    Both conditions only get weaker as ``n`` grows, and every supported tail
    stabilizes them by level ``N + 2``, so a finite check suffices.
    """
    t = f.tail
    N = f.horizon
    if t == "zero":
        return is_pro_trivial(f.source) and is_pro_trivial(f.target)
    if t in ("identity", "constant"):
        for rule in (f.source.tail, f.target.tail):
            if not isinstance(rule, (Constant, EventuallyZeroMaps, _QuotientTail)):
                raise UnsupportedComputation(f"no decision procedure for tail {rule!r}")
        return all(_criterion(f, m, N + 2) for m in range(1, N + 2))
    if isinstance(t, tuple) and t[0] == "induced":
        s, g = f.source.tail, f.target.tail
        if not _padic_iso(Hom(s.base, g.base, as_matrix(t[1])), s.p):
            return False
        return all(f.at(m).image_contains(f.target.composite(N + 1, m)) for m in range(1, N + 1))
    raise UnsupportedComputation(f"no decision procedure for map tail {t!r}")


@dataclass(frozen=True)
class LimResult:
    limit: Union[FgAbGroup, AdicGroup]
    lim1: FgAbGroup


def lim_lim1(t: Tower) -> LimResult:
    """Inverse limit and ``lim^1``, read off the tail rule.

    Only the tail matters (a cofinal subsystem has the same lim and lim^1).
    Every supported rule is Mittag-Leffler, so ``lim^1`` is always zero.
    """
    rule = t.tail
    if isinstance(rule, EventuallyZeroMaps):
        return LimResult(ZERO, ZERO)
    if isinstance(rule, Constant):
        return LimResult(t.group(t.N + 1), ZERO)
    if isinstance(rule, PAdicQuotient):
        tors = rule.p_torsion()
        if rule.base.free_rank == 0 and tors.is_zero:
            return LimResult(ZERO, ZERO)
        amb = {rule.p} if not tors.is_zero else set()
        return LimResult(AdicGroup(0, {rule.p: rule.base.free_rank}, amb), ZERO)
    if isinstance(rule, Stabilizing):
        return LimResult(rule.source.completion(), ZERO)
    raise UnsupportedComputation(f"cannot evaluate lim for tail {rule!r}")


@dataclass(frozen=True)
class ColimResult:
    colim_hom: Union[FgAbGroup, DivisibleGroup]
    colim_ext: Union[FgAbGroup, DivisibleGroup]


def colim_hom_ext(t: Tower) -> ColimResult:
    """``colim_n hom(M_n, Z)`` and ``colim_n ext(M_n, Z)`` along the dual maps.

    Finite levels contribute nothing to ``hom``; along projections
    ``Z/p^n <- Z/p^{n+1}`` the ``ext`` groups form the inclusions whose colimit
    is ``Z/p^inf``.
    """
    rule = t.tail
    if isinstance(rule, EventuallyZeroMaps):
        return ColimResult(ZERO, ZERO)
    if isinstance(rule, Constant):
        g = t.group(t.N + 1)
        return ColimResult(hom_to_Z(g), ext_to_Z(g))
    if isinstance(rule, PAdicQuotient):
        tors = rule.p_torsion()
        if rule.base.free_rank == 0 and tors.is_zero:
            return ColimResult(ZERO, ZERO)
        amb = {rule.p} if not tors.is_zero else set()
        return ColimResult(ZERO, DivisibleGroup(0, {rule.p: rule.base.free_rank}, amb))
    if isinstance(rule, Stabilizing):
        lim = rule.source.completion()
        return ColimResult(FgAbGroup(lim.z_rank), DivisibleGroup(0, lim.ranks, lim.ambiguity))
    raise UnsupportedComputation(f"cannot evaluate colim for tail {rule!r}")


def pro_pushforward_check(f: TowerMap) -> dict:
    """Compare lim, lim^1, colim hom and colim ext on both sides of ``f``.

    When ``f`` is a pro-isomorphism all four must agree; ``consistent`` is
    False only if that fails.
    """
    iso = is_pro_isomorphism(f)
    sides = {}
    for name, tower in (("source", f.source), ("target", f.target)):
        lim = lim_lim1(tower)
        col = colim_hom_ext(tower)
        sides[name] = {"lim": lim.limit, "lim1": lim.lim1,
                       "colim_hom": col.colim_hom, "colim_ext": col.colim_ext}
    agree = sides["source"] == sides["target"]
    return {
        "pro_isomorphism": iso,
        "agree": agree,
        "consistent": agree or not iso,
        "source": {k: v.to_json() for k, v in sides["source"].items()},
        "target": {k: v.to_json() for k, v in sides["target"].items()},
    }


def enumerate_elements(g: FgAbGroup):
    """All elements of a finite group as coordinate tuples."""
    if g.free_rank:
        raise ValueError("cannot enumerate an infinite group")
    return product(*(range(d) for d in g.torsion))
