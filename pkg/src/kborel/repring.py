"""Representation rings with an augmentation, and their ideal-adic towers.

A ring is given by structure constants on a ``Z``-basis of irreducibles:
``x_i x_j = sum_k c[i][j][k] x_k``, together with the augmentation (the
dimension of each irreducible).  The cyclic case ``R(Z/m) = Z[t]/(t^m - 1)``
is built in; any other group's ring must be supplied as a table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from sympy import factorint, isprime

from .abelian import AdicGroup, FgAbGroup
from .linalg import Cokernel, IntMatrix, cokernel, lattice_basis
from .pro import Level, Stabilizing, Tower

__all__ = [
    "RepRing",
    "CyclicRepRing",
    "NotStabilized",
    "augmentation_tower",
    "torsion_signature",
    "completion_rank",
]


class NotStabilized(Exception):
    """The depth schedule ran out before the tower's growth pattern settled."""


@dataclass(frozen=True, eq=False)
class RepRing:
    """Commutative ring with ``Z``-basis ``x_0 .. x_{k-1}`` and augmentation ``eps``."""

    structure: tuple
    augmentation: tuple
    order: Optional[int] = None

    def __post_init__(self):
        k = len(self.augmentation)
        st = tuple(tuple(tuple(int(c) for c in row) for row in plane) for plane in self.structure)
        if len(st) != k or any(len(pl) != k or any(len(r) != k for r in pl) for pl in st):
            raise ValueError("structure constants must form a k x k x k array")
        object.__setattr__(self, "structure", st)
        object.__setattr__(self, "augmentation", tuple(int(a) for a in self.augmentation))
        unit = self._find_unit()
        if unit is None:
            raise ValueError("structure constants have no unit basis element")
        object.__setattr__(self, "_unit", unit)
        eps = self.augmentation
        for i in range(k):
            for j in range(k):
                if sum(c * e for c, e in zip(st[i][j], eps)) != eps[i] * eps[j]:
                    raise ValueError("augmentation is not multiplicative")

    def _find_unit(self) -> Optional[int]:
        k = self.rank
        for u in range(k):
            if all(self.structure[u][j][m] == int(m == j) for j in range(k) for m in range(k)):
                return u
        return None

    @property
    def rank(self) -> int:
        return len(self.augmentation)

    @property
    def unit(self) -> int:
        return self._unit

    def __hash__(self):
        return hash((self.structure, self.augmentation))

    def __eq__(self, other):
        return isinstance(other, RepRing) and self.structure == other.structure \
            and self.augmentation == other.augmentation

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        k = self.rank
        out = [0] * k
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for m, c in enumerate(self.structure[i][j]):
                    if c:
                        out[m] += c * x * y
        return tuple(out)

    def augmentation_ideal_basis(self) -> list[tuple[int, ...]]:
        k = self.rank
        gens = []
        for i in range(k):
            if i == self.unit:
                continue
            v = [0] * k
            v[i] += 1
            v[self.unit] -= self.augmentation[i]
            gens.append(tuple(v))
        return lattice_basis(gens, k)

    @lru_cache(maxsize=None)
    def ideal_power(self, n: int) -> tuple[tuple[int, ...], ...]:
        """``Z``-basis of ``I^n`` (``I^0 = R``)."""
        if n < 0:
            raise ValueError("ideal power must be non-negative")
        k = self.rank
        if n == 0:
            return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
        base = self.augmentation_ideal_basis()
        if n == 1:
            return tuple(base)
        prev = self.ideal_power(n - 1)
        return tuple(lattice_basis((self.multiply(a, b) for a in prev for b in base), k))

    @lru_cache(maxsize=None)
    def presentation(self, n: int) -> Cokernel:
        """``R / I^n`` as a cokernel of the inclusion ``I^n -> R``."""
        if n < 1:
            raise ValueError("depth must be at least 1")
        basis = self.ideal_power(n)
        k = self.rank
        mat = IntMatrix([[v[i] for v in basis] for i in range(k)], k, len(basis))
        return cokernel(mat)

    def quotient(self, n: int) -> FgAbGroup:
        return self.presentation(n).group

    def primes(self) -> frozenset[int]:
        """Primes dividing the group order (``sum dim^2`` if not given)."""
        order = self.order if self.order else sum(d * d for d in self.augmentation)
        return frozenset(factorint(order))

    def completion(self, depth: int = 12) -> AdicGroup:
        """``lim R/I^n`` as ``Z x prod_p (Z_p^)^{r_p}``."""
        ranks = {p: completion_rank(self, p, range(1, depth + 1)) for p in sorted(self.primes())}
        return AdicGroup(self.quotient(1).free_rank, ranks)

    def to_json(self) -> dict:
        return {"irreducibles": self.rank, "structure": [[list(r) for r in pl] for pl in self.structure],
                "augmentation": list(self.augmentation)}

    @classmethod
    def from_json(cls, data: dict) -> "RepRing":
        if "m" in data:
            return CyclicRepRing(int(data["m"]))
        ring = cls(data["structure"], data["augmentation"], data.get("order"))
        if "irreducibles" in data and int(data["irreducibles"]) != ring.rank:
            raise ValueError("'irreducibles' does not match the structure constants")
        return ring


def CyclicRepRing(m: int) -> RepRing:
    """``R(Z/m) = Z[t]/(t^m - 1)``; basis ``t^0 .. t^{m-1}``, all of dimension one."""
    if m < 1:
        raise ValueError("m must be at least 1")
    st = [[[int(k == (i + j) % m) for k in range(m)] for j in range(m)] for i in range(m)]
    return RepRing(st, [1] * m, m)


def augmentation_tower(ring: RepRing, depth: int) -> Tower:
    """``R/I <- R/I^2 <- ... <- R/I^depth`` followed by the stabilizing rule."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    full = Tower((), Stabilizing(ring))
    levels = [Level(full.group(1))]
    levels += [Level(full.group(n), full.map(n).matrix) for n in range(2, depth + 1)]
    junction = full.map(depth + 1).matrix
    return Tower(tuple(levels), Stabilizing(ring, junction))


def torsion_signature(ring: RepRing, p: int, n: int) -> tuple[int, ...]:
    """Exponents of the ``p``-primary cyclic summands of ``R/I^n``, largest first."""
    out = []
    for d in ring.quotient(n).torsion:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            out.append(e)
    return tuple(sorted(out, reverse=True))


def completion_rank(ring: RepRing, p: int, depth_schedule: Iterable[int] = range(1, 13)) -> int:
    """``Z_p^``-rank of ``lim R/I^n``, read off the tower's torsion growth.

    Heuristic: each ``Z_p^`` summand of the completion shows up as one
    ``p``-primary cyclic summand of ``R/I^n`` whose exponent grows without
    bound.  The count of ``p``-primary summands is tracked along the schedule
    and accepted once two consecutive depths repeat it while the total
    exponent is still growing.  Checked against conjugacy-class counts in the
    test suite.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    depths = sorted(set(int(n) for n in depth_schedule))
    if not depths or depths[0] < 1:
        raise ValueError("depth schedule must contain positive depths")
    if p not in ring.primes():
        # I is p-locally idempotent: R/I^n has no p-torsion at any depth.
        if all(not torsion_signature(ring, p, n) for n in depths):
            return 0
    history: list[tuple[int, int]] = []
    for n in depths:
        sig = torsion_signature(ring, p, n)
        history.append((len(sig), sum(sig)))
        if len(history) >= 3:
            (c0, s0), (c1, s1), (c2, s2) = history[-3:]
            if c0 == c1 == c2 and (c0 == 0 or s0 < s2):
                return c0
    raise NotStabilized(
        f"p={p}: no stable signature within depths {depths[0]}..{depths[-1]} "
        f"(counts {[c for c, _ in history]})")
