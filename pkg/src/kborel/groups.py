"""Finite groups given by Cayley tables or permutation generators.

Elements are the integers ``0 .. order-1``.  Products are looked up in a
numpy table, which keeps conjugacy and centralizer enumeration fast enough
for groups up to the order cap (default 2000, overridable through the
``KBOREL_ORDER_CAP`` environment variable).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

import numpy as np
from sympy import factorint, isprime

__all__ = [
    "FiniteGroup",
    "ConPClass",
    "GroupError",
    "order_cap",
    "conjugacy_classes",
    "con_p",
    "primes_of_group",
    "cyclic_group",
    "symmetric_group",
    "dihedral_group",
    "trivial_group",
]

DEFAULT_ORDER_CAP = 2000


class GroupError(ValueError):
    """Raised for tables or generators that do not define a group."""


def order_cap() -> int:
    return int(os.environ.get("KBOREL_ORDER_CAP", DEFAULT_ORDER_CAP))


class FiniteGroup:
    """A finite group on the elements ``0 .. order-1``.

    ``table[a, b]`` is the index of ``a * b``.  The identity is detected from
    the table.  ``parent_indices`` is set on subgroups and records each
    element's index in the ambient group.
    """

    def __init__(self, table, generators: Optional[Sequence[int]] = None,
                 parent_indices: Optional[Sequence[int]] = None, cap: Optional[int] = None):
        tab = np.array(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1] or tab.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = tab.shape[0]
        cap = order_cap() if cap is None else cap
        if n > cap:
            raise GroupError(f"group order {n} exceeds the order cap {cap}")
        if tab.min() < 0 or tab.max() >= n:
            raise GroupError("Cayley table entries out of range")
        expect = np.arange(n)
        if not all((np.sort(tab[i]) == expect).all() and (np.sort(tab[:, i]) == expect).all()
                   for i in range(n)):
            raise GroupError("Cayley table is not a Latin square")
        ids = [e for e in range(n) if (tab[e] == expect).all() and (tab[:, e] == expect).all()]
        if not ids:
            raise GroupError("Cayley table has no identity element")
        tab.setflags(write=False)
        self.table = tab
        self.identity = ids[0]
        self.inverses = np.argmax(tab == self.identity, axis=1)
        self.parent_indices = tuple(parent_indices) if parent_indices is not None else None
        self.generators = tuple(generators) if generators else self._find_generators()
        self._check_associative()

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        x = self.identity
        for _ in range(k):
            x = self.mul(x, a)
        return x

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != self.identity:
            x, k = self.mul(x, a), k + 1
        return k

    def conjugate(self, x: int, g: int) -> int:
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inverse(g))

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def _closure(self, gens: Iterable[int]) -> set[int]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def _find_generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        span = {self.identity}
        for x in range(self.order):
            if x not in span:
                gens.append(x)
                span = self._closure(gens)
                if len(span) == self.order:
                    break
        return tuple(gens)

    def _check_associative(self):
        # Light's test: (x a) y == x (a y) for a in a generating set suffices.
        T = self.table
        for a in self.generators:
            left = T[T[:, a]]          # row x: (x a) y
            right = T[:, T[a]]         # row x: x (a y)
            if not (left == right).all():
                raise GroupError("Cayley table is not associative")
        if len(self._closure(self.generators)) != self.order:
            raise GroupError("given generators do not generate the group")

    def centralizer(self, g: int) -> tuple[int, ...]:
        """Elements commuting with ``g``; this is also the centralizer of ``<g>``."""
        T = self.table
        return tuple(int(x) for x in np.nonzero(T[:, g] == T[g, :])[0])

    def cyclic_subgroup(self, g: int) -> tuple[int, ...]:
        out, x = [self.identity], g
        while x != self.identity:
            out.append(x)
            x = self.mul(x, g)
        return tuple(out)

    def subgroup(self, elements: Iterable[int]) -> "FiniteGroup":
        """The subgroup on ``elements`` (which must be closed), re-indexed in sorted order."""
        elems = sorted(set(int(e) for e in elements))
        pos = {e: i for i, e in enumerate(elems)}
        try:
            tab = [[pos[int(self.table[a, b])] for b in elems] for a in elems]
        except KeyError:
            raise GroupError("element set is not closed under multiplication") from None
        parent = elems if self.parent_indices is None else [self.parent_indices[e] for e in elems]
        return FiniteGroup(tab, parent_indices=parent)

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], degree: Optional[int] = None,
                          cap: Optional[int] = None) -> "FiniteGroup":
        """Close 0-based permutations under composition, ``(a b)(i) = a(b(i))``.

        Element 0 is the identity; the rest appear in breadth-first order.
        """
        cap = order_cap() if cap is None else cap
        gens = [tuple(int(x) for x in g) for g in gens]
        if degree is None:
            degree = len(gens[0]) if gens else 1
        for g in gens:
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise GroupError(f"{list(g)} is not a permutation of 0..{degree - 1}")
        ident = tuple(range(degree))
        index = {ident: 0}
        elems = [ident]
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple(x[i] for i in g)  # x after g: (x g)(i) = x(g(i))
                    if y not in index:
                        index[y] = len(elems)
                        elems.append(y)
                        nxt.append(y)
                        if len(elems) > cap:
                            raise GroupError(f"group order exceeds the order cap {cap}")
            frontier = nxt
        P = np.array(elems, dtype=np.int64)
        n = len(elems)
        radix = np.array([degree**i for i in range(degree)], dtype=object if degree > 15 else np.int64)
        codes = P @ radix
        order = np.argsort(codes)
        sorted_codes = codes[order]
        table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            comp = P[a][P]                 # row b: a(b(i))
            table[a] = order[np.searchsorted(sorted_codes, comp @ radix)]
        gen_idx = tuple(index[g] for g in gens)
        return cls(table, generators=gen_idx or None, cap=cap)

    def permutation_of(self, a: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.table[a])

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, data: dict, cap: Optional[int] = None) -> "FiniteGroup":
        if "table" in data:
            g = cls(data["table"], cap=cap)
            if "order" in data and int(data["order"]) != g.order:
                raise GroupError(f"declared order {data['order']} != table size {g.order}")
            return g
        if "perm_gens" in data:
            return cls.from_permutations(data["perm_gens"], data.get("degree"), cap=cap)
        if "cyclic" in data:
            return cyclic_group(int(data["cyclic"]))
        raise GroupError("group JSON needs 'table', 'perm_gens' or 'cyclic'")

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]])


def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise GroupError("cyclic group order must be positive")
    return FiniteGroup([[(a + b) % m for b in range(m)] for a in range(m)], generators=(1 % m,))


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return trivial_group()
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return FiniteGroup.from_permutations(gens, n)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular ``n``-gon, order ``2n``."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_permutations([rot, ref], n)


def conjugacy_classes(g: FiniteGroup) -> list[tuple[int, frozenset[int]]]:
    """``(representative, class)`` pairs; representatives are least indices."""
    seen: set[int] = set()
    out = []
    for x in g.elements():
        if x in seen:
            continue
        cls = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for s in g.generators:
                    z = g.conjugate(y, s)
                    if z not in cls:
                        cls.add(z)
                        nxt.append(z)
            frontier = nxt
        seen |= cls
        out.append((min(cls), frozenset(cls)))
    return out


def _is_prime_power_of(n: int, p: int) -> bool:
    if n < p:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class ConPClass:
    """One conjugacy class of non-trivial ``p``-power-order elements."""

    representative: int
    prime: int
    order_of_rep: int
    centralizer: FiniteGroup
    centralizer_elements: tuple[int, ...]
    class_size: int
    elements: frozenset


def con_p(g: FiniteGroup, p: int) -> list[ConPClass]:
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    out = []
    for rep, cls in conjugacy_classes(g):
        k = g.element_order(rep)
        if not _is_prime_power_of(k, p):
            continue
        cent = g.centralizer(rep)
        out.append(ConPClass(rep, p, k, g.subgroup(cent), cent, len(cls), cls))
    return out


def primes_of_group(g: FiniteGroup) -> frozenset[int]:
    return frozenset(factorint(g.order))


def all_permutations_group(n: int) -> FiniteGroup:
    """``S_n`` with every element listed as a generator; slow, for oracles only."""
    return FiniteGroup.from_permutations(list(permutations(range(n))), n)
