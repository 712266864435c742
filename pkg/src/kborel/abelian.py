"""Abelian group values used throughout kborel.

Three kinds of value are tracked:

* :class:`FgAbGroup` -- a finitely generated abelian group ``Z^r + Z/d_1 + ...``
  in invariant-factor form.
* :class:`AdicGroup` -- ``Z^z x prod_p (Z_p^)^{r_p}`` known only up to a finite
  group whose order is supported on the ``ambiguity`` primes.
* :class:`DivisibleGroup` -- ``Z^z x coprod_p (Z/p^inf)^{r_p}``, with the same
  ambiguity convention.

All three are frozen dataclasses in canonical form, so ``==`` is isomorphism.

>>> FgAbGroup.from_orders([2, 3])
FgAbGroup(free_rank=0, torsion=(6,))
>>> FgAbGroup(2, (2,)).direct_sum(FgAbGroup(1, (4,)))
FgAbGroup(free_rank=3, torsion=(2, 4))
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from math import gcd, prod
from typing import Iterable, Mapping, Union

from sympy import factorint, isprime

__all__ = [
    "FgAbGroup",
    "AdicGroup",
    "DivisibleGroup",
    "direct_sum",
    "hom_to_Z",
    "ext_to_Z",
    "invert_primes",
    "dim_hat_p",
    "pontryagin_dual",
    "uct_transfer",
    "euler_dim_hat_sum",
    "group_from_json",
    "ZERO",
    "Z",
]


def _check_prime(p: int) -> int:
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of ``Z/n_1 + Z/n_2 + ...`` (``n_i >= 1``)."""
    by_prime: dict[int, list[int]] = defaultdict(list)
    for n in orders:
        if n < 1:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, e in factorint(n).items():
            by_prime[p].append(p**e)
    if not by_prime:
        return ()
    for powers in by_prime.values():
        powers.sort(reverse=True)
    length = max(len(v) for v in by_prime.values())
    factors = [
        prod(v[i] for v in by_prime.values() if i < len(v)) for i in range(length)
    ]
    return tuple(reversed(factors))


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        torsion = tuple(int(d) for d in self.torsion)
        for d in torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {torsion} do not form a divisibility chain")
        object.__setattr__(self, "torsion", torsion)

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "FgAbGroup":
        """Build from arbitrary cyclic orders; ``0`` means a copy of ``Z``."""
        orders = list(orders)
        free = free_rank + sum(1 for n in orders if n == 0)
        return cls(free, tuple(d for d in invariant_factors(n for n in orders if n) if d > 1))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group has no finite order")
        return prod(self.torsion)

    @property
    def generator_orders(self) -> tuple[int, ...]:
        """Orders of the canonical generators: ``0`` (infinite) first, then torsion."""
        return (0,) * self.free_rank + self.torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def torsion_primes(self) -> frozenset[int]:
        return frozenset(p for d in self.torsion for p in factorint(d))

    def p_torsion_count(self, p: int) -> int:
        """Number of cyclic ``p``-primary summands."""
        return sum(1 for d in self.torsion if d % p == 0)

    def elementary_divisors(self) -> tuple[int, ...]:
        return tuple(sorted(q**e for d in self.torsion for q, e in factorint(d).items()))

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_orders(self.torsion + other.torsion, self.free_rank + other.free_rank)

    def to_json(self) -> dict:
        return {"kind": "fg", "free": self.free_rank, "torsion": list(self.torsion)}

    def format(self, ascii: bool = False) -> str:
        z = "Z" if ascii else "ℤ"
        parts = []
        if self.free_rank == 1:
            parts.append(z)
        elif self.free_rank > 1:
            parts.append(f"{z}^{self.free_rank}")
        parts += [f"{z}/{d}" for d in self.torsion]
        return (" + " if ascii else " ⊕ ").join(parts) or "0"

    def __str__(self):
        return self.format()


ZERO = FgAbGroup()
Z = FgAbGroup(1)


def _canonical_ranks(ranks: Union[Mapping[int, int], Iterable[tuple[int, int]]]) -> tuple:
    items = ranks.items() if isinstance(ranks, Mapping) else ranks
    out = {}
    for p, r in items:
        p, r = int(p), int(r)
        _check_prime(p)
        if r < 0:
            raise ValueError(f"negative rank {r} at p={p}")
        if r:
            out[p] = out.get(p, 0) + r
    return tuple(sorted(out.items()))


@dataclass(frozen=True)
class _RankGroup:
    z_rank: int = 0
    ranks: tuple = ()
    ambiguity: frozenset = field(default_factory=frozenset)
    rationalized: bool = False

    def __post_init__(self):
        if self.z_rank < 0:
            raise ValueError("z_rank must be non-negative")
        object.__setattr__(self, "ranks", _canonical_ranks(self.ranks))
        amb = frozenset(_check_prime(int(p)) for p in self.ambiguity)
        object.__setattr__(self, "ambiguity", amb)

    def rank_at(self, p: int) -> int:
        return dict(self.ranks).get(p, 0)

    @property
    def rank_map(self) -> dict[int, int]:
        return dict(self.ranks)

    @property
    def is_zero(self) -> bool:
        return self.z_rank == 0 and not self.ranks and not self.ambiguity

    def _json_body(self, key: str) -> dict:
        return {
            "z": self.z_rank,
            key: {str(p): r for p, r in self.ranks},
            "ambiguity": sorted(self.ambiguity),
            "rationalized": self.rationalized,
        }


class AdicGroup(_RankGroup):
    """``Z^z x prod (Z_p^)^{r_p}`` up to finite torsion supported on ``ambiguity``.

    ``rationalized`` marks a value that has had primes inverted, so the
    ``p``-adic summands print as ``Q_p^``.
    """

    def __repr__(self):
        return (
            f"AdicGroup(z_rank={self.z_rank}, p_ranks={dict(self.ranks)}, "
            f"ambiguity={set(self.ambiguity) or '{}'}, rationalized={self.rationalized})"
        )

    @property
    def p_ranks(self) -> dict[int, int]:
        return dict(self.ranks)

    def to_json(self) -> dict:
        return {"kind": "adic", **self._json_body("adic")}

    def format(self, ascii: bool = False) -> str:
        z = "Z" if ascii else "ℤ"
        if self.rationalized:
            padic = (lambda p: f"Q_{p}^") if ascii else (lambda p: f"ℚ̂_{p}")
        else:
            padic = (lambda p: f"Z_{p}^") if ascii else (lambda p: f"ℤ̂_{p}")
        parts = []
        if self.z_rank:
            parts.append(z if self.z_rank == 1 else f"{z}^{self.z_rank}")
        for p, r in self.ranks:
            parts.append(padic(p) if r == 1 else f"({padic(p)})^{r}")
        text = (" + " if ascii else " ⊕ ").join(parts) or "0"
        if self.ambiguity:
            text += f"  [up to finite torsion at {sorted(self.ambiguity)}]"
        return text

    __str__ = format


class DivisibleGroup(_RankGroup):
    """``Z^z x coprod (Z/p^inf)^{r_p}`` up to finite torsion on ``ambiguity``."""

    def __repr__(self):
        return (
            f"DivisibleGroup(z_rank={self.z_rank}, prufer_ranks={dict(self.ranks)}, "
            f"ambiguity={set(self.ambiguity) or '{}'}, rationalized={self.rationalized})"
        )

    @property
    def prufer_ranks(self) -> dict[int, int]:
        return dict(self.ranks)

    def to_json(self) -> dict:
        return {"kind": "divisible", **self._json_body("prufer")}

    def format(self, ascii: bool = False) -> str:
        z = "Z" if ascii else "ℤ"
        prufer = (lambda p: f"Z/{p}^inf") if ascii else (lambda p: f"ℤ/{p}^∞")
        parts = []
        if self.z_rank:
            parts.append(z if self.z_rank == 1 else f"{z}^{self.z_rank}")
        for p, r in self.ranks:
            parts.append(prufer(p) if r == 1 else f"({prufer(p)})^{r}")
        text = (" + " if ascii else " ⊕ ").join(parts) or "0"
        if self.ambiguity:
            text += f"  [up to finite torsion at {sorted(self.ambiguity)}]"
        return text

    __str__ = format


AnyGroup = Union[FgAbGroup, AdicGroup, DivisibleGroup]


def direct_sum(a: AnyGroup, b: AnyGroup) -> AnyGroup:
    if type(a) is not type(b):
        raise TypeError(f"cannot add {type(a).__name__} and {type(b).__name__}")
    if isinstance(a, FgAbGroup):
        return a.direct_sum(b)
    return type(a)(
        a.z_rank + b.z_rank,
        a.ranks + b.ranks,
        a.ambiguity | b.ambiguity,
        a.rationalized or b.rationalized,
    )


def hom_to_Z(a: FgAbGroup) -> FgAbGroup:
    """``hom(A, Z)``: torsion dies, free part is self-dual."""
    return FgAbGroup(a.free_rank)


def ext_to_Z(a: FgAbGroup) -> FgAbGroup:
    """``ext(A, Z)``: free part dies, ``ext(Z/n, Z) = Z/n``."""
    return FgAbGroup(0, a.torsion)


def _coprime_part(n: int, primes: frozenset[int]) -> int:
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def invert_primes(a: AnyGroup, primes: Iterable[int]) -> AnyGroup:
    """Apply ``- (x) Z[1/P]`` at the level of the tracked invariants.

    Torsion on ``P`` and ambiguity on ``P`` disappear.  Prufer summands at
    ``P`` vanish; ``p``-adic summands at ``P`` survive as ``Q_p^`` and the
    result is flagged ``rationalized``.
    """
    P = frozenset(_check_prime(int(p)) for p in primes)
    if isinstance(a, FgAbGroup):
        return FgAbGroup.from_orders((_coprime_part(d, P) for d in a.torsion), a.free_rank)
    if isinstance(a, DivisibleGroup):
        return DivisibleGroup(
            a.z_rank,
            tuple((p, r) for p, r in a.ranks if p not in P),
            a.ambiguity - P,
            a.rationalized or bool(P),
        )
    return AdicGroup(a.z_rank, a.ranks, a.ambiguity - P, a.rationalized or bool(P))


def dim_hat_p(a: AnyGroup, p: int) -> int:
    """Rank over ``Q_p^`` of the ``p``-completion tensored with ``Q_p^``.

    ``Z`` and ``Z_p^`` count one, ``Z_q^`` for ``q != p`` and finite groups count
    zero.  Prufer groups are divisible, so their ``p``-completion vanishes.
    """
    _check_prime(p)
    if isinstance(a, FgAbGroup):
        return a.free_rank
    if isinstance(a, AdicGroup):
        return a.z_rank + a.rank_at(p)
    if isinstance(a, DivisibleGroup):
        return a.z_rank
    raise TypeError(f"dim_hat_p undefined for {type(a).__name__}")


def euler_dim_hat_sum(terms: Iterable[AnyGroup], p: int) -> int:
    """Alternating sum of :func:`dim_hat_p` along a finite sequence of terms.

    Zero whenever the terms form an exact sequence up to finite groups.
    """
    return sum((-1) ** i * dim_hat_p(t, p) for i, t in enumerate(terms))


def pontryagin_dual(a: Union[AdicGroup, DivisibleGroup]) -> Union[AdicGroup, DivisibleGroup]:
    """Swap ``Z_p^`` and ``Z/p^inf`` summands, keeping every rank and the ambiguity."""
    if isinstance(a, AdicGroup):
        return DivisibleGroup(a.z_rank, a.ranks, a.ambiguity, a.rationalized)
    if isinstance(a, DivisibleGroup):
        return AdicGroup(a.z_rank, a.ranks, a.ambiguity, a.rationalized)
    raise TypeError(f"no Pontryagin dual recorded for {type(a).__name__}")


def uct_transfer(k_even: FgAbGroup, k_odd: FgAbGroup, direction: str = "cohomology->homology"):
    """Split universal coefficient sequence, in either direction.

    ``K_k = hom(K^k, Z) + ext(K^{k+1}, Z)`` and ``K^k = hom(K_k, Z) + ext(K_{k-1}, Z)``;
    with degrees mod 2 both read ``out_k = hom(in_k) + ext(in_{k+1})``.
    """
    if direction not in ("cohomology->homology", "homology->cohomology"):
        raise ValueError(f"unknown direction {direction!r}")
    even = hom_to_Z(k_even).direct_sum(ext_to_Z(k_odd))
    odd = hom_to_Z(k_odd).direct_sum(ext_to_Z(k_even))
    return even, odd


def group_from_json(data: dict) -> AnyGroup:
    """Inverse of the ``to_json`` methods.  ``kind`` defaults from the keys present."""
    kind = data.get("kind")
    if kind is None:
        kind = "adic" if "adic" in data else "divisible" if "prufer" in data else "fg"
    if kind == "fg":
        free = int(data.get("free", data.get("z", 0)))
        return FgAbGroup.from_orders([int(d) for d in data.get("torsion", [])], free)
    ranks = data.get("adic" if kind == "adic" else "prufer", {})
    cls = AdicGroup if kind == "adic" else DivisibleGroup
    if kind not in ("adic", "divisible"):
        raise ValueError(f"unknown group kind {kind!r}")
    return cls(
        int(data.get("z", 0)),
        {int(p): int(r) for p, r in ranks.items()},
        frozenset(int(p) for p in data.get("ambiguity", [])),
        bool(data.get("rationalized", False)),
    )


def with_ambiguity(a: Union[AdicGroup, DivisibleGroup], primes: Iterable[int]):
    return replace(a, ambiguity=a.ambiguity | frozenset(primes))
