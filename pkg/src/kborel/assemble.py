"""K-theory of classifying spaces from torsion-class data.

The input is either a :class:`GroupPackage` (conjugacy classes of
prime-power-order elements, the rational Betti numbers of their centralizer
quotients, and the K-theory of ``G \\ X``) or a finite group acting on an
acyclic complex, from which such a package is extracted.

The numbers ``r_p^k`` sum the parity-matching Betti numbers over the classes
at ``p``.  They fill the middle of two five-term exact sequences:

    0 -> A -> K^k(G\\X) -> K^k(BG) -> B x prod_p (Z_p^)^{r_p^k} -> C -> 0
    0 -> C' -> coprod_p (Z/p^inf)^{r_p^{k+1}} x B' -> K_k(BG) -> K_k(G\\X) -> A' -> 0

``A, B, C`` and their primed versions are finite groups about which only
their support (the primes of ``P``) is known.  They are recorded as
ambiguity markers: rank groups with no ranks and ambiguity ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import prod
from typing import Iterable, Optional, Sequence, Union

from sympy import isprime

from .abelian import (
    ZERO,
    AdicGroup,
    AnyGroup,
    DivisibleGroup,
    FgAbGroup,
    euler_dim_hat_sum,
    ext_to_Z,
    hom_to_Z,
    invert_primes,
    pontryagin_dual,
    uct_transfer,
)
from .complexes import (
    CwComplex,
    GCwComplex,
    check_acyclicity,
    fixed_subcomplex,
    point_with,
    quotient_complex,
    rational_quotient_cohomology,
    surface_complex,
)
from .groups import FiniteGroup, con_p, cyclic_group, primes_of_group
from .linalg import homology

__all__ = [
    "PackageError",
    "HypothesisError",
    "TorsionClass",
    "QuotientData",
    "GroupPackage",
    "KPresentation",
    "Rationalization",
    "r_pk_from_package",
    "r_pk_from_complex",
    "r_table",
    "package_from_complex",
    "assemble_cohomology",
    "assemble_homology",
    "rationalize",
    "duality_check",
    "borel_uct",
    "mnm_assemble",
    "fuchsian_pipeline",
    "finite_group_pipeline",
    "builtin_package",
    "BUILTIN_PACKAGES",
]


class PackageError(ValueError):
    """Malformed group package."""


class HypothesisError(Exception):
    """An input fails a hypothesis (acyclicity, admissibility)."""

    def __init__(self, message: str, witness: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness or {}


# -- packages -----------------------------------------------------------------

def _strip_betti(betti: Iterable[int]) -> tuple[int, ...]:
    b = [int(x) for x in betti]
    if any(x < 0 for x in b):
        raise PackageError(f"negative Betti number in {b}")
    while len(b) > 1 and b[-1] == 0:
        b.pop()
    return tuple(b)


@dataclass(frozen=True)
class TorsionClass:
    """One conjugacy class of elements of ``p``-power order."""

    p: int
    label: str
    betti: tuple

    def __post_init__(self):
        object.__setattr__(self, "betti", _strip_betti(self.betti))

    def parity_sum(self, k: int) -> int:
        return sum(b for j, b in enumerate(self.betti) if (j - k) % 2 == 0)

    def to_json(self) -> dict:
        return {"p": self.p, "label": self.label, "betti": list(self.betti)}


@dataclass(frozen=True)
class QuotientData:
    """K-theory of the orbit space ``G \\ X``.

    ``exact`` is false when only ranks are known (Betti data for a space
    that may have torsion); the unknown torsion is then supported on
    ``torsion_primes`` if those are known, and left unrestricted otherwise.
    """

    k0: FgAbGroup
    k1: FgAbGroup
    exact: bool = True
    torsion_primes: frozenset = frozenset()
    betti: Optional[tuple] = None

    @classmethod
    def from_betti(cls, betti: Sequence[int], torsion_free: bool = True) -> "QuotientData":
        b = _strip_betti(betti)
        even = sum(x for j, x in enumerate(b) if j % 2 == 0)
        odd = sum(x for j, x in enumerate(b) if j % 2 == 1)
        return cls(FgAbGroup(even), FgAbGroup(odd), torsion_free, frozenset(), b)

    @classmethod
    def from_complex(cls, y: CwComplex) -> "QuotientData":
        """Integral cohomology via the universal coefficient theorem, then K.

        The Atiyah-Hirzebruch spectral sequence has no room for differentials
        or extensions in dimension at most 3, nor when the cohomology is
        torsion-free; otherwise only the ranks are claimed.
        """
        h = homology(y.chain)
        coh = [hom_to_Z(h[n]).direct_sum(ext_to_Z(h[n - 1]) if n else ZERO)
               for n in range(len(h))]
        k = [ZERO, ZERO]
        for n, g in enumerate(coh):
            k[n % 2] = k[n % 2].direct_sum(g)
        tors = frozenset().union(*(g.torsion_primes() for g in coh))
        exact = y.dim <= 3 or not tors
        return cls(k[0], k[1], exact, tors, tuple(y.betti()))

    def k(self, k: int) -> FgAbGroup:
        return self.k0 if k % 2 == 0 else self.k1

    @property
    def is_point(self) -> bool:
        return self.exact and self.k0 == FgAbGroup(1) and self.k1 == ZERO

    def to_json(self) -> dict:
        out = {"k0": self.k0.to_json(), "k1": self.k1.to_json(), "exact": self.exact}
        if self.betti is not None:
            out["betti"] = list(self.betti)
        if self.torsion_primes:
            out["torsion_primes"] = sorted(self.torsion_primes)
        return out


@dataclass(frozen=True)
class GroupPackage:
    """Everything the main computation consumes about ``G`` acting on ``X``.

    ``finite`` marks packages extracted from a finite group, for which the
    presentations collapse to a single value when ``G \\ X`` has the K-theory
    of a point.
    """

    name: str
    primes: frozenset
    classes: tuple
    quotient: QuotientData
    dim_bound: int = 0
    finite: bool = False

    def __post_init__(self):
        primes = frozenset(int(p) for p in self.primes)
        for p in primes:
            if not isprime(p):
                raise PackageError(f"{p} is not a prime")
        object.__setattr__(self, "primes", primes)
        classes = tuple(self.classes)
        for c in classes:
            if c.p not in primes:
                raise PackageError(f"class {c.label!r} has prime {c.p} outside {sorted(primes)}")
            if len(c.betti) > self.dim_bound + 1:
                raise PackageError(
                    f"class {c.label!r}: {len(c.betti)} Betti numbers exceed dimension bound {self.dim_bound}")
        object.__setattr__(self, "classes", classes)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "primes": sorted(self.primes),
            "classes": [c.to_json() for c in self.classes],
            "quotient": self.quotient.to_json(),
            "dim_bound": self.dim_bound,
        }
        if self.finite:
            out["finite"] = True
        return out


BUILTIN_PACKAGES = {
    "sl3z": lambda: GroupPackage(
        "sl3z", {2, 3},
        tuple(TorsionClass(2, f"2-class {i}", (1,)) for i in range(1, 5))
        + tuple(TorsionClass(3, f"3-class {i}", (1,)) for i in range(1, 3)),
        QuotientData.from_betti([1]), dim_bound=3),
    "trivial": lambda: GroupPackage("trivial", set(), (), QuotientData.from_betti([1]),
                                    dim_bound=0, finite=True),
}


def builtin_package(name: str) -> GroupPackage:
    try:
        return BUILTIN_PACKAGES[name]()
    except KeyError:
        raise PackageError(f"unknown built-in package {name!r}; choose from {sorted(BUILTIN_PACKAGES)}") from None


# -- r_p^k --------------------------------------------------------------------

def r_pk_from_package(pkg: GroupPackage, p: int, k: int) -> int:
    if p not in pkg.primes:
        return 0
    return sum(c.parity_sum(k) for c in pkg.classes if c.p == p)


def r_pk_from_complex(x: GCwComplex, p: int, k: int) -> int:
    total = 0
    for cls in con_p(x.group, p):
        fixed = fixed_subcomplex(x, cls.representative)
        b = rational_quotient_cohomology(fixed)
        total += sum(v for j, v in enumerate(b) if (j - k) % 2 == 0)
    return total


def r_table(pkg: GroupPackage) -> dict[tuple[int, int], int]:
    """``{(p, k): r_p^k}`` for ``p`` in the package primes and ``k`` in ``{0, 1}``."""
    return {(p, k): r_pk_from_package(pkg, p, k) for p in sorted(pkg.primes) for k in (0, 1)}


def _require_acyclic(x: GCwComplex):
    res = check_acyclicity(x.base, "Z")
    if not res:
        raise HypothesisError(
            f"X is not acyclic: reduced homology in degree {res.degree} is {res.witness}",
            res.to_json())


def package_from_complex(x: GCwComplex, name: str = "", assume_acyclic: bool = False) -> GroupPackage:
    """Extract the class data of a finite group acting on an acyclic complex."""
    if not assume_acyclic:
        _require_acyclic(x)
    classes = []
    primes = sorted(primes_of_group(x.group))
    for p in primes:
        for cls in con_p(x.group, p):
            fixed = fixed_subcomplex(x, cls.representative)
            classes.append(TorsionClass(p, f"g{cls.representative}", rational_quotient_cohomology(fixed)))
    return GroupPackage(name or f"order {x.group.order}", primes, tuple(classes),
                        QuotientData.from_complex(quotient_complex(x)),
                        dim_bound=max(x.base.dim, 0), finite=True)


PackageLike = Union[GroupPackage, GCwComplex, FiniteGroup, tuple]


def _as_package(src: PackageLike, assume_acyclic: bool = False) -> GroupPackage:
    if isinstance(src, GroupPackage):
        return src
    if isinstance(src, FiniteGroup):
        src = point_with(src)
    if isinstance(src, tuple):
        group, x = src
        if x.group is not group and x.group.order != group.order:
            raise ValueError("complex is acted on by a different group")
        src = x
    if isinstance(src, GCwComplex):
        return package_from_complex(src, assume_acyclic=assume_acyclic)
    raise TypeError(f"cannot assemble from {type(src).__name__}")


# -- presentations ------------------------------------------------------------

COHOMOLOGY_LABELS = ("A", "K^k(G\\X)", "K^k(BG)", "B x prod (Z_p^)^r", "C")
HOMOLOGY_LABELS = ("C'", "coprod (Z/p^inf)^r x B'", "K_k(BG)", "K_k(G\\X)", "A'")


@dataclass(frozen=True)
class KPresentation:
    """One of the two five-term exact sequences, slot by slot.

    ``terms[2]`` is the unknown group, given as its best estimate: the exact
    value up to finite torsion on ``ambiguity`` (here: ``Z``-rank from the
    quotient plus the ``p``-adic or Prufer ranks).  ``resolved`` is set when
    the sequence determines it exactly.
    """

    kind: str
    k: int
    primes: frozenset
    r: tuple              # ((p, r_p^0, r_p^1), ...)
    terms: tuple
    resolved: Optional[AnyGroup] = None
    reduced: bool = False
    notes: tuple = field(default=(), compare=False)

    @property
    def labels(self) -> tuple[str, ...]:
        return COHOMOLOGY_LABELS if self.kind == "cohomology" else HOMOLOGY_LABELS

    @property
    def middle(self) -> Union[AdicGroup, DivisibleGroup]:
        return self.terms[3] if self.kind == "cohomology" else self.terms[1]

    @property
    def quotient_term(self) -> FgAbGroup:
        return self.terms[1] if self.kind == "cohomology" else self.terms[3]

    @property
    def estimate(self) -> Union[AdicGroup, DivisibleGroup]:
        return self.terms[2]

    @property
    def value(self) -> Union[AdicGroup, DivisibleGroup]:
        return self.resolved if self.resolved is not None else self.estimate

    @property
    def ambiguity(self) -> frozenset:
        return self.value.ambiguity

    def r_at(self, p: int, k: int) -> int:
        for q, r0, r1 in self.r:
            if q == p:
                return r0 if k % 2 == 0 else r1
        return 0

    def euler_sums(self) -> dict[int, int]:
        return {p: euler_dim_hat_sum(self.terms, p) for p in sorted(self.primes)}

    def to_reduced(self) -> "KPresentation":
        """Subtract ``K^*(pt)`` (one ``Z`` in even degree) from the quotient and the target."""
        if self.reduced or self.k % 2 == 1:
            return replace(self, reduced=True)
        terms = list(self.terms)
        q = self.quotient_term
        if q.free_rank < 1:
            raise ValueError("quotient K-group has no Z summand to remove")
        qi = 1 if self.kind == "cohomology" else 3
        terms[qi] = FgAbGroup(q.free_rank - 1, q.torsion)
        terms[2] = replace(self.estimate, z_rank=self.estimate.z_rank - 1)
        resolved = self.resolved
        if resolved is not None:
            resolved = replace(resolved, z_rank=resolved.z_rank - 1)
        return replace(self, terms=tuple(terms), resolved=resolved, reduced=True)

    def to_json(self) -> dict:
        name = "K" if self.kind == "cohomology" else "K_"
        return {
            "kind": self.kind,
            "k": self.k,
            "reduced": self.reduced,
            "primes": sorted(self.primes),
            "r": {str(p): {"0": r0, "1": r1} for p, r0, r1 in self.r},
            "terms": [{"slot": lab, "group": g.to_json()} for lab, g in zip(self.labels, self.terms)],
            "resolved": self.resolved.to_json() if self.resolved is not None else None,
            "ambiguity": sorted(self.ambiguity),
            "notes": list(self.notes),
        }

    def format(self, ascii: bool = False) -> str:
        arrow = " -> " if ascii else " → "
        tilde = "~" if self.reduced else ""
        if self.kind == "cohomology":
            target = f"K{tilde}^{self.k}(BG)"
        else:
            target = f"K{tilde}_{self.k}(BG)"
        slots = []
        for lab, g in zip(self.labels, self.terms):
            if lab in ("A", "C", "C'", "A'"):
                slots.append(f"{lab}[{','.join(map(str, sorted(g.ambiguity)))}]" if g.ambiguity else "0")
            elif g is self.terms[2]:
                slots.append(target)
            else:
                text = g.format(ascii).split("  [")[0]
                if g is self.middle and g.ambiguity:
                    b = "B" if self.kind == "cohomology" else "B'"
                    plus = " + " if ascii else " ⊕ "
                    text = b if text == "0" else f"{text}{plus}{b}"
                slots.append(text)
        lines = [arrow.join(["0"] + slots + ["0"])]
        if self.resolved is not None:
            lines.append(f"{target} = {self.resolved.format(ascii)}")
        else:
            lines.append(f"{target} ~ {self.estimate.format(ascii)}")
        return "\n".join(lines)


def _r_tuple(pkg: GroupPackage) -> tuple:
    return tuple((p, r_pk_from_package(pkg, p, 0), r_pk_from_package(pkg, p, 1))
                 for p in sorted(pkg.primes))


def _quotient_ambiguity(q: QuotientData, fg: FgAbGroup) -> frozenset:
    amb = fg.torsion_primes()
    if not q.exact:
        amb |= q.torsion_primes
    return frozenset(amb)


def _notes(pkg: GroupPackage, hypotheses: str) -> tuple:
    notes = [f"hypotheses: {hypotheses}"]
    if not pkg.quotient.exact:
        notes.append("quotient K-theory known up to torsion only")
    return tuple(notes)


def assemble_cohomology(src: PackageLike, k: int, assume_acyclic: bool = False) -> KPresentation:
    k %= 2
    hyp = "package data taken as given" if isinstance(src, GroupPackage) else (
        "acyclicity assumed" if assume_acyclic else "acyclicity verified")
    pkg = _as_package(src, assume_acyclic)
    P = pkg.primes
    ranks = {p: r_pk_from_package(pkg, p, k) for p in P}
    q = pkg.quotient.k(k)
    marker = AdicGroup(0, (), P)
    middle = AdicGroup(0, ranks, P)
    estimate = AdicGroup(q.free_rank, ranks, P | _quotient_ambiguity(pkg.quotient, q))
    resolved = None
    if pkg.finite and pkg.quotient.is_point:
        resolved = AdicGroup(q.free_rank, ranks)
    return KPresentation("cohomology", k, P, _r_tuple(pkg),
                         (marker, q, estimate, middle, marker), resolved,
                         notes=_notes(pkg, hyp))


def assemble_homology(src: PackageLike, k: int, assume_acyclic: bool = False) -> KPresentation:
    k %= 2
    hyp = "package data taken as given" if isinstance(src, GroupPackage) else (
        "acyclicity assumed" if assume_acyclic else "acyclicity verified")
    pkg = _as_package(src, assume_acyclic)
    P = pkg.primes
    ranks = {p: r_pk_from_package(pkg, p, k + 1) for p in P}
    k_even, k_odd = uct_transfer(pkg.quotient.k0, pkg.quotient.k1, "cohomology->homology")
    q = k_even if k == 0 else k_odd
    marker = DivisibleGroup(0, (), P)
    middle = DivisibleGroup(0, ranks, P)
    estimate = DivisibleGroup(q.free_rank, ranks, P | _quotient_ambiguity(pkg.quotient, q))
    resolved = None
    if pkg.finite and pkg.quotient.is_point:
        resolved = DivisibleGroup(q.free_rank, ranks)
    return KPresentation("homology", k, P, _r_tuple(pkg),
                         (marker, middle, estimate, q, marker), resolved,
                         notes=_notes(pkg, hyp))


@dataclass(frozen=True)
class Rationalization:
    """``X (x) Z[1/P] = Y_1 x Y_2 ...`` for one presentation."""

    kind: str
    k: int
    primes: frozenset
    lhs: AnyGroup
    rhs: tuple

    def _fmt(self, g: AnyGroup, ascii: bool) -> str:
        if not self.primes:
            return g.format(ascii)
        z = "Z" if ascii else "ℤ"
        loc = f"{z}[1/{prod(self.primes)}]"
        zr = g.free_rank if isinstance(g, FgAbGroup) else g.z_rank
        parts = [loc if zr == 1 else f"{loc}^{zr}"] if zr else []
        if isinstance(g, FgAbGroup):
            parts += [f"{z}/{d}" for d in g.torsion]
        else:
            rest = replace(g, z_rank=0)
            if not rest.is_zero:
                parts.append(rest.format(ascii))
        return (" + " if ascii else " ⊕ ").join(parts) or "0"

    def format(self, ascii: bool = False) -> str:
        tensor = " (x) " if ascii else " ⊗ "
        name = f"K^{self.k}(BG)" if self.kind == "cohomology" else f"K_{self.k}(BG)"
        if self.primes:
            z = "Z" if ascii else "ℤ"
            name += f"{tensor}{z}[1/{prod(self.primes)}]"
        times = " x " if ascii else " × "
        iso = " = " if ascii else " ≅ "
        return name + iso + times.join(self._fmt(g, ascii) for g in self.rhs)

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k, "inverted": sorted(self.primes),
                "lhs": self.lhs.to_json(), "rhs": [g.to_json() for g in self.rhs]}


def rationalize(pres: KPresentation) -> Rationalization:
    P = pres.primes
    lhs = invert_primes(pres.estimate, P)
    q = invert_primes(pres.quotient_term, P)
    if pres.kind == "cohomology":
        adic = AdicGroup(0, pres.middle.ranks, (), bool(P))
        rhs = (q, adic) if not adic.is_zero else (q,)
    else:
        rhs = (q,)
    return Rationalization(pres.kind, pres.k, P, lhs, rhs)


def duality_check(coh: KPresentation, hom: KPresentation) -> dict:
    """Compare a cohomology presentation at degree ``k`` with the homology one at ``k``.

    The homological Prufer term at ``k`` must be the Pontryagin dual of the
    cohomological ``p``-adic term at ``k + 1``, read from the cohomology
    side's r-table; both sequences must have vanishing Euler sums.
    """
    diffs = []
    if coh.kind != "cohomology" or hom.kind != "homology":
        diffs.append(f"expected (cohomology, homology), got ({coh.kind}, {hom.kind})")
    if coh.k != hom.k:
        diffs.append(f"degree mismatch: {coh.k} vs {hom.k}")
    if coh.primes != hom.primes:
        diffs.append(f"prime sets differ: {sorted(coh.primes)} vs {sorted(hom.primes)}")
    shifted = AdicGroup(0, {p: coh.r_at(p, coh.k + 1) for p in coh.primes}, coh.primes)
    expected = pontryagin_dual(shifted)
    got = hom.middle
    if (expected.ranks, expected.ambiguity) != (got.ranks, got.ambiguity):
        diffs.append(f"dual of adic term at degree {coh.k + 1} is {expected!r}, homology has {got!r}")
    euler = {}
    for pres in (coh, hom):
        for p, s in pres.euler_sums().items():
            euler[f"{pres.kind}:{p}"] = s
            if s:
                diffs.append(f"{pres.kind} Euler sum at p={p} is {s}")
    return {"passed": not diffs, "diffs": diffs, "euler": euler}


def borel_uct(coh0: KPresentation, coh1: KPresentation,
              hom: Optional[tuple[KPresentation, KPresentation]] = None) -> dict:
    """K-homology ranks from K-cohomology by the universal coefficient sequence.

    ``hom(K_k, Z)`` carries the ``Z``-rank of ``K^k``; ``ext(K_{k-1}, Z)``
    turns each ``Z/p^inf`` of ``K_{k-1}`` into a ``Z_p^`` of ``K^k``, so the
    Prufer ranks of ``K_k`` are the ``p``-adic ranks of ``K^{k+1}``.  If the
    homology presentations are supplied they are cross-checked.
    """
    cohs = {coh0.k: coh0, coh1.k: coh1}
    if set(cohs) != {0, 1} or any(c.kind != "cohomology" for c in cohs.values()):
        raise ValueError("borel_uct needs cohomology presentations in degrees 0 and 1")
    out = {}
    for k in (0, 1):
        src, nxt = cohs[k].value, cohs[1 - k].value
        out[k] = DivisibleGroup(src.z_rank, nxt.ranks, src.ambiguity | nxt.ambiguity)
    report = {"K_0": out[0], "K_1": out[1], "consistent": True, "diffs": []}
    if hom is not None:
        for h in hom:
            want = out[h.k]
            got = h.value
            if (want.z_rank, want.ranks) != (got.z_rank, got.ranks):
                report["consistent"] = False
                report["diffs"].append(f"K_{h.k}: transfer gives {want!r}, assembly gives {got!r}")
    return report


# -- pipelines ----------------------------------------------------------------

def finite_group_pipeline(g: FiniteGroup) -> dict:
    """Resolved ``K^*(BG)`` and ``K_*(BG)`` for a finite group (``X = pt``)."""
    pkg = package_from_complex(point_with(g), name=f"finite group of order {g.order}")
    coh = {k: assemble_cohomology(pkg, k) for k in (0, 1)}
    hom = {k: assemble_homology(pkg, k) for k in (0, 1)}
    return {
        "package": pkg,
        "con_p": {p: [c for c in con_p(g, p)] for p in sorted(pkg.primes)},
        "r": r_table(pkg),
        "cohomology": coh,
        "homology": hom,
        "duality": {k: duality_check(coh[k], hom[k]) for k in (0, 1)},
        "uct": borel_uct(coh[0], coh[1], (hom[0], hom[1])),
    }


def _reduced_finite(m: FiniteGroup, k: int) -> AdicGroup:
    return finite_group_pipeline(m)["cohomology"][k].to_reduced().resolved


def _reduced_quotient(q: QuotientData, k: int) -> FgAbGroup:
    g = q.k(k)
    if k % 2 == 0:
        return FgAbGroup(g.free_rank - 1, g.torsion)
    return g


def mnm_assemble(maximal_subgroups: Sequence[FiniteGroup],
                 quotient: Union[CwComplex, QuotientData, Sequence[int]], k: int) -> dict:
    """Long exact sequence for groups whose finite subgroups satisfy (M) and (NM).

    ``... -> K~^k(G\\E) -> K~^k(BG) -> prod_i K~^k(BM_i) -> K~^{k+1}(G\\E) -> ...``

    The maps out of ``prod_i K~(BM_i)`` land in a finitely generated group;
    when ``K~^k`` and ``K~^{k+1}`` of the quotient are torsion-free they
    vanish (``hom(Z_p^, Z) = 0``) and the sequence is short exact and split.
    """
    k %= 2
    if isinstance(quotient, CwComplex):
        q = QuotientData.from_complex(quotient)
    elif isinstance(quotient, QuotientData):
        q = quotient
    else:
        q = QuotientData.from_betti(quotient)
    qk, qk1 = _reduced_quotient(q, k), _reduced_quotient(q, k + 1)
    contributions = [_reduced_finite(m, k) for m in maximal_subgroups]
    product = AdicGroup()
    for c in contributions:
        product = AdicGroup(product.z_rank + c.z_rank, product.ranks + c.ranks)
    primes = frozenset().union(*(primes_of_group(m) for m in maximal_subgroups)) if maximal_subgroups else frozenset()
    split = q.exact and not qk.torsion and not qk1.torsion
    if split:
        reduced = AdicGroup(qk.free_rank, product.ranks)
    else:
        reduced = AdicGroup(qk.free_rank, product.ranks, primes | qk.torsion_primes() | qk1.torsion_primes())
    unreduced = replace(reduced, z_rank=reduced.z_rank + (1 if k == 0 else 0))
    return {
        "k": k,
        "quotient_reduced": qk,
        "quotient_reduced_next": qk1,
        "subgroup_terms": contributions,
        "product": product,
        "split": split,
        "reduced": reduced,
        "unreduced": unreduced,
    }


def fuchsian_pipeline(genus: int, periods: Sequence[int], k: int) -> dict:
    """``K^k`` of a cocompact Fuchsian group of signature ``(g; periods)``.

    ``0 -> K^k(S_g) -> K~^k(BF) -> prod_i K~^k(B Z/gamma_i) -> 0`` is exact
    and, all terms being torsion-free or ``p``-adic, splits; the ``K^k(S_g)``
    term absorbs the ``Z`` of the base point.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    periods = [int(x) for x in periods]
    if any(x < 2 for x in periods):
        raise ValueError(f"periods must be at least 2, got {periods}")
    k %= 2
    surface = QuotientData.from_complex(surface_complex(genus))
    base = surface.k(k)
    items = [(gamma, _reduced_finite(cyclic_group(gamma), k)) for gamma in periods]
    ranks: dict[int, int] = {}
    for _, c in items:
        for p, r in c.ranks:
            ranks[p] = ranks.get(p, 0) + r
    value = AdicGroup(base.free_rank, ranks)
    return {"genus": genus, "periods": periods, "k": k, "surface": base,
            "contributions": items, "value": value}
