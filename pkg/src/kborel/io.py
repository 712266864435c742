"""JSON input schemas.

Every loader raises :class:`InputError` with a readable message on malformed
data, so the command line can map it to exit code 2.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .abelian import FgAbGroup, group_from_json
from .assemble import GroupPackage, PackageError, QuotientData, TorsionClass
from .complexes import ActionError, CwComplex, GCwComplex
from .groups import FiniteGroup, GroupError, trivial_group
from .linalg import IntMatrix
from .pro import Constant, EventuallyZeroMaps, Level, PAdicQuotient, Stabilizing, Tower, TowerMap
from .repring import RepRing

SCHEMA = "kborel/1"

__all__ = [
    "SCHEMA",
    "InputError",
    "read_json",
    "detect_kind",
    "load_group",
    "load_complex",
    "load_tower",
    "load_tower_map",
    "load_package",
    "load_any",
]


class InputError(ValueError):
    """Input file is unreadable or violates its schema."""


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _obj(data: Any, what: str) -> dict:
    if not isinstance(data, dict):
        raise InputError(f"{what} must be a JSON object")
    return data


def _matrix(data: Any, what: str) -> IntMatrix:
    try:
        if isinstance(data, dict):
            return IntMatrix.from_json(data)
        return IntMatrix(data)
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"{what}: not an integer matrix ({exc})") from None


def _fg(data: Any, what: str) -> FgAbGroup:
    try:
        g = group_from_json(_obj(data, what))
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"{what}: {exc}") from None
    if not isinstance(g, FgAbGroup):
        raise InputError(f"{what}: expected a finitely generated group")
    return g


def detect_kind(data: dict) -> str:
    """One of ``group``, ``complex``, ``tower``, ``package``."""
    data = _obj(data, "input")
    if "type" in data:
        kind = data["type"]
        if kind not in ("group", "complex", "tower", "package"):
            raise InputError(f"unknown input type {kind!r}")
        return kind
    if "classes" in data or "quotient" in data:
        return "package"
    if "tail" in data or "prefix" in data:
        return "tower"
    if "ranks" in data:
        return "complex"
    if {"table", "perm_gens", "cyclic"} & set(data):
        return "group"
    raise InputError("cannot tell what this file describes; add a \"type\" key")


def load_group(data: Any) -> FiniteGroup:
    data = _obj(data, "group")
    try:
        return FiniteGroup.from_json(data)
    except GroupError as exc:
        raise InputError(f"invalid group: {exc}") from None
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"invalid group data: {exc}") from None


def load_complex(data: Any) -> GCwComplex:
    """``{"ranks", "boundaries", "labels"?, "group"?, "action"?}``.

    ``action`` maps element indices to per-dimension lists of
    ``[image, sign]`` pairs (either a list indexed by dimension or an object
    keyed by it).  Without ``group`` the trivial group acts; without
    ``action`` every element acts trivially.
    """
    data = _obj(data, "complex")
    try:
        base = CwComplex.from_json(data)
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(f"invalid chain complex: {exc}") from None
    group = load_group(data["group"]) if "group" in data else trivial_group()
    if "action" not in data:
        return GCwComplex.trivial_action(base, group)
    action = {}
    for g, dims in _obj(data["action"], "action").items():
        if isinstance(dims, dict):
            try:
                dims = [dims[str(n)] for n in range(len(base.ranks))]
            except KeyError as exc:
                raise InputError(f"action of element {g} lacks dimension {exc}") from None
        try:
            action[int(g)] = dims
        except ValueError:
            raise InputError(f"action key {g!r} is not an element index") from None
    try:
        return GCwComplex(base, group, action)
    except (ActionError, GroupError, TypeError, ValueError) as exc:
        raise InputError(f"inadmissible action: {exc}") from None


def _tail(data: Any):
    data = _obj(data, "tail")
    rule = data.get("rule")
    junction = _matrix(data["junction"], "junction") if "junction" in data else None
    group = _fg(data["group"], "tail group") if "group" in data else None
    if rule == "constant":
        return Constant(group, junction)
    if rule == "zero-maps":
        return EventuallyZeroMaps(group)
    if rule == "padic":
        try:
            return PAdicQuotient(_fg(data["base"], "padic base"), int(data["p"]), junction)
        except KeyError as exc:
            raise InputError(f"padic tail needs {exc}") from None
    if rule == "ideal":
        try:
            ring = RepRing.from_json(_obj(data["ring"], "ring"))
        except KeyError:
            raise InputError("ideal tail needs a 'ring'") from None
        except (TypeError, ValueError) as exc:
            raise InputError(f"invalid ring: {exc}") from None
        return Stabilizing(ring, junction)
    raise InputError(f"unknown tail rule {rule!r} (constant, zero-maps, padic, ideal)")


def load_tower(data: Any) -> Tower:
    """``{"prefix": [{"group": G, "map": M}, ...], "tail": {"rule": ...}}``.

    ``map`` on level ``n`` is the matrix of ``M_n -> M_{n-1}`` (absent on level 1).
    """
    data = _obj(data, "tower")
    levels = []
    for i, lv in enumerate(data.get("prefix", []), start=1):
        lv = _obj(lv, f"level {i}")
        g = _fg(lv.get("group"), f"level {i} group")
        m = _matrix(lv["map"], f"level {i} map") if "map" in lv else None
        if i > 1 and m is None:
            raise InputError(f"level {i} needs a map to level {i - 1}")
        levels.append(Level(g, m))
    tail = _tail(data["tail"]) if "tail" in data else Constant()
    try:
        return Tower(tuple(levels), tail)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid tower: {exc}") from None


def load_tower_map(data: Any, source: Tower) -> TowerMap:
    """``{"target": tower, "maps": [...], "tail": "identity" | "constant" | "zero" | {"induced": M}}``."""
    data = _obj(data, "map")
    target = load_tower(data["target"]) if "target" in data else source
    maps = [_matrix(m, f"map {i}") for i, m in enumerate(data.get("maps", []), start=1)]
    tail = data.get("tail", "identity")
    if isinstance(tail, dict) and "induced" in tail:
        tail = ("induced", _matrix(tail["induced"], "induced map"))
    try:
        return TowerMap(source, target, tuple(maps), tail)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid tower map: {exc}") from None


def load_package(data: Any) -> GroupPackage:
    data = _obj(data, "package")
    try:
        classes = tuple(
            TorsionClass(int(c["p"]), str(c.get("label", f"class {i}")), tuple(c.get("betti", [1])))
            for i, c in enumerate(data.get("classes", []), start=1))
        q = _obj(data.get("quotient", {"betti": [1]}), "quotient")
        if "betti" in q:
            quotient = QuotientData.from_betti(q["betti"], bool(q.get("torsion_free", True)))
        elif "k0" in q and "k1" in q:
            quotient = QuotientData(_fg(q["k0"], "quotient k0"), _fg(q["k1"], "quotient k1"))
        else:
            raise InputError("quotient needs 'betti' or both 'k0' and 'k1'")
        default_dim = max([len(c.betti) - 1 for c in classes] + [0])
        return GroupPackage(
            str(data.get("name", "package")),
            frozenset(int(p) for p in data.get("primes", [])),
            classes,
            quotient,
            int(data.get("dim_bound", default_dim)),
            bool(data.get("finite", False)),
        )
    except PackageError as exc:
        raise InputError(f"invalid package: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"invalid package data: {exc!r}") from None


LOADERS = {"group": load_group, "complex": load_complex, "tower": load_tower, "package": load_package}


def load_any(data: Any):
    kind = detect_kind(data)
    return kind, LOADERS[kind](data)
