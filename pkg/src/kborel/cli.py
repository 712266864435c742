"""``kborel`` command-line interface.

Exit codes: 0 success, 2 input error, 3 failed hypothesis, 4 unsupported
computation.  JSON output carries ``"schema": "kborel/1"`` and is
byte-for-byte deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .abelian import FgAbGroup
from .assemble import (
    GroupPackage,
    HypothesisError,
    assemble_cohomology,
    assemble_homology,
    borel_uct,
    builtin_package,
    duality_check,
    finite_group_pipeline,
    fuchsian_pipeline,
    mnm_assemble,
    package_from_complex,
    r_table,
    rationalize,
    PackageError,
)
from .complexes import check_acyclicity, point_with, smith_consistency, surface_complex
from .groups import FiniteGroup, GroupError, con_p, cyclic_group, primes_of_group
from .io import (
    SCHEMA,
    InputError,
    detect_kind,
    load_complex,
    load_group,
    load_package,
    load_tower,
    load_tower_map,
    read_json,
)
from .pro import UnsupportedComputation, colim_hom_ext, is_pro_trivial, lim_lim1, pro_pushforward_check
from .repring import CyclicRepRing, NotStabilized, augmentation_tower, completion_rank

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_UNSUPPORTED = 0, 2, 3, 4


class Report:
    """Accumulates a JSON document and the matching text lines."""

    def __init__(self, command: str, ascii: bool):
        self.data: dict = {"schema": SCHEMA, "command": command}
        self.lines: list[str] = []
        self.ascii = ascii

    def fmt(self, g) -> str:
        return g.format(self.ascii)

    def text(self, line: str = ""):
        self.lines.append(line)

    def emit(self, fmt: str, out=None):
        out = out or sys.stdout
        if fmt == "json":
            out.write(json.dumps(self.data, indent=2, sort_keys=True, ensure_ascii=self.ascii) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _degrees(args) -> tuple[int, ...]:
    return (0, 1) if args.k is None else (args.k % 2,)


def _r_section(rep: Report, pkg: GroupPackage):
    table = r_table(pkg)
    rep.data["r"] = {str(p): {str(k): v for (q, k), v in table.items() if q == p}
                     for p in sorted(pkg.primes)}
    rep.text("r_p^k:")
    if not pkg.primes:
        rep.text("  (no primes)")
    for p in sorted(pkg.primes):
        rep.text(f"  p={p}: r^0 = {table[(p, 0)]}, r^1 = {table[(p, 1)]}")


def _presentations(rep: Report, pkg: GroupPackage, degrees, reduced: bool):
    coh = {k: assemble_cohomology(pkg, k) for k in (0, 1)}
    hom = {k: assemble_homology(pkg, k) for k in (0, 1)}
    rep.data["cohomology"] = {str(k): coh[k].to_json() for k in degrees}
    rep.data["homology"] = {str(k): hom[k].to_json() for k in degrees}
    if reduced:
        rep.data["reduced_cohomology"] = {str(k): coh[k].to_reduced().to_json() for k in degrees}
        rep.data["reduced_homology"] = {str(k): hom[k].to_reduced().to_json() for k in degrees}
    rep.data["rationalized"] = {
        "cohomology": {str(k): rationalize(coh[k]).to_json() for k in degrees},
        "homology": {str(k): rationalize(hom[k]).to_json() for k in degrees},
    }
    dual = {k: duality_check(coh[k], hom[k]) for k in (0, 1)}
    uct = borel_uct(coh[0], coh[1], (hom[0], hom[1]))
    rep.data["duality"] = {str(k): dual[k] for k in degrees}
    rep.data["borel_uct"] = {"K_0": uct["K_0"].to_json(), "K_1": uct["K_1"].to_json(),
                             "consistent": uct["consistent"], "diffs": uct["diffs"]}
    for k in degrees:
        rep.text()
        rep.text(f"cohomology, k={k}:")
        for line in coh[k].format(rep.ascii).splitlines():
            rep.text("  " + line)
        if reduced and k == 0:
            for line in coh[k].to_reduced().format(rep.ascii).splitlines():
                rep.text("  " + line)
        rep.text(f"homology, k={k}:")
        for line in hom[k].format(rep.ascii).splitlines():
            rep.text("  " + line)
        rep.text("rationalized:")
        rep.text("  " + rationalize(coh[k]).format(rep.ascii))
        rep.text("  " + rationalize(hom[k]).format(rep.ascii))
        rep.text(f"duality check: {'pass' if dual[k]['passed'] else 'FAIL'}")
        for d in dual[k]["diffs"]:
            rep.text("  " + d)
    rep.text()
    rep.text(f"UCT transfer agrees with homology assembly: {'yes' if uct['consistent'] else 'NO'}")
    ok = all(d["passed"] for d in dual.values()) and uct["consistent"]
    return coh, hom, ok


def _con_p_section(rep: Report, g: FiniteGroup):
    tables = {}
    rep.text("con_p classes (representative, order, class size, centralizer order):")
    for p in sorted(primes_of_group(g)):
        rows = [{"representative": c.representative, "order": c.order_of_rep,
                 "class_size": c.class_size, "centralizer_order": c.centralizer.order}
                for c in con_p(g, p)]
        tables[str(p)] = rows
        rep.text(f"  p={p}: " + ", ".join(
            f"({r['representative']}, {r['order']}, {r['class_size']}, {r['centralizer_order']})" for r in rows))
    rep.data["con_p"] = tables


def _resolved_section(rep: Report, coh, hom):
    z = "Z" if rep.ascii else "ℤ"
    values = {"K^0": coh[0].resolved, "K^1": coh[1].resolved,
              "K_0": hom[0].resolved, "K_1": hom[1].resolved}
    rep.data["resolved"] = {k: (v.to_json() if v is not None else None) for k, v in values.items()}
    rep.text()
    for name, v in values.items():
        if v is not None:
            rep.text(f"{name}(BG) = {rep.fmt(v)}")


def cmd_finite_group(args) -> int:
    g = load_group(read_json(args.file))
    rep = Report("finite-group", args.ascii)
    rep.data["group_order"] = g.order
    rep.text(f"finite group of order {g.order}")
    pkg = package_from_complex(point_with(g), name=f"order {g.order}")
    _con_p_section(rep, g)
    _r_section(rep, pkg)
    coh, hom, ok = _presentations(rep, pkg, _degrees(args), args.reduced)
    _resolved_section(rep, coh, hom)
    rep.emit(args.format)
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_package(args) -> int:
    if args.builtin:
        try:
            pkg = builtin_package(args.builtin)
        except PackageError as exc:
            raise InputError(str(exc)) from None
    else:
        pkg = load_package(read_json(args.file))
    rep = Report("package", args.ascii)
    rep.data["package"] = pkg.to_json()
    rep.text(f"package {pkg.name!r}, primes {sorted(pkg.primes)}, {len(pkg.classes)} classes")
    _r_section(rep, pkg)
    coh, hom, ok = _presentations(rep, pkg, _degrees(args), True)
    if any(c.resolved is not None for c in coh.values()):
        _resolved_section(rep, coh, hom)
    rep.emit(args.format)
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def _parse_periods(text: Optional[str]) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"periods must be comma-separated integers, got {text!r}") from None


def cmd_fuchsian(args) -> int:
    periods = _parse_periods(args.periods)
    if args.genus < 0 or any(x < 2 for x in periods):
        raise InputError(f"need genus >= 0 and periods >= 2, got g={args.genus}, periods={periods}")
    rep = Report("fuchsian", args.ascii)
    rep.data.update({"genus": args.genus, "periods": periods})
    rep.text(f"signature (g={args.genus}; {', '.join(map(str, periods)) or '-'})")
    out, ok = {}, True
    for k in _degrees(args):
        res = fuchsian_pipeline(args.genus, periods, k)
        mnm = mnm_assemble([cyclic_group(x) for x in periods], surface_complex(args.genus), k)
        agree = mnm["unreduced"] == res["value"]
        ok &= agree
        out[str(k)] = {
            "value": res["value"].to_json(),
            "surface": res["surface"].to_json(),
            "contributions": [{"period": gamma, "reduced": c.to_json()} for gamma, c in res["contributions"]],
            "mnm_value": mnm["unreduced"].to_json(),
            "cross_route_agrees": agree,
        }
        rep.text(f"K^{k}(BG) = {rep.fmt(res['value'])}")
        rep.text(f"  from the surface: {rep.fmt(res['surface'])}")
        for gamma, c in res["contributions"]:
            rep.text(f"  from Z/{gamma}: {rep.fmt(c)}")
        rep.text(f"  Mayer-Vietoris route agrees: {'yes' if agree else 'NO'}")
    rep.data["K"] = out
    rep.emit(args.format)
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_gcw(args) -> int:
    x = load_complex(read_json(args.file))
    rep = Report("gcw", args.ascii)
    rep.data["complex"] = {"ranks": list(x.base.ranks), "group_order": x.group.order}
    acyc = check_acyclicity(x.base, "Z")
    rep.data["acyclicity"] = acyc.to_json()
    if not acyc and not args.assume_acyclic:
        rep.data["hypotheses"] = "failed"
        rep.data["error"] = f"X is not acyclic: reduced homology in degree {acyc.degree} is {acyc.witness}"
        rep.text(rep.data["error"])
        rep.emit(args.format)
        return EXIT_HYPOTHESIS
    rep.data["hypotheses"] = "verified" if acyc else "assumed"
    rep.text(f"G of order {x.group.order} acting on a complex with cells {list(x.base.ranks)}")
    rep.text(f"acyclicity: {rep.data['hypotheses']}")
    pkg = package_from_complex(x, assume_acyclic=True)
    _con_p_section(rep, x.group)
    smith = []
    for p in sorted(pkg.primes):
        for c in con_p(x.group, p):
            smith.append(smith_consistency(x, c.representative, p))
    rep.data["smith"] = smith
    rep.text("Smith checks: " + (", ".join(f"g{s['element']}: {s['status']}" for s in smith) or "none"))
    _r_section(rep, pkg)
    coh, hom, ok = _presentations(rep, pkg, _degrees(args), args.reduced)
    _resolved_section(rep, coh, hom)
    rep.emit(args.format)
    if any(s["status"] == "internal-consistency-error" for s in smith):
        return EXIT_HYPOTHESIS
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def _ideal_tower(args, rep: Report) -> int:
    if args.m is None:
        raise InputError("ideal-tower needs --m")
    if args.m < 1 or args.depth < 1:
        raise InputError("--m and --depth must be positive")
    ring = CyclicRepRing(args.m)
    tower = augmentation_tower(ring, args.depth)
    levels = [tower.group(n) for n in range(1, args.depth + 1)]
    rep.data.update({"m": args.m, "depth": args.depth,
                     "levels": [g.to_json() for g in levels]})
    rep.text(f"R(Z/{args.m}) / I^n for n = 1..{args.depth}:")
    for n, g in enumerate(levels, start=1):
        rep.text(f"  n={n}: {rep.fmt(g)}")
    rows = []
    g = cyclic_group(args.m)
    for p in sorted(ring.primes()):
        r = completion_rank(ring, p, range(1, args.depth + 1))
        c = len(con_p(g, p))
        rows.append({"p": p, "completion_rank": r, "con_p": c, "agree": r == c})
        rep.text(f"p={p}: completion rank {r}, |con_p| = {c}, {'agree' if r == c else 'DISAGREE'}")
    rep.data["cross_check"] = rows
    return EXIT_OK if all(r["agree"] for r in rows) else EXIT_HYPOTHESIS


def cmd_pro(args) -> int:
    rep = Report("pro", args.ascii)
    if args.file == "ideal-tower":
        code = _ideal_tower(args, rep)
        rep.emit(args.format)
        return code
    data = read_json(args.file)
    if detect_kind(data) != "tower":
        raise InputError("pro expects a tower file")
    tower = load_tower(data)
    lim = lim_lim1(tower)
    col = colim_hom_ext(tower)
    triv = is_pro_trivial(tower)
    rep.data.update({
        "pro_trivial": triv,
        "lim": lim.limit.to_json(), "lim1": lim.lim1.to_json(),
        "colim_hom": col.colim_hom.to_json(), "colim_ext": col.colim_ext.to_json(),
    })
    rep.text(f"pro-trivial: {'yes' if triv else 'no'}")
    rep.text(f"lim = {rep.fmt(lim.limit)}, lim^1 = {rep.fmt(lim.lim1)}")
    rep.text(f"colim hom(-, Z) = {rep.fmt(col.colim_hom)}, colim ext(-, Z) = {rep.fmt(col.colim_ext)}")
    code = EXIT_OK
    if "map" in data:
        check = pro_pushforward_check(load_tower_map(data["map"], tower))
        rep.data["map"] = check
        rep.text(f"map is a pro-isomorphism: {'yes' if check['pro_isomorphism'] else 'no'}")
        rep.text(f"invariants agree on both sides: {'yes' if check['agree'] else 'no'}")
        if not check["consistent"]:
            code = EXIT_HYPOTHESIS
    rep.emit(args.format)
    return code


def cmd_validate(args) -> int:
    data = read_json(args.file)
    kind = detect_kind(data)
    rep = Report("validate", args.ascii)
    rep.data["kind"] = kind
    if kind == "group":
        g = load_group(data)
        rep.data["order"] = g.order
        rep.text(f"valid group of order {g.order}")
    elif kind == "complex":
        x = load_complex(data)
        acyc = check_acyclicity(x.base, "Z")
        rep.data.update({"ranks": list(x.base.ranks), "group_order": x.group.order,
                         "acyclicity": acyc.to_json()})
        rep.text(f"valid G-CW complex (|G| = {x.group.order}, cells {list(x.base.ranks)}); "
                 f"acyclic: {'yes' if acyc else f'no (degree {acyc.degree})'}")
    elif kind == "tower":
        t = load_tower(data)
        rep.data["prefix_length"] = t.N
        rep.text(f"valid tower with {t.N} explicit levels")
    else:
        pkg = load_package(data)
        rep.data["package"] = pkg.to_json()
        rep.text(f"valid package {pkg.name!r}")
    rep.data["valid"] = True
    rep.emit(args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--ascii", action="store_true", help="ASCII fallbacks for Z_p^, Z/p^inf, Q_p^")
    common.add_argument("--order-cap", type=int, default=None, help="override the group-order cap")
    degree = argparse.ArgumentParser(add_help=False)
    degree.add_argument("--k", type=int, choices=(0, 1), default=None, help="degree (default: both)")

    parser = argparse.ArgumentParser(prog="kborel", description="K-theory of classifying spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finite-group", parents=[common, degree], help="finite group, X = pt")
    p.add_argument("file")
    p.add_argument("--reduced", action="store_true", help="also print reduced presentations")
    p.set_defaults(func=cmd_finite_group)

    p = sub.add_parser("package", parents=[common, degree], help="group package (torsion-class data)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("file", nargs="?")
    src.add_argument("--builtin", metavar="NAME")
    p.set_defaults(func=cmd_package)

    p = sub.add_parser("fuchsian", parents=[common, degree], help="cocompact Fuchsian signature")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--periods", default="", help="comma-separated cone orders")
    p.set_defaults(func=cmd_fuchsian)

    p = sub.add_parser("gcw", parents=[common, degree], help="finite group acting on a finite complex")
    p.add_argument("file")
    p.add_argument("--assume-acyclic", action="store_true")
    p.add_argument("--reduced", action="store_true")
    p.set_defaults(func=cmd_gcw)

    p = sub.add_parser("pro", parents=[common], help="towers; or 'ideal-tower --m M --depth N'")
    p.add_argument("file", metavar="FILE|ideal-tower")
    p.add_argument("--m", type=int)
    p.add_argument("--depth", type=int, default=12)
    p.set_defaults(func=cmd_pro)

    p = sub.add_parser("validate", parents=[common], help="check an input file against its schema")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = os.environ.get("KBOREL_ORDER_CAP")
    if args.order_cap is not None:
        os.environ["KBOREL_ORDER_CAP"] = str(args.order_cap)
    try:
        return args.func(args)
    except (InputError, GroupError, PackageError) as exc:
        print(f"kborel: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"kborel: hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UnsupportedComputation, NotStabilized) as exc:
        print(f"kborel: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    finally:
        if args.order_cap is not None:
            if saved is None:
                os.environ.pop("KBOREL_ORDER_CAP", None)
            else:
                os.environ["KBOREL_ORDER_CAP"] = saved


if __name__ == "__main__":
    sys.exit(main())
