"""Command-line frontend.

Exit codes: 0 success (for ``verify-2to1``: the map is 2-to-1), 1 negative
verdict, 2 usage or input error, 3 failed construction hypothesis (its name
goes to stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import applications as apps
from . import catalog, census, constructions, walsh
from .census import MapTable, tabulate
from .errors import HypothesisFailed, TwoToOneError
from .gf_core import GF, Poly, parse_field

DEFAULT_SEED = 20201101
FORMATS = ("json", "tsv", "pretty")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output helpers

def _emit(obj, fmt: str, out) -> None:
    """Dicts and lists of flat dicts; json is sorted and compact per line."""
    if fmt == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
        return
    rows = obj if isinstance(obj, list) else [obj]
    if fmt == "tsv":
        if not rows:
            return
        keys = list(rows[0])
        out.write("\t".join(keys) + "\n")
        for r in rows:
            out.write("\t".join(_cell(r[k]) for k in keys) + "\n")
        return
    if isinstance(obj, list):
        if not rows:
            return
        keys = list(rows[0])
        cells = [keys] + [[_cell(r[k]) for k in keys] for r in rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(keys))]
        for row in cells:
            out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
        return
    width = max((len(k) for k in obj), default=0)
    for k, v in obj.items():
        out.write(f"{k:<{width}}  {_cell(v)}\n")


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _field(args) -> GF:
    if not args.field:
        raise UsageError("--field is required")
    return parse_field(args.field)


def _poly(args, F: GF) -> Poly:
    if not args.poly:
        raise UsageError("--poly is required")
    return Poly.parse(args.poly, F)


def _params(args) -> dict:
    if not args.params:
        return {}
    try:
        p = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params is not valid JSON: {exc}") from None
    if not isinstance(p, dict):
        raise UsageError("--params must be a JSON object")
    return p


def _map_from(text, F: GF) -> MapTable:
    """A poly literal or an explicit list of values."""
    if isinstance(text, list):
        return MapTable(F, F, np.asarray(text, dtype=np.int64))
    return tabulate(Poly.parse(str(text), F), F)


# ---------------------------------------------------------------------------
# subcommands

def cmd_census(args, out):
    F = _field(args)
    T = tabulate(_poly(args, F), F)
    fc = census.fiber_census(T)
    row = {"field": F.spec(), "poly": args.poly, "census": fc.to_json()["histogram"],
           "two_to_one": bool(census.is_two_to_one(T)), "image_size": census.image_size(T)}
    _emit(row, args.format, out)
    return 0


def cmd_verify(args, out):
    F = _field(args)
    T = tabulate(_poly(args, F), F)
    v = census.is_two_to_one(T)
    row = {"field": F.spec(), "poly": args.poly, "two_to_one": bool(v),
           "census": census.fiber_census(T).to_json()["histogram"]}
    if not v and v.witness:
        row["witness"] = {"point": v.witness[0], "fiber": list(v.witness[1])}
    _emit(row, args.format, out)
    return 0 if v else 1


def cmd_walsh(args, out):
    F = _field(args)
    T = tabulate(_poly(args, F), F)
    t = walsh.two_to_one_statistic(T, method=args.method)
    _emit({"field": F.spec(), "poly": args.poly, "statistic": t, "two_to_one": t == 0},
          args.format, out)
    return 0


def _construct(method: str, F: GF, p: dict, strict: bool) -> constructions.Construction:
    P = lambda key, default=None: Poly.parse(str(p.get(key, default)), F)
    if method == "field-gen":
        return constructions.field_gen_build(P("h"), P("phi"), P("psi"), P("psi_bar"), P("g"),
                                             F, int(p["q"]), strict)
    if method == "agw-3l":
        return constructions.agw_3l_build(P("L1"), P("L2"), P("L3"), P("g"), F, int(p["q"]), strict)
    if method == "case1-trace":
        return constructions.case1_trace_build(P("h"), P("phi"), P("g"), F, int(p["q"]),
                                               p.get("variant", "plain"), strict)
    if method == "case2":
        return constructions.case2_artin_schreier_build(P("h"), P("phi"), P("u"), F, int(p["q"]),
                                                        p.get("variant", "plain-g"), strict)
    if method == "cyclotomic":
        return constructions.cyclotomic_build(int(p["r"]), int(p["d"]), P("h"), F,
                                              p.get("mode", "direct"), strict)
    if method == "piecewise":
        return constructions.piecewise_from_permutation(
            _map_from(p["G"], F), p.get("mode", "trace"), p.get("gamma"), variant=p.get("variant", "F1"))
    if method == "compose":
        return constructions.compose(_map_from(p["G"], F), _map_from(p["H"], F), p.get("order", "GH"))
    if method == "translator":
        return constructions.translator_build_single(_map_from(p["F"], F), P("G"), int(p["gamma"]), strict)
    raise UsageError(f"unknown construction {method!r}")


CONSTRUCT_METHODS = ("field-gen", "agw-3l", "case1-trace", "case2", "cyclotomic",
                     "piecewise", "compose", "translator")


def cmd_construct(args, out):
    F = _field(args)
    try:
        cons = _construct(args.method, F, _params(args), strict=not args.no_strict)
    except KeyError as exc:
        raise UsageError(f"missing parameter {exc}") from None
    _emit(cons.to_json(), "json" if args.format == "tsv" else args.format, out)
    return 0


def cmd_catalog(args, out):
    if args.catalog_cmd == "list":
        rows = [{"family": e.name, "params": e.schema, "description": e.description,
                 "enforced": e.enforced} for e in catalog.FAMILIES.values()]
        _emit(rows, args.format, out)
        return 0
    entry = catalog.FAMILIES.get(args.family)
    if entry is None:
        raise UsageError(f"unknown family {args.family!r}; see 'catalog list'")
    if args.catalog_cmd == "build":
        try:
            cons = entry.build(**_params(args))
        except TypeError as exc:
            raise UsageError(str(exc)) from None
        _emit(cons.to_json(), "json" if args.format == "tsv" else args.format, out)
        return 0
    rows = [{"params": r["params"], "predicate": r["predicate"], "census": r["census"]}
            for r in catalog.sweep(args.family, args.max_q)]
    _emit(rows, args.format, out)
    return 0


def cmd_classify(args, out):
    F = _field(args)
    f = _poly(args, F)
    if args.normalize:
        f = catalog.normalize(f)
    c = catalog.classify_low_degree(f, F)
    _emit({"field": F.spec(), "poly": str(f), "two_to_one": c.two_to_one, "rule": c.rule},
          args.format, out)
    return 0


def cmd_count(args, out):
    n = args.n
    if n <= 12 and not args.approx:
        r = census.count_two_to_one_exact(n)
        row = {"n": n, "count": str(r.count), "ratio": r.ratio_text}
    else:
        a = census.count_two_to_one_approx(n)
        row = {"n": n, "log2_count": f"{a.log2_count:.6g}", "log2_ratio": f"{a.log2_ratio:.6g}"}
    _emit(row, args.format, out)
    return 0


def _bits_arg(args) -> apps.BooleanTable:
    if args.hex is None or args.n is None:
        raise UsageError("--n and --hex are required")
    return apps.BooleanTable.from_hex(args.n, args.hex)


def cmd_apps(args, out):
    if args.apps_cmd == "bent":
        f = _bits_arg(args)
        _emit({"n": f.n, "bent": apps.is_bent(f)}, args.format, out)
        return 0
    if args.apps_cmd == "semibent":
        f = _bits_arg(args)
        _emit({"n": f.n, "semibent": apps.is_semibent(f)}, args.format, out)
        return 0
    F = _field(args)
    T = tabulate(_poly(args, F), F)
    if args.apps_cmd == "planar":
        planar = apps.is_planar(T)
        row = {"field": F.spec(), "poly": args.poly, "planar": planar,
               "two_to_one": bool(census.is_two_to_one(T)), "image_size": census.image_size(T)}
        if planar:
            row["image_check"] = apps.planar_image_check(T)
        _emit(row, args.format, out)
        return 0
    G = apps.permutation_from_two_to_one(T)
    _emit({"field": F.spec(), "poly": args.poly, "permutation": [int(v) for v in G.values]},
          args.format, out)
    return 0


def cmd_repro(args, out):
    if args.table == "ratio-table":
        rows = []
        for n in range(1, 9):
            r = census.count_two_to_one_exact(n)
            rows.append({"n": n, "ratio": r.ratio_text})
        _emit(rows, args.format, out)
        return 0
    if args.table == "f5-cubics":
        rows = [{"poly": str(f)} for f in catalog.f5_cubics()]
        _emit(rows, args.format, out)
        return 0
    # walsh-corpus: seeded random maps, statistic vs census
    rng = np.random.default_rng(args.seed)
    rows = []
    for n in range(3, 9):
        F = parse_field(f"gf:p=2,n={n}")
        bad = total = 0
        for kind in census.RANDOM_KINDS:
            for _ in range(args.count):
                T = census.random_table(F, rng, kind)
                total += 1
                bad += (walsh.two_to_one_statistic(T) == 0) != bool(census.is_two_to_one(T))
        rows.append({"n": n, "maps": total, "disagreements": bad})
    _emit(rows, args.format, out)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="pretty")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    fp = argparse.ArgumentParser(add_help=False)
    fp.add_argument("--field", help="gf:p=<p>,n=<n>[,mod=<c0>,...]")
    fp.add_argument("--poly", help="c*x^e + ... with element-index coefficients")

    ap = argparse.ArgumentParser(prog="twotoone", description="Two-to-one mappings over finite fields.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sub.add_parser("census", parents=[common, fp], help="fiber census of a polynomial map")
    sub.add_parser("verify-2to1", parents=[common, fp], help="exit 0 iff the map is 2-to-1")
    w = sub.add_parser("walsh-test", parents=[common, fp], help="spectral 2-to-1 statistic")
    w.add_argument("--method", choices=("both", "direct", "transform"), default="both")

    c = sub.add_parser("construct", parents=[common, fp], help="certified construction")
    c.add_argument("method", choices=CONSTRUCT_METHODS)
    c.add_argument("--params", help="JSON object; maps given as poly literals")
    c.add_argument("--no-strict", action="store_true", help="report failed hypotheses instead of exiting 3")

    cat = sub.add_parser("catalog", help="known families")
    csub = cat.add_subparsers(dest="catalog_cmd", required=True)
    csub.add_parser("list", parents=[common])
    b = csub.add_parser("build", parents=[common])
    b.add_argument("family")
    b.add_argument("--params")
    s = csub.add_parser("sweep", parents=[common])
    s.add_argument("family")
    s.add_argument("--max-q", type=int, default=128)

    cl = sub.add_parser("classify", parents=[common, fp], help="degree <= 4 classification")
    cl.add_argument("--normalize", action="store_true", help="normalize the polynomial first")

    cn = sub.add_parser("count-n", parents=[common], help="number of 2-to-1 maps of GF(2^n)")
    cn.add_argument("n", type=int)
    cn.add_argument("--approx", action="store_true")

    a = sub.add_parser("apps", help="bent, semi-bent, planar, permutation lifting")
    asub = a.add_subparsers(dest="apps_cmd", required=True)
    for name in ("bent", "semibent"):
        x = asub.add_parser(name, parents=[common])
        x.add_argument("--n", type=int)
        x.add_argument("--hex")
    asub.add_parser("planar", parents=[common, fp])
    asub.add_parser("perm-lift", parents=[common, fp])

    r = sub.add_parser("repro", parents=[common], help="regenerate reference tables")
    r.add_argument("table", choices=("ratio-table", "f5-cubics", "walsh-corpus"))
    r.add_argument("--count", type=int, default=20, help="maps per kind and n (walsh-corpus)")
    return ap


HANDLERS = {"census": cmd_census, "verify-2to1": cmd_verify, "walsh-test": cmd_walsh,
            "construct": cmd_construct, "catalog": cmd_catalog, "classify": cmd_classify,
            "count-n": cmd_count, "apps": cmd_apps, "repro": cmd_repro}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return HANDLERS[args.cmd](args, out)
    except HypothesisFailed as exc:
        err.write(f"hypothesis failed: {exc.hypothesis}\n")
        return 3
    except (UsageError, TwoToOneError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
