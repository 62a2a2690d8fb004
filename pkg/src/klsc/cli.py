"""Command-line entry point: the `klsc` tool.

Subcommands
-----------
kls       solve the kernel recursion on a poset/matroid/Bruhat input
fan       g-polynomials and sheaf stalks of fans and polytopes
matroid   KL- and Z-polynomials of matroids, over QQ or GF(p)
coxeter   KL-polynomials of Bruhat intervals via the moment-graph sheaf
validate  run the desk validation suite

All configuration is by flags; reports are JSON (deterministic up to the
timings field) with --pretty for a human-readable table.  Exit codes:
0 success, 1 a check or route comparison failed, 2 malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from klsc.coxeter import (
    CartanDatum,
    CoxeterGroup,
    bruhat_graph,
    element_from_json,
    enumerate_interval,
    group_from_json,
    word_from_permutation,
)
from klsc.errors import KlscError
from klsc.fans import (
    Fan,
    build_fan_sheaf,
    cone_over_polytope,
    fan_face_poset,
)
from klsc.field import GF, QQ
from klsc.kls import (
    coxeter_R_kernel,
    eulerian_kernel,
    kalai_check,
    matroid_kernel,
    monotonicity_check,
    solve_kls,
    verify_kernel,
    z_polynomial,
)
from klsc.matroids import Matroid, p_trivial_criterion
from klsc.matroid_ih import matroid_sheaf
from klsc.momentsheaf import compute_sheaf
from klsc.poset import RankedPoset
from klsc.poly import UniPoly


def _poly_json(p: UniPoly):
    return {"convention": "half-degree", "coeffs": p.coeff_list()}


def _digest(data):
    return hashlib.sha256(
        json.dumps(data, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]


def _field_of(char):
    return QQ if char in (None, 0) else GF(char)


def _load_input(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputError(f"cannot read input {path}: {exc}") from exc


class _InputError(Exception):
    pass


def _matroid_from_json(data) -> Matroid:
    if "bases" in data:
        return Matroid.from_bases(int(data["ground_set"]), data["bases"])
    if "flats" in data:
        return Matroid.from_flats(int(data["ground_set"]), data["flats"])
    if "matrix" in data:
        cols = [list(col) for col in data["matrix"]]
        return Matroid.from_matrix(cols)
    if "uniform" in data:
        k, n = data["uniform"]
        return Matroid.uniform(int(k), int(n))
    raise _InputError("matroid JSON needs 'bases', 'flats', 'matrix' or 'uniform'")


def _fan_from_json(data) -> Fan:
    if "polytope_vertices" in data:
        return cone_over_polytope(data["polytope_vertices"])
    if "rays" in data and "max_cones" in data:
        return Fan.from_max_cones(int(data["dim"]), data["rays"], data["max_cones"])
    raise _InputError("fan JSON needs 'polytope_vertices' or 'rays'+'max_cones'")


def _parse_pair(spec, poset):
    """Split 'x,y' into two element names; names may themselves contain
    commas (e.g. '{0,1}'), so try every split point."""
    if ":" in spec:
        left, right = spec.split(":", 1)
        candidates = [(left, right)]
    else:
        candidates = [
            (spec[:i], spec[i + 1 :])
            for i, ch in enumerate(spec)
            if ch == ","
        ]
    for left, right in candidates:
        if left in poset.names and right in poset.names:
            return poset.names.index(left), poset.names.index(right)
    raise _InputError(f"bad --pair {spec!r}: element names not found")


def _parse_word(spec, group):
    """A word like '1,2,1', the identity 'e', or (type A) a one-line
    permutation such as '3412'."""
    if spec in (None, "", "e"):
        return group.identity
    if "," in spec:
        return element_from_json(group, [s for s in spec.split(",") if s])
    if spec.isdigit():
        digits = [int(c) for c in spec]
        if sorted(digits) == list(range(1, len(digits) + 1)) and len(digits) == group.rank + 1:
            return group.from_word(word_from_permutation(digits))
        return element_from_json(group, list(spec))
    raise _InputError(f"cannot parse word {spec!r}")


def _emit(report, args):
    text = json.dumps(report, sort_keys=True, indent=2)
    if getattr(args, "pretty", False):
        text = _pretty(report)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pretty(report, indent=0):
    lines = []
    pad = "  " * indent
    for key in sorted(report):
        val = report[key]
        if isinstance(val, dict):
            if set(val) == {"convention", "coeffs"}:
                lines.append(f"{pad}{key}: {_poly_str(val['coeffs'])}")
            else:
                lines.append(f"{pad}{key}:")
                lines.append(_pretty(val, indent + 1))
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(lines)


def _poly_str(coeffs):
    return repr(UniPoly(coeffs))


def _checks_passed(checks):
    def walk(v):
        if isinstance(v, dict):
            return all(walk(x) for x in v.values())
        return v is not False

    return walk(checks)


# -- subcommands ------------------------------------------------------------------


def _cmd_kls(args):
    data = _load_input(args.input)
    if args.kernel == "eulerian":
        poset = RankedPoset.from_json(data)
        kernel = eulerian_kernel(poset)
    elif args.kernel == "matroid":
        matroid = _matroid_from_json(data)
        poset = matroid.lattice()
        kernel = matroid_kernel(poset)
    elif args.kernel == "coxeter":
        group = group_from_json(data)
        w = element_from_json(group, data.get("w", "e"))
        v = element_from_json(group, data.get("v", "e"))
        interval = enumerate_interval(group, v, w)
        poset = interval.poset
        kernel = coxeter_R_kernel(interval)
    else:  # pragma: no cover - argparse restricts choices
        raise _InputError(f"unknown kernel {args.kernel}")

    ok, witness = verify_kernel(kernel)
    table = solve_kls(kernel)
    mono, _ = monotonicity_check(table)
    checks = {"kernel_axioms": ok, "monotonicity": mono}

    if args.pair:
        pairs = [_parse_pair(args.pair, poset)]
    else:
        pairs = sorted(table.pairs())
    f_table = {
        f"{poset.names[x]},{poset.names[y]}": _poly_json(table[(x, y)])
        for x, y in pairs
    }
    z_table = {
        f"{poset.names[x]},{poset.names[y]}": _poly_json(z_polynomial(table, x, y))
        for x, y in pairs
    }
    report = {
        "command": "kls",
        "kernel": args.kernel,
        "input_digest": _digest(data),
        "f": f_table,
        "Z": z_table,
        "checks": checks,
    }
    return report, 0 if _checks_passed(checks) else 1


def _cmd_fan(args):
    data = _load_input(args.input)
    fan = _fan_from_json(data)
    poset = fan_face_poset(fan)
    t0 = time.time()
    _, sheaf = build_fan_sheaf(fan)
    bottom, top = poset.bottom(), poset.top()
    # the recursion route runs on the face poset of a single cone, which is
    # bounded and Eulerian; complete fans have several maximal cones
    table = None
    if bottom is not None and top is not None:
        table = solve_kls(eulerian_kernel(poset))
    checks = {}
    report = {
        "command": f"fan {args.action}",
        "input_digest": _digest(data),
        "cones_by_dimension": fan.counts_by_dimension(),
    }
    if args.action == "g":
        if table is None:
            raise _InputError("the g-polynomial needs a polytope or single-cone input")
        g_sheaf = sheaf.stalk_poincare(bottom)
        g_rec = table[(bottom, top)]
        checks["routes_agree"] = g_sheaf == g_rec
        kal, _ = kalai_check(table)
        checks["kalai"] = kal
        report["g"] = _poly_json(g_sheaf)
        report["g_recursion"] = _poly_json(g_rec)
    else:  # ih
        idx = args.cone if args.cone is not None else (bottom or 0)
        if not 0 <= idx < fan.n_cones():
            raise _InputError(f"cone index {idx} out of range")
        report["cone"] = list(fan.cones[idx])
        report["stalk"] = _poly_json(sheaf.stalk_poincare(idx))
        if table is not None:
            checks["matches_recursion"] = (
                sheaf.stalk_poincare(idx) == table[(idx, top)]
            )
    report["checks"] = checks
    report["timings_ms"] = {"total": round((time.time() - t0) * 1000)}
    return report, 0 if _checks_passed(checks) else 1


def _cmd_matroid(args):
    data = _load_input(args.input)
    matroid = _matroid_from_json(data)
    field = _field_of(args.char)
    t0 = time.time()
    sheaf = matroid_sheaf(matroid, field)
    L = matroid.lattice()
    checks = {}
    report = {
        "command": f"matroid {args.action}",
        "input_digest": _digest(data),
        "characteristic": field.characteristic,
        "rank": matroid.rank,
        "n_flats": len(matroid.flats()),
    }
    if args.action == "kl":
        report["P"] = _poly_json(sheaf.kl_polynomial())
    else:
        report["Z"] = _poly_json(sheaf.z_polynomial())
        checks["palindromic"] = sheaf.z_polynomial().reverse_check(matroid.rank)
    if args.all_flats:
        report["stalks"] = {
            L.names[j]: _poly_json(sheaf.stalk_poincare(j)) for j in L.elements()
        }
    if field.characteristic:
        report["p_trivial_criterion"] = p_trivial_criterion(
            matroid, field.characteristic
        )
    if args.compare_recursion:
        table = solve_kls(matroid_kernel(L))
        if field.characteristic:
            checks["compare_recursion"] = "skipped (recursion is characteristic 0)"
        else:
            agree = all(
                sheaf.stalk_poincare(j) == table[(j, L.top())] for j in L.elements()
            )
            agree = agree and sheaf.z_polynomial() == z_polynomial(
                table, L.bottom(), L.top()
            )
            checks["routes_agree"] = agree
    report["checks"] = checks
    report["timings_ms"] = {"total": round((time.time() - t0) * 1000)}
    return report, 0 if _checks_passed(checks) else 1


def _cmd_coxeter(args):
    if args.type:
        group = CoxeterGroup(CartanDatum.from_type(args.type))
    elif args.cartan:
        group = CoxeterGroup(CartanDatum.from_matrix(json.loads(args.cartan)))
    else:
        raise _InputError("need --type or --cartan")
    w = _parse_word(args.w, group)
    v = _parse_word(args.v, group)
    field = _field_of(args.char)
    t0 = time.time()
    interval = enumerate_interval(group, v, w)
    graph = bruhat_graph(group, interval)
    sheaf = compute_sheaf(graph, field, degree_bound=args.degree_bound)
    checks = {}
    report = {
        "command": "coxeter kl",
        "input_digest": _digest(
            {"type": args.type, "cartan": args.cartan, "w": args.w, "v": args.v}
        ),
        "characteristic": field.characteristic,
        "interval_size": len(interval),
        "P": _poly_json(sheaf.kl_from_sheaf(interval.pos[v])),
        "stalks": {
            interval.poset.names[i]: _poly_json(sheaf.kl_from_sheaf(i))
            for i in range(len(interval))
        },
    }
    if args.compare_recursion:
        if field.characteristic:
            checks["compare_recursion"] = "skipped (recursion is characteristic 0)"
        else:
            table = solve_kls(coxeter_R_kernel(interval))
            top = interval.pos[w]
            checks["routes_agree"] = all(
                sheaf.kl_from_sheaf(i) == table[(i, top)]
                for i in range(len(interval))
            )
    report["checks"] = checks
    report["timings_ms"] = {"total": round((time.time() - t0) * 1000)}
    return report, 0 if _checks_passed(checks) else 1


def _cmd_validate(args):
    from klsc.validate import run_desk_suite

    if args.suite != "desk":
        raise _InputError(f"unknown suite {args.suite!r}")
    log = print if not args.quiet else (lambda s: None)
    report = run_desk_suite(log=log)
    return report.to_json(), 0 if report.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="klsc",
        description="KLS-polynomials by kernel recursion and by sheaves on posets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kls", help="solve the kernel recursion")
    p.add_argument("--kernel", choices=["eulerian", "matroid", "coxeter"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--pair", help="restrict output to one pair, e.g. 'x,y' by element name")
    _common_flags(p)
    p.set_defaults(fn=_cmd_kls)

    p = sub.add_parser("fan", help="fans and polytopes")
    p.add_argument("action", choices=["g", "ih"])
    p.add_argument("--input", required=True)
    p.add_argument("--cone", type=int, help="cone index for 'ih'")
    _common_flags(p)
    p.set_defaults(fn=_cmd_fan)

    p = sub.add_parser("matroid", help="matroid KL- and Z-polynomials")
    p.add_argument("action", choices=["kl", "z"])
    p.add_argument("--input", required=True)
    p.add_argument("--all-flats", action="store_true")
    _common_flags(p)
    p.set_defaults(fn=_cmd_matroid)

    p = sub.add_parser("coxeter", help="Kazhdan-Lusztig polynomials of intervals")
    p.add_argument("action", choices=["kl"])
    p.add_argument("--type", help="Cartan type, e.g. A3")
    p.add_argument("--cartan", help="Cartan matrix as JSON, e.g. '[[2,-1],[-1,2]]'")
    p.add_argument("--w", required=True, help="word '1,2,1', permutation '3412', or 'e'")
    p.add_argument("--v", default="e")
    _common_flags(p)
    p.set_defaults(fn=_cmd_coxeter)

    p = sub.add_parser("validate", help="run the validation suite")
    p.add_argument("--suite", default="desk")
    p.add_argument("--quiet", action="store_true")
    _common_flags(p)
    p.set_defaults(fn=_cmd_validate)
    return parser


def _common_flags(p):
    p.add_argument("--char", type=int, default=0, help="0 for QQ, a prime for GF(p)")
    p.add_argument("--degree-bound", type=int, default=None)
    p.add_argument("--compare-recursion", action="store_true")
    p.add_argument("--output", help="write the report to a file")
    p.add_argument("--pretty", action="store_true", help="human-readable output")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.fn(args)
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except KlscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
