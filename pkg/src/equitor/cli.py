"""Command-line front end.  JSON reports go to stdout, summaries to stderr.

Exit codes: 0 success (negative verdicts are data), 2 usage error,
3 cap exceeded or inconclusive conjugacy.
"""

import argparse
import csv
import io as _io
import os
import sys

from . import catalogue
from .classifier import classify, involution_table, select_model, sweep, sweep_groups
from .conjugacy import InconclusiveConjugacy, glnz_conjugate, invariants
from .fans import MalformedFan, is_complete, is_invariant, is_smooth
from .fixedpoints import condition_A, has_fixed_point, orbit_fixed_point, stabilized_cones
from .groups import CapExceeded
from .io import dumps, load_group, load_model
from .obstruction import (NonCyclicTorusPart, NotK9, beta, normalize_k9, reproduce_k9_family,
                          k9_family_group)
from .resolution import BadParameters, DegreeOutOfRange


class UsageError(Exception):
    pass


def _emit(obj):
    sys.stdout.write(dumps(obj) + "\n")


def _say(msg):
    sys.stderr.write(msg + "\n")


def _group(args, required=True):
    if args.group:
        return load_group(args.group)
    if getattr(args, "family", None):
        if args.n is None:
            raise UsageError("--family needs --n")
        return k9_family_group(args.family, args.n)[0]
    if required:
        raise UsageError("--group FILE is required")
    return None


def _model(args, group=None):
    if args.model:
        return load_model(args.model)
    if group is None:
        raise UsageError("--model is required")
    return select_model(group)


# ------------------------------------------------------------ commands

def cmd_catalog(args):
    if args.name:
        names = args.name
    else:
        names = catalogue.names()
    out = []
    for nm in names:
        out.append(catalogue.get(nm).to_json())
    _emit(out[0] if args.name and len(out) == 1 else out)
    _say(f"{len(out)} catalogue entr{'y' if len(out) == 1 else 'ies'}")


def _model_checks(model, group=None):
    fan = model.fan
    out = {"name": model.name, "n": fan.n, "smooth": is_smooth(fan), "complete": is_complete(fan),
           "counts": {str(k): v for k, v in fan.counts().items()}, "rays": len(fan.rays),
           "maximal_cones": len(fan.maximal), "pic_rank": model.pic_rank,
           "pic_factors": model.pic().factors}
    if group is not None:
        ok, _ = is_invariant(fan, group)
        out["invariant"] = ok
    return out


def cmd_model_build(args):
    if not args.model:
        raise UsageError("--model NAME is required")
    model = load_model(args.model)
    data = model.to_json()
    data["checks"] = _model_checks(model)
    data["fan_text"] = model.fan.to_text()
    _emit(data)
    _say(f"model {model.name}: {len(model.fan.rays)} rays, {len(model.fan.maximal)} maximal cones")


def cmd_model_check(args):
    if not args.model:
        raise UsageError("--model NAME|FILE is required")
    model = load_model(args.model)
    group = load_group(args.group) if args.group else None
    out = _model_checks(model, group)
    _emit(out)
    _say(f"{model.name}: smooth={out['smooth']} complete={out['complete']}")


def cmd_group_info(args):
    g = _group(args)
    img = g.image()
    inv = invariants(img)
    matches = []
    for name in catalogue.names(g.n):
        t = catalogue.get(name).group()
        if len(t) == len(img) and glnz_conjugate(img, t).verdict == "ConjugateWithWitness":
            matches.append(name)
    out = {"n": g.n, "order": len(g), "torus_order": len(g.torus_kernel()),
           "image_order": len(img), "abelian": g.is_abelian(),
           "element_orders": sorted(g.orders), "image_catalogue_class": matches,
           "image_invariants": {k: v for k, v in inv.items()},
           "generators": g.to_json()["generators"]}
    _emit(out)
    _say(f"|G| = {len(g)}, |G_T| = {out['torus_order']}, |pi*(G)| = {len(img)}")


def cmd_fixed_points(args):
    g = _group(args)
    model = _model(args, g)
    rows = []
    members = list(range(len(g)))
    for c in stabilized_cones(model, g.elements):
        fp = orbit_fixed_point(model, g.elements, c)
        rows.append({"cone": list(c), "fixed_point": fp.to_json()["point"] if fp else None})
    fp = has_fixed_point(model, g, members)
    _emit({"model": model.name, "group_fixed_point": fp.to_json() if fp else None, "orbits": rows})
    _say(f"X^G {'nonempty' if fp else 'empty'} on {model.name}")


def cmd_condition_a(args):
    g = _group(args)
    model = _model(args, g)
    res = condition_A(model, g)
    out = res.to_json()
    out["model"] = model.name
    out["fixed_points"] = {",".join(map(str, k)): v.to_json() for k, v in sorted(res.fixed_points.items())}
    _emit(out)
    _say(f"Condition (A) {'holds' if res.holds else 'fails'} on {model.name}")


def cmd_beta(args):
    g = _group(args)
    model = _model(args, g)
    rep = beta(model, g)
    out = rep.to_json()
    if g.n == 3 and len(g.image()) == 4:
        try:
            out["k9_normalization"] = normalize_k9(g).to_json()
        except (NotK9, NonCyclicTorusPart) as exc:
            out["k9_normalization"] = {"error": type(exc).__name__, "detail": str(exc)}
    _emit(out)
    _say(f"beta on {model.name}: {rep.verdict}")


def cmd_classify(args):
    g = _group(args)
    v = classify(g)
    _emit(v.to_json())
    _say(f"A={v.condition_A} U={v.U} SL={v.SL} (model {v.model})")


def cmd_sweep(args):
    if args.involutions:
        rows = involution_table()
        bad = sum(r["A"] != r["rule"] for r in rows)
        _emit_rows({"rows": rows, "mismatches": bad}, rows, args)
        _say(f"{len(rows)} involution rows, {bad} mismatches")
        return
    names = args.name or catalogue.names(3)
    limit = args.max_order if args.max_order is not None else 32
    groups = sweep_groups(names, max_order=limit, max_lift_sets=args.lift_sets)
    res = sweep(groups, jobs=args.jobs)
    _emit_rows(res.to_json(), res.rows, args)
    _say(f"{len(res.rows)} groups: {res.agreements} agreements, {res.disagreements} disagreements, "
         f"{res.unchecked} unchecked")


SWEEP_COLUMNS = ["name", "group_order", "torus_order", "image_order", "model", "A", "U", "SL", "beta_U"]
TABLE_COLUMNS = ["name", "lift", "torus", "A", "rule"]


def _emit_rows(obj, rows, args):
    if args.format != "csv":
        _emit(obj)
        return
    keys = TABLE_COLUMNS if rows and "rule" in rows[0] else SWEEP_COLUMNS
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        flat = dict(r, beta_U=(r.get("cross_check") or {}).get("beta_U"))
        w.writerow([flat.get(k) for k in keys])
    sys.stdout.write(buf.getvalue())


def cmd_reproduce(args):
    if not args.family or args.n is None:
        raise UsageError("--family and --n are required")
    rep = reproduce_k9_family(args.family, args.n, args.model or "S")
    _emit(rep.to_json())
    _say(f"{args.family} n={args.n}: {rep.verdict}")


def cmd_selftest(args):
    from .acceptance import run_all
    results = run_all(quick=args.quick, jobs=args.jobs, log=_say)
    _emit(results)
    if not all(r["ok"] for r in results.values()):
        return 1
    return 0


COMMANDS = {
    "catalog": cmd_catalog, "group-info": cmd_group_info, "model-build": cmd_model_build,
    "model-check": cmd_model_check, "fixed-points": cmd_fixed_points,
    "condition-a": cmd_condition_a, "beta": cmd_beta, "classify": cmd_classify,
    "sweep": cmd_sweep, "reproduce-section6": cmd_reproduce, "selftest": cmd_selftest,
}


def build_parser():
    p = argparse.ArgumentParser(prog="equitor", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--group", metavar="FILE", help="group JSON file")
    p.add_argument("--model", metavar="NAME|FILE", help="model name, model JSON or fan text file")
    p.add_argument("--family", choices=["Q", "D", "SD"])
    p.add_argument("--n", type=int)
    p.add_argument("--max-order", type=int, help="cap on group orders (also EQUITOR_MAX_ORDER)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--name", action="append", help="catalogue entry (repeatable)")
    p.add_argument("--lift-sets", type=int, default=4, help="lift choices per catalogue group in sweeps")
    p.add_argument("--involutions", action="store_true", help="sweep the order-2 table instead")
    p.add_argument("--quick", action="store_true", help="selftest: skip the long sweeps")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.max_order is not None:
        if args.max_order < 1:
            _say("error: --max-order must be positive")
            return 2
        os.environ["EQUITOR_MAX_ORDER"] = str(args.max_order)
    if args.jobs < 1:
        _say("error: --jobs must be positive")
        return 2
    try:
        code = COMMANDS[args.command](args)
        return code or 0
    except (UsageError, BadParameters, DegreeOutOfRange, MalformedFan, KeyError,
            FileNotFoundError, ValueError) as exc:
        _say(f"usage error: {exc}")
        return 2
    except (CapExceeded, InconclusiveConjugacy) as exc:
        _say(f"cap exceeded or inconclusive: {exc}")
        return 3


if __name__ == "__main__":
    sys.exit(main())
