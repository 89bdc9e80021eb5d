"""The acceptance criteria as runnable checks, shared by ``selftest`` and the test suite.

Each check returns a dict with ``ok``, ``seconds`` and a ``detail`` payload.
"""

import random
import time

from . import catalogue, properties
from .classifier import classify, involution_table, sweep, sweep_groups
from .cohomology import bogomolov
from .conjugacy import NotConjugate, census
from .fans import is_complete, is_invariant, is_smooth
from .groups import MatrixGroup
from .lattice import pic_lattice
from .models import build_model, model_automorphisms
from .obstruction import REFERENCE, reproduce_k9_family, k9_family_group

K9_FAMILY_RUNS = [("Q", 3), ("Q", 4), ("Q", 5), ("D", 3), ("D", 4), ("D", 5), ("SD", 4), ("SD", 5)]
SWEEP_DENOMINATORS = (1, 2, 3, 4)
SWEEP_LIFT_SETS = 4
SWEEP_MAX_ORDER = 32


def _timed(fn):
    def run(*a, **kw):
        t = time.time()
        ok, detail = fn(*a, **kw)
        return {"ok": bool(ok), "seconds": round(time.time() - t, 2), "detail": detail}
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def models():
    """Model statistics for S, P and the D4 cone blowup."""
    out = {}
    ok = True
    want = {"S": (14, 24, 36, 11), "P": (18, 32, 48, 15)}
    for name, (rays, maxc, two, pic) in want.items():
        m = build_model(name)
        c = m.fan.counts()
        row = {"rays": len(m.fan.rays), "maximal": c[3], "two_dim": c[2], "pic_rank": m.pic_rank,
               "smooth": is_smooth(m.fan), "complete": is_complete(m.fan)}
        out[name] = row
        ok &= (row["rays"], row["maximal"], row["two_dim"], row["pic_rank"]) == (rays, maxc, two, pic)
        ok &= row["smooth"] and row["complete"]
    m = build_model("D4cone")
    inv, _ = is_invariant(m.fan, catalogue.get("D4tau").group())
    row = {"rays": len(m.fan.rays), "maximal": len(m.fan.maximal), "smooth": is_smooth(m.fan),
           "invariant": inv}
    out["D4cone"] = row
    ok &= row == {"rays": 6, "maximal": 8, "smooth": True, "invariant": True}
    return ok, out


@_timed
def k9_families():
    """The exceptional K9 chase for Q, D and SD."""
    out = {}
    ok = True
    for fam, n in K9_FAMILY_RUNS:
        rep = reproduce_k9_family(fam, n)
        row = {"verdict": rep.verdict, "beta_blocks": rep.extra["beta_blocks"]}
        ok &= rep.verdict == "NonVanishing"
        if fam == "Q" and n == 4:
            row["beta_matches"] = rep.integral == REFERENCE["Q_beta"]
            row["image_matches"] = rep.extra["image_matches_reference"]
            ok &= row["beta_matches"] and row["image_matches"]
        if fam == "D":
            blk = rep.extra["beta_blocks"][1]
            row["distinguished"] = [blk[1], blk[3]]
            ok &= all(x % 2 == 1 for x in row["distinguished"])
        out[f"{fam}{n}"] = row
    return ok, out


def dihedral_witness_group():
    """(t1,t2,t3) -> (t2, -t1, 1/(t1 t2 t3)) and (t1,t2,t3) -> (1/(t1 t2 t3), t3, t2)."""
    return k9_family_group("D", 3)[0]


@_timed
def dihedral_witness():
    """A holds, U and SL fail, with beta nonvanishing as the witness."""
    v = classify(dihedral_witness_group())
    nonzero = bool(v.cross_check) and v.cross_check.get("beta", {}).get("2") == "NonVanishing"
    ok = v.condition_A and not v.U and not v.SL and nonzero
    return ok, {"A": v.condition_A, "U": v.U, "SL": v.SL, "justification": v.justification}


@_timed
def census_counts():
    """Conjugacy classes of C2 (without -1), C4, C2^2 (without -1) and D4."""
    res = census()
    want = {"C2": 4, "C4": 4, "C2^2": 9, "D4": 8}
    got = {k: len(v["classes"]) for k, v in res.items()}
    certified = all(isinstance(c, NotConjugate) for v in res.values() for c in v["certificates"].values())
    return got == want and certified, {"classes": got, "certified": certified}


def sylow_p_model():
    g = MatrixGroup(model_automorphisms("P")).sylow(2)
    return g


@_timed
def bogomolov_vanishing():
    """B^2(G, Pic^vee (x) Q/Z) = B^3(G, Pic^vee) for D4 and C2 x D4 with G_T = 1."""
    cases = [("D4 on C", catalogue.get("D4iota2theta1").group(), "P1cubed"),
             ("C2xD4 on C", catalogue.get("Syl2C").group(), "P1cubed"),
             ("C2xD4 on P", sylow_p_model(), "P")]
    out = {}
    ok = True
    for label, g, mname in cases:
        m = build_model(mname)
        r = bogomolov(g, pic_lattice(m, g, dual_=True), degree=3)
        out[label] = {"order": len(g), "B": r.factors, "H3": r.h_factors}
        ok &= len(g) in (8, 16) and r.vanishes
    return ok, out


@_timed
def involutions():
    """(A) for <iota_k> extended by every subgroup of 2-torsion translations."""
    rows = involution_table()
    bad = [r for r in rows if r["A"] != r["rule"]]
    names = {r["name"] for r in rows}
    return not bad and names == set(catalogue.INVOLUTIONS), {"rows": len(rows), "mismatches": bad[:5]}


def criterion_sweep_groups():
    rows = sweep_groups(catalogue.names(3), denominators=SWEEP_DENOMINATORS,
                        max_order=SWEEP_MAX_ORDER, max_lift_sets=SWEEP_LIFT_SETS)
    seen = {frozenset(g.elements) for _, g in rows}
    for fam, n in [("Q", 3), ("Q", 4), ("Q", 5), ("D", 2), ("D", 3), ("D", 4), ("D", 5), ("SD", 4), ("SD", 5)]:
        g = k9_family_group(fam, n)[0]
        if len(g) <= SWEEP_MAX_ORDER and frozenset(g.elements) not in seen:
            rows.append((f"K9-{fam}{n}", g))
    return rows


@_timed
def criterion_sweep(jobs=1, limit=None):
    """Criterion verdict for U against beta wherever (A) holds."""
    groups = criterion_sweep_groups()
    if limit is not None:
        groups = groups[:limit]
    res = sweep(groups, jobs=jobs)
    bad = [r for r in res.rows if r["A"] and r["cross_check"] and r["cross_check"].get("agrees") is False]
    ok = len(res.rows) >= 100 and res.disagreements == 0 and res.agreements >= 100
    return ok, {"groups": len(res.rows), "agreements": res.agreements,
                "disagreements": res.disagreements, "unchecked": res.unchecked,
                "disagreeing_rows": bad[:5]}


@_timed
def property_suites(seed=0, instances=10):
    rng = random.Random(seed)
    out = properties.run_all(rng, instances)
    return all(v["ok"] for v in out.values()), out


CRITERIA = [
    ("1 model statistics", models),
    ("2 K9 family reproduction", k9_families),
    ("3 dihedral K9 witness", dihedral_witness),
    ("4 conjugacy census", census_counts),
    ("5 Bogomolov vanishing", bogomolov_vanishing),
    ("6 involution table", involutions),
    ("7 criterion vs beta sweep", criterion_sweep),
    ("8 property suites", property_suites),
]

LIMITS = {"1 model statistics": 10, "2 K9 family reproduction": 60, "4 conjugacy census": 300,
          "5 Bogomolov vanishing": 1800, "7 criterion vs beta sweep": 1800}


def run_one(label, quick=False, jobs=1):
    """Run one criterion and fail it if it overruns its time limit."""
    fn = dict(CRITERIA)[label]
    if label.startswith("7"):
        r = fn(jobs=jobs, limit=300 if quick else None)
    else:
        r = fn()
    limit = LIMITS.get(label)
    if limit is not None and r["seconds"] > limit:
        r["ok"] = False
        r["detail"] = {"time_limit": limit, **(r["detail"] if isinstance(r["detail"], dict) else {})}
    return r


def run_all(quick=False, jobs=1, log=None):
    results = {}
    for label, _ in CRITERIA:
        r = run_one(label, quick, jobs)
        results[label] = r
        if log:
            log(f"{'PASS' if r['ok'] else 'FAIL'}  {label}  ({r['seconds']} s)")
    return results
