"""Decision procedures for (A), (U) and (SL), cross-checked against beta."""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import catalogue
from .conjugacy import (Conjugate, Inconclusive, InconclusiveConjugacy, conjugate_into,
                        contains_conjugate_subgroup, glnz_conjugate)
from .fans import FanNotInvariant
from .fixedpoints import condition_A
from .groups import AffineGroup, CapExceeded, GroupElement, MatrixGroup, torsion_subgroups
from .lattice import fixed_sublattice, pic_lattice
from .linalg import frac_mod1
from .models import SURFACE_PREFERENCE, THREEFOLD_PREFERENCE, build_model, model_automorphisms
from .obstruction import BETA_MAX_ORDER, beta


@dataclass
class Verdict:
    condition_A: bool
    U: bool
    SL: bool
    justification: list
    cross_check: dict = None
    model: str = ""
    group_order: int = 0
    torus_order: int = 0
    image_order: int = 0
    linearizable: bool = None     # surfaces only, where the tables decide it
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.SL and not self.U or self.U and not self.condition_A:
            raise AssertionError("verdict violates SL => U => A")

    @property
    def agrees(self):
        """None when no beta cross-check was possible."""
        if not self.cross_check or "beta_U" not in self.cross_check:
            return None
        return self.cross_check["beta_U"] == self.U

    def to_json(self):
        out = {"A": self.condition_A, "U": self.U, "SL": self.SL,
               "justification": self.justification, "cross_check": self.cross_check,
               "model": self.model, "group_order": self.group_order,
               "torus_order": self.torus_order, "image_order": self.image_order}
        if self.linearizable is not None or self.extra.get("surface"):
            out["linearizable"] = self.linearizable
        out.update(self.extra)
        return out


# ------------------------------------------------------------ models

def select_model(group, preference=None):
    """First model in the preference order whose fan is invariant under pi*(G),
    otherwise a model moved by a conjugator into its automorphism group."""
    if preference is None:
        preference = THREEFOLD_PREFERENCE if group.n == 3 else SURFACE_PREFERENCE
    mats = group.matrix_parts()
    for name in preference:
        model = build_model(name)
        if model.n != group.n:
            continue
        if _invariant(model, mats):
            return model
    img = group.image()
    for name in preference:
        model = build_model(name)
        if model.n != group.n:
            continue
        x = conjugate_into(img, model_automorphisms(name))
        if x is not None:
            moved = model.transform(x)
            if _invariant(moved, mats):
                return moved
    raise FanNotInvariant("no catalogue model is invariant under the group")


def _invariant(model, mats):
    try:
        for a in mats:
            model.perm(a)
    except FanNotInvariant:
        return False
    return True


# ------------------------------------------------------------ beta cross-check

def _primes(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def beta_sylow(model, group, cap=BETA_MAX_ORDER):
    """beta on every Sylow subgroup; it vanishes on G iff it vanishes on each."""
    rows = {}
    for p in _primes(len(group)):
        syl = group.sylow(p)
        if len(syl) > cap:
            raise CapExceeded(f"Sylow {p}-subgroup of order {len(syl)} above the beta cap")
        rows[str(p)] = beta(model, syl).verdict
    return rows


# ------------------------------------------------------------ threefolds

_TARGETS = {}


def _target(name):
    if name not in _TARGETS:
        _TARGETS[name] = catalogue.get(name).group()
    return _TARGETS[name]


def classify_threefold(group, model=None, cross_check=True, cap=BETA_MAX_ORDER):
    if group.n != 3:
        raise ValueError("classify_threefold needs n = 3")
    if model is None:
        model = select_model(group)
    img = group.image()
    gt = len(group.torus_kernel())
    just = []

    ca = condition_A(model, group)
    if ca.holds:
        just.append(f"A: every maximal abelian subgroup fixes a point of {model.name} "
                    f"({ca.checked} checked)")
    else:
        just.append(f"A fails: abelian subgroup {ca.witness} has no fixed point on {model.name}")

    has_k9 = contains_conjugate_subgroup(img, _target("K9"))
    bad = [b for b in catalogue.BAD_SL if b == "K9" and has_k9
           or b != "K9" and contains_conjugate_subgroup(img, _target(b))]
    if not ca.holds:
        u = False
        just.append("U fails: (A) is necessary")
    elif has_k9 and gt % 2 == 0:
        u = False
        just.append("U fails: pi*(G) contains a K9 conjugate and |G_T| is even")
    else:
        u = True
        if has_k9:
            just.append("U: pi*(G) contains a K9 conjugate but the 2-part of G_T is trivial")
        else:
            just.append("U: (A) holds and pi*(G) contains no K9 conjugate")
    if not u:
        sl = False
        just.append("SL fails: (U) is necessary")
    elif bad:
        sl = False
        just.append("SL fails: pi*(G) contains a conjugate of " + ", ".join(bad))
    else:
        sl = True
        just.append("SL: (U) holds and pi*(G) contains none of the non-permutation groups")

    check = None
    if cross_check:
        try:
            rows = beta_sylow(model, group, cap)
            bu = all(v == "Vanishes" for v in rows.values())
            check = {"beta": rows, "beta_U": bu, "agrees": bu == u}
            for p, v in sorted(rows.items()):
                just.append(f"beta on the Sylow {p}-subgroup: {v}")
        except CapExceeded as exc:
            check = {"skipped": str(exc)}
    return Verdict(ca.holds, u, sl, just, check, model.name, len(group), gt, len(img),
                   extra={"bad_subgroups": bad, "contains_K9": has_k9})


# ------------------------------------------------------------ surfaces

def _conjugator(img, name):
    """X with X^-1 img X equal to the catalogue group, or None."""
    t = _target(name)
    if len(img) != len(t):
        return None
    v = glnz_conjugate(img, t)
    if isinstance(v, Inconclusive):
        raise InconclusiveConjugacy(f"conjugacy to {name} undecided")
    return v.witness if isinstance(v, Conjugate) else None


def _moved_torus(group, x):
    """G_T in the coordinates where pi*(G) is the catalogue group."""
    out = []
    for e in group.elements:
        if e.is_translation():
            out.append([frac_mod1(sum(e.s[i] * x[i][j] for i in range(len(x))))
                        for j in range(len(x))])
    return out


def _is_p_group(k, p):
    while k % p == 0:
        k //= p
    return k == 1


def classify_surface(group, model=None):
    if group.n != 2:
        raise ValueError("classify_surface needs n = 2")
    img = group.image()
    order, gt_order = len(group), len(group.torus_kernel())
    in_d4 = conjugate_into(img, _target("s_D4")) is not None
    if model is None:
        model = select_model(group, ["P1xP1"] if in_d4 else ["dP6", "P1xP1", "P2"])
    ca = condition_A(model, group)
    just = [f"A {'holds' if ca.holds else 'fails'} on {model.name} ({ca.checked} maximal abelian subgroups)",
            "U and SL are equivalent to (A) for toric surfaces"]
    check = {}

    # unirationality table for p-groups
    table_u = None
    if len(img) == 1:
        table_u = True
        check["table"] = "pi*(G) = 1"
    elif _is_p_group(order, 3):
        table_u = gt_order == 1
        check["table"] = "3-group: U iff pi*(G) = 1 or G_T = 1"
    elif _is_p_group(order, 2):
        if _conjugator(img, "s_iota3") is not None:
            table_u = True
            check["table"] = "2-group with pi*(G) conjugate to <iota3>"
        else:
            x = _conjugator(img, "s_iota2")
            if x is not None:
                pts = _moved_torus(group, x)
                table_u = all(p[0] == 0 for p in pts)
                check["table"] = "2-group with pi*(G) = <iota2>: U iff G_T in {(1, t)}"
            else:
                table_u = gt_order == 1
                check["table"] = "2-group: U iff G_T = 1"
    if table_u is not None:
        check["table_U"] = table_u
        check["agrees"] = table_u == ca.holds
        if table_u != ca.holds:
            raise AssertionError("fixed-point computation contradicts the unirationality table")

    # linearizability tables
    lin, why = _linearizable(group, img, model, in_d4, gt_order)
    if lin is not None:
        just.append(why)
        if lin and not ca.holds:
            raise AssertionError("linearizable action without fixed points")
    u = ca.holds
    return Verdict(ca.holds, u, u, just, check, model.name, order, gt_order, len(img),
                   linearizable=lin, extra={"surface": True, "pic_invariant_rank": _pic_rank(model, group)})


def _pic_rank(model, group):
    return len(fixed_sublattice(pic_lattice(model, group)))


def _linearizable(group, img, model, in_d4, gt_order):
    if len(img) == 1:
        return True, "L: G lies in T and acts linearly"
    rk = _pic_rank(model, group)
    if in_d4:
        if rk == 1:
            if _conjugator(img, "s_iota3") is not None:
                return True, "L: rk Pic^G = 1 and pi*(G) is conjugate to <iota3>"
            return False, "not L: rk Pic^G = 1 and pi*(G) is not conjugate to <iota3>"
        x = _conjugator(img, "s_iota2")
        if x is not None:
            ok = all(Fraction(p[0]).denominator % 2 == 1 for p in _moved_torus(group, x))
            return ok, ("L" if ok else "not L") + ": pi*(G) = <iota2>, needs ord(t1) odd on G_T"
        if _conjugator(img, "s_iota1") is not None or _klein_diag(img):
            ok = gt_order % 2 == 1
            return ok, ("L" if ok else "not L") + ": pi*(G) = <iota1> or <iota1, iota2>, needs |G_T| odd"
        return None, ""
    if rk == 1:
        ok = gt_order == 1 and len(group) == 6
        return ok, ("L" if ok else "not L") + ": rk Pic^G = 1 on dP6, needs G_T = 1 and G = C6 or S3"
    if rk == 2 and len(img) in (3, 6):
        ok = gt_order % 3 != 0
        return ok, ("L" if ok else "not L") + ": pi*(G) = C3 or S3 with rk Pic^G = 2, needs 3 not dividing |G_T|"
    return None, ""


def _klein_diag(img):
    if len(img) != 4:
        return False
    return glnz_conjugate(img, MatrixGroup([[[-1, 0], [0, -1]], [[-1, 0], [0, 1]]])).verdict \
        == "ConjugateWithWitness"


def classify(group, **kw):
    return classify_threefold(group, **kw) if group.n == 3 else classify_surface(group)


# ------------------------------------------------------------ sweeps

def _stable(sub, mats):
    for p in sub:
        for a in mats:
            q = tuple(frac_mod1(sum(p[i] * a[i][j] for i in range(len(p)))) for j in range(len(p)))
            if q not in sub:
                return False
    return True


def extend(mats, lifts, torus):
    """G generated by (s_i, A_i) and the translations in ``torus``."""
    n = len(mats[0]) if mats else len(next(iter(torus)))
    gens = [GroupElement.make(s, a) for s, a in zip(lifts, mats)]
    gens += [GroupElement.translation(t) for t in sorted(torus) if any(t)]
    return AffineGroup(gens, n=n)


def _lift_choices(n, denominators=(2,)):
    out = []
    for d in denominators:
        for v in product(range(d), repeat=n):
            t = tuple(Fraction(x, d) for x in v)
            if t not in out:
                out.append(t)
    return out


def sweep_groups(names, denominators=(1, 2, 4), max_order=32, lift_denominators=(2,),
                 max_lift_sets=None):
    """Deduplicated groups pi*(G) from catalogue entries times stable torsion
    subgroups, with lifts drawn from small translation sets."""
    seen = set()
    rows = []
    tors = {}
    for name in names:
        entry = catalogue.get(name)
        mats = [[list(r) for r in g] for g in entry.generators]
        h = len(entry.group())
        choices = _lift_choices(entry.n, lift_denominators)
        lift_sets = list(product(choices, repeat=len(mats)))
        if max_lift_sets is not None and len(lift_sets) > max_lift_sets:
            step = len(lift_sets) / max_lift_sets
            lift_sets = [lift_sets[int(k * step)] for k in range(max_lift_sets)]
        for d in denominators:
            if (entry.n, d) not in tors:
                tors[entry.n, d] = torsion_subgroups(entry.n, d)
            for sub in tors[entry.n, d]:
                if h * len(sub) > max_order or not _stable(sub, mats):
                    continue
                for lifts in lift_sets:
                    try:
                        g = extend(mats, lifts, sub)
                    except CapExceeded:
                        continue
                    if len(g) > max_order:
                        continue
                    key = frozenset(g.elements)
                    if key in seen:
                        continue
                    seen.add(key)
                    rows.append((name, g))
    return rows


@dataclass
class SweepResult:
    rows: list
    agreements: int = 0
    disagreements: int = 0
    unchecked: int = 0

    def to_json(self):
        return {"agreements": self.agreements, "disagreements": self.disagreements,
                "unchecked": self.unchecked, "rows": self.rows}


def _sweep_row(args):
    name, g = args
    v = classify(g)
    row = {"name": name, "group": g.to_json(), **v.to_json()}
    return row, v.agrees, v.condition_A


def sweep(groups, jobs=1):
    """Classify (name, group) pairs; the beta cross-check counts only where (A) holds."""
    items = list(groups)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            out = list(ex.map(_sweep_row, items))
    else:
        out = [_sweep_row(it) for it in items]
    res = SweepResult([r for r, _, _ in out])
    for _, agrees, a in out:
        if not a or agrees is None:
            res.unchecked += 1
        elif agrees:
            res.agreements += 1
        else:
            res.disagreements += 1
    return res


# ------------------------------------------------------------ involution table

def involution_rule(name, torus):
    """Predicted (A) for pi*(G) = <iota_k> from the translation subgroup alone."""
    pts = [tuple(Fraction(x) for x in p) for p in torus]
    if name == "iota1":
        return all(p[1] == 0 and p[2] == 0 for p in pts)
    if name == "iota2":
        return all(p[2] == 0 for p in pts)
    if name == "iota3":
        return True
    if name == "iota4":
        return not any(p[0] == p[1] and p[2] == Fraction(1, 2) for p in pts)
    raise KeyError(name)


def involution_table(lift_denominator=4):
    """Every iota class with G_T ranging over the subgroups of (1/2 Z/Z)^3 and
    lifts in (1/d Z/Z)^3; rows compare computed (A) with the rule."""
    subs = torsion_subgroups(3, 2)
    rows = []
    for name in catalogue.INVOLUTIONS:
        a = [list(r) for r in catalogue.get(name).generators[0]]
        model = select_model(MatrixGroup([a]))
        seen = set()
        for sub in subs:
            if not _stable(sub, [a]):
                continue
            for s in _lift_choices(3, (lift_denominator,)):
                g = extend([a], [s], sub)
                gt = frozenset(e.s for e in g.elements if e.is_translation())
                if gt != sub:
                    continue
                key = frozenset(g.elements)
                if key in seen:
                    continue
                seen.add(key)
                computed = condition_A(model, g).holds
                rows.append({"name": name, "lift": [str(x) for x in s],
                             "torus": sorted([str(x) for x in p] for p in sub),
                             "A": computed, "rule": involution_rule(name, sub)})
    return rows
