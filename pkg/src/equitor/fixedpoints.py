"""Fixed points of finite groups on the torus orbits of an invariant toric model."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .fans import FanNotInvariant, cone_projection, cone_stabilized
from .linalg import frac_mod1, matmul, solve_mod1


@dataclass
class FixedPoint:
    cone: tuple        # orbit O(cone); () is the open torus
    point: list        # coordinates in the torus of N / span(cone), mod 1

    def to_json(self):
        return {"cone": list(self.cone), "point": [str(x) for x in self.point]}


def _elements(group, members):
    if members is None:
        return list(group.elements)
    return [group.elements[i] for i in members]


def stabilized_cones(model, elements):
    perms = [model.perm(e.A) for e in elements]
    return [c for c in model.fan.cones if all(cone_stabilized(p, c) for p in perms)]


def orbit_fixed_point(model, elements, cone):
    """A point of O(cone) fixed by all ``elements`` (which must stabilize the
    cone), or None.  The induced action on N/span(cone) is u -> u*Abar + sbar."""
    q, wl = cone_projection(model.fan, cone)
    m = len(q[0]) if q else 0
    if m == 0:
        return FixedPoint(tuple(cone), [])
    rows, rhs = [], []
    for e in elements:
        if e.is_identity():
            continue
        a = [list(r) for r in e.A]
        abar = matmul(matmul(wl, a), q)
        sbar = [sum(e.s[i] * q[i][j] for i in range(len(q))) for j in range(m)]
        for j in range(m):
            rows.append([abar[i][j] - (i == j) for i in range(m)])
            rhs.append(-sbar[j])
    if not rows:
        return FixedPoint(tuple(cone), [Fraction(0)] * m)
    sol = solve_mod1(rows, rhs)
    if not sol.solvable:
        return None
    return FixedPoint(tuple(cone), sol.u)


def has_fixed_point(model, group, members=None):
    """Search all orbits stabilized by the (sub)group; returns a FixedPoint or None."""
    elements = _elements(group, members)
    for c in stabilized_cones(model, elements):
        fp = orbit_fixed_point(model, elements, c)
        if fp is not None:
            return fp
    return None


def brute_force_fixed_point(model, elements, cone, denominator):
    """Exhaustive search over points of O(cone) with the given denominator."""
    q, wl = cone_projection(model.fan, cone)
    m = len(q[0]) if q else 0
    data = []
    for e in elements:
        a = [list(r) for r in e.A]
        abar = matmul(matmul(wl, a), q) if m else []
        sbar = [sum(e.s[i] * q[i][j] for i in range(len(q))) for j in range(m)]
        data.append((abar, sbar))
    for pt in product(range(denominator), repeat=m):
        u = [Fraction(x, denominator) for x in pt]
        if all(all(frac_mod1(sum(u[i] * ab[i][j] for i in range(m)) + sb[j] - u[j]) == 0
                   for j in range(m)) for ab, sb in data):
            return u
    return None


@dataclass
class ConditionA:
    holds: bool
    witness: list = None          # element indices of an abelian subgroup without fixed points
    checked: int = 0
    fixed_points: dict = None     # subgroup (sorted indices) -> FixedPoint

    def to_json(self):
        return {"holds": self.holds, "witness": self.witness, "checked": self.checked}


def condition_A(model, group, exhaustive=False):
    """Every abelian subgroup has a fixed point on X.  Maximal abelian
    subgroups suffice since fixed points of a group are fixed by its subgroups."""
    for a in group.matrix_parts():
        try:
            model.perm(a)
        except FanNotInvariant:
            raise FanNotInvariant("model is not invariant under the group") from None
    subs = group.abelian_subgroups() if exhaustive else group.maximal_abelian_subgroups()
    subs = sorted(subs, key=lambda s: (len(s), sorted(s)))
    found = {}
    for sub in subs:
        fp = has_fixed_point(model, group, sorted(sub))
        if fp is None:
            return ConditionA(False, sorted(sub), len(found) + 1, found)
        found[tuple(sorted(sub))] = fp
    return ConditionA(True, None, len(found), found)
