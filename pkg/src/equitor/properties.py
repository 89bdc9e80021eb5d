"""Randomized structural checks: complexes, actions, cohomology routes, beta.

Every check takes explicit inputs and returns a bool, so the same code
serves the hypothesis tests and the seeded ``selftest`` run.
"""

import random
from fractions import Fraction
from math import lcm

from . import catalogue
from .cohomology import bogomolov, cohomology
from .fans import cone_projection
from .fixedpoints import brute_force_fixed_point, orbit_fixed_point, stabilized_cones
from .lattice import GLattice, direct_sum, induced, pic_lattice
from .linalg import elementary_divisors, identity, inverse_unimodular, matmul
from .obstruction import beta, k9_family_group
from .resolution import bar_complex, generic_resolution, periodic_resolution

FAMILIES = [("Q", 3), ("D", 2), ("D", 3), ("SD", 4)]


# ------------------------------------------------------------ random inputs

def random_unimodular(rng, n, steps=6):
    m = identity(n)
    for _ in range(steps):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-1, 1])
        for r in range(n):
            m[r][j] += k * m[r][i]
    if rng.random() < 0.5:
        m[0] = [-x for x in m[0]]
    return m


def conjugate_lattice(lat, y):
    yi = inverse_unimodular(y)
    return GLattice(lat.group, lat.rank, [matmul(matmul(yi, a), y) for a in lat.action])


def _sign_characters(group):
    """Rank-one lattices from index-two subgroups."""
    out = []
    n = len(group)
    for sub in group.all_subgroups():
        if 2 * len(sub) != n:
            continue
        out.append(GLattice(group, 1, [[[1 if i in sub else -1]] for i in range(n)]))
    return out


def lattice_pieces(group):
    pieces = [GLattice.trivial(group)] + _sign_characters(group)
    pieces += [GLattice.cocharacter(group), GLattice.character(group)]
    n = len(group)
    for sub in group.all_subgroups():
        if 1 < n // len(sub) <= 4 and len(sub) > 1:
            h = group.as_subgroup(sub)
            pieces.append(induced(GLattice.trivial(h), group, sub)[0])
    return pieces


def random_lattice(group, rng, max_rank=4, pieces=None):
    pieces = pieces or lattice_pieces(group)
    lat = None
    while True:
        cand = [p for p in pieces if p.rank + (lat.rank if lat else 0) <= max_rank]
        if not cand or lat is not None and rng.random() < 0.4:
            break
        p = rng.choice(cand)
        lat = p if lat is None else direct_sum(lat, p)
    return conjugate_lattice(lat, random_unimodular(rng, lat.rank))


def family_group(family, n):
    g, s1, s2 = k9_family_group(family, n)
    return g, g.index[s1.inverse()], g.index[s2.inverse()]


# ------------------------------------------------------------ checks

def check_d_squared(res, lat=None):
    if not res.check():
        return False
    return lat is None or res.cochain_complex(lat).check()


def check_right_action(group, rng, points=4):
    """Lattices are right modules, and (u g) h = u (g h) on torsion points."""
    lats = [GLattice.cocharacter(group), GLattice.character(group)]
    if not all(lat.is_valid() for lat in lats):
        return False
    n = len(group)
    for _ in range(points):
        u = tuple(Fraction(rng.randrange(12), 12) for _ in range(group.n))
        i, j = rng.randrange(n), rng.randrange(n)
        g, h = group.elements[i], group.elements[j]
        if h.act(g.act(u)) != group.elements[group.mul(i, j)].act(u):
            return False
    return True


def check_model_action(model, group):
    return pic_lattice(model, group).is_valid() and pic_lattice(model, group, dual_=True).is_valid()


def cohomology_factors(cx, degrees=(1, 2)):
    return [cohomology(cx, i).factors for i in degrees]


def check_periodic_vs_bar(family, n, lat_fn):
    """H^1 and H^2 agree between the periodic, bar and generic resolutions."""
    g, x, y = family_group(family, n)
    lat = lat_fn(g)
    per = cohomology_factors(periodic_resolution(g, family, n, x, y).cochain_complex(lat))
    bar = cohomology_factors(bar_complex(g, lat, 2))
    gen = cohomology_factors(generic_resolution(g, top=3).cochain_complex(lat))
    return per == bar == gen


def check_sylow_locality(model, group):
    """beta(G) = 0 exactly when beta vanishes on every Sylow subgroup."""
    whole = beta(model, group).vanishes
    parts = []
    k, p = len(group), 2
    while k > 1:
        if k % p == 0:
            parts.append(beta(model, group.sylow(p)).vanishes)
            while k % p == 0:
                k //= p
        p += 1
    return whole == all(parts)


def check_induced_injectivity(group, sub, lat0):
    """Restriction H^2(G, Ind P0) -> H^2(H, Ind P0) has trivial kernel
    when H is normal with cyclic quotient."""
    big, _ = induced(lat0, group, sub)
    return bogomolov(group, big, degree=2, subgroups=[sorted(sub)]).vanishes


def _stacked(model, elements, cone):
    q, wl = cone_projection(model.fan, cone)
    m = len(q[0]) if q else 0
    rows, dens = [], [1]
    for e in elements:
        abar = matmul(matmul(wl, [list(r) for r in e.A]), q)
        for j in range(m):
            rows.append([abar[i][j] - (i == j) for i in range(m)])
            sbar = sum(e.s[i] * q[i][j] for i in range(len(q)))
            dens.append(Fraction(sbar).denominator)
    return rows, m, lcm(*dens)


def check_fixed_point_vs_brute(model, elements, cone, max_denominator=12):
    """Returns None when the brute-force grid would be too large."""
    rows, m, den = _stacked(model, elements, cone)
    divs = [d for d in elementary_divisors(rows) if d] if rows else []
    grid = den * (lcm(*divs) if divs else 1)
    if grid > max_denominator:
        return None
    fast = orbit_fixed_point(model, elements, cone)
    slow = brute_force_fixed_point(model, elements, cone, grid)
    return (fast is None) == (slow is None)


def check_section_independence(model, group, rng):
    base = beta(model, group).vanishes
    section = []
    for lam in model.section:
        row = list(lam)
        for m in model.embedding:
            k = rng.randint(-2, 2)
            row = [a + k * b for a, b in zip(row, m)]
        section.append(row)
    table = {}

    def unit(m):
        if m not in table:
            table[m] = Fraction(rng.randrange(24), 24)
        return table[m]

    return beta(model, group, section=section, unit_section=unit).vanishes == base


# ------------------------------------------------------------ instance pools

def small_groups(max_order, names=None, denominators=(1, 2, 3), lift_sets=2):
    from .classifier import sweep_groups
    names = names or catalogue.names(3)
    return [g for _, g in sweep_groups(names, denominators=denominators, max_order=max_order,
                                      max_lift_sets=lift_sets)]


def mixed_groups(max_order=24):
    """Groups whose order has two prime divisors."""
    out = []
    for g in small_groups(max_order, ["C3rot", "C3perm", "iota1", "iota3", "K2"], (1, 2, 3), 2):
        k = len(g)
        if k % 2 == 0 and k % 3 == 0:
            out.append(g)
    return out


def normal_cyclic_quotients(group):
    """Index-two subgroups (always normal with cyclic quotient)."""
    return [sub for sub in group.all_subgroups() if 2 * len(sub) == len(group)]


def fixed_point_instances(groups, model_for):
    out = []
    for g in groups:
        model = model_for(g)
        for sub in g.maximal_abelian_subgroups():
            els = [g.elements[i] for i in sorted(sub)]
            for c in stabilized_cones(model, els):
                out.append((model, els, c))
    return out


def run_all(rng, instances=10):
    from .classifier import select_model
    out = {}

    ok, count = True, 0
    for fam, n in FAMILIES + [("Q", 4), ("SD", 5)]:
        g, x, y = family_group(fam, n)
        res = periodic_resolution(g, fam, n, x, y)
        lat = random_lattice(g, rng)
        ok &= check_d_squared(res, lat) and check_d_squared(generic_resolution(g, 3), lat)
        count += 2
    out["d_squared"] = {"ok": ok, "instances": count}

    ok, count = True, 0
    for name in catalogue.names():
        g = catalogue.get(name).group()
        ok &= check_right_action(g, rng)
        count += 1
        if g.n == 3:
            ok &= check_model_action(select_model(g), g)
    out["right_action"] = {"ok": ok, "instances": count}

    ok, count = True, 0
    for fam, n in FAMILIES:
        g, _, _ = family_group(fam, n)
        pieces = lattice_pieces(g)
        for _ in range(instances):
            seed = rng.random()
            ok &= check_periodic_vs_bar(fam, n, lambda grp: random_lattice(grp, random.Random(seed), 4, pieces))
            count += 1
    out["periodic_vs_bar"] = {"ok": ok, "instances": count}

    ok, count = True, 0
    pool = mixed_groups(24)
    for g in rng.sample(pool, min(instances, len(pool))):
        ok &= check_sylow_locality(select_model(g), g)
        count += 1
    out["sylow_locality"] = {"ok": ok and count > 0, "instances": count}

    ok, count = True, 0
    pool = [g for g in small_groups(16, ["K2", "K9", "theta1", "D4tau", "iota4"], (1, 2), 2) if len(g) >= 4]
    for g in rng.sample(pool, min(instances, len(pool))):
        subs = normal_cyclic_quotients(g)
        sub = rng.choice(subs)
        h = g.as_subgroup(sub)
        lat0 = random_lattice(h, rng, max_rank=2)
        ok &= check_induced_injectivity(g, sub, lat0)
        count += 1
    out["induced_injectivity"] = {"ok": ok and count > 0, "instances": count}

    ok, count = True, 0
    pool = small_groups(16, ["iota1", "iota4", "K2", "K9", "theta4", "C3rot"], (1, 2), 2)
    inst = fixed_point_instances(rng.sample(pool, min(instances, len(pool))), select_model)
    for model, els, c in rng.sample(inst, min(4 * instances, len(inst))):
        r = check_fixed_point_vs_brute(model, els, c)
        if r is None:
            continue
        ok &= r
        count += 1
    out["fixed_point_vs_brute"] = {"ok": ok and count > 0, "instances": count}

    ok, count = True, 0
    pool = [k9_family_group("Q", 3)[0], k9_family_group("D", 3)[0]]
    pool += rng.sample(small_groups(16, ["K9", "D4tau", "theta1"], (1, 2), 2), 3)
    for g in pool:
        ok &= check_section_independence(select_model(g), g, rng)
        count += 1
    out["section_independence"] = {"ok": ok, "instances": count}
    return out
