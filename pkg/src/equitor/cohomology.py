"""Cohomology groups, class membership, restriction and Bogomolov multipliers.

For a finite group every H^i(G, L) with i >= 1 is torsion, so the cocycles
are the saturation of the coboundaries; only d_{i-1} is needed to present H^i.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import (cokernel, frac_mod1, lattice_basis, lattice_intersection, left_kernel,
                     matmul, reduce_hnf, saturation, solve_integer, solve_mod1, transpose, vecmat)
from .resolution import DegreeOutOfRange, generic_resolution


@dataclass
class CohomologyGroup:
    degree: int
    factors: list          # invariant factors (0 = free summand)
    cocycle_basis: list    # HNF basis of Z^i
    coboundaries: list     # generators of B^i
    presentation: object = field(default=None, repr=False)

    @property
    def order(self):
        return 0 if any(f == 0 for f in self.factors) else _prod(self.factors)

    def coordinates(self, z):
        c = reduce_hnf(self.cocycle_basis, z)
        if c is None:
            raise ValueError("not a cocycle")
        return self.presentation.coordinates(c)

    def is_cocycle(self, z):
        return reduce_hnf(self.cocycle_basis, z) is not None if self.cocycle_basis else not any(z)

    def is_coboundary(self, z):
        if not self.cocycle_basis:
            return not any(z)
        return not any(self.coordinates(z))


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def cohomology(cx, i):
    """H^i of an integral cochain complex coming from a finite group."""
    if i < 0 or i > cx.top:
        raise DegreeOutOfRange(f"degree {i} outside 0..{cx.top}")
    dim = cx.dim(i)
    if i == 0:
        if cx.top == 0:
            raise DegreeOutOfRange("H^0 needs d_0")
        z = left_kernel(cx.d[0]) if dim else []
        pres = cokernel([], len(z))
        return CohomologyGroup(0, [0] * len(z), z, [], pres)
    b = [row for row in cx.d[i - 1] if any(row)]
    zb = saturation(b, dim) if b else []
    coords = [reduce_hnf(zb, row) for row in b]
    pres = cokernel(coords, len(zb))
    return CohomologyGroup(i, pres.factors, zb, b, pres)


@dataclass
class CohomClass:
    complex: object
    degree: int
    rep: list
    qz: bool = False   # rep is a rational vector read modulo 1

    def is_zero(self):
        if self.qz:
            return qz_is_coboundary(self.complex, self.degree, self.rep).solvable
        return cohomology(self.complex, self.degree).is_coboundary(self.rep)


def qz_is_cocycle(cx, i, z):
    if i >= cx.top:
        raise DegreeOutOfRange("cocycle test needs the next differential")
    return all(frac_mod1(x) == 0 for x in vecmat(z, cx.d[i]))


def qz_is_coboundary(cx, i, z):
    """Route (a): z = w d_{i-1} modulo 1 for some rational w (Smith form test)."""
    if i < 1 or i > cx.top:
        raise DegreeOutOfRange(f"degree {i}")
    return solve_mod1(transpose(cx.d[i - 1]), z)


@dataclass
class ShiftResult:
    integral: list      # lift(z) * d_i, an integer cocycle of degree i + 1
    vanishes: bool      # membership in the integral coboundaries
    witness: list = None


def canonical_lift(z):
    return [frac_mod1(x) for x in z]


def qz_shift(cx, i, z, lift=None):
    """Route (b): connecting map H^i(L (x) Q/Z) -> H^{i+1}(L) for the
    sequence 0 -> Z -> Q -> Q/Z -> 0 with lifts in [0, 1)."""
    if i < 1:
        raise DegreeOutOfRange("qz_shift needs degree >= 1")
    if i >= cx.top:
        raise DegreeOutOfRange("qz_shift needs the next differential")
    zl = lift if lift is not None else canonical_lift(z)
    beta = vecmat(zl, cx.d[i])
    if any(Fraction(x).denominator != 1 for x in beta):
        raise ValueError("input is not a Q/Z cocycle")
    beta = [int(x) for x in beta]
    sol = solve_integer(transpose(cx.d[i]), beta)
    return ShiftResult(beta, sol.solvable, sol.x if sol.solvable else None)


# ------------------------------------------------------------ restriction

def restriction_data(res, lat, sub_idx, degree):
    """(restriction matrix C^i_G -> C^i_H, restricted cochain complex)."""
    rres = res.restrict(sub_idx)
    return rres.restriction_matrix(lat, degree), rres.cochain_complex(lat)


def restrict_class(c, sub_idx):
    """Restriction of a class along the resolution viewed over the subgroup."""
    cx = c.complex
    res = cx.resolution
    if res is None:
        return _restrict_bar(c, sub_idx)
    rmat, rcx = restriction_data(res, cx.lattice, sub_idx, c.degree)
    return CohomClass(rcx, c.degree, vecmat(c.rep, rmat), c.qz)


def _restrict_bar(c, sub_idx):
    from .resolution import bar_complex
    from itertools import product
    cx = c.complex
    lat = cx.lattice
    group = lat.group
    n = len(group)
    sub = sorted(set(sub_idx))
    hgroup = group.as_subgroup(sub)
    hlat = type(lat)(hgroup, lat.rank, [lat.action[group.index[e]] for e in hgroup.elements])
    hcx = bar_complex(hgroup, hlat, cx.top)
    r = lat.rank
    pos = {t: k for k, t in enumerate(product(range(1, n), repeat=c.degree))}
    out = []
    for t in product(range(1, len(hgroup)), repeat=c.degree):
        amb = tuple(group.index[hgroup.elements[x]] for x in t)
        k = pos[amb]
        out.extend(c.rep[k * r:(k + 1) * r])
    return CohomClass(hcx, c.degree, out, c.qz)


# ------------------------------------------------------------ Bogomolov

def _restriction_kernel(args):
    """Coordinates c (on the cocycle basis zb) of classes dying on ``sub``."""
    res, lat, sub, degree, zb = args
    rmat, rcx = restriction_data(res, lat, sub, degree)
    stack = matmul(zb, rmat) + rcx.d[degree - 1]
    ker = left_kernel(stack)
    return lattice_basis([v[:len(zb)] for v in ker])


@dataclass
class BogomolovResult:
    degree: int
    factors: list           # invariant factors of B^n(G, L)
    h_factors: list         # invariant factors of H^n(G, L)
    subgroups: list         # abelian subgroups used (maximal ones)

    @property
    def vanishes(self):
        return not self.factors


def bogomolov(group, lat, degree=3, res=None, subgroups=None, jobs=1):
    """B^n(G, L): classes of H^n(G, L) restricting to zero on every abelian
    subgroup.  B^2(G, L (x) Q/Z) is B^3(G, L) through the connecting map."""
    if res is None:
        res = generic_resolution(group, top=degree)
    cx = res.cochain_complex(lat)
    h = cohomology(cx, degree)
    zb = h.cocycle_basis
    k = len(zb)
    if subgroups is None:
        subgroups = group.maximal_abelian_subgroups()
    if k == 0:
        return BogomolovResult(degree, [], h.factors, list(subgroups))

    args = [(res, lat, sub, degree, zb) for sub in subgroups]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            pieces = list(ex.map(_restriction_kernel, args))
    else:
        pieces = [_restriction_kernel(a) for a in args]
    cap = [[int(i == j) for j in range(k)] for i in range(k)]
    for p in pieces:
        cap = lattice_intersection(cap, p, k) if p else []
        if not cap:
            break
    if not cap:
        return BogomolovResult(degree, [], h.factors, list(subgroups))
    lam = [reduce_hnf(zb, row) for row in h.coboundaries]
    lam_c = [reduce_hnf(cap, row) for row in lam]
    if any(x is None for x in lam_c):
        raise ArithmeticError("coboundaries must restrict trivially")
    pres = cokernel(lam_c, len(cap))
    return BogomolovResult(degree, pres.factors, h.factors, list(subgroups))
