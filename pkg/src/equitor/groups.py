"""Finite subgroups of (Q/Z)^n ⋊ GL_n(Z).

An element ``(s, A)`` acts on a torsion point ``u`` of the torus (written
additively, as a row vector of logarithms in Q/Z) by ``u -> u*A + s``.
Composition follows the right action: ``(s, A)(s', A') = (s*A' + s', A*A')``.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import frac_mod1, inverse_unimodular, det

DEFAULT_CAP = 1024


class CapExceeded(RuntimeError):
    """Raised when a closure or computation exceeds a configured size cap."""


def max_order():
    env = os.environ.get("EQUITOR_MAX_ORDER")
    return int(env) if env else DEFAULT_CAP


def _mat(a):
    return tuple(tuple(int(x) for x in row) for row in a)


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n))
                 for i in range(n))


def _vecmat(v, a):
    n = len(a)
    return tuple(sum(v[k] * a[k][j] for k in range(n) if v[k]) for j in range(n))


def identity_matrix(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def parse_fraction(x):
    return frac_mod1(Fraction(x))


@dataclass(frozen=True)
class GroupElement:
    s: tuple
    A: tuple

    @staticmethod
    def make(s, A):
        return GroupElement(tuple(frac_mod1(Fraction(x)) for x in s), _mat(A))

    @staticmethod
    def matrix(A):
        A = _mat(A)
        return GroupElement(tuple(Fraction(0) for _ in A), A)

    @staticmethod
    def translation(s):
        s = tuple(frac_mod1(Fraction(x)) for x in s)
        return GroupElement(s, identity_matrix(len(s)))

    @property
    def n(self):
        return len(self.A)

    def __mul__(self, other):
        s = tuple(frac_mod1(x + y) for x, y in zip(_vecmat(self.s, other.A), other.s))
        return GroupElement(s, _mul(self.A, other.A))

    def inverse(self):
        ai = _mat(inverse_unimodular([list(r) for r in self.A]))
        s = tuple(frac_mod1(-x) for x in _vecmat(self.s, ai))
        return GroupElement(s, ai)

    def act(self, u):
        """Image of a torsion point under this element."""
        return tuple(frac_mod1(x + y) for x, y in zip(_vecmat(tuple(u), self.A), self.s))

    def is_translation(self):
        return self.A == identity_matrix(self.n)

    def is_identity(self):
        return self.is_translation() and not any(self.s)

    def order(self):
        g = self
        k = 1
        while not g.is_identity():
            g = g * self
            k += 1
            if k > 10000:
                raise CapExceeded("element of infinite or huge order")
        return k

    def to_json(self):
        return {"torus": [str(x) for x in self.s], "matrix": [list(r) for r in self.A]}

    @staticmethod
    def from_json(d):
        return GroupElement.make([Fraction(x) for x in d["torus"]], d["matrix"])


class AffineGroup:
    """A finite group of torus automorphisms, closed from its generators."""

    def __init__(self, generators, n=None, cap=None):
        gens = list(generators)
        if n is None:
            if not gens:
                raise ValueError("dimension needed for the trivial group")
            n = gens[0].n
        if any(g.n != n for g in gens):
            raise ValueError("generators of different dimensions")
        self.n = n
        self.generators = gens
        self.cap = cap if cap is not None else max_order()
        ident = GroupElement(tuple(Fraction(0) for _ in range(n)), identity_matrix(n))
        elements = [ident]
        index = {ident: 0}
        k = 0
        while k < len(elements):
            e = elements[k]
            for g in gens:
                h = e * g
                if h not in index:
                    if len(elements) >= self.cap:
                        raise CapExceeded(f"group order exceeds cap {self.cap}")
                    index[h] = len(elements)
                    elements.append(h)
            k += 1
        self.elements = elements
        self.index = index
        self._table = {}

    @classmethod
    def from_matrices(cls, mats, n=None, cap=None):
        gens = [GroupElement.matrix(m) for m in mats]
        if n is None and mats:
            n = len(mats[0])
        return cls(gens, n=n, cap=cap)

    @classmethod
    def from_json(cls, d, cap=None):
        gens = [GroupElement.from_json(g) for g in d["generators"]]
        return cls(gens, n=d["n"], cap=cap)

    def to_json(self):
        return {"n": self.n, "generators": [g.to_json() for g in self.generators]}

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.index

    def mul(self, i, j):
        key = (i, j)
        r = self._table.get(key)
        if r is None:
            r = self.index[self.elements[i] * self.elements[j]]
            self._table[key] = r
        return r

    def inv(self, i):
        return self.index[self.elements[i].inverse()]

    @cached_property
    def orders(self):
        out = [1] * len(self.elements)
        for i in range(1, len(self.elements)):
            k, j = 1, i
            while j != 0:
                j = self.mul(j, i)
                k += 1
            out[i] = k
        return out

    def subgroup(self, gens):
        gens = [g if isinstance(g, GroupElement) else self.elements[g] for g in gens]
        return AffineGroup(gens, n=self.n, cap=self.cap)

    def element_subgroup(self, idx):
        """Closure of element indices inside this group, as a frozenset of indices."""
        members = {0}
        frontier = [0]
        idx = list(idx)
        while frontier:
            nxt = []
            for e in frontier:
                for g in idx:
                    h = self.mul(e, g)
                    if h not in members:
                        members.add(h)
                        nxt.append(h)
            frontier = nxt
        return frozenset(members)

    def as_subgroup(self, members):
        """AffineGroup for a set of element indices (generated greedily)."""
        members = sorted(members)
        gens = []
        span = frozenset([0])
        for i in members:
            if i not in span:
                gens.append(i)
                span = self.element_subgroup(gens)
        return AffineGroup([self.elements[i] for i in gens], n=self.n, cap=self.cap)

    def is_abelian(self):
        gs = self.generators
        return all(a * b == b * a for a in gs for b in gs)

    def torus_kernel(self):
        """G_T: the elements with identity matrix part."""
        return self.as_subgroup([i for i, e in enumerate(self.elements) if e.is_translation()])

    def image(self):
        """π*(G): the matrix parts, as a group with zero torus parts."""
        mats = sorted({e.A for e in self.elements})
        return MatrixGroup(mats)

    def matrix_parts(self):
        return sorted({e.A for e in self.elements})

    def sylow(self, p):
        n = len(self.elements)
        pk = 1
        while n % (pk * p) == 0:
            pk *= p
        if pk == 1:
            return AffineGroup([], n=self.n, cap=self.cap)
        members = frozenset([0])
        # grow a p-subgroup by adjoining p-elements that normalize nothing in
        # particular; any p-subgroup of maximal order is Sylow
        porders = [i for i, o in enumerate(self.orders) if _is_power(o, p)]
        while len(members) < pk:
            for i in porders:
                if i in members:
                    continue
                cand = self.element_subgroup(list(_gens_of(self, members)) + [i])
                if _is_power(len(cand), p):
                    members = cand
                    break
            else:
                # climb via the normalizer: a p-element of N(P)/P exists
                raise RuntimeError("Sylow search failed")
        return self.as_subgroup(members)

    def abelian_subgroups(self, up_to_conjugacy=False):
        """All abelian subgroups as frozensets of element indices."""
        n = len(self.elements)
        comm = [[self.mul(i, j) == self.mul(j, i) for j in range(n)] for i in range(n)]
        seen = set()
        frontier = []
        for i in range(n):
            c = self.element_subgroup([i])
            if c not in seen:
                seen.add(c)
                frontier.append(c)
        while frontier:
            nxt = []
            for a in frontier:
                gens = _gens_of(self, a)
                for g in range(n):
                    if g in a or not all(comm[g][x] for x in gens):
                        continue
                    b = self.element_subgroup(list(gens) + [g])
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        subs = sorted(seen, key=lambda s: (len(s), sorted(s)))
        if up_to_conjugacy:
            subs = self.conjugacy_representatives(subs)
        return subs

    def conjugate_set(self, members, g):
        gi = self.inv(g)
        return frozenset(self.mul(self.mul(gi, x), g) for x in members)

    def conjugacy_representatives(self, subs):
        out = []
        covered = set()
        for s in subs:
            if s in covered:
                continue
            out.append(s)
            for g in range(len(self.elements)):
                covered.add(self.conjugate_set(s, g))
        return out

    def all_subgroups(self):
        """All subgroups (small groups only) as frozensets of indices."""
        n = len(self.elements)
        seen = {frozenset([0])}
        frontier = [frozenset([0])]
        while frontier:
            nxt = []
            for a in frontier:
                gens = _gens_of(self, a)
                for g in range(n):
                    if g in a:
                        continue
                    b = self.element_subgroup(list(gens) + [g])
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return sorted(seen, key=lambda s: (len(s), sorted(s)))

    def maximal_abelian_subgroups(self):
        subs = self.abelian_subgroups()
        return [a for a in subs if not any(a < b for b in subs)]

    def signature(self):
        return sorted((len(self.elements),) + tuple(sorted(self.orders)))

    def __repr__(self):
        return f"AffineGroup(n={self.n}, order={len(self.elements)})"


def _is_power(k, p):
    while k % p == 0:
        k //= p
    return k == 1


def _gens_of(group, members):
    members = sorted(members)
    gens = []
    span = frozenset([0])
    for i in members:
        if i not in span:
            gens.append(i)
            span = group.element_subgroup(gens)
            if len(span) == len(members):
                break
    return gens


def MatrixGroup(mats, cap=None):
    mats = [_mat(m) for m in mats]
    return AffineGroup.from_matrices(mats, n=len(mats[0]) if mats else None, cap=cap)


def torsion_subgroups(n, denominator):
    """All subgroups of (1/d Z/Z)^n as frozensets of tuples (small n, d).

    Subgroups correspond to lattices between d Z^n and Z^n, enumerated by
    their row Hermite forms (upper triangular, entries above each pivot
    reduced modulo it).
    """
    from itertools import product
    d = denominator
    divs = [k for k in range(1, d + 1) if d % k == 0]
    slots = [(i, j) for j in range(n) for i in range(j)]
    out = []
    for diag in product(divs, repeat=n):
        for offs in product(*[range(diag[j]) for i, j in slots]):
            h = [[0] * n for _ in range(n)]
            for i in range(n):
                h[i][i] = diag[i]
            for (i, j), x in zip(slots, offs):
                h[i][j] = x
            if not _contains_scaled_identity(h, d):
                continue
            out.append(_span_mod(h, d))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def _contains_scaled_identity(h, d):
    """Whether d e_k lies in the row span of the upper triangular h for all k."""
    n = len(h)
    for k in range(n):
        v = [d if c == k else 0 for c in range(n)]
        for i in range(n):
            if v[i] % h[i][i]:
                return False
            q = v[i] // h[i][i]
            v = [a - q * b for a, b in zip(v, h[i])]
    return True


def _span_mod(h, d):
    pts = {tuple([0] * len(h))}
    for row in h:
        step = tuple(x % d for x in row)
        new = set(pts)
        for p in pts:
            q = p
            while True:
                q = tuple((a + b) % d for a, b in zip(q, step))
                if q in new:
                    break
                new.add(q)
        pts = new
    return frozenset(tuple(Fraction(x, d) for x in p) for p in pts)


def is_unimodular(a):
    return abs(det([list(r) for r in a])) == 1
