"""Simplicial fans in N = Z^n (rays are row vectors, matrices act on the right)."""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .linalg import (det, elementary_divisors, identity, inverse_unimodular, matmul,
                     smith_form, vecmat)


class MalformedFan(ValueError):
    pass


class RayOutsideSupport(ValueError):
    pass


class ConeNotStabilized(ValueError):
    pass


class FanNotInvariant(ValueError):
    pass


def primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise MalformedFan("zero ray")
    return tuple(x // g for x in v)


@dataclass
class Fan:
    n: int
    rays: list
    maximal: list
    name: str = ""
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.rays = [tuple(int(x) for x in r) for r in self.rays]
        self.maximal = sorted(tuple(sorted(c)) for c in self.maximal)
        if len(set(self.maximal)) != len(self.maximal):
            raise MalformedFan("repeated cone")
        if any(len(r) != self.n for r in self.rays):
            raise MalformedFan("ray of wrong dimension")
        if len(set(self.rays)) != len(self.rays):
            raise MalformedFan("repeated ray")
        for r in self.rays:
            if primitive(r) != r:
                raise MalformedFan(f"ray {r} is not primitive")
        for c in self.maximal:
            if any(i < 0 or i >= len(self.rays) for i in c) or len(set(c)) != len(c):
                raise MalformedFan(f"bad cone {c}")
            if len(c) > self.n or _rank([self.rays[i] for i in c]) != len(c):
                raise MalformedFan(f"cone {c} is not simplicial")
        self._index = {r: i for i, r in enumerate(self.rays)}

    def ray_index(self, v):
        return self._index.get(tuple(v))

    @property
    def cones(self):
        """All cones as sorted index tuples, including the origin ``()``."""
        out = set()
        for c in self.maximal:
            for k in range(len(c) + 1):
                out.update(combinations(c, k))
        return sorted(out, key=lambda c: (len(c), c))

    def cones_of_dim(self, k):
        return [c for c in self.cones if len(c) == k]

    def counts(self):
        cs = self.cones
        return {k: sum(1 for c in cs if len(c) == k) for k in range(self.n + 1)}

    def to_text(self):
        lines = [f"n {self.n}"]
        lines += ["ray " + " ".join(str(x) for x in r) for r in self.rays]
        lines += ["cone " + " ".join(str(i + 1) for i in c) for c in self.maximal]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text, name=""):
        n = None
        rays, cones = [], []
        for raw in text.splitlines():
            line = raw.split("#")[0].strip()
            if not line:
                continue
            key, *vals = line.split()
            try:
                nums = [int(x) for x in vals]
            except ValueError:
                raise MalformedFan(f"bad line {raw!r}") from None
            if key == "n":
                n = nums[0]
            elif key == "ray":
                rays.append(tuple(nums))
            elif key == "cone":
                cones.append(tuple(i - 1 for i in nums))
            else:
                raise MalformedFan(f"unknown keyword {key!r}")
        if n is None:
            raise MalformedFan("missing dimension header")
        return Fan(n, rays, cones, name)

    def to_json(self):
        return {"n": self.n, "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.maximal]}

    def transform(self, x):
        """Image fan under v -> v*x (x unimodular)."""
        rays = [tuple(vecmat(list(r), x)) for r in self.rays]
        return Fan(self.n, rays, self.maximal, self.name)


def _rank(rows):
    from .linalg import rank
    return rank([list(r) for r in rows]) if rows else 0


def is_smooth(fan):
    for c in fan.maximal:
        if not c:
            continue
        ed = elementary_divisors([list(fan.rays[i]) for i in c])
        if len(ed) != len(c) or any(d != 1 for d in ed):
            return False
    return True


def _facet_pairing(fan):
    """Every (n-1)-face of a maximal cone lies in exactly two maximal cones on
    opposite sides, and the adjacency graph is connected."""
    n = fan.n
    if not fan.maximal or any(len(c) != n for c in fan.maximal):
        return False
    faces = {}
    for k, c in enumerate(fan.maximal):
        for f in combinations(c, n - 1):
            faces.setdefault(f, []).append(k)
    adj = {k: set() for k in range(len(fan.maximal))}
    for f, cs in faces.items():
        if len(cs) != 2:
            return False
        a, b = cs
        rows = [list(fan.rays[i]) for i in f]
        (va,) = set(fan.maximal[a]) - set(f)
        (vb,) = set(fan.maximal[b]) - set(f)
        da = det(rows + [list(fan.rays[va])])
        db = det(rows + [list(fan.rays[vb])])
        if da * db >= 0:
            return False
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        k = stack.pop()
        for j in adj[k]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(fan.maximal)


def cone_coordinates(rays, v):
    """Rational coefficients of ``v`` on linearly independent ``rays``, or None."""
    k = len(rays)
    n = len(v)
    # least-squares style: solve the normal equations exactly
    g = [[Fraction(sum(a * b for a, b in zip(rays[i], rays[j]))) for j in range(k)] for i in range(k)]
    rhs = [Fraction(sum(a * b for a, b in zip(rays[i], v))) for i in range(k)]
    for c in range(k):
        p = next(r for r in range(c, k) if g[r][c] != 0)
        g[c], g[p] = g[p], g[c]
        rhs[c], rhs[p] = rhs[p], rhs[c]
        for r in range(k):
            if r != c and g[r][c] != 0:
                f = g[r][c] / g[c][c]
                g[r] = [x - f * y for x, y in zip(g[r], g[c])]
                rhs[r] -= f * rhs[c]
    lam = [rhs[i] / g[i][i] for i in range(k)]
    back = [sum(lam[i] * rays[i][j] for i in range(k)) for j in range(n)]
    if any(b != x for b, x in zip(back, v)):
        return None
    return lam


def _covering_count(fan, v):
    """Number of maximal cones containing v in their interior, or None when v
    lies on a wall."""
    count = 0
    for c in fan.maximal:
        lam = cone_coordinates([fan.rays[i] for i in c], v)
        if lam is None or any(x < 0 for x in lam):
            continue
        if any(x == 0 for x in lam):
            return None
        count += 1
    return count


def _volume_cover(fan, samples=12, seed=7):
    """Generic points of N_R are covered exactly once by the maximal cones."""
    if not fan.maximal or any(len(c) != fan.n for c in fan.maximal):
        return False
    rng = random.Random(seed)
    done = 0
    while done < samples:
        v = [rng.randint(-997, 997) for _ in range(fan.n)]
        k = _covering_count(fan, v)
        if k is None or not any(v):
            continue
        if k != 1:
            return False
        done += 1
    return True


def is_complete(fan, check=True):
    a = _facet_pairing(fan)
    b = _volume_cover(fan)
    if check and a != b:
        raise MalformedFan("completeness checks disagree")
    return a


def ray_permutation(fan, a):
    """Permutation p of ray indices with rays[i]*a == rays[p[i]], or None."""
    perm = []
    for r in fan.rays:
        j = fan.ray_index(vecmat(list(r), [list(x) for x in a]))
        if j is None:
            return None
        perm.append(j)
    return perm


def is_invariant(fan, group):
    """Returns (invariant, {matrix: ray permutation}) for a matrix or affine group."""
    mats = group.matrix_parts() if hasattr(group, "matrix_parts") else [tuple(map(tuple, m)) for m in group]
    maxset = set(fan.maximal)
    perms = {}
    for a in mats:
        p = ray_permutation(fan, a)
        if p is None:
            return False, {}
        if any(tuple(sorted(p[i] for i in c)) not in maxset for c in fan.maximal):
            return False, {}
        perms[a] = p
    return True, perms


def automorphisms(fan):
    """All A in GL_n(Z) permuting the rays and maximal cones of a complete smooth fan."""
    base = fan.maximal[0]
    b = [list(fan.rays[i]) for i in base]
    binv = inverse_unimodular(b)
    maxset = set(fan.maximal)
    out = set()
    for c in fan.maximal:
        for img in _permutations(c):
            a = matmul(binv, [list(fan.rays[i]) for i in img])
            a_t = tuple(tuple(r) for r in a)
            if a_t in out:
                continue
            if abs(det(a)) != 1:
                continue
            p = ray_permutation(fan, a_t)
            if p is None:
                continue
            if all(tuple(sorted(p[i] for i in cc)) in maxset for cc in fan.maximal):
                out.add(a_t)
    return sorted(out)


def _permutations(c):
    from itertools import permutations
    return permutations(c)


def _minimal_cone_containing(fan, v):
    for c in fan.cones:
        if not c:
            if not any(v):
                return c
            continue
        lam = cone_coordinates([fan.rays[i] for i in c], v)
        if lam is not None and all(x > 0 for x in lam):
            return c
    return None


def star_subdivide(fan, ray):
    ray = primitive(tuple(ray))
    if fan.ray_index(ray) is not None:
        raise MalformedFan("ray already present")
    sigma = _minimal_cone_containing(fan, ray)
    if sigma is None or not sigma:
        raise RayOutsideSupport(f"{ray} lies in no cone of the fan")
    new = len(fan.rays)
    cones = []
    for c in fan.maximal:
        if set(sigma) <= set(c):
            rest = [i for i in c if i not in sigma]
            for rho in sigma:
                cones.append(tuple(sorted([new] + rest + [i for i in sigma if i != rho])))
        else:
            cones.append(c)
    return Fan(fan.n, fan.rays + [ray], cones, fan.name)


@dataclass
class ConeQuotient:
    fan: Fan
    projection: list  # n x (n-k): v -> v*projection
    lift: list        # (n-k) x n rows W_last
    cone: tuple

    def induced(self, a):
        """Matrix of the induced action on N/span(cone)."""
        return matmul(matmul(self.lift, [list(r) for r in a]), self.projection)


def cone_projection(fan, sigma):
    n = fan.n
    k = len(sigma)
    if k == 0:
        return identity(n), identity(n)
    sd = smith_form([list(fan.rays[i]) for i in sigma])
    v = sd.V
    w = inverse_unimodular(v)
    q = [row[k:] for row in v]
    wl = w[k:]
    return q, wl


def quotient_fan(fan, sigma, group=None):
    sigma = tuple(sorted(sigma))
    if group is not None:
        for a in (group.matrix_parts() if hasattr(group, "matrix_parts") else group):
            p = ray_permutation(fan, a)
            if p is None or sorted(p[i] for i in sigma) != list(sigma):
                raise ConeNotStabilized(f"cone {sigma} not stabilized")
    q, wl = cone_projection(fan, sigma)
    m = fan.n - len(sigma)
    rays, idx, cones = [], {}, []
    for c in fan.maximal:
        if not set(sigma) <= set(c):
            continue
        img = []
        for i in c:
            if i in sigma:
                continue
            r = primitive(tuple(vecmat(list(fan.rays[i]), q)))
            if r not in idx:
                idx[r] = len(rays)
                rays.append(r)
            img.append(idx[r])
        cones.append(tuple(img))
    return ConeQuotient(Fan(m, rays, cones if m else [], fan.name + "/" + str(sigma)), q, wl, sigma)


def cone_stabilized(perm, cone):
    return sorted(perm[i] for i in cone) == list(cone)
