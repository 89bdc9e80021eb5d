"""Smooth projective toric models with their M -> PL -> Pic data."""

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .fans import Fan, automorphisms, is_complete, is_invariant, is_smooth, ray_permutation, FanNotInvariant
from .linalg import cokernel, det, inverse_unimodular, transpose, vecmat


@dataclass
class ToricModel:
    name: str
    fan: Fan
    embedding: list   # n x rays, rows = images of the M basis in PL
    section: list     # pic_rank x rays, rows = lifts of the Pic basis
    _sq_inv: list = field(default=None, repr=False)

    def __post_init__(self):
        sq = self.embedding + self.section
        if len(sq) != len(self.fan.rays) or abs(det(sq)) != 1:
            raise ValueError("embedding and section do not form a basis of PL")
        self._sq_inv = inverse_unimodular(sq)
        self._cache = {}

    @property
    def n(self):
        return self.fan.n

    @property
    def pic_rank(self):
        return len(self.section)

    def pic(self):
        return cokernel(self.embedding, len(self.fan.rays))

    def split(self, x):
        """PL vector -> (M coordinates, Pic coordinates)."""
        c = vecmat(list(x), self._sq_inv)
        return c[:self.n], c[self.n:]

    def perm(self, a):
        a = tuple(tuple(r) for r in a)
        p = self._cache.get(("perm", a))
        if p is None:
            p = ray_permutation(self.fan, a)
            if p is None:
                raise FanNotInvariant(f"matrix {a} does not preserve the fan")
            self._cache[("perm", a)] = p
        return p

    def pl_matrix(self, a):
        p = self.perm(a)
        r = len(p)
        out = [[0] * r for _ in range(r)]
        for i, j in enumerate(p):
            out[i][j] = 1
        return out

    def pic_matrix(self, a):
        """Right action of a on Pic in the section basis."""
        a = tuple(tuple(r) for r in a)
        key = ("pic", a)
        if key not in self._cache:
            p = self.perm(a)
            rows = []
            for lam in self.section:
                y = [0] * len(p)
                for i, c in enumerate(lam):
                    if c:
                        y[p[i]] += c
                rows.append(self.split(y)[1])
            self._cache[key] = rows
        return self._cache[key]

    def pic_dual_matrix(self, a):
        return transpose(inverse_unimodular(self.pic_matrix(a)))

    def m_matrix(self, a):
        """Right action on M: m -> m * A^{-T}."""
        return transpose(inverse_unimodular([list(r) for r in a]))

    def is_invariant(self, group):
        return is_invariant(self.fan, group)[0]

    def transform(self, x):
        """Model with rays v*x^{-1}; invariant under X G X^{-1} when G preserves self."""
        xi = inverse_unimodular([list(r) for r in x])
        fan = self.fan.transform(xi)
        emb = transpose([list(r) for r in fan.rays])
        return ToricModel(self.name, fan, emb, self.section)

    def to_json(self):
        pic = self.pic()
        return {"name": self.name, "fan": self.fan.to_json(),
                "embedding": self.embedding, "section": self.section,
                "pic_rank": self.pic_rank, "pic_factors": pic.factors,
                "counts": {str(k): v for k, v in self.fan.counts().items()},
                "smooth": is_smooth(self.fan), "complete": is_complete(self.fan)}


def model_from_fan(fan, name=None):
    """Standard data: M embedded by ray pairings, Pic lifted to the rays
    outside the first smooth maximal cone."""
    emb = transpose([list(r) for r in fan.rays])
    base = set(fan.maximal[0])
    rest = [i for i in range(len(fan.rays)) if i not in base]
    section = []
    for i in rest:
        row = [0] * len(fan.rays)
        row[i] = 1
        section.append(row)
    return ToricModel(name or fan.name, fan, emb, section)


# ------------------------------------------------------------ constructors

def _product(*fans):
    rays, cones = [], []
    offsets = []
    n = sum(f.n for f in fans)
    pos = 0
    for f in fans:
        offsets.append(len(rays))
        for r in f.rays:
            v = [0] * n
            v[pos:pos + f.n] = r
            rays.append(tuple(v))
        pos += f.n
    def rec(k, acc):
        if k == len(fans):
            cones.append(tuple(acc))
            return
        for c in fans[k].maximal:
            rec(k + 1, acc + [offsets[k] + i for i in c])
    rec(0, [])
    return rays, cones


P1 = Fan(1, [(1,), (-1,)], [(0,), (1,)], "P1")
P2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)], "P2")
P1xP1 = Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)], "P1xP1")
_HEX = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
DP6 = Fan(2, _HEX, [(i, (i + 1) % 6) for i in range(6)], "dP6")

S_RAYS = [(-1, 0, 0), (-1, 1, 0), (0, -1, 1), (0, 0, -1), (0, 0, 1), (0, 1, -1), (1, -1, 0),
          (1, 0, 0), (1, 0, -1), (1, -1, 1), (0, -1, 0), (0, 1, 0), (-1, 1, -1), (-1, 0, 1)]

D4CONE_RAYS = [(-1, 0, -1), (0, -1, 0), (0, 0, 1), (1, 0, 0), (1, 1, 1), (1, 0, 1)]
D4CONE_CONES = [(1, 4, 5), (1, 3, 5), (1, 2, 3), (1, 2, 4), (4, 5, 6), (3, 5, 6), (2, 3, 6), (2, 4, 6)]


def simplex_generators(rays):
    """Four rays summing to zero whose proper subset sums are exactly ``rays``."""
    rs = set(rays)
    for quad in combinations(rays, 4):
        if any(sum(v[j] for v in quad) for j in range(3)):
            continue
        sums = set()
        for k in (1, 2, 3):
            for sub in combinations(quad, k):
                sums.add(tuple(sum(v[j] for v in sub) for j in range(3)))
        if sums == rs:
            return list(quad)
    raise ValueError("no simplex generators found")


def fan_S():
    """Blowup of P^3 in 4 points and 6 lines: cones are full flags of subsets."""
    u = simplex_generators(S_RAYS)
    index = {r: i for i, r in enumerate(S_RAYS)}

    def ray(sub):
        return index[tuple(sum(u[i][j] for i in sub) for j in range(3))]

    cones = []
    for order in permutations(range(4), 3):
        cones.append((ray(order[:1]), ray(order[:2]), ray(order[:3])))
    return Fan(3, S_RAYS, cones, "S")


def fan_P():
    """Fan of (P) in the character lattice of (S): the cuboctahedron with each
    square face subdivided at its centre."""
    u = simplex_generators(S_RAYS)
    # x in the sum-zero lattice of Z^4 corresponds to m in Z^3 with <u_i, m> = x_i
    basis_inv = inverse_unimodular([[u[i][j] for i in range(3)] for j in range(3)])

    def to_m(x):
        return tuple(vecmat(list(x[:3]), basis_inv))

    def comb(*terms):
        v = [0] * 4
        for c, i in terms:
            v[i] += c
        return tuple(v)

    rays = []
    index = {}

    def add(x):
        m = to_m(x)
        if m not in index:
            index[m] = len(rays)
            rays.append(m)
        return index[m]

    for i, j in permutations(range(4), 2):
        add(comb((1, i), (-1, j)))
    for i, j in combinations(range(4), 2):
        k, l = [t for t in range(4) if t not in (i, j)]
        add(comb((1, i), (1, j), (-1, k), (-1, l)))
        add(comb((-1, i), (-1, j), (1, k), (1, l)))
    cones = []
    for i in range(4):
        others = [j for j in range(4) if j != i]
        cones.append(tuple(add(comb((1, i), (-1, j))) for j in others))
        cones.append(tuple(add(comb((1, j), (-1, i))) for j in others))
    for a, b in combinations(range(4), 2):
        c, d = [t for t in range(4) if t not in (a, b)]
        centre = add(comb((1, a), (1, b), (-1, c), (-1, d)))
        square = [comb((1, a), (-1, c)), comb((1, a), (-1, d)),
                  comb((1, b), (-1, d)), comb((1, b), (-1, c))]
        for s in range(4):
            cones.append((centre, add(square[s]), add(square[(s + 1) % 4])))
    return Fan(3, rays, cones, "P")


def fan_D4cone():
    return Fan(3, D4CONE_RAYS, [tuple(i - 1 for i in c) for c in D4CONE_CONES], "D4cone")


def _fan_from_product(name, *fans):
    rays, cones = _product(*fans)
    return Fan(sum(f.n for f in fans), rays, cones, name)


def fan_P3():
    return Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
               [c for c in combinations(range(4), 3)], "P3")


FAN_BUILDERS = {
    "P1cubed": lambda: _fan_from_product("P1cubed", P1, P1, P1),
    "P1xQ": lambda: _fan_from_product("P1xQ", P1, P1, P1),
    "P2xP1": lambda: _fan_from_product("P2xP1", P2, P1),
    "P1xP2": lambda: _fan_from_product("P1xP2", P1, P2),
    "P3": fan_P3,
    "D4cone": fan_D4cone,
    "S": fan_S,
    "P": fan_P,
    "F": lambda: _fan_from_product("F", P1, DP6),
    "P1xP1": lambda: Fan(2, P1xP1.rays, P1xP1.maximal, "P1xP1"),
    "dP6": lambda: Fan(2, DP6.rays, DP6.maximal, "dP6"),
    "P2": lambda: Fan(2, P2.rays, P2.maximal, "P2"),
}

ALIASES = {"C": "P1cubed"}

THREEFOLD_PREFERENCE = ["P1cubed", "P2xP1", "P1xP2", "P3", "D4cone", "S", "P", "F"]
SURFACE_PREFERENCE = ["P1xP1", "P2", "dP6"]


def _section_S():
    def vec(d):
        r = [0] * 14
        for i, c in d.items():
            r[i - 1] += c
        return r
    rows = [vec({4 + i: 1}) for i in range(1, 10)]
    rows.append(vec({4: 1, 5: -1}))
    rows.append(vec({4: -1, 5: 1, 9: -1, 14: 1}))
    return rows


_MODEL_CACHE = {}


def build_model(name):
    name = ALIASES.get(name, name)
    if name in _MODEL_CACHE:
        return _MODEL_CACHE[name]
    if name not in FAN_BUILDERS:
        raise KeyError(f"unknown model {name!r}")
    fan = FAN_BUILDERS[name]()
    if name == "S":
        model = ToricModel("S", fan, transpose([list(r) for r in fan.rays]), _section_S())
    else:
        model = model_from_fan(fan, name)
    _MODEL_CACHE[name] = model
    return model


def model_names():
    return list(FAN_BUILDERS)


_AUT_CACHE = {}


def model_automorphisms(name):
    name = ALIASES.get(name, name)
    if name not in _AUT_CACHE:
        _AUT_CACHE[name] = automorphisms(build_model(name).fan)
    return _AUT_CACHE[name]
