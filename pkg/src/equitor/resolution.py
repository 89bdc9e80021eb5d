"""Free resolutions of Z over ZG and their cochain complexes.

Group ring elements are dicts {element index: coefficient}.  A resolution is
stored by its boundary matrices R_i (F_{i+1} -> F_i) with
d(e_j) = sum_k e_k * R_i[k][j], so a cochain phi in Hom_G(F_i, L) = L^{r_i}
maps to (phi d)_j = sum_k phi_k * R_i[k][j].
"""

from itertools import product

from .groups import CapExceeded, max_order
from .linalg import in_lattice, lattice_basis, left_kernel, matmul, zeros


class BadParameters(ValueError):
    pass


class DegreeOutOfRange(IndexError):
    pass


# ------------------------------------------------------------ group ring

def ring_add(a, b, sign=1):
    out = dict(a)
    for g, c in b.items():
        v = out.get(g, 0) + sign * c
        if v:
            out[g] = v
        else:
            out.pop(g, None)
    return out


def ring_mul(group, a, b):
    out = {}
    for g, c in a.items():
        for h, d in b.items():
            k = group.mul(g, h)
            v = out.get(k, 0) + c * d
            if v:
                out[k] = v
            else:
                out.pop(k)
    return out


def ring_matmul(group, a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[{} for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            acc = {}
            for k in range(inner):
                if a[i][k] and b[k][j]:
                    acc = ring_add(acc, ring_mul(group, a[i][k], b[k][j]))
            out[i][j] = acc
    return out


def ring_is_zero(m):
    return all(not x for row in m for x in row)


def evaluate(m, lat):
    """Integer matrix of a group-ring matrix acting on the cochains of ``lat``."""
    r = lat.rank
    rows, cols = len(m), len(m[0]) if m else 0
    out = zeros(rows * r, cols * r)
    for i in range(rows):
        for j in range(cols):
            for g, c in m[i][j].items():
                a = lat.action[g]
                for x in range(r):
                    row = out[i * r + x]
                    ax = a[x]
                    for y in range(r):
                        if ax[y]:
                            row[j * r + y] += c * ax[y]
    return out


# ------------------------------------------------------------ resolutions

class Resolution:
    """A truncated free resolution F_top -> ... -> F_0 -> Z of the group
    ``group`` (or of the subgroup whose elements carry the ring entries)."""

    def __init__(self, group, boundaries, name="", subgroup=None):
        self.group = group
        self.boundaries = boundaries
        self.name = name
        self.subgroup = subgroup  # sorted element indices when restricted

    @property
    def top(self):
        return len(self.boundaries)

    def ranks(self):
        out = [len(self.boundaries[0])] if self.boundaries else [1]
        for b in self.boundaries:
            out.append(len(b[0]) if b else 0)
        return out

    def check(self):
        """d o d == 0 in the group ring."""
        return all(ring_is_zero(ring_matmul(self.group, self.boundaries[i], self.boundaries[i + 1]))
                   for i in range(len(self.boundaries) - 1))

    def cochain_complex(self, lat):
        return CochainComplex([evaluate(b, lat) for b in self.boundaries], lat.rank, self.ranks(),
                              resolution=self, lattice=lat)

    def restrict(self, sub_idx):
        """The same resolution viewed over a subgroup H: F_i restricted to H is
        free on e_k * t for left coset representatives t (G = union tH)."""
        group = self.group
        sub = sorted(set(sub_idx))
        subset = set(sub)
        reps = []
        where = {}
        for g in range(len(group)):
            if g in where:
                continue
            j = len(reps)
            reps.append(g)
            for h in sub:
                where[group.mul(g, h)] = (j, h)
        m = len(reps)
        new = []
        for b in self.boundaries:
            rows, cols = len(b), len(b[0])
            nb = [[{} for _ in range(cols * m)] for _ in range(rows * m)]
            for k in range(rows):
                for j in range(cols):
                    for g, c in b[k][j].items():
                        for ti, t in enumerate(reps):
                            tp, h = where[group.mul(g, t)]
                            cell = nb[k * m + tp][j * m + ti]
                            v = cell.get(h, 0) + c
                            if v:
                                cell[h] = v
                            else:
                                cell.pop(h)
            new.append(nb)
        assert all(g in subset for b in new for row in b for x in row for g in x)
        res = Resolution(group, new, self.name + "|H", subgroup=sub)
        res.coset_reps = reps
        res.parent = self
        return res

    def restriction_matrix(self, lat, degree):
        """Integer matrix of cochain restriction C^i_G(L) -> C^i_H(L) for a
        resolution produced by ``restrict``: psi(e_k t) = phi(e_k) * t."""
        reps = self.coset_reps
        parent_rank = self.parent.ranks()[degree]
        r, m = lat.rank, len(reps)
        out = zeros(parent_rank * r, parent_rank * m * r)
        for k in range(parent_rank):
            for ti, t in enumerate(reps):
                a = lat.action[t]
                for x in range(r):
                    for y in range(r):
                        out[k * r + x][(k * m + ti) * r + y] = a[x][y]
        return out


def generic_resolution(group, top=3, generators=None):
    """Free resolution built from kernels: F_1 on the group generators with
    d(e_k) = 1 - s_k, higher generators chosen greedily among kernel vectors."""
    n = len(group)
    if generators is None:
        generators = [group.index[g] for g in group.generators]
        generators = [g for g in dict.fromkeys(generators) if g != 0]
    b0 = [[ring_add({0: 1}, {s: 1}, -1) for s in generators]]
    if n == 1:
        b0 = [[]]
    boundaries = [b0]
    while len(boundaries) < top:
        prev = boundaries[-1]
        rows, cols = len(prev), len(prev[0]) if prev else 0
        # Z-matrix of d: F_{i+1} -> F_i, rows (j, g), columns (k, h)
        zmat = zeros(cols * n, rows * n)
        for j in range(cols):
            for g in range(n):
                row = zmat[j * n + g]
                for k in range(rows):
                    for h, c in prev[k][j].items():
                        row[k * n + group.mul(h, g)] += c
        ker = left_kernel(zmat) if zmat else []
        ker = sorted(ker, key=lambda v: (sum(1 for x in v if x), sum(abs(x) for x in v)))
        chosen = []
        span = []
        for v in ker:
            if span and in_lattice(span, v):
                continue
            chosen.append(v)
            orbit = [_translate(v, cols, n, group, g) for g in range(n)]
            span = lattice_basis(span + orbit)
        nb = [[{} for _ in range(len(chosen))] for _ in range(cols)]
        for c, v in enumerate(chosen):
            for j in range(cols):
                for g in range(n):
                    x = v[j * n + g]
                    if x:
                        nb[j][c][g] = x
        boundaries.append(nb)
    return Resolution(group, boundaries, "generic")


def _translate(v, blocks, n, group, g):
    out = [0] * len(v)
    for j in range(blocks):
        for h in range(n):
            x = v[j * n + h]
            if x:
                out[j * n + group.mul(h, g)] += x
    return out


# ------------------------------------------------------------ periodic families

def _word(group, letters, word):
    g = 0
    for ch in word:
        g = group.mul(g, letters[ch])
    return g


def _poly(group, letters, terms):
    out = {}
    for c, w in terms:
        out = ring_add(out, {_word(group, letters, w): c})
    return out


def _power_sum(k, letter="x"):
    return [(1, letter * r) for r in range(k)]


def periodic_terms(family, n):
    """Group-ring matrices of the standard periodic resolutions, as lists of
    (coefficient, word) terms; a word ``yx`` is y followed by x."""
    if family == "Q":
        if n < 3:
            raise BadParameters("Q family needs n >= 3")
        nx = _power_sum(2 ** (n - 2))
        m0 = [[[(1, ""), (-1, "x")], [(1, ""), (-1, "y")]]]
        m1 = [[nx, [(1, "yx"), (1, "")]],
              [[(-1, ""), (-1, "y")], [(1, "x"), (-1, "")]]]
        m2 = [[[(1, ""), (-1, "x")]], [[(1, "yx"), (-1, "")]]]
        return [m0, m1, m2]
    if family == "D":
        if n < 2:
            raise BadParameters("D family needs n >= 2")
        nx = _power_sum(2 ** (n - 1))
        m0 = [[[(1, ""), (-1, "x")], [(1, ""), (-1, "y")]]]
        m1 = [[nx, [(1, ""), (1, "yx")], []],
              [[], [(1, "x"), (-1, "")], [(1, ""), (1, "y")]]]
        m2 = [[[(1, ""), (-1, "x")], [(1, ""), (1, "y")], [], []],
              [[], [(-1, w) for _, w in nx], [(1, ""), (-1, "yx")], []],
              [[], [], [(1, ""), (-1, "x")], [(1, ""), (-1, "y")]]]
        return [m0, m1, m2]
    if family == "SD":
        if n < 4:
            raise BadParameters("SD family needs n >= 4")
        k = 2 ** (n - 3)
        l1 = [(1, "x" * (k + 1)), (-1, "")]
        l2 = _power_sum(k + 1) + [(-1, "x" * r + "y") for r in range(k - 1)]
        l3 = [(1, "x" * (k - 1)), (1, "x" * (k - 1) + "y"), (-1, ""), (-1, "y")]
        l4 = [(1, "x" * (2 * k)), (-1, "x" * (k + 1)), (-1, "x" * (k - 1)), (1, "")]
        m0 = [[[(1, ""), (-1, "x")], [(1, ""), (-1, "y")]]]
        m1 = [[l2, []], [l1, [(1, ""), (1, "y")]]]
        m2 = [[[(-c, w) for c, w in l3], []], [l4, [(1, ""), (-1, "y")]]]
        return [m0, m1, m2]
    raise BadParameters(f"unknown family {family!r}")


def check_presentation(group, family, n, x, y):
    """Verify that x, y generate ``group`` and satisfy the family's relations."""
    e = 0

    def pw(g, k):
        r = 0
        for _ in range(k):
            r = group.mul(r, g)
        return r

    mul = group.mul
    if family == "Q":
        ok = (pw(x, 2 ** (n - 2)) == pw(y, 2) and mul(mul(x, y), x) == y
              and group.orders[x] == 2 ** (n - 1))
    elif family == "D":
        ok = (pw(x, 2 ** (n - 1)) == e and pw(y, 2) == e and mul(mul(mul(y, x), y), x) == e
              and group.orders[x] == 2 ** (n - 1))
    elif family == "SD":
        ok = (pw(x, 2 ** (n - 1)) == e and pw(y, 2) == e
              and mul(mul(y, x), y) == pw(x, 2 ** (n - 2) - 1) and group.orders[x] == 2 ** (n - 1))
    else:
        raise BadParameters(f"unknown family {family!r}")
    return ok and len(group.element_subgroup([x, y])) == len(group) == 2 ** n


def periodic_resolution(group, family, n, x, y):
    """The periodic resolution for Q, D or SD evaluated on elements x, y of ``group``."""
    if not check_presentation(group, family, n, x, y):
        raise BadParameters(f"elements do not present the {family} group of order 2^{n}")
    letters = {"x": x, "y": y}
    mats = [[[_poly(group, letters, t) for t in row] for row in m] for m in periodic_terms(family, n)]
    res = Resolution(group, mats, family)
    res.letters = letters
    return res


# ------------------------------------------------------------ bar complex

def bar_complex(group, lat, max_degree=2, cap_entries=None):
    """Normalized bar cochain complex C^0..C^{max_degree}."""
    n = len(group)
    if n > max_order():
        raise CapExceeded(f"group order {n} above cap")
    cap_entries = cap_entries or 2_000_000
    r = lat.rank
    nontriv = list(range(1, n))
    dims = [len(nontriv) ** i * r for i in range(max_degree + 1)]
    for i in range(max_degree):
        if dims[i] * dims[i + 1] > cap_entries:
            raise CapExceeded("bar complex too large; lower the degree or use a smaller group")
    tuples = [list(product(nontriv, repeat=i)) for i in range(max_degree + 1)]
    pos = [{t: k for k, t in enumerate(ts)} for ts in tuples]
    mats = []
    for i in range(max_degree):
        d = zeros(dims[i], dims[i + 1])
        for col, t in enumerate(tuples[i + 1]):
            # (df)(t) = f(t[1:]) + sum_j (-1)^j f(.. t_j t_{j+1} ..) + (-1)^{i+1} f(t[:-1]) t_last
            terms = [(1, t[1:], 0)]
            for j in range(i):
                g = group.mul(t[j], t[j + 1])
                if g == 0:
                    continue
                terms.append(((-1) ** (j + 1), t[:j] + (g,) + t[j + 2:], 0))
            terms.append(((-1) ** (i + 1), t[:-1], t[-1]))
            for sign, src, act in terms:
                k = pos[i][src]
                a = lat.action[act]
                for x in range(r):
                    for y in range(r):
                        if a[x][y]:
                            d[k * r + x][col * r + y] += sign * a[x][y]
        mats.append(d)
    ranks = [len(ts) for ts in tuples]
    return CochainComplex(mats, r, ranks, lattice=lat)


# ------------------------------------------------------------ complexes

class CochainComplex:
    """Integer cochain complex C^0 -> C^1 -> ... given by matrices acting on
    row vectors: d_i has shape dim C^i x dim C^{i+1}."""

    def __init__(self, differentials, coeff_rank, free_ranks, resolution=None, lattice=None):
        self.d = differentials
        self.coeff_rank = coeff_rank
        self.free_ranks = free_ranks
        self.resolution = resolution
        self.lattice = lattice

    @property
    def top(self):
        return len(self.d)

    def dim(self, i):
        return self.free_ranks[i] * self.coeff_rank

    def check(self):
        for i in range(len(self.d) - 1):
            a, b = self.d[i], self.d[i + 1]
            if not a or not b or not b[0]:
                continue
            p = matmul(a, b)
            if any(any(row) for row in p):
                return False
        return True

    def differential(self, i):
        if i < 0 or i >= len(self.d):
            raise DegreeOutOfRange(f"no differential out of degree {i}")
        return self.d[i]

