"""GL_n(Z)-conjugacy of finite matrix groups: witnesses and certificates."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .groups import AffineGroup, MatrixGroup, _gens_of
from .linalg import (det, elementary_divisors, identity, inverse_unimodular, left_kernel,
                     matmul, rank, transpose)


class DimensionMismatch(ValueError):
    pass


class InconclusiveConjugacy(RuntimeError):
    pass


@dataclass
class Conjugate:
    witness: list   # X with X^-1 g X in the second group
    verdict: str = "ConjugateWithWitness"


@dataclass
class NotConjugate:
    invariant: str
    left: object
    right: object
    verdict: str = "NotConjugate"


@dataclass
class Inconclusive:
    verdict: str = "Inconclusive"


def _as_group(h):
    if isinstance(h, AffineGroup):
        return h
    return MatrixGroup(h)


def _mats(h):
    return h.matrix_parts()


def _sub_identity(a):
    n = len(a)
    return [[a[i][j] - (i == j) for j in range(n)] for i in range(n)]


def h1_factors(mats, dual=False):
    """Invariant factors of H^1(H, L) for L = Z^n with right action by ``mats``
    (or their inverse transposes)."""
    mats = [transpose(inverse_unimodular([list(r) for r in a])) if dual else [list(r) for r in a]
            for a in mats]
    n = len(mats[0])
    # coboundary map v -> (v*g - v)_g; H^1 is the torsion of its cokernel
    big = [sum((_sub_identity(g)[i] for g in mats), []) for i in range(n)]
    return [d for d in elementary_divisors(big) if d != 1]


def invariants(h):
    """Conjugation invariants of a finite matrix group."""
    h = _as_group(h)
    mats = _mats(h)
    n = h.n
    per = []
    orders = {}
    for e, o in zip(h.elements, h.orders):
        orders[e.A] = o
    for a in mats:
        m = [list(r) for r in a]
        per.append((orders[a], sum(m[i][i] for i in range(n)), det(m),
                    tuple(elementary_divisors(_sub_identity(m))),
                    n - rank(_sub_identity(m))))
    total = [[sum(a[i][j] for a in mats) for j in range(n)] for i in range(n)]
    subs = [_sub_identity([list(r) for r in a]) for a in mats]
    fixed = left_kernel([sum((s[i] for s in subs), []) for i in range(n)])
    return {
        "order": len(mats),
        "elements": tuple(sorted(per)),
        "sum_snf": tuple(elementary_divisors(total)),
        "fixed_rank": len(fixed),
        "h1_N": tuple(h1_factors(mats)),
        "h1_M": tuple(h1_factors(mats, dual=True)),
    }


def _homomorphism(g1, gens, images, g2):
    """Extend generator images to a map g1 -> g2; None if not a homomorphism."""
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for s, t in zip(gens, images):
                a = g1.mul(e, s)
                b = g2.mul(phi[e], t)
                if a in phi:
                    if phi[a] != b:
                        return None
                else:
                    phi[a] = b
                    nxt.append(a)
        frontier = nxt
    return phi


def isomorphisms(g1, g2, limit=None):
    """Generate isomorphisms g1 -> g2 as dicts on element indices."""
    if len(g1) != len(g2):
        return
    gens = _gens_of(g1, range(len(g1)))
    o1, o2 = g1.orders, g2.orders
    cands = [[j for j in range(len(g2)) if o2[j] == o1[s]] for s in gens]
    count = 0
    for images in product(*cands):
        phi = _homomorphism(g1, gens, images, g2)
        if phi is None or len(set(phi.values())) != len(g2):
            continue
        yield phi
        count += 1
        if limit and count >= limit:
            return


def _intertwiners(pairs, n):
    """Integer basis of {X : g X = X h} for all (g, h) in pairs (X is n x n)."""
    rows = []
    for g, h in pairs:
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                # (gX)_{ij} = sum_k g_ik X_kj ; (Xh)_{ij} = sum_k X_ik h_kj
                for k in range(n):
                    row[k * n + j] += g[i][k]
                    row[i * n + k] -= h[k][j]
                rows.append(row)
    return left_kernel(transpose(rows))


def lll(basis, delta=Fraction(3, 4)):
    """LLL reduction of integer row vectors (exact rational Gram-Schmidt)."""
    b = [list(v) for v in basis]
    k = len(b)
    if k <= 1:
        return b

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gso():
        bs, mu = [], [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = dot(b[i], bs[j]) / dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    bs, mu = gso()
    i = 1
    while i < k:
        for j in range(i - 1, -1, -1):
            q = round(mu[i][j])
            if q:
                b[i] = [x - q * y for x, y in zip(b[i], b[j])]
                bs, mu = gso()
        if dot(bs[i], bs[i]) >= (delta - mu[i][i - 1] ** 2) * dot(bs[i - 1], bs[i - 1]):
            i += 1
        else:
            b[i], b[i - 1] = b[i - 1], b[i]
            bs, mu = gso()
            i = max(i - 1, 1)
    return b


def _search_unimodular(basis, n, box):
    basis = lll(basis)
    k = len(basis)
    rng = range(-box, box + 1)
    for coeffs in product(rng, repeat=k):
        if not any(coeffs):
            continue
        if box > 1 and max(abs(c) for c in coeffs) < box:
            continue  # already covered by a smaller box
        v = [sum(c * row[t] for c, row in zip(coeffs, basis)) for t in range(n * n)]
        x = [v[i * n:(i + 1) * n] for i in range(n)]
        if abs(det(x)) == 1:
            return x
    return None


def _mat_key(a):
    return tuple(tuple(r) for r in a)


def glnz_conjugate(h1, h2, max_box=4, max_isos=None):
    h1, h2 = _as_group(h1), _as_group(h2)
    if h1.n != h2.n:
        raise DimensionMismatch("groups of different dimension")
    inv1, inv2 = invariants(h1), invariants(h2)
    for key in inv1:
        if inv1[key] != inv2[key]:
            return NotConjugate(key, inv1[key], inv2[key])
    n = h1.n
    lattices = []
    for phi in isomorphisms(h1, h2, limit=max_isos):
        gens = _gens_of(h1, range(len(h1)))
        pairs = [([list(r) for r in h1.elements[s].A], [list(r) for r in h2.elements[phi[s]].A])
                 for s in gens]
        basis = _intertwiners(pairs, n)
        if not basis:
            continue
        lattices.append(basis)
    for box in range(1, max_box + 1):
        for basis in lattices:
            x = _search_unimodular(basis, n, box)
            if x is not None:
                return Conjugate(x)
    return Inconclusive()


def verify_witness(h1, h2, x):
    h1, h2 = _as_group(h1), _as_group(h2)
    if abs(det(x)) != 1:
        return False
    xi = inverse_unimodular(x)
    target = set(h2.matrix_parts())
    return all(_mat_key(matmul(matmul(xi, [list(r) for r in a]), x)) in target
               for a in h1.matrix_parts())


_CONTAINS_CACHE = {}


def contains_conjugate_subgroup(g, target):
    """True iff some subgroup of g is GL_n(Z)-conjugate to target."""
    g = _as_group(g)
    t = _as_group(target.group() if hasattr(target, "group") else target)
    key = (frozenset(g.matrix_parts()), frozenset(t.matrix_parts()))
    if key in _CONTAINS_CACHE:
        return _CONTAINS_CACHE[key]
    result = False
    inconclusive = False
    if len(t) <= len(g) and len(g) % len(t) == 0:
        tinv = invariants(t)
        for sub in g.all_subgroups():
            if len(sub) != len(t):
                continue
            h = g.as_subgroup(sub)
            if invariants(h) != tinv:
                continue
            r = glnz_conjugate(h, t)
            if isinstance(r, Conjugate):
                result = True
                break
            if isinstance(r, Inconclusive):
                inconclusive = True
    if not result and inconclusive:
        raise InconclusiveConjugacy("bounded witness search failed with matching invariants")
    _CONTAINS_CACHE[key] = result
    return result


def conjugate_into(g, big):
    """X with X^-1 g X contained in ``big`` (both matrix groups), or None."""
    g, big = _as_group(g), _as_group(big)
    bigset = set(big.matrix_parts())
    if set(g.matrix_parts()) <= bigset:
        return identity(g.n)
    ginv = invariants(g)
    inconclusive = False
    for sub in big.all_subgroups():
        if len(sub) != len(g):
            continue
        h = big.as_subgroup(sub)
        if invariants(h) != ginv:
            continue
        r = glnz_conjugate(g, h)
        if isinstance(r, Conjugate):
            return r.witness
        if isinstance(r, Inconclusive):
            inconclusive = True
    if inconclusive:
        raise InconclusiveConjugacy("could not place group inside the target")
    return None


def classify_up_to_conjugacy(groups):
    """Partition matrix groups into GL_n(Z)-classes.

    Returns (classes, certificates): classes are lists of indices; every pair
    of class representatives carries a NotConjugate certificate.
    """
    groups = [_as_group(h) for h in groups]
    invs = [invariants(h) for h in groups]
    reps = []
    classes = []
    for i, h in enumerate(groups):
        placed = False
        for c, r in enumerate(reps):
            if invs[r] != invs[i]:
                continue
            v = glnz_conjugate(groups[r], h)
            if isinstance(v, Conjugate):
                classes[c].append(i)
                placed = True
                break
            if isinstance(v, Inconclusive):
                raise InconclusiveConjugacy(f"groups {r} and {i}: invariants agree, no witness found")
        if not placed:
            reps.append(i)
            classes.append([i])
    certs = {}
    for a in range(len(reps)):
        for b in range(a + 1, len(reps)):
            v = glnz_conjugate(groups[reps[a]], groups[reps[b]])
            certs[(reps[a], reps[b])] = v
    return classes, certs


# ------------------------------------------------------------ census

ETA = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))
CENSUS_MODELS = ("P1cubed", "S", "P", "F")


def _kind(h):
    orders = sorted(h.orders)
    eta = ETA in set(h.matrix_parts())
    if len(h) == 2:
        return None if eta else "C2"
    if len(h) == 4:
        if orders == [1, 2, 4, 4]:
            return "C4"
        return None if eta else "C2^2"
    if len(h) == 8 and orders.count(4) == 2 and orders.count(2) == 5:
        return "D4"
    return None


def census(kinds=("C2", "C4", "C2^2", "D4"), models=CENSUS_MODELS):
    """GL_3(Z)-classes of small subgroups of the maximal finite groups, found
    by exhausting the automorphism groups of the maximal models.  Order-2 and
    Klein groups containing -1 are left out."""
    from .models import model_automorphisms
    found = {k: {} for k in kinds}
    for name in models:
        big = MatrixGroup(model_automorphisms(name))
        for sub in big.all_subgroups():
            h = big.as_subgroup(sub)
            k = _kind(h)
            if k in found:
                found[k].setdefault(frozenset(h.matrix_parts()), h)
    out = {}
    for k in kinds:
        groups = list(found[k].values())
        classes, certs = classify_up_to_conjugacy(groups)
        out[k] = {"subgroups": len(groups), "classes": classes,
                  "representatives": [groups[c[0]] for c in classes],
                  "certificates": certs}
    return out
