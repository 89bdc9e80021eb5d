"""The obstruction class beta(X, G) in H^2(G, Pic^vee (x) Q/Z) = H^3(G, Pic^vee).

Chase: id_Pic in Pic (x) Pic^vee lifts to PL (x) Pic^vee through the model's
section; its coboundary lands in M (x) Pic^vee (stage 1).  Lifting M-values
to torsion monomials m -> (0, m) and taking the coboundary once more leaves
only constants, a 2-cocycle with values in Q/Z (x) Pic^vee (stage 2).
Constants are stored as mod-1 logarithms.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .cohomology import qz_is_coboundary, qz_is_cocycle, qz_shift
from .conjugacy import _intertwiners, _search_unimodular, glnz_conjugate, Conjugate
from .groups import AffineGroup, CapExceeded, GroupElement
from .lattice import GLattice, pic_lattice
from .linalg import (frac_mod1, identity, inverse_unimodular, kron, lattice_basis, left_kernel,
                     matmul, vecmat)
from .models import build_model
from .resolution import (BadParameters, evaluate, generic_resolution, periodic_resolution,
                         periodic_terms)

BETA_MAX_ORDER = 64

K9_A1 = ((0, 1, -1), (1, 0, -1), (0, 0, -1))
K9_A2 = ((-1, 0, 0), (-1, 0, 1), (-1, 1, 0))

# (c2, c3) as mod-1 logarithms
FAMILY_C = {"Q": (Fraction(0), Fraction(1, 2)), "D": (Fraction(0), Fraction(0)),
            "SD": (Fraction(1, 2), Fraction(1, 2))}


class SectionInvalid(ValueError):
    pass


class NotK9(ValueError):
    pass


class NonCyclicTorusPart(ValueError):
    pass


# ------------------------------------------------------------ coefficients

@dataclass(frozen=True)
class Sym:
    """(-1)^a * b2^b with unreduced exponents; lifted to Q by
    (a mod 2)/2 + b * log(b2)."""
    a: int = 0
    b: int = 0

    def __add__(self, o):
        if isinstance(o, int) and o == 0:
            return self
        return Sym(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Sym(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, k):
        return Sym(self.a * k, self.b * k)

    __rmul__ = __mul__

    def lift(self, log_b2):
        return Fraction(self.a % 2, 2) + self.b * log_b2

    def value(self, log_b2):
        return frac_mod1(self.lift(log_b2))

    def __str__(self):
        parts = []
        if self.a:
            parts.append("(-1)" if self.a == 1 else f"(-1)^{self.a}")
        if self.b:
            parts.append("b2" if self.b == 1 else f"b2^{self.b}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class MonomialUnit:
    """A torsion monomial exp(2 pi i c) * t^m; the group law is addition."""
    c: Fraction
    m: tuple

    def __add__(self, o):
        return MonomialUnit(frac_mod1(self.c + o.c), tuple(x + y for x, y in zip(self.m, o.m)))

    def __neg__(self):
        return MonomialUnit(frac_mod1(-self.c), tuple(-x for x in self.m))

    def act(self, g):
        """Right action f -> f o g^{-1} for g = (s, A): u -> u*A + s."""
        ainv = inverse_unimodular([list(r) for r in g.A])
        col = [sum(ainv[i][j] * self.m[j] for j in range(len(self.m))) for i in range(len(self.m))]
        c = self.c - sum(si * x for si, x in zip(g.s, col))
        return MonomialUnit(frac_mod1(c), tuple(col))

    def evaluate(self, u):
        """Value at a torsion point u (log form), as an element of Q/Z."""
        return frac_mod1(self.c + sum(x * y for x, y in zip(self.m, u)))


def _act_tensor(x, s, ainv, dual):
    """Right action on (U (x) Pic^vee) stored as [(c_q, m_q)] per dual basis vector."""
    n = len(ainv)
    moved = []
    for c, m in x:
        col = [sum(ainv[i][j] * m[j] for j in range(n)) for i in range(n)]
        cc = c
        for si, v in zip(s, col):
            if v:
                cc = cc - si * v
        moved.append((cc, col))
    rho = len(dual)
    out = []
    for l in range(rho):
        c = 0
        m = [0] * n
        for q in range(rho):
            d = dual[q][l]
            if d:
                c = c + moved[q][0] * d
                mq = moved[q][1]
                for j in range(n):
                    m[j] += d * mq[j]
        out.append((c, m))
    return out


def _tensor_add(x, y, k=1):
    return [(a + b * k, [u + k * v for u, v in zip(m1, m2)]) for (a, m1), (b, m2) in zip(x, y)]


def _tensor_zero(rho, n, zero):
    return [(zero, [0] * n) for _ in range(rho)]


class ElementActor:
    """Ring entries are {element index: coefficient}; constants are Fractions."""

    zero = Fraction(0)

    def __init__(self, group, model):
        self.group = group
        self.model = model
        self._data = {}

    def data(self, g):
        if g not in self._data:
            e = self.group.elements[g]
            a = [list(r) for r in e.A]
            self._data[g] = (list(e.s), inverse_unimodular(a), self.model.pic_dual_matrix(e.A), e.A)
        return self._data[g]

    def matrices(self, entry):
        return [(c, self.data(g)[3]) for g, c in entry.items()]

    def apply(self, x, entry):
        rho, n = len(x), len(x[0][1])
        out = _tensor_zero(rho, n, self.zero)
        for g, c in entry.items():
            s, ainv, dual, _ = self.data(g)
            out = _tensor_add(out, _act_tensor(x, s, ainv, dual), c)
        return out


class WordActor:
    """Ring entries are [(coefficient, word)]; letters act one at a time with
    symbolic constants, reproducing lifts that depend on the word."""

    zero = Sym()

    def __init__(self, letters, model):
        self.model = model
        self.letters = {}
        for ch, (s, a) in letters.items():
            self.letters[ch] = (s, inverse_unimodular([list(r) for r in a]),
                                model.pic_dual_matrix(a), tuple(tuple(r) for r in a))

    def _word_matrix(self, w):
        m = identity(self.model.n)
        for ch in w:
            m = matmul(m, [list(r) for r in self.letters[ch][3]])
        return tuple(tuple(r) for r in m)

    def matrices(self, entry):
        return [(c, self._word_matrix(w)) for c, w in entry]

    def apply(self, x, entry):
        rho, n = len(x), len(x[0][1])
        out = _tensor_zero(rho, n, self.zero)
        for c, w in entry:
            y = x
            for ch in w:
                s, ainv, dual, _ = self.letters[ch]
                y = _act_tensor(y, s, ainv, dual)
            out = _tensor_add(out, y, c)
        return out


# ------------------------------------------------------------ stages

def _pl_times(model, a, vec):
    p = model.perm(a)
    out = [0] * len(p)
    for i, c in enumerate(vec):
        if c:
            out[p[i]] += c
    return out


def stage1_cocycle(model, actor, b0, section=None):
    """Values on the generators of F_1 of the coboundary of the lifted
    identity: a list of r_1 elements of M (x) Pic^vee, each stored as rho
    M-vectors (one per dual basis vector)."""
    section = section if section is not None else model.section
    rho = model.pic_rank
    if len(section) != rho:
        raise SectionInvalid("section must have one lift per Pic basis vector")
    for q, lam in enumerate(section):
        m, pic = model.split(lam)
        if pic != [int(i == q) for i in range(rho)]:
            raise SectionInvalid(f"lift {q} does not map to the basis vector")
    values = []
    for entry in b0[0]:
        cols = [[0] * len(model.fan.rays) for _ in range(rho)]
        for c, a in actor.matrices(entry):
            dual = model.pic_dual_matrix(a)
            # (ell g)_q = sum_p dual[p][q] * (lambda(p) g)
            for p in range(rho):
                moved = _pl_times(model, a, section[p])
                for q in range(rho):
                    d = dual[p][q]
                    if d:
                        col = cols[q]
                        for i, v in enumerate(moved):
                            col[i] += c * d * v
        ms = []
        for q in range(rho):
            m, pic = model.split(cols[q])
            if any(pic):
                raise SectionInvalid("coboundary of the lifted identity leaves M")
            ms.append(m)
        values.append(ms)
    return values


def stage1_vector(values):
    """Flatten stage-1 values to a cochain on M (x) Pic^vee (index a*rho + q)."""
    out = []
    for ms in values:
        rho, n = len(ms), len(ms[0]) if ms else 0
        block = [0] * (n * rho)
        for q, m in enumerate(ms):
            for a in range(n):
                block[a * rho + q] = m[a]
        out.extend(block)
    return out


def stage2_cocycle(values, actor, b1, unit_section=None):
    """Lift the M-values to monomials and take the coboundary along b1; the
    M-parts cancel and the constants form the 2-cocycle."""
    lifted = []
    for ms in values:
        if unit_section is None:
            lifted.append([(actor.zero, list(m)) for m in ms])
        else:
            lifted.append([(unit_section(tuple(m)), list(m)) for m in ms])
    rho = len(values[0]) if values else 0
    n = len(values[0][0]) if rho else 0
    outs = []
    for j in range(len(b1[0]) if b1 else 0):
        tot = _tensor_zero(rho, n, actor.zero)
        for k in range(len(b1)):
            if b1[k][j]:
                tot = _tensor_add(tot, actor.apply(lifted[k], b1[k][j]))
        if any(any(m) for _, m in tot):
            raise SectionInvalid("stage-1 values do not form a cocycle")
        outs.append([c for c, _ in tot])
    return outs


# ------------------------------------------------------------ reports

@dataclass
class ObstructionReport:
    model: str
    group_order: int
    resolution: str
    stage1: list
    stage2: list                 # Q/Z values (mod-1 logs), r_2 blocks of rho
    integral: list               # lift(stage2) * d_2, r_3 blocks of rho
    route_qz: bool               # True = coboundary over Q/Z
    route_integral: bool         # True = integral coboundary
    witness: list = None
    certificate: list = None
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self):
        if self.route_qz != self.route_integral:
            return "RouteDisagreement"
        return "Vanishes" if self.route_qz else "NonVanishing"

    @property
    def vanishes(self):
        if self.route_qz != self.route_integral:
            raise ArithmeticError("beta routes disagree")
        return self.route_qz

    def to_json(self):
        return {
            "model": self.model, "group_order": self.group_order, "resolution": self.resolution,
            "stage1": self.stage1,
            "stage2": [[str(x) for x in blk] for blk in self.stage2],
            "integral": self.integral, "verdict": self.verdict,
            "routes": {"qz_coboundary": self.route_qz, "integral_coboundary": self.route_integral},
            "witness": [str(x) for x in self.witness] if self.witness else None,
            "certificate": self.certificate,
            **{k: v for k, v in self.extra.items()},
        }


def _blocks(v, size):
    return [v[i:i + size] for i in range(0, len(v), size)]


def _finish(model, group, res, cx, values, z, lift, name, extra=None):
    rho = model.pic_rank
    flat = [x for blk in z for x in blk]
    zq = [frac_mod1(x) for x in flat]
    if not qz_is_cocycle(cx, 2, zq):
        raise ArithmeticError("stage-2 values fail the cocycle identity")
    a = qz_is_coboundary(cx, 2, zq)
    b = qz_shift(cx, 2, zq, lift=lift)
    return ObstructionReport(
        model=name, group_order=len(group), resolution=res.name,
        stage1=values, stage2=_blocks(zq, rho), integral=b.integral,
        route_qz=a.solvable, route_integral=b.vanishes,
        witness=a.u if a.solvable else None,
        certificate=a.certificate if not a.solvable else None,
        extra=extra or {})


def beta(model, group, res=None, section=None, unit_section=None):
    """beta(X, G) through a free resolution of G (generic by default)."""
    if isinstance(model, str):
        model = build_model(model)
    if len(group) > BETA_MAX_ORDER:
        raise CapExceeded(f"group order {len(group)} above the beta cap {BETA_MAX_ORDER}")
    for a in group.matrix_parts():
        model.perm(a)  # raises FanNotInvariant
    if res is None:
        res = generic_resolution(group, top=3)
    actor = ElementActor(group, model)
    lat = pic_lattice(model, group, dual_=True)
    cx = res.cochain_complex(lat)
    values = stage1_cocycle(model, actor, res.boundaries[0], section)
    z = stage2_cocycle(values, actor, res.boundaries[1], unit_section)
    return _finish(model, group, res, cx, values, z, None, model.name)


def stage1_is_cocycle(model, group, res, values):
    """Check the stage-1 cochain against d_1 on M (x) Pic^vee."""
    m_lat = GLattice.character(group)
    p_lat = pic_lattice(model, group, dual_=True)
    mats = [kron(a, b) for a, b in zip(m_lat.action, p_lat.action)]
    lat = GLattice(group, m_lat.rank * p_lat.rank, mats)
    d1 = evaluate(res.boundaries[1], lat)
    return not any(vecmat(stage1_vector(values), d1))


# ------------------------------------------------------------ K9 families

def k9_family_group(family, n):
    """The normalized group <sigma1, sigma2> over K9 for a periodic family,
    with b2 = exp(2 pi i / 2^(n-2))."""
    if family not in FAMILY_C:
        raise BadParameters(f"unknown family {family!r}")
    lo = {"Q": 3, "D": 2, "SD": 4}[family]
    if n < lo:
        raise BadParameters(f"{family} needs n >= {lo}")
    b2 = Fraction(1, 2 ** (n - 2))
    c2, c3 = FAMILY_C[family]
    s1 = GroupElement.make([0, b2, 0], K9_A1)
    s2 = GroupElement.make([0, c2, c3], K9_A2)
    return AffineGroup([s1, s2]), s1, s2


def _sym_vec(a_b):
    return [Sym(a, b) for a, b in a_b]


def _sym_inverse_torus(s, a):
    """Torus part -s * A^{-1} of the inverse, symbolically."""
    ainv = inverse_unimodular([list(r) for r in a])
    n = len(s)
    return [sum((s[i] * (-ainv[i][j]) for i in range(n)), Sym()) for j in range(n)]


def component_intersection(d, rho, comp):
    """Row lattice of d intersected with the vectors supported on block ``comp``
    (returned as vectors of that block)."""
    cols = len(d[0]) // rho
    other = [j for j in range(cols * rho) if j // rho != comp]
    if other:
        sub = [[row[j] for j in other] for row in d]
        ker = left_kernel(sub)
    else:
        ker = identity(len(d))
    vecs = [vecmat(k, d)[comp * rho:(comp + 1) * rho] for k in ker]
    return lattice_basis(vecs)


def zg_span(vectors, lat):
    return lattice_basis([vecmat(list(v), a) for v in vectors for a in lat.action])


REFERENCE = {
    "Q_beta": [-1, 0, 1, 0, 0, 0, -1, 0, 0, 1, 0],
    "Q_image": [[0, 0, 0, 0, 0, 0, 2, 0, 0, -2, 0],
                [1, 0, 0, 0, 0, 0, 1, 0, 0, -2, 1],
                [0, 1, 0, 0, 0, 0, 1, -1, 0, -1, 1],
                [0, 0, 1, 0, 0, 0, 1, 0, 0, -2, 1],
                [0, 0, 0, 1, 0, 0, 1, -1, 0, -1, 1],
                [0, 0, 0, 0, 1, 0, 1, -1, 0, -2, 0],
                [0, 0, 0, 0, 0, 1, 0, 0, -1, 0, 0]],
    "D_intersection": [[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
                       [0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 0],
                       [0, 0, 0, 0, 2, 0, 2, 2, 0, 0, 0],
                       [0, 0, 0, 0, 0, 2, 0, 0, 2, 0, 0]],
    "SD_intersection": [[1, 1, -1, -1, 1, 0, 1, -1, 0, -2, 0],
                        [0, 2, 0, -2, 0, 0, 0, 0, 0, 0, 0]],
    "SD_beta_first": [0, 1, 0, -1, 0, 0, 0, 0, 0, 0],
    "stage1": [{3: (0, -1, -1)},
               {1: (0, 1, 1), 2: (0, 1, 0), 4: (1, 0, 0), 10: (0, -1, -1), 11: (0, 1, 1)}],
}


def reproduce_k9_family(family, n, model_name="S"):
    """The chase for the normalized group of ``family`` on model (S) with the
    reference resolution, bases and lifts.  Generators act as x = sigma1^-1,
    y = sigma2^-1 so that functions are pulled back along sigma1, sigma2."""
    model = build_model(model_name)
    group, s1, s2 = k9_family_group(family, n)
    x = group.index[s1.inverse()]
    y = group.index[s2.inverse()]
    res = periodic_resolution(group, family, n, x, y)
    log_b2 = Fraction(1, 2 ** (n - 2))
    c2, c3 = FAMILY_C[family]
    sym1 = _sym_vec([(0, 0), (0, 1), (0, 0)])
    sym2 = _sym_vec([(0, 0), (int(2 * c2), 0), (int(2 * c3), 0)])
    letters = {"x": (_sym_inverse_torus(sym1, K9_A1), K9_A1),
               "y": (_sym_inverse_torus(sym2, K9_A2), K9_A2)}
    actor = WordActor(letters, model)
    terms = periodic_terms(family, n)
    values = stage1_cocycle(model, actor, terms[0])
    zsym = stage2_cocycle(values, actor, terms[1])
    lift = [c.lift(log_b2) for blk in zsym for c in blk]
    z = [[c.value(log_b2) for c in blk] for blk in zsym]
    lat = pic_lattice(model, group, dual_=True)
    cx = res.cochain_complex(lat)
    rho = model.pic_rank
    report = _finish(model, group, res, cx, values, z, lift, model.name)
    d2 = cx.d[2]
    extra = {
        "family": family, "n": n, "log_b2": str(log_b2),
        "stage2_symbolic": [{str(q + 1): str(c) for q, c in enumerate(blk) if c != Sym()}
                            for blk in zsym],
        "beta_blocks": _blocks(report.integral, rho),
    }
    if family == "Q":
        image = lattice_basis(d2)
        extra["image_basis"] = image
        extra["image_matches_reference"] = image == zg_span(REFERENCE["Q_image"], lat)
        extra["reference_in_image"] = all(_in_span(image, v) for v in REFERENCE["Q_image"])
    else:
        blocks = len(d2[0]) // rho
        inter = {c: component_intersection(d2, rho, c) for c in range(blocks)}
        extra["component_intersections"] = {str(c + 1): v for c, v in inter.items()}
        key = "D_intersection" if family == "D" else "SD_intersection"
        ref = REFERENCE[key]
        extra["reference_matches_component"] = [
            c + 1 for c, v in inter.items()
            if v and (v == lattice_basis(ref) or v == zg_span(ref, lat))]
        nz = [c for c, blk in enumerate(extra["beta_blocks"]) if any(blk)]
        extra["beta_support"] = [c + 1 for c in nz]
        extra["beta_outside_component"] = all(
            not _in_span(inter[c], extra["beta_blocks"][c]) for c in nz if len(nz) == 1)
    report.extra = extra
    return report


def _in_span(basis, v):
    from .linalg import in_lattice
    return in_lattice(basis, list(v)) if basis else not any(v)


# ------------------------------------------------------------ normalization

@dataclass
class K9Normalization:
    b2: Fraction
    c2: Fraction
    c3: Fraction
    family: str
    n: int
    conjugator: list          # X with X^-1 pi(G) X = K9
    translation: list         # torus shift u realizing b1 = b3 = c1 = 1
    subgroup_order: int

    def to_json(self):
        return {"b2": str(self.b2), "c2": str(self.c2), "c3": str(self.c3),
                "family": self.family, "n": self.n,
                "conjugator": self.conjugator, "translation": [str(t) for t in self.translation],
                "subgroup_order": self.subgroup_order}


def _conjugate_element(g, x, xinv):
    s = [sum(g.s[i] * x[i][j] for i in range(len(x))) for j in range(len(x))]
    a = matmul(matmul(xinv, [list(r) for r in g.A]), x)
    return GroupElement.make(s, a)


def _role_conjugators():
    """Unimodular X permuting the nontrivial elements of K9 into all orders."""
    k9 = AffineGroup.from_matrices([K9_A1, K9_A2])
    invs = [e.A for e in k9.elements if not e.is_identity()]
    out = []
    for a in invs:
        for b in invs:
            if a == b:
                continue
            basis = _intertwiners([([list(r) for r in a], [list(r) for r in K9_A1]),
                                   ([list(r) for r in b], [list(r) for r in K9_A2])], 3)
            for box in range(1, 4):
                x = _search_unimodular(basis, 3, box) if basis else None
                if x is not None:
                    out.append(x)
                    break
    return out


def _minimal_surjecting(group, target_size=4):
    subs = sorted(group.all_subgroups(), key=len)
    for sub in subs:
        h = group.as_subgroup(sub)
        if len(set(h.matrix_parts())) == target_size:
            return h
    return group


def normalize_k9(group):
    img = group.image()
    if len(img) != 4:
        raise NotK9("matrix part is not a Klein four group")
    k9 = AffineGroup.from_matrices([K9_A1, K9_A2])
    v = glnz_conjugate(img, k9)
    if not isinstance(v, Conjugate):
        raise NotK9("matrix part is not conjugate to K9")
    x = v.witness
    xinv = inverse_unimodular(x)
    conj = AffineGroup([_conjugate_element(g, x, xinv) for g in group.generators], n=3)
    h = _minimal_surjecting(conj)
    gt = [e for e in h.elements if e.is_translation()]
    if not _is_cyclic_translations(gt):
        raise NonCyclicTorusPart("torus part of the minimal subgroup is not cyclic")
    n = len(h).bit_length() - 1
    for r in _role_conjugators():
        rinv = inverse_unimodular(r)
        hh = AffineGroup([_conjugate_element(g, r, rinv) for g in h.generators], n=3)
        lifts1 = [e for e in hh.elements if e.A == K9_A1]
        lifts2 = [e for e in hh.elements if e.A == K9_A2]
        for e1 in lifts1:
            for e2 in lifts2:
                found = _normalize_pair(e1, e2)
                if found is None:
                    continue
                u, b2, c2, c3 = found
                for fam, cc in FAMILY_C.items():
                    if (c2, c3) != cc:
                        continue
                    if len(hh) != 2 ** n or _order_mod1(b2) != 2 ** (n - 2):
                        continue
                    if fam == "D" and n < 2 or fam == "Q" and n < 3 or fam == "SD" and n < 4:
                        continue
                    total = matmul(x, r)
                    return K9Normalization(b2, c2, c3, fam, n, total, u, len(hh))
    raise NotK9("no normalization into a periodic family found")


def _order_mod1(t):
    return Fraction(t).denominator


def _is_cyclic_translations(gt):
    if len(gt) <= 1:
        return True
    return any(e.order() == len(gt) for e in gt)


def _normalize_pair(e1, e2):
    """Torus shift u with (sigma1, sigma2) -> b1 = b3 = c1 = 0; returns
    (u, b2, c2, c3) with the remaining parameters reduced mod 1."""
    from .linalg import solve_mod1
    a1 = [[K9_A1[i][j] - (i == j) for j in range(3)] for i in range(3)]
    a2 = [[K9_A2[i][j] - (i == j) for j in range(3)] for i in range(3)]
    rows = [[a1[i][0] for i in range(3)], [a1[i][2] for i in range(3)], [a2[i][0] for i in range(3)]]
    rhs = [e1.s[0], e1.s[2], e2.s[0]]
    sol = solve_mod1(rows, rhs)
    if not sol.solvable:
        return None
    u = sol.u
    t1 = [frac_mod1(e1.s[j] - sum(u[i] * a1[i][j] for i in range(3))) for j in range(3)]
    t2 = [frac_mod1(e2.s[j] - sum(u[i] * a2[i][j] for i in range(3))) for j in range(3)]
    if t1[0] or t1[2] or t2[0]:
        return None
    return u, t1[1], t2[1], t2[2]
