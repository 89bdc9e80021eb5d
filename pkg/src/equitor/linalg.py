"""Exact integer and Q/Z linear algebra.

Matrices are lists of lists of Python ints.  Vectors are lists.  The row
echelon kernel is compiled when the extension is available; set
``EQUITOR_PURE_PYTHON=1`` to force the reference implementation.
"""

import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import _pycore

try:
    if os.environ.get("EQUITOR_PURE_PYTHON"):
        raise ImportError
    from . import _core
except ImportError:
    _core = None

BACKEND = "compiled" if _core is not None else "python"


def echelon(a, transform=True):
    """Canonical row HNF ``(h, u, pivots)`` with ``u*a == h``."""
    if not a:
        return [], [], []
    if _core is not None:
        try:
            return _core.echelon(a, transform)
        except OverflowError:
            pass
    return _pycore.echelon(a, transform)


# ---------------------------------------------------------------- basics

def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    if not a:
        return []
    if not b:
        return [[] for _ in a]
    bt = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum(x * col[k] for k, x in nz) for col in bt])
    return out


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v) if x) for row in a]


def vecmat(v, a):
    if not a:
        return []
    out = [0] * len(a[0])
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def mat_eq(a, b):
    return [list(r) for r in a] == [list(r) for r in b]


def is_zero(a):
    return all(not x for row in a for x in row)


def block_diag(*blocks):
    n = sum(len(b[0]) if b else 0 for b in blocks)
    out = []
    off = 0
    for b in blocks:
        w = len(b[0]) if b else 0
        for row in b:
            out.append([0] * off + list(row) + [0] * (n - off - w))
        off += w
    return out


def kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def det(a):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a):
    """Integer inverse of a unimodular matrix."""
    n = len(a)
    h, u, piv = echelon(a)
    if len(piv) != n or any(h[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return u


def rational_inverse(a):
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            raise ValueError("singular matrix")
        m[c], m[p] = m[p], m[c]
        pv = m[c][c]
        m[c] = [x / pv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


# ----------------------------------------------------------- normal forms

def hermite_form(a):
    """Row Hermite normal form: returns ``(H, U)`` with ``U*A == H``."""
    h, u, _ = echelon(a)
    return h, u


def rank(a):
    if not a:
        return 0
    return len(echelon(a, transform=False)[2])


@dataclass
class SmithDecomposition:
    """``U * A * V == S`` with ``S`` diagonal and a divisibility chain."""
    U: list
    S: list
    V: list

    @property
    def diagonal(self):
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d)


def _is_diag(s):
    return all(not x for i, row in enumerate(s) for j, x in enumerate(row) if i != j)


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_form(a):
    m = len(a)
    n = len(a[0]) if m else 0
    s = [list(r) for r in a]
    u = identity(m)
    v = identity(n)
    if m == 0 or n == 0:
        return SmithDecomposition(u, s, v)
    while True:
        s, t, _ = echelon(s)
        u = matmul(t, u)
        if _is_diag(s):
            break
        st, t2, _ = echelon(transpose(s))
        s = transpose(st)
        v = matmul(v, transpose(t2))
        if _is_diag(s):
            break
    k = min(m, n)
    d = [s[i][i] for i in range(k)]
    r = sum(1 for x in d if x)
    # nonzero entries come first after echelon; enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(i + 1, r):
                a_, b_ = d[i], d[j]
                if b_ % a_ == 0:
                    continue
                g, x, y = _xgcd(a_, b_)
                # column j added to column i
                for row in v:
                    row[i] += row[j]
                # rows i, j replaced by (x, y) and (-b/g, a/g) combinations
                ui, uj = u[i], u[j]
                u[i] = [x * p + y * q for p, q in zip(ui, uj)]
                u[j] = [(-b_ // g) * p + (a_ // g) * q for p, q in zip(ui, uj)]
                # column j minus (y*b/g) times column i
                f = y * b_ // g
                for row in v:
                    row[j] -= f * row[i]
                d[i], d[j] = g, a_ * b_ // g
                changed = True
    for i in range(r):
        if d[i] < 0:
            d[i] = -d[i]
            u[i] = [-x for x in u[i]]
    s = zeros(m, n)
    for i in range(r):
        s[i][i] = d[i]
    return SmithDecomposition(u, s, v)


def elementary_divisors(a):
    if not a or not a[0]:
        return []
    return [x for x in smith_form(a).diagonal if x]


# ---------------------------------------------------------------- kernels

def left_kernel(a, nrows=None):
    """Basis (rows, in HNF) of ``{x : x*a == 0}``."""
    if not a:
        return []
    if not a[0]:
        return identity(len(a))
    h, u, piv = echelon(a)
    ker = u[len(piv):]
    if not ker:
        return []
    return lattice_basis(ker)


def right_kernel(a, ncols=None):
    """Basis (rows) of ``{x : a*x == 0}``."""
    if not a:
        return identity(ncols or 0)
    return left_kernel(transpose(a), len(a[0]))


def lattice_basis(rows):
    """HNF basis of the Z-span of ``rows`` (zero rows dropped)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    h, _, piv = echelon(rows, transform=False)
    return h[:len(piv)]


def saturation(rows, ncols):
    """Basis of ``(span_Q rows) ∩ Z^ncols``."""
    if not rows or not any(any(r) for r in rows):
        return []
    h, _, piv = echelon([list(r) for r in rows], transform=False)
    h = h[:len(piv)]
    # [sat : L] divides the pivot minor, so sat = {w h / N : w h = 0 mod N}.
    big = 1
    for i, c in enumerate(piv):
        big *= h[i][c]
    if big == 1:
        return h
    # w h = 0 mod N only depends on the column lattice of h.
    cols = lattice_basis(transpose(h))
    r, k = len(h), len(cols)
    stacked = transpose(cols) + [[big if i == j else 0 for j in range(k)] for i in range(k)]
    ws = [w[:r] for w in left_kernel(stacked)]
    out = []
    for w in ws:
        v = vecmat(w, h)
        out.append([x // big for x in v])
    return lattice_basis(out)


def in_lattice(basis, v):
    """Membership of ``v`` in the Z-span of an HNF ``basis``."""
    return reduce_hnf(basis, v) is not None


def reduce_hnf(basis, v):
    """Coefficients of ``v`` on an echelon basis, or ``None``."""
    res = list(v)
    coeffs = []
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        q, rem = divmod(res[c], row[c])
        if rem:
            return None
        coeffs.append(q)
        if q:
            res = [x - q * y for x, y in zip(res, row)]
    if any(res):
        return None
    return coeffs


def lattice_intersection(a, b, ncols):
    """Basis of the intersection of the row lattices of ``a`` and ``b``."""
    if not a or not b:
        return []
    ker = left_kernel(a + b)
    rows = [vecmat(k[:len(a)], a) for k in ker]
    return lattice_basis(rows)


# ---------------------------------------------------------------- solving

@dataclass
class IntegerSolution:
    solvable: bool
    x: list = None
    kernel: list = field(default_factory=list)


def solve_integer(a, b):
    """Solve ``a*x == b`` over the integers; ``a`` is m x n, ``b`` length m."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return IntegerSolution(not any(b), [], [])
    h, t, piv = echelon(transpose(a))
    res = list(b)
    y = [0] * n
    for r, c in enumerate(piv):
        q, rem = divmod(res[c], h[r][c])
        if rem:
            return IntegerSolution(False, None, t[len(piv):])
        y[r] = q
        if q:
            res = [x - q * z for x, z in zip(res, h[r])]
    if any(res):
        return IntegerSolution(False, None, t[len(piv):])
    x = vecmat(y, t)
    return IntegerSolution(True, x, t[len(piv):])


class LatticeSolver:
    """Repeated membership tests against the column span of a fixed matrix."""

    def __init__(self, a):
        self.m = len(a)
        self.n = len(a[0]) if self.m else 0
        if self.n:
            self.h, self.t, self.piv = echelon(transpose(a))
        else:
            self.h, self.t, self.piv = [], [], []

    def solve(self, b):
        res = list(b)
        y = [0] * self.n
        for r, c in enumerate(self.piv):
            q, rem = divmod(res[c], self.h[r][c])
            if rem:
                return None
            y[r] = q
            if q:
                res = [x - q * z for x, z in zip(res, self.h[r])]
        if any(res):
            return None
        return vecmat(y, self.t) if self.n else []


def frac_mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def qz(v):
    return [frac_mod1(x) for x in v]


@dataclass
class Mod1Solution:
    solvable: bool
    u: list = None
    certificate: list = None


def solve_mod1(a, v):
    """Solve ``a*u ≡ v (mod 1)`` with ``u`` in (Q/Z)^n.

    When unsolvable the certificate is an integer row ``y`` with ``y*a == 0``
    and ``y.v`` not an integer.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    v = [Fraction(x) for x in v]
    if m == 0:
        return Mod1Solution(True, [Fraction(0)] * n)
    if n == 0:
        bad = next((i for i, x in enumerate(v) if frac_mod1(x)), None)
        if bad is None:
            return Mod1Solution(True, [])
        cert = [0] * m
        cert[bad] = 1
        return Mod1Solution(False, None, cert)
    sd = smith_form(a)
    w = [sum(x * y for x, y in zip(row, v)) for row in sd.U]
    r = sd.rank
    for i in range(r, m):
        if frac_mod1(w[i]):
            return Mod1Solution(False, None, list(sd.U[i]))
    z = [Fraction(0)] * n
    for i in range(r):
        z[i] = w[i] / sd.S[i][i]
    u = [frac_mod1(sum(x * y for x, y in zip(row, z))) for row in sd.V]
    return Mod1Solution(True, u)


# ------------------------------------------------------------ presentations

@dataclass
class AbelianPresentation:
    """Cokernel ``Z^n / rowspan(relations)``.

    ``factors`` are the non-unit invariant factors followed by zeros for free
    summands; ``projection`` is an n x len(factors) matrix sending ambient
    vectors to coordinates (reduce coordinate i modulo a nonzero factor).
    """
    factors: list
    projection: list
    ambient: int

    @property
    def free_rank(self):
        return sum(1 for f in self.factors if f == 0)

    @property
    def torsion(self):
        return [f for f in self.factors if f]

    @property
    def order(self):
        if self.free_rank:
            return 0
        out = 1
        for f in self.factors:
            out *= f
        return out

    def coordinates(self, x):
        c = vecmat(x, self.projection)
        return [ci % f if f else ci for ci, f in zip(c, self.factors)]

    def is_zero(self, x):
        return not any(self.coordinates(x))


def cokernel(relations, n):
    relations = [list(r) for r in relations if any(r)]
    if not relations:
        return AbelianPresentation([0] * n, identity(n), n)
    sd = smith_form(relations)
    d = sd.diagonal
    vinv = sd.V
    factors = []
    cols = []
    for i in range(n):
        f = d[i] if i < len(d) else 0
        if f == 1:
            continue
        factors.append(f)
        cols.append(i)
    proj = [[row[i] for i in cols] for row in vinv]
    return AbelianPresentation(factors, proj, n)
