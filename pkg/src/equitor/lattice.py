"""Z-lattices with a right action of a finite group."""

from .linalg import (identity, inverse_unimodular, kron, left_kernel, matmul, transpose, block_diag)


class GroupMismatch(ValueError):
    pass


class NotASubgroup(ValueError):
    pass


class GLattice:
    """Z^rank with v -> v * action[g] for every element index g of ``group``."""

    def __init__(self, group, rank, action):
        self.group = group
        self.rank = rank
        self.action = [[list(r) for r in a] for a in action]
        if len(self.action) != len(group):
            raise ValueError("one matrix per group element required")

    @classmethod
    def from_generators(cls, group, gen_mats, rank=None):
        """Extend matrices given on ``group.generators`` multiplicatively and
        verify that every relation holds."""
        if rank is None:
            rank = len(gen_mats[0]) if gen_mats else 0
        gens = [group.index[g] for g in group.generators]
        act = {0: identity(rank)}
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for s, m in zip(gens, gen_mats):
                    h = group.mul(e, s)
                    val = matmul(act[e], m) if rank else []
                    if h in act:
                        if act[h] != val:
                            raise ValueError("matrices violate a group relation")
                    else:
                        act[h] = val
                        nxt.append(h)
            frontier = nxt
        return cls(group, rank, [act[i] for i in range(len(group))])

    @classmethod
    def from_function(cls, group, rank, fn):
        return cls(group, rank, [fn(e) for e in group.elements])

    @classmethod
    def trivial(cls, group, rank=1):
        return cls(group, rank, [identity(rank) for _ in group.elements])

    @classmethod
    def cocharacter(cls, group):
        """N with g acting by its matrix part."""
        return cls.from_function(group, group.n, lambda e: [list(r) for r in e.A])

    @classmethod
    def character(cls, group):
        """M with g acting by the inverse transpose of its matrix part."""
        return cls.from_function(group, group.n,
                                 lambda e: transpose(inverse_unimodular([list(r) for r in e.A])))

    def matrix(self, g):
        return self.action[g]

    def is_valid(self):
        n = len(self.group)
        for i in range(n):
            for j in range(n):
                if matmul(self.action[i], self.action[j]) != self.action[self.group.mul(i, j)]:
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, GLattice) and self.group is other.group
                and self.rank == other.rank and self.action == other.action)


def dual(lat):
    return GLattice(lat.group, lat.rank,
                    [transpose(inverse_unimodular(a)) if lat.rank else [] for a in lat.action])


def tensor(a, b):
    if a.group is not b.group:
        raise GroupMismatch("lattices over different groups")
    return GLattice(a.group, a.rank * b.rank, [kron(x, y) for x, y in zip(a.action, b.action)])


def direct_sum(a, b):
    if a.group is not b.group:
        raise GroupMismatch("lattices over different groups")
    return GLattice(a.group, a.rank + b.rank, [block_diag(x, y) for x, y in zip(a.action, b.action)])


def subgroup_indices(group, sub):
    """Indices in ``group`` of the elements of a subgroup (AffineGroup or index set)."""
    if hasattr(sub, "elements"):
        try:
            return [group.index[e] for e in sub.elements]
        except KeyError:
            raise NotASubgroup("element outside the ambient group") from None
    return sorted(sub)


def restrict(lat, sub):
    """Restriction to a subgroup given as an AffineGroup whose elements lie in lat.group."""
    idx = subgroup_indices(lat.group, sub)
    if not hasattr(sub, "elements"):
        sub = lat.group.as_subgroup(idx)
        idx = subgroup_indices(lat.group, sub)
    return GLattice(sub, lat.rank, [lat.action[i] for i in idx])


def coset_representatives(group, sub_idx):
    """Left coset representatives t with group = union of t*H (t = 0 first)."""
    sub_idx = list(sub_idx)
    covered = set()
    reps = []
    for g in range(len(group)):
        if g in covered:
            continue
        reps.append(g)
        for h in sub_idx:
            covered.add(group.mul(g, h))
    return reps


def induced(lat0, group, sub=None):
    """Ind_H^G of an H-lattice: basis blocks indexed by right cosets Ht, with
    (v (x) t) g = (v h) (x) t' where t g = h t'."""
    h_group = lat0.group
    if sub is None:
        sub = h_group
    h_idx = subgroup_indices(group, sub)
    pos = {gi: k for k, gi in enumerate(h_idx)}  # ambient index -> index in h_group
    local = {k: h_group.index[group.elements[gi]] for k, gi in enumerate(h_idx)}
    reps = _right_coset_reps(group, h_idx)
    m = len(reps)
    r = lat0.rank
    where = {}
    for j, t in enumerate(reps):
        for h in h_idx:
            where[group.mul(h, t)] = (j, h)
    action = []
    for g in range(len(group)):
        big = [[0] * (m * r) for _ in range(m * r)]
        for j, t in enumerate(reps):
            jj, h = where[group.mul(t, g)]
            a = lat0.action[local[pos[h]]]
            for x in range(r):
                for y in range(r):
                    big[j * r + x][jj * r + y] = a[x][y]
        action.append(big)
    return GLattice(group, m * r, action), reps


def _right_coset_reps(group, sub_idx):
    covered = set()
    reps = []
    for g in range(len(group)):
        if g in covered:
            continue
        reps.append(g)
        for h in sub_idx:
            covered.add(group.mul(h, g))
    return reps


def fixed_sublattice(lat):
    """Basis of {v : v g = v for all g}."""
    if lat.rank == 0:
        return []
    cols = []
    for a in lat.action:
        cols.append([[a[i][j] - (i == j) for j in range(lat.rank)] for i in range(lat.rank)])
    big = [sum((c[i] for c in cols), []) for i in range(lat.rank)]
    return left_kernel(big)


def pic_lattice(model, group, dual_=False):
    """Pic(X) (or its dual) of a toric model as a lattice over ``group``
    (acting through matrix parts)."""
    mats = [model.pic_dual_matrix(e.A) if dual_ else model.pic_matrix(e.A) for e in group.elements]
    return GLattice(group, model.pic_rank, mats)
