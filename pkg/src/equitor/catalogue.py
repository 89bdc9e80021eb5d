"""Named finite subgroups of GL_2(Z) and GL_3(Z) used by the classifier."""

from dataclasses import dataclass

from .groups import MatrixGroup


@dataclass(frozen=True)
class CatalogueEntry:
    name: str
    n: int
    generators: tuple
    note: str = ""
    model: str = ""

    def group(self, cap=None):
        return MatrixGroup([list(map(list, g)) for g in self.generators], cap=cap) \
            if self.generators else _trivial(self.n)

    def to_json(self):
        return {"name": self.name, "n": self.n,
                "generators": [[list(r) for r in g] for g in self.generators],
                "note": self.note, "model": self.model}


def _trivial(n):
    from .groups import AffineGroup
    return AffineGroup([], n=n)


def _t(*mats):
    return tuple(tuple(tuple(r) for r in m) for m in mats)


ETA = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))

_ENTRIES = [
    # involutions
    CatalogueEntry("eta", 3, _t(ETA), "central inversion", "P1cubed"),
    CatalogueEntry("iota1", 3, _t([[1, 0, 0], [0, -1, 0], [0, 0, -1]]), "order 2", "P1cubed"),
    CatalogueEntry("iota2", 3, _t([[1, 0, 0], [0, 1, 0], [0, 0, -1]]), "order 2", "P2xP1"),
    CatalogueEntry("iota3", 3, _t([[0, 1, 0], [1, 0, 0], [0, 0, 1]]), "order 2", "P2xP1"),
    CatalogueEntry("iota4", 3, _t([[0, 1, 0], [1, 0, 0], [0, 0, -1]]), "order 2", "P2xP1"),
    # order 4
    CatalogueEntry("theta1", 3, _t([[1, 0, 0], [0, 0, 1], [0, -1, 0]]), "C4", "P1xQ"),
    CatalogueEntry("theta2", 3, _t([[-1, 0, 0], [0, 0, 1], [0, -1, 0]]), "C4", "P1xQ"),
    CatalogueEntry("theta3", 3, _t([[-1, -1, -1], [1, 0, 0], [0, 1, 0]]), "C4", "P3"),
    CatalogueEntry("theta4", 3, _t([[1, 1, 1], [-1, 0, 0], [0, -1, 0]]), "C4", "S"),
    # Klein four groups without eta
    CatalogueEntry("K1", 3, _t([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [[-1, 0, 0], [0, 1, 0], [0, 0, -1]]),
                   "C2^2", "P1cubed"),
    CatalogueEntry("K2", 3, _t([[1, 0, 0], [0, 1, 0], [0, 0, -1]], [[-1, 0, 0], [0, 1, 0], [0, 0, -1]]),
                   "C2^2", "P1cubed"),
    CatalogueEntry("K3", 3, _t([[1, 0, 0], [0, -1, 0], [0, 0, 1]], [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
                   "C2^2", "P1xQ"),
    CatalogueEntry("K4", 3, _t([[-1, 0, 0], [0, 1, 0], [0, 0, -1]], [[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
                   "C2^2", "P1xQ"),
    CatalogueEntry("K5", 3, _t([[-1, 0, 0], [0, 1, 0], [0, 0, -1]], [[0, 0, 1], [0, -1, 0], [1, 0, 0]]),
                   "C2^2", "P1xQ"),
    CatalogueEntry("K6", 3, _t([[0, 0, 1], [-1, -1, -1], [1, 0, 0]], [[-1, -1, -1], [0, 0, 1], [0, 1, 0]]),
                   "C2^2", "P3"),
    CatalogueEntry("K7", 3, _t([[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [-1, -1, -1]]),
                   "C2^2", "P3"),
    CatalogueEntry("K8", 3, _t([[1, 1, 1], [0, 0, -1], [0, -1, 0]], [[0, 0, 1], [-1, -1, -1], [1, 0, 0]]),
                   "C2^2", "D4cone"),
    CatalogueEntry("K9", 3, _t([[0, 1, -1], [1, 0, -1], [0, 0, -1]], [[-1, 0, 0], [-1, 0, 1], [-1, 1, 0]]),
                   "C2^2, exceptional", "S"),
    # dihedral group stabilizing the 6-ray fan
    CatalogueEntry("D4tau", 3, _t([[1, 0, 0], [-1, -1, -1], [0, 0, 1]], [[1, 1, 1], [-1, 0, 0], [0, -1, 0]]),
                   "D4 = <tau1, tau2>", "D4cone"),
    CatalogueEntry("D4iota2theta1", 3, _t([[1, 0, 0], [0, 1, 0], [0, 0, -1]], [[1, 0, 0], [0, 0, 1], [0, -1, 0]]),
                   "D4 = <iota2, theta1>", "P1cubed"),
    # 3-groups
    CatalogueEntry("C3perm", 3, _t([[0, 1, 0], [0, 0, 1], [1, 0, 0]]), "C3", "P3"),
    CatalogueEntry("C3rot", 3, _t([[1, 0, 0], [0, -1, -1], [0, 1, 0]]), "C3", "P1xP2"),
    # 2-Sylow subgroups of the maximal classes
    CatalogueEntry("Syl2C", 3, _t([[0, 0, 1], [0, 1, 0], [-1, 0, 0]], ETA, [[-1, 0, 0], [0, 1, 0], [0, 0, 1]]),
                   "C2 x D4", "P1cubed"),
    CatalogueEntry("Syl2SP", 3, _t([[0, 0, 1], [-1, -1, -1], [1, 0, 0]], ETA, [[1, 0, 0], [0, 1, 0], [-1, -1, -1]]),
                   "C2 x D4", "S"),
    # groups whose Picard lattice is not stably permutation
    CatalogueEntry("BadC2xC4", 3, _t([[0, 1, 0], [0, 0, 1], [-1, -1, -1]], ETA), "C2 x C4", "P"),
    CatalogueEntry("BadC2cubed", 3, _t([[0, 0, 1], [-1, -1, -1], [1, 0, 0]],
                                       [[-1, -1, -1], [0, 0, 1], [0, 1, 0]], ETA), "C2^3", "P"),
    # surfaces
    CatalogueEntry("s_iota1", 2, _t([[-1, 0], [0, -1]]), "order 2", "P1xP1"),
    CatalogueEntry("s_iota2", 2, _t([[-1, 0], [0, 1]]), "order 2", "P1xP1"),
    CatalogueEntry("s_iota3", 2, _t([[0, 1], [1, 0]]), "order 2", "P1xP1"),
    CatalogueEntry("s_D4", 2, _t([[-1, 0], [0, 1]], [[0, 1], [1, 0]]), "D4", "P1xP1"),
    CatalogueEntry("s_D6", 2, _t([[0, -1], [1, 1]], [[0, 1], [1, 0]]), "D6", "dP6"),
    CatalogueEntry("s_C3", 2, _t([[0, -1], [1, -1]]), "C3", "P2"),
    CatalogueEntry("s_S3", 2, _t([[0, -1], [1, -1]], [[0, 1], [1, 0]]), "S3", "dP6"),
]

CATALOGUE = {e.name: e for e in _ENTRIES}

INVOLUTIONS = ["iota1", "iota2", "iota3", "iota4"]
C4_CLASSES = ["theta1", "theta2", "theta3", "theta4"]
KLEIN_CLASSES = [f"K{i}" for i in range(1, 10)]
BAD_SL = ["K9", "BadC2xC4", "BadC2cubed"]


def get(name):
    try:
        return CATALOGUE[name]
    except KeyError:
        raise KeyError(f"unknown catalogue entry {name!r}") from None


def names(n=None):
    return [e.name for e in _ENTRIES if n is None or e.n == n]
