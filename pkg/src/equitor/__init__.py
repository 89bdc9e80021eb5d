"""Equivariant unirationality and stable linearizability of torus actions in small dimensions."""

__version__ = "0.1.0"

from .groups import AffineGroup, CapExceeded, GroupElement, MatrixGroup
from .fans import Fan, FanNotInvariant, MalformedFan
from .models import build_model, model_names
from .lattice import GLattice, pic_lattice
from .cohomology import bogomolov, cohomology
from .conjugacy import census, glnz_conjugate
from .fixedpoints import condition_A, has_fixed_point
from .obstruction import beta, k9_family_group, normalize_k9, reproduce_k9_family
from .classifier import Verdict, classify, select_model, sweep

__all__ = [
    "AffineGroup", "CapExceeded", "GroupElement", "MatrixGroup",
    "Fan", "FanNotInvariant", "MalformedFan",
    "build_model", "model_names",
    "GLattice", "pic_lattice",
    "bogomolov", "cohomology",
    "census", "glnz_conjugate",
    "condition_A", "has_fixed_point",
    "beta", "k9_family_group", "normalize_k9", "reproduce_k9_family",
    "Verdict", "classify", "select_model", "sweep",
]
