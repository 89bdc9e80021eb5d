import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from equitor import catalogue
from equitor.fans import Fan, FanNotInvariant, is_invariant
from equitor.fixedpoints import (brute_force_fixed_point, condition_A, has_fixed_point,
                                 orbit_fixed_point, stabilized_cones)
from equitor.groups import AffineGroup, GroupElement, MatrixGroup
from equitor.models import build_model, model_from_fan
from equitor.obstruction import (REFERENCE, NotK9, beta, normalize_k9, reproduce_k9_family,
                                 k9_family_group)
from equitor.properties import check_section_independence, small_groups

ETA = [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]
THREEFOLDS = ["P1cubed", "P1xQ", "P2xP1", "P1xP2", "P3", "D4cone", "S", "P", "F"]


def with_torus(name, *torus):
    e = catalogue.get(name)
    gens = [GroupElement.matrix(a) for a in e.generators]
    gens += [GroupElement.translation(t) for t in torus]
    return AffineGroup(gens)


# ------------------------------------------------------------ fixed points

def test_trivial_group_fixes_points():
    m = build_model("S")
    g = AffineGroup([], n=3)
    assert all(orbit_fixed_point(m, g.elements, c) is not None for c in m.fan.cones[:5])


def test_p1_inversion_with_half_translation():
    p1 = model_from_fan(Fan(1, [(1,), (-1,)], [(0,), (1,)]), "P1")
    g = AffineGroup([GroupElement.make([F(1, 2)], [[-1]])])
    fp = orbit_fixed_point(p1, g.elements, ())
    assert fp is not None
    assert brute_force_fixed_point(p1, g.elements, (), 4) is not None
    assert (fp.point[0] * -2 + F(1, 2)).denominator == 1


def test_theta2_with_translation_has_no_fixed_point():
    g = with_torus("theta2", (F(1, 2), 0, 0))
    assert g.is_abelian()
    m = build_model("P1xQ")
    assert all(orbit_fixed_point(m, g.elements, c) is None for c in stabilized_cones(m, g.elements))
    assert has_fixed_point(m, g) is None


def test_condition_a_examples():
    assert not condition_A(build_model("P1cubed"), with_torus("iota1", (0, F(1, 2), 0))).holds
    for t in [(), ((F(1, 2), 0, 0),), ((F(1, 2), F(1, 2), F(1, 2)),)]:
        assert condition_A(build_model("P1cubed"), with_torus("iota3", *t)).holds
    assert condition_A(build_model("S"), k9_family_group("D", 3)[0]).holds


def test_eta_with_even_torus_part_fails_condition_a():
    m = build_model("P1cubed")
    assert condition_A(m, MatrixGroup([ETA])).holds
    for t in [(F(1, 2), 0, 0), (F(1, 4), F(1, 2), 0), (F(1, 2), F(1, 2), F(1, 2))]:
        r = condition_A(m, with_torus("eta", t))
        assert not r.holds and r.witness is not None


def test_eta_with_odd_torus_part_keeps_condition_a():
    assert condition_A(build_model("P1cubed"), with_torus("eta", (F(1, 3), 0, 0))).holds


def test_condition_a_rejects_non_invariant_model():
    with pytest.raises(FanNotInvariant):
        condition_A(build_model("P3"), MatrixGroup([ETA]))


_POOL = small_groups(16, ["eta", "iota1", "iota3", "K1", "D4iota2theta1"], (1, 2), 2)


@given(st.sampled_from(_POOL))
@settings(max_examples=25, deadline=None)
def test_condition_a_is_model_independent(g):
    verdicts = {name: condition_A(build_model(name), g).holds for name in THREEFOLDS
                if is_invariant(build_model(name).fan, g)[0]}
    assert len(verdicts) >= 2
    assert len(set(verdicts.values())) == 1


# ------------------------------------------------------------ beta

def test_k9_family_q4():
    r = reproduce_k9_family("Q", 4)
    assert r.verdict == "NonVanishing"
    assert r.integral == REFERENCE["Q_beta"] == [-1, 0, 1, 0, 0, 0, -1, 0, 0, 1, 0]
    assert r.extra["image_matches_reference"] and r.extra["reference_in_image"]


def test_k9_family_stage1_matches_reference_pair():
    r = reproduce_k9_family("Q", 4)
    for got, want in zip(r.stage1, REFERENCE["stage1"]):
        full = [list(want.get(k + 1, (0, 0, 0))) for k in range(11)]
        assert got == full


@pytest.mark.parametrize("n", [3, 4, 5])
def test_k9_family_dihedral_has_odd_entries(n):
    r = reproduce_k9_family("D", n)
    assert r.verdict == "NonVanishing"
    blk = r.extra["beta_blocks"][1]
    assert blk[1] % 2 == 1 and blk[3] % 2 == 1
    assert r.extra["beta_support"] == [2] and r.extra["beta_outside_component"]


@pytest.mark.parametrize("fam,n", [("Q", 3), ("Q", 5), ("SD", 4), ("SD", 5)])
def test_k9_family_nonvanishing(fam, n):
    r = reproduce_k9_family(fam, n)
    assert r.verdict == "NonVanishing"
    assert r.route_qz == r.route_integral


def test_sd_beta_first_component():
    r = reproduce_k9_family("SD", 4)
    assert r.extra["beta_blocks"][0][:10] == REFERENCE["SD_beta_first"]


def test_dihedral_witness_beta_on_s():
    g = k9_family_group("D", 3)[0]
    assert beta(build_model("S"), g).verdict == "NonVanishing"


def test_trivial_and_fixed_point_groups_vanish():
    m = build_model("P1cubed")
    assert beta(m, AffineGroup([], n=3)).vanishes
    g = with_torus("iota3", (F(1, 2), F(1, 2), 0))
    assert has_fixed_point(m, g) is not None
    assert beta(m, g).vanishes


def test_d4_on_p_vanishes():
    from equitor.acceptance import sylow_p_model
    from equitor.classifier import select_model
    big = sylow_p_model()
    d4 = next(big.as_subgroup(s) for s in big.all_subgroups()
              if len(s) == 8 and not big.as_subgroup(s).is_abelian())
    m = build_model("P")
    assert condition_A(m, d4).holds
    assert beta(m, d4).vanishes
    assert select_model(d4) is not None


def test_beta_rejects_non_invariant_model():
    with pytest.raises(FanNotInvariant):
        beta(build_model("P3"), MatrixGroup([ETA]))


def test_normalize_dihedral_witness():
    k = normalize_k9(k9_family_group("D", 3)[0])
    assert (k.b2, k.c2, k.c3, k.family, k.n) == (F(1, 2), 0, 0, "D", 3)


@pytest.mark.parametrize("fam,n", [("Q", 3), ("Q", 4), ("Q", 5), ("D", 4), ("SD", 4), ("SD", 5)])
def test_normalize_recovers_family(fam, n):
    k = normalize_k9(k9_family_group(fam, n)[0])
    assert (k.family, k.n) == (fam, n)
    # b2 has order 2^(n-2)
    assert k.b2.denominator == 2 ** (n - 2)


def test_normalize_rejects_other_klein_groups():
    with pytest.raises(NotK9):
        normalize_k9(catalogue.get("K1").group())


@pytest.mark.parametrize("seed", range(4))
def test_section_independence(seed):
    rng = random.Random(seed)
    g = rng.choice([k9_family_group("Q", 3)[0], k9_family_group("D", 3)[0], with_torus("K9")])
    from equitor.classifier import select_model
    assert check_section_independence(select_model(g), g, rng)
