import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from equitor import catalogue
from equitor.cohomology import (CohomClass, bogomolov, cohomology, qz_is_coboundary, qz_is_cocycle,
                                qz_shift, restrict_class)
from equitor.groups import AffineGroup, GroupElement, MatrixGroup
from equitor.lattice import (GLattice, direct_sum, dual, fixed_sublattice, induced, pic_lattice,
                             restrict, tensor)
from equitor.linalg import identity, left_kernel, vecmat
from equitor.models import build_model
from equitor.obstruction import k9_family_group
from equitor.properties import family_group, random_lattice
from equitor.resolution import (BadParameters, CochainComplex, DegreeOutOfRange, bar_complex,
                                generic_resolution, periodic_resolution)


def cyclic(k):
    return AffineGroup([GroupElement.translation([F(1, k)])])


def sign_lattice(group):
    return GLattice.from_generators(group, [[[-1]]])


def hand_periodic_c2(sign, top=4):
    """0 -> Z -> Z -> ... with maps alternating g - 1 and 1 + g."""
    g = -1 if sign else 1
    d = [[[g - 1]] if i % 2 == 0 else [[1 + g]] for i in range(top)]
    return CochainComplex(d, 1, [1] * (top + 1))


def factors(cx, i):
    return cohomology(cx, i).factors


# ------------------------------------------------------------ lattices

def test_dual_of_cocharacter_is_character():
    g = catalogue.get("K9").group()
    n, m = GLattice.cocharacter(g), GLattice.character(g)
    assert dual(n).action == m.action and m.is_valid()


def test_tensor_and_sum_ranks():
    g = catalogue.get("K9").group()
    pic = pic_lattice(build_model("S"), g)
    assert tensor(GLattice.cocharacter(g), pic).rank == 33
    t = tensor(pic, GLattice.trivial(g))
    assert t.action == pic.action
    assert direct_sum(pic, GLattice.trivial(g)).is_valid()


def test_restrict_to_trivial_subgroup():
    g = catalogue.get("K9").group()
    r = restrict(GLattice.cocharacter(g), [0])
    assert len(r.group) == 1 and r.action == [identity(3)]


def test_induced_from_whole_group_and_index_two():
    g = catalogue.get("K9").group()
    lat = GLattice.cocharacter(g)
    same, _ = induced(lat, g, g)
    assert same.action == lat.action
    c4 = cyclic(4)
    sub = sorted(c4.element_subgroup([2]))
    big, reps = induced(GLattice.trivial(c4.as_subgroup(sub)), c4, sub)
    assert big.rank == 2 and len(reps) == 2 and big.is_valid()
    gen = c4.index[GroupElement.translation([F(1, 4)])]
    assert big.action[gen] == [[0, 1], [1, 0]]


def test_fixed_sublattices():
    g = cyclic(2)
    assert len(fixed_sublattice(GLattice.trivial(g, 3))) == 3
    swap = GLattice.from_generators(g, [[[0, 1], [1, 0]]])
    assert fixed_sublattice(swap) == [[1, 1]]


def test_pic_dp6_full_symmetry_has_rank_one_invariants():
    m = build_model("dP6")
    from equitor.models import model_automorphisms
    g = MatrixGroup(model_automorphisms("dP6"))
    assert len(g) == 12
    assert len(fixed_sublattice(pic_lattice(m, g))) == 1


def test_d4cone_pic_is_trivial_plus_swap():
    m = build_model("D4cone")
    g = catalogue.get("D4tau").group()
    for lat in (pic_lattice(m, g), pic_lattice(m, g, dual_=True)):
        assert lat.rank == 3 and lat.is_valid()
        assert len(fixed_sublattice(lat)) == 2
        traces = sorted({sum(a[i][i] for i in range(3)) for a in lat.action})
        assert traces == [1, 3]


def test_bad_relations_are_rejected():
    g = cyclic(2)
    with pytest.raises(ValueError):
        GLattice.from_generators(g, [[[2]]])


# ------------------------------------------------------------ cohomology

def test_c2_trivial_and_sign_against_hand_resolution():
    g = cyclic(2)
    triv, sign = GLattice.trivial(g), sign_lattice(g)
    for lat, is_sign in ((triv, False), (sign, True)):
        hand = hand_periodic_c2(is_sign)
        gen = generic_resolution(g, top=4).cochain_complex(lat)
        bar = bar_complex(g, lat, 3)
        for i in (1, 2, 3):
            assert factors(gen, i) == factors(hand, i) == factors(bar, i)
    assert factors(hand_periodic_c2(False), 2) == [2]
    assert factors(hand_periodic_c2(True), 1) == [2]


def test_trivial_group_has_no_higher_cohomology():
    g = AffineGroup([], n=1)
    cx = generic_resolution(g, top=3).cochain_complex(GLattice.trivial(g, 2))
    assert all(factors(cx, i) == [] for i in (1, 2, 3))


@pytest.mark.parametrize("fam,n,h1,h2", [("Q", 3, [], [2, 2]), ("D", 3, [], [2, 2])])
def test_periodic_trivial_coefficients(fam, n, h1, h2):
    g, x, y = family_group(fam, n)
    cx = periodic_resolution(g, fam, n, x, y).cochain_complex(GLattice.trivial(g))
    assert factors(cx, 1) == h1 and factors(cx, 2) == h2


def test_sd_periodic_matches_bar():
    g, x, y = family_group("SD", 4)
    lat = GLattice.trivial(g)
    per = periodic_resolution(g, "SD", 4, x, y).cochain_complex(lat)
    bar = bar_complex(g, lat, 2)
    assert [factors(per, i) for i in (1, 2)] == [factors(bar, i) for i in (1, 2)]


def test_bad_periodic_parameters():
    g, x, y = family_group("Q", 3)
    with pytest.raises(BadParameters):
        periodic_resolution(g, "D", 3, x, y)
    with pytest.raises(BadParameters):
        periodic_resolution(g, "Q", 2, x, y)


def test_degree_out_of_range():
    g = cyclic(2)
    cx = generic_resolution(g, top=2).cochain_complex(GLattice.trivial(g))
    with pytest.raises(DegreeOutOfRange):
        cohomology(cx, 5)
    with pytest.raises(DegreeOutOfRange):
        qz_shift(cx, 2, [0] * cx.dim(2))


def test_exact_complex_is_acyclic():
    cx = CochainComplex([[[1]], [[0]]], 1, [1, 1, 1])
    assert factors(cx, 1) == []


def test_restriction_to_trivial_subgroup_kills_classes():
    g = cyclic(4)
    cx = generic_resolution(g, top=3).cochain_complex(GLattice.trivial(g))
    h = cohomology(cx, 2)
    assert h.factors == [4]
    c = CohomClass(cx, 2, h.cocycle_basis[0])
    assert not c.is_zero()
    assert restrict_class(c, [0]).is_zero()


def test_coboundaries_restrict_to_coboundaries():
    g = k9_family_group("D", 3)[0]
    lat = GLattice.cocharacter(g)
    cx = generic_resolution(g, top=3).cochain_complex(lat)
    rng = random.Random(3)
    w = [rng.randint(-3, 3) for _ in range(cx.dim(1))]
    c = CohomClass(cx, 2, vecmat(w, cx.d[1]))
    assert c.is_zero()
    for sub in g.abelian_subgroups():
        assert restrict_class(c, sub).is_zero()


def test_restriction_injective_on_induced_module():
    c4 = cyclic(4)
    sub = sorted(c4.element_subgroup([2]))
    big, _ = induced(GLattice.trivial(c4.as_subgroup(sub)), c4, sub)
    r = bogomolov(c4, big, degree=2, subgroups=[sub])
    assert r.h_factors == [2] and r.vanishes


def test_bogomolov_abelian_is_zero():
    g = catalogue.get("K9").group()
    assert bogomolov(g, pic_lattice(build_model("S"), g, dual_=True), degree=3).vanishes


def test_bogomolov_quaternion_trivial_coefficients():
    g = k9_family_group("Q", 3)[0]
    r = bogomolov(g, GLattice.trivial(g), degree=3)
    assert r.vanishes


def test_bogomolov_with_trivial_subgroup_is_all_of_h():
    g = k9_family_group("D", 3)[0]
    lat = GLattice.trivial(g)
    r = bogomolov(g, lat, degree=3, subgroups=[[0]])
    # H^3(D4, Z) is the Schur multiplier Z/2 shifted by one
    assert r.h_factors == [2] and r.factors == [2]


def test_bogomolov_vanishing_cases():
    from equitor.acceptance import sylow_p_model
    cases = [(catalogue.get("D4iota2theta1").group(), "P1cubed"),
             (catalogue.get("Syl2C").group(), "P1cubed"),
             (sylow_p_model(), "P")]
    for g, name in cases:
        assert len(g.torus_kernel()) == 1
        r = bogomolov(g, pic_lattice(build_model(name), g, dual_=True), degree=3)
        assert r.vanishes


# ------------------------------------------------------------ Q/Z routes

def qz_cocycles(cx, i, modulus):
    """Basis of {y / N : y d_i = 0 mod N}."""
    d = cx.d[i]
    k = len(d[0])
    stacked = [list(r) for r in d] + [[modulus if a == b else 0 for b in range(k)] for a in range(k)]
    return [[F(x, modulus) for x in v[:len(d)]] for v in left_kernel(stacked)]


@given(st.sampled_from([("Q", 3), ("D", 3), ("D", 2)]), st.integers(0, 10 ** 6), st.sampled_from([2, 4]))
@settings(max_examples=25, deadline=None)
def test_mod1_route_matches_integral_route(fam_n, seed, modulus):
    fam, n = fam_n
    rng = random.Random(seed)
    g, x, y = family_group(fam, n)
    lat = random_lattice(g, rng, max_rank=3)
    cx = periodic_resolution(g, fam, n, x, y).cochain_complex(lat)
    basis = qz_cocycles(cx, 2, modulus)
    z = [F(0)] * cx.dim(2)
    for b in basis:
        k = rng.randint(-2, 2)
        z = [a + k * c for a, c in zip(z, b)]
    assert qz_is_cocycle(cx, 2, z)
    assert qz_is_coboundary(cx, 2, z).solvable == qz_shift(cx, 2, z).vanishes


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_d_squared_on_random_lattices(seed):
    rng = random.Random(seed)
    fam, n = rng.choice([("Q", 3), ("D", 3), ("SD", 4), ("Q", 4)])
    g, x, y = family_group(fam, n)
    lat = random_lattice(g, rng)
    assert lat.is_valid()
    assert periodic_resolution(g, fam, n, x, y).cochain_complex(lat).check()
    assert generic_resolution(g, top=3).cochain_complex(lat).check()
