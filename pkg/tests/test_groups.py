from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from equitor import catalogue
from equitor.conjugacy import (Conjugate, NotConjugate, census,
                               contains_conjugate_subgroup, glnz_conjugate, verify_witness)
from equitor.groups import AffineGroup, CapExceeded, GroupElement, MatrixGroup, torsion_subgroups
from equitor.linalg import det, inverse_unimodular, matmul
from equitor.obstruction import k9_family_group
from equitor.properties import random_unimodular

ETA = [[-1, 0, 0], [0, -1, 0], [0, 0, -1]]


def dihedral_witness():
    return k9_family_group("D", 3)[0]


def test_eta_has_order_two():
    assert len(MatrixGroup([ETA])) == 2


def test_k9_is_klein_four():
    g = catalogue.get("K9").group()
    assert len(g) == 4 and g.is_abelian()
    assert sorted(g.orders) == [1, 2, 2, 2]


def test_dihedral_witness_is_dihedral_of_order_8():
    g = dihedral_witness()
    assert len(g) == 8 and not g.is_abelian()
    assert sorted(g.orders) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_dihedral_witness_torus_part():
    gt = dihedral_witness().torus_kernel()
    assert len(gt) == 2
    assert {e.s for e in gt.elements} == {(0, 0, 0), (F(1, 2), F(1, 2), F(1, 2))}


def test_torus_and_image_of_trivial_parts():
    assert len(catalogue.get("K9").group().torus_kernel()) == 1
    t = AffineGroup([GroupElement.translation([F(1, 4), 0, 0])])
    assert len(t) == 4 and len(t.image()) == 1


def test_abelian_subgroups_of_cyclic_group():
    g = AffineGroup([GroupElement.translation([F(1, 6), 0, 0])])
    assert len(g.abelian_subgroups()) == 4


def test_quaternion_abelian_subgroups():
    g = k9_family_group("Q", 3)[0]
    assert len(g) == 8
    assert sorted(len(a) for a in g.abelian_subgroups()) == [1, 2, 4, 4, 4]


def test_dihedral_witness_klein_subgroups_map_onto_c2():
    g = dihedral_witness()
    kleins = [a for a in g.abelian_subgroups() if len(a) == 4
              and all(g.orders[i] <= 2 for i in a)]
    assert len(kleins) == 2
    for a in kleins:
        assert len({g.elements[i].A for i in a}) == 2


def test_sylow():
    g = dihedral_witness()
    assert len(g.sylow(2)) == 8 and len(g.sylow(5)) == 1
    # cyclic permutation of coordinates over the Klein group of even translations: order 12
    cyc = GroupElement.matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    h = AffineGroup([cyc, GroupElement.translation([F(1, 2), F(1, 2), 0])])
    assert len(h) == 12
    assert len(h.sylow(3)) == 3 and len(h.sylow(2)) == 4


def test_cap_exceeded(monkeypatch):
    monkeypatch.setenv("EQUITOR_MAX_ORDER", "4")
    with pytest.raises(CapExceeded):
        AffineGroup([GroupElement.translation([F(1, 8), 0, 0])])


def test_torsion_subgroup_counts():
    # subgroups of (Z/p)^3: 1 + 7 + 7 + 1 for p = 2, 1 + 13 + 13 + 1 for p = 3
    assert len(torsion_subgroups(3, 2)) == 16
    assert len(torsion_subgroups(3, 3)) == 28
    assert len(torsion_subgroups(2, 4)) == 15


def test_group_json_round_trip():
    g = dihedral_witness()
    h = AffineGroup.from_json(g.to_json())
    assert set(h.elements) == set(g.elements)


def test_iota3_iota4_not_conjugate():
    r = glnz_conjugate(catalogue.get("iota3").group(), catalogue.get("iota4").group())
    assert isinstance(r, NotConjugate)


def test_k1_k2_not_conjugate():
    r = glnz_conjugate(catalogue.get("K1").group(), catalogue.get("K2").group())
    assert isinstance(r, NotConjugate)


@pytest.mark.parametrize("name", ["K9", "theta2", "D4tau", "C3rot"])
def test_conjugate_by_random_unimodular(name):
    import random
    rng = random.Random(name)
    h = catalogue.get(name).group()
    u = random_unimodular(rng, 3)
    ui = inverse_unimodular(u)
    h2 = MatrixGroup([matmul(matmul(ui, [list(r) for r in a]), u) for a in h.matrix_parts()])
    r = glnz_conjugate(h, h2)
    assert isinstance(r, Conjugate)
    assert abs(det(r.witness)) == 1 and verify_witness(h, h2, r.witness)


def test_contains_conjugate_subgroup():
    k9 = catalogue.get("K9")
    assert contains_conjugate_subgroup(k9.group(), k9)
    assert not contains_conjugate_subgroup(catalogue.get("iota1").group(), k9)
    assert contains_conjugate_subgroup(dihedral_witness().image(), k9)


def test_census_counts_and_certificates():
    res = census()
    assert {k: len(v["classes"]) for k, v in res.items()} == {"C2": 4, "C4": 4, "C2^2": 9, "D4": 8}
    for v in res.values():
        assert all(isinstance(c, NotConjugate) for c in v["certificates"].values())


@given(st.sampled_from(catalogue.names()), st.data())
@settings(max_examples=40, deadline=None)
def test_right_action_and_homomorphism(name, data):
    g = catalogue.get(name).group()
    i = data.draw(st.integers(0, len(g) - 1))
    j = data.draw(st.integers(0, len(g) - 1))
    den = data.draw(st.integers(1, 8))
    u = tuple(F(data.draw(st.integers(0, den - 1)), den) for _ in range(g.n))
    a, b = g.elements[i], g.elements[j]
    ab = g.elements[g.mul(i, j)]
    assert b.act(a.act(u)) == ab.act(u)
    assert ab.A == tuple(tuple(r) for r in matmul([list(r) for r in a.A], [list(r) for r in b.A]))
