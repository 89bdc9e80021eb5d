import pytest

from equitor import catalogue
from equitor.classifier import select_model
from equitor.fans import (ConeNotStabilized, Fan, MalformedFan, RayOutsideSupport, is_complete,
                          is_invariant, is_smooth, quotient_fan, star_subdivide)
from equitor.linalg import smith_form
from equitor.models import build_model, model_automorphisms, model_from_fan, model_names


def p2():
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_p3_smooth_complete():
    f = build_model("P3").fan
    assert len(f.rays) == 4 and len(f.maximal) == 4
    assert is_smooth(f) and is_complete(f)


@pytest.mark.parametrize("name,rays,two,three,pic", [("S", 14, 36, 24, 11), ("P", 18, 48, 32, 15)])
def test_named_model_counts(name, rays, two, three, pic):
    m = build_model(name)
    c = m.fan.counts()
    assert (c[1], c[2], c[3]) == (rays, two, three)
    assert sum(c.values()) == 1 + rays + two + three
    assert m.pic_rank == pic
    assert is_smooth(m.fan) and is_complete(m.fan)


def test_s_embedding_has_unit_divisors():
    m = build_model("S")
    assert len(m.embedding) == 3 and len(m.embedding[0]) == 14
    assert smith_form(m.embedding).diagonal == [1, 1, 1]


def test_d4cone():
    m = build_model("D4cone")
    assert len(m.fan.rays) == 6 and len(m.fan.maximal) == 8 and is_smooth(m.fan)
    assert is_invariant(m.fan, catalogue.get("D4tau").group())[0]


@pytest.mark.parametrize("name", model_names())
def test_every_model_smooth_complete(name):
    m = build_model(name)
    assert is_smooth(m.fan) and is_complete(m.fan)
    c = m.fan.counts()
    euler = sum((-1) ** (k + 1) * c[k] for k in range(1, m.fan.n + 1))
    # boundary of the sphere: 2 in dimension 3, 0 for the circle
    assert euler == (2 if m.fan.n == 3 else 0)
    assert m.pic_rank == len(m.fan.rays) - m.fan.n


def test_catalogue_models_are_invariant():
    # some representatives only stabilize their model after a GL_n(Z) conjugation
    for name in catalogue.names():
        e = catalogue.get(name)
        if e.model:
            m = select_model(e.group(), [e.model])
            assert is_invariant(m.fan, e.group())[0], name
            assert is_smooth(m.fan) and is_complete(m.fan)


def test_automorphisms_preserve_fan():
    for name in ("S", "P"):
        m = build_model(name)
        assert len(model_automorphisms(name)) == 48
        for a in model_automorphisms(name):
            assert m.perm(a) is not None


def test_p3_invariant_under_coordinate_swap():
    assert is_invariant(build_model("P3").fan, catalogue.get("iota3").group())[0]


def test_nonsmooth_and_incomplete():
    bad = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    assert not is_smooth(bad)
    half = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    assert is_smooth(half) and not is_complete(half)


def test_malformed_fans():
    with pytest.raises(MalformedFan):
        Fan(2, [(2, 0), (0, 1)], [(0, 1)])
    with pytest.raises(MalformedFan):
        Fan(2, [(1, 0), (0, 1)], [(0, 5)])
    with pytest.raises(MalformedFan):
        Fan.from_text("ray 1 0\ncone 1\n")


def test_text_round_trip():
    f = build_model("S").fan
    g = Fan.from_text(f.to_text())
    assert g.rays == f.rays and g.maximal == f.maximal
    assert f.to_text().splitlines()[-1].startswith("cone ")


def test_star_subdivide_p2():
    f = star_subdivide(p2(), (1, 1))
    assert len(f.maximal) == 4 and is_smooth(f) and is_complete(f)
    with pytest.raises(MalformedFan):
        star_subdivide(p2(), (1, 0))


def test_star_subdivide_outside_support():
    half = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
    with pytest.raises(RayOutsideSupport):
        star_subdivide(half, (-1, -1))


def test_four_point_blowup_of_p3():
    f = build_model("P3").fan
    for r in [(1, 1, 1), (0, 0, -1), (0, -1, 0), (-1, 0, 0)]:
        f = star_subdivide(f, r)
    # each point blowup trades one maximal cone for three
    assert len(f.rays) == 8 and len(f.maximal) == 12
    assert is_smooth(f) and is_complete(f)


def test_point_and_line_blowups_reproduce_s_counts():
    f = build_model("P3").fan
    for r in [(1, 1, 1), (0, 0, -1), (0, -1, 0), (-1, 0, 0),
              (1, 1, 0), (1, 0, 1), (0, 1, 1), (-1, -1, 0), (-1, 0, -1), (0, -1, -1)]:
        f = star_subdivide(f, r)
        assert is_smooth(f)
    c, s = f.counts(), build_model("S").fan.counts()
    assert c == s and (c[1], c[2], c[3]) == (14, 36, 24)


def test_quotient_at_invariant_ray_is_p1xp1():
    m = build_model("D4cone")
    g = catalogue.get("D4tau").group()
    q = quotient_fan(m.fan, (0,), g).fan
    assert len(q.rays) == 4 and len(q.maximal) == 4 and is_smooth(q) and is_complete(q)
    assert sorted(q.rays) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1)])
    with pytest.raises(ConeNotStabilized):
        quotient_fan(m.fan, (4,), g)


def test_quotient_trivial_cases():
    f = build_model("P3").fan
    assert quotient_fan(f, ()).fan.maximal == f.maximal
    pt = quotient_fan(f, f.maximal[0]).fan
    assert pt.n == 0 and pt.rays == []


def test_transform_keeps_conjugated_group_invariant():
    from equitor.groups import MatrixGroup
    from equitor.linalg import inverse_unimodular, matmul
    m = build_model("D4cone")
    x = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    xi = inverse_unimodular(x)
    g = MatrixGroup([matmul(matmul(x, [list(r) for r in a]), xi)
                     for a in catalogue.get("D4tau").group().matrix_parts()])
    assert is_invariant(m.transform(x).fan, g)[0]
    assert not is_invariant(m.fan, g)[0]


def test_model_from_fan_p1():
    m = model_from_fan(Fan(1, [(1,), (-1,)], [(0,), (1,)]), "P1")
    assert m.pic_rank == 1
