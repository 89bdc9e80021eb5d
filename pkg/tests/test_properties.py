import random
from functools import lru_cache

from hypothesis import HealthCheck, given, settings, strategies as st

from equitor import catalogue
from equitor.classifier import select_model
from equitor.properties import (FAMILIES, check_d_squared, check_fixed_point_vs_brute,
                                check_induced_injectivity, check_model_action,
                                check_periodic_vs_bar, check_right_action, check_sylow_locality,
                                family_group, fixed_point_instances, lattice_pieces, mixed_groups,
                                normal_cyclic_quotients, random_lattice, run_all, small_groups)
from equitor.resolution import generic_resolution, periodic_resolution

SEEDS = st.integers(0, 2 ** 32 - 1)
SLOW = settings(max_examples=12, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@lru_cache(None)
def sylow_pool():
    return mixed_groups(24)


@lru_cache(None)
def induced_pool():
    return [g for g in small_groups(16, ["K2", "K9", "theta1", "D4tau", "iota4"], (1, 2), 2)
            if len(g) >= 4]


@lru_cache(None)
def fixed_point_pool():
    groups = small_groups(16, ["iota1", "iota4", "K2", "K9", "theta4", "C3rot"], (1, 2), 2)
    return fixed_point_instances(groups, select_model)


@given(st.sampled_from(FAMILIES + [("Q", 4), ("SD", 5)]), SEEDS)
@SLOW
def test_d_squared(fam_n, seed):
    fam, n = fam_n
    g, x, y = family_group(fam, n)
    lat = random_lattice(g, random.Random(seed))
    assert check_d_squared(periodic_resolution(g, fam, n, x, y), lat)
    assert check_d_squared(generic_resolution(g, 3), lat)


@given(st.sampled_from(catalogue.names()), SEEDS)
@settings(max_examples=30, deadline=None)
def test_right_action_and_pic_action(name, seed):
    g = catalogue.get(name).group()
    assert check_right_action(g, random.Random(seed))
    if g.n == 3:
        assert check_model_action(select_model(g), g)


@given(st.sampled_from(FAMILIES), SEEDS)
@SLOW
def test_periodic_matches_bar_and_generic(fam_n, seed):
    fam, n = fam_n
    pieces = lattice_pieces(family_group(fam, n)[0])
    assert check_periodic_vs_bar(fam, n, lambda grp: random_lattice(grp, random.Random(seed), 4, pieces))


@given(st.data())
@SLOW
def test_sylow_locality(data):
    g = data.draw(st.sampled_from(sylow_pool()))
    assert check_sylow_locality(select_model(g), g)


@given(st.data(), SEEDS)
@SLOW
def test_restriction_injective_on_induced(data, seed):
    rng = random.Random(seed)
    g = data.draw(st.sampled_from(induced_pool()))
    sub = data.draw(st.sampled_from(normal_cyclic_quotients(g)))
    lat0 = random_lattice(g.as_subgroup(sub), rng, max_rank=2)
    assert check_induced_injectivity(g, sub, lat0)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_fixed_point_matches_brute_force(data):
    model, els, cone = data.draw(st.sampled_from(fixed_point_pool()))
    assert check_fixed_point_vs_brute(model, els, cone) is not False


def test_run_all_small():
    res = run_all(random.Random(1), 3)
    assert res and all(v["ok"] for v in res.values()), res
