"""Generated graph families and the anti-tree reduction."""

import math

import pytest

from sclab.families import (
    FamilySpec,
    anti_tree,
    anti_tree_reduction,
    birth_death,
    generate,
    lattice,
    lattice_origin,
    random_graph,
    random_tree,
    sphere_sizes,
)
from sclab.graph import ball_window, full_window, validate
from sclab.completeness import incompleteness_defect


def test_birth_death_weights():
    g = birth_death(2.0)
    assert list(g.neighbors(0)) == [(1, 1.0)]
    assert list(g.neighbors(3)) == [(2, 9.0), (4, 16.0)]
    assert g.mu(7) == 1.0
    w = ball_window(g, None, 0, 5.0)
    assert validate(g, w) == []


def test_sphere_sizes():
    assert sphere_sizes(2.0, 4) == [1, 1, 4, 9, 16]
    assert sphere_sizes(1.5, 3) == [1, 1, math.ceil(2 ** 1.5), math.ceil(3 ** 1.5)]
    assert sphere_sizes(0.0, 2) == [1, 1, 1]


def test_anti_tree_structure():
    g = anti_tree(2.0, depth_cap=5)
    # spheres 1,1,4,9,16,25 at offsets 0,1,2,6,15,31
    assert [y for y, _ in g.neighbors(0)] == [1]
    n1 = [y for y, _ in g.neighbors(1)]
    assert n1 == [0, 2, 3, 4, 5]
    # all of sphere 2 sees all of spheres 1 and 3
    n2 = [y for y, _ in g.neighbors(3)]
    assert n2 == [1] + list(range(6, 15))
    w = ball_window(g, None, 0, 3.0)
    assert validate(g, w) == []
    with pytest.raises(KeyError):
        g.neighbors(10 ** 9)


def test_anti_tree_rejects_negative_exponent():
    with pytest.raises(ValueError):
        anti_tree(-1.0)


def test_anti_tree_local_finiteness_guard():
    g = anti_tree(3.0, depth_cap=60, max_degree=1000)
    with pytest.raises(RuntimeError, match="local-finiteness"):
        ball_window(g, None, 0, 50.0)


def test_anti_tree_reduction_values():
    mu_eff, om_eff = anti_tree_reduction(2.0)
    assert mu_eff(0) == 1.0
    assert mu_eff(3) == 9.0
    assert om_eff(0) == 1.0          # 1 * 1
    assert om_eff(2) == 4.0 * 9.0


def test_anti_tree_reduction_matches_graph_resolvent():
    # collapsing spheres is exact for radially symmetric problems: the
    # deficiency at the root agrees between graph and reduced chain
    a = 2.0
    g = anti_tree(a)
    graph_prof = incompleteness_defect(g, None, 0, 1.0, radii=(5, 6))

    from sclab.graph import WeightedGraph
    mu_eff, om_eff = anti_tree_reduction(a)

    def source(k):
        out = []
        if k > 0:
            out.append((k - 1, om_eff(k - 1)))
        out.append((k + 1, om_eff(k)))
        return out

    chain = WeightedGraph(source, lambda k: mu_eff(k))
    chain_prof = incompleteness_defect(chain, None, 0, 1.0, radii=(5, 6))
    for gd, cd in zip(graph_prof.deficiency, chain_prof.deficiency):
        assert gd == pytest.approx(cd, abs=1e-12)


def test_random_graph_deterministic_and_bounded():
    g1 = random_graph(30, 0.2, seed=5)
    g2 = random_graph(30, 0.2, seed=5)
    assert g1.vertex_ids == g2.vertex_ids
    for x in g1.vertex_ids:
        assert list(g1.neighbors(x)) == list(g2.neighbors(x))
        assert 0.5 <= g1.mu(x) <= 2.0
        for _, w in g1.neighbors(x):
            assert 0.5 <= w <= 2.0
    assert validate(g1, full_window(g1)) == []
    assert random_graph(30, 0.2, seed=6).vertex_ids != () and \
        any(list(random_graph(30, 0.2, seed=6).neighbors(x)) != list(g1.neighbors(x))
            for x in g1.vertex_ids)


def test_random_graph_single_component():
    g = random_graph(40, 0.1, seed=2)
    w = ball_window(g, None, g.vertex_ids[0], 1e9, cap=10_000)
    assert len(w) == len(g.vertex_ids)


def test_random_graph_input_validation():
    with pytest.raises(ValueError):
        random_graph(0, 0.5)


def test_lattice_neighbors():
    g = lattice()
    o = lattice_origin()
    nbrs = [y for y, _ in g.neighbors(o)]
    assert len(nbrs) == 4
    assert o not in nbrs
    # ball volumes follow |B_r| = 2r^2 + 2r + 1
    w = ball_window(g, None, o, 3.0)
    assert len(w) == 2 * 9 + 2 * 3 + 1


def test_random_tree_is_tree():
    g = random_tree(50, seed=4)
    assert len(g.vertex_ids) == 50
    edges = sum(len(g.neighbors(x)) for x in g.vertex_ids) // 2
    assert edges == 49
    w = ball_window(g, None, 0, 1e9, cap=1000)
    assert len(w) == 50   # connected
    assert validate(g, full_window(g)) == []


def test_family_spec_generate():
    g = generate(FamilySpec("birth_death", {"alpha": 3.0}))
    assert list(g.neighbors(1)) == [(0, 1.0), (2, 8.0)]
    t = generate(FamilySpec("random_tree", {"n": 10, "seed": 1}))
    assert len(t.vertex_ids) == 10
    lat = generate(FamilySpec("lattice"))
    assert len(lat.neighbors(lattice_origin())) == 4
    with pytest.raises(ValueError, match="unknown family kind"):
        FamilySpec("moebius")
    with pytest.raises(ValueError, match="graph file"):
        generate(FamilySpec("file"))
