import random

import pytest

from omegatrans.fixtures import (
    domain_words,
    mirror_sst,
    output_graph_demo_sst,
    random_copyless_sst,
    settling_loops_sst,
)
from omegatrans.outputgraph import (
    IN,
    OUT,
    OutputGraph,
    build_output_graph,
    in_out_value,
)
from omegatrans.sst import FlowCache, NotInDomain, path_conditions, values_after
from omegatrans.words import UPWord


def reach_closure(graph):
    """Plain BFS descendants of every node, reflexively."""
    reach = {}
    for start in graph.nodes:
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in graph.out_edges(u):
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        reach[start] = seen
    return reach


def test_add_edge_dedupes_and_rejects_conflicts():
    g = OutputGraph(UPWord("", "a"), 0)
    u = ("X", 0, IN)
    v = ("X", 0, OUT)
    g.add_edge(u, v, "a")
    g.add_edge(u, v, "a")
    assert g.out_edges(u) == {v: "a"}
    with pytest.raises(ValueError, match="not 1-bounded"):
        g.add_edge(u, v, "b")


def test_build_requires_one_bounded_machine():
    t = settling_loops_sst()
    with pytest.raises(ValueError, match="1-bounded"):
        build_output_graph(t, UPWord("", "ab"), 6)


def test_build_requires_domain_word():
    t = mirror_sst()
    with pytest.raises(NotInDomain):
        build_output_graph(t, UPWord("", "a#"), 6)


def test_build_requires_settled_horizon():
    t = mirror_sst()
    with pytest.raises(ValueError, match="settling column"):
        build_output_graph(t, UPWord("ab#", "a"), 3)


def test_mirror_graph_nodes_and_walks():
    t = mirror_sst()
    w = UPWord("ab#", "a")
    g = build_output_graph(t, w, 4)
    pairs = {("x", i) for i in range(5)}
    pairs |= {("y", 0), ("y", 1), ("y", 2), ("z", 3), ("z", 4)}
    assert g.nodes == {(x, i, side) for x, i in pairs for side in (IN, OUT)}
    assert in_out_value(g, "x", 4) == "baab#"
    assert in_out_value(g, "y", 2) == "baab"
    assert in_out_value(g, "x", 2) == ""
    assert in_out_value(g, "z", 4) == "a"
    for x, i in pairs:
        assert in_out_value(g, x, i) == values_after(t, w, i)[x]


def test_mirror_graph_dot_snapshot():
    t = mirror_sst()
    g = build_output_graph(t, UPWord("ab#", "a"), 4)
    assert g.to_dot() == (
        "digraph output_graph {\n"
        "  rankdir=LR;\n"
        '  xin_0 [label="x,0,in"];\n'
        '  xout_0 [label="x,0,out"];\n'
        '  yin_0 [label="y,0,in"];\n'
        '  yout_0 [label="y,0,out"];\n'
        '  xin_1 [label="x,1,in"];\n'
        '  xout_1 [label="x,1,out"];\n'
        '  yin_1 [label="y,1,in"];\n'
        '  yout_1 [label="y,1,out"];\n'
        '  xin_2 [label="x,2,in"];\n'
        '  xout_2 [label="x,2,out"];\n'
        '  yin_2 [label="y,2,in"];\n'
        '  yout_2 [label="y,2,out"];\n'
        '  xin_3 [label="x,3,in"];\n'
        '  xout_3 [label="x,3,out"];\n'
        '  zin_3 [label="z,3,in"];\n'
        '  zout_3 [label="z,3,out"];\n'
        '  xin_4 [label="x,4,in"];\n'
        '  xout_4 [label="x,4,out"];\n'
        '  zin_4 [label="z,4,in"];\n'
        '  zout_4 [label="z,4,out"];\n'
        '  xin_0 -> xout_0 [label="ε"];\n'
        '  xout_0 -> xout_1 [label="ε"];\n'
        '  yin_0 -> yout_0 [label="ε"];\n'
        '  yout_0 -> yout_1 [label="a"];\n'
        '  xin_1 -> xin_0 [label="ε"];\n'
        '  xout_1 -> xout_2 [label="ε"];\n'
        '  yin_1 -> yin_0 [label="a"];\n'
        '  yout_1 -> yout_2 [label="b"];\n'
        '  xin_2 -> xin_1 [label="ε"];\n'
        '  xout_2 -> yin_2 [label="ε"];\n'
        '  yin_2 -> yin_1 [label="b"];\n'
        '  yout_2 -> xout_3 [label="#"];\n'
        '  xin_3 -> xin_2 [label="ε"];\n'
        '  xout_3 -> xout_4 [label="ε"];\n'
        '  zin_3 -> zout_3 [label="ε"];\n'
        '  zout_3 -> zout_4 [label="a"];\n'
        '  xin_4 -> xin_3 [label="ε"];\n'
        '  zin_4 -> zin_3 [label="ε"];\n'
        "}\n"
    )


def test_demo_graph_landmark_edges_and_walks():
    t = output_graph_demo_sst()
    w = UPWord("123456", "z")
    g = build_output_graph(t, w, 6)
    assert g.out_edges(("Z", 0, IN)) == {("Z", 0, OUT): ""}
    assert in_out_value(g, "X", 5) == "c"
    assert in_out_value(g, "Y", 5) == "eaaafbddcccc"
    assert in_out_value(g, "X", 6) == "ceaaafbddcccc"
    assert in_out_value(g, "Z", 6) == "g"


def test_demo_graph_walks_spell_variable_contents():
    t = output_graph_demo_sst()
    w = UPWord("123456", "z")
    g = build_output_graph(t, w, 9)
    starts = [n for n in g.nodes if n[2] == IN]
    assert len(starts) == 19
    for x, i, _ in starts:
        assert in_out_value(g, x, i) == values_after(t, w, i)[x]


def test_demo_graph_reachability_matches_path_conditions():
    t = output_graph_demo_sst()
    w = UPWord("123456", "z")
    fc = FlowCache(t, w)
    g = build_output_graph(t, w, 6, cache=fc)
    reach = reach_closure(g)
    for x, i, d in sorted(g.nodes, key=str):
        for y, j, d2 in sorted(g.nodes, key=str):
            expect = (y, j, d2) in reach[(x, i, d)]
            got = path_conditions(t, w, x, i, d, y, j, d2, horizon=6, cache=fc)
            assert got == expect, ((x, i, d), (y, j, d2))


def test_random_machines_walks_and_reachability():
    rng = random.Random(20)
    horizon = 8
    checked = 0
    while checked < 5:
        t = random_copyless_sst(rng)
        words = domain_words(t, rng, 2, settle_cap=6)
        if not words:
            continue
        checked += 1
        for w in words:
            fc = FlowCache(t, w)
            g = build_output_graph(t, w, horizon, cache=fc)
            for x, i, side in g.nodes:
                if side == IN:
                    assert in_out_value(g, x, i) == values_after(t, w, i)[x]
            reach = reach_closure(g)
            for u in g.nodes:
                for v in g.nodes:
                    got = path_conditions(
                        t, w, u[0], u[1], u[2], v[0], v[1], v[2],
                        horizon=horizon, cache=fc,
                    )
                    assert got == (v in reach[u]), (u, v, w)
