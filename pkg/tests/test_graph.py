"""Graph construction, parsing, generators, and the exact graph routines."""

import math

import numpy as np
import pytest

from modmetrics.graph import (
    GraphFormatError,
    bfs_hops,
    build_graph,
    complete_graph,
    cycle_graph,
    effective_resistance,
    effective_resistance_matrix,
    enumerate_simple_paths,
    erdos_renyi_connected,
    load_graph,
    min_cut,
    parallel_paths,
    parse_graph,
    parse_graph_json,
    path_from_vertices,
    path_graph,
    shortest_path_hops,
)
from oracles import brute_min_cut, pinv_effective_resistance


# ---------------------------------------------------------------------------
# construction and validation


def test_build_graph_basic():
    g = build_graph(["a", "b", "c"], [(0, 1), (1, 2)])
    assert g.n == 3
    assert g.num_edges == 2
    assert g.index("b") == 1
    assert g.degree(1) == 2
    # adjacency is sorted ascending by neighbor
    assert [v for v, _ in g.adjacency[1]] == [0, 2]


def test_build_graph_rejects_self_loop():
    with pytest.raises(GraphFormatError, match="self-loop"):
        build_graph(["a", "b"], [(0, 0), (0, 1)])


def test_build_graph_rejects_duplicate_edge():
    with pytest.raises(GraphFormatError, match="duplicate"):
        build_graph(["a", "b", "c"], [(0, 1), (1, 0), (1, 2)])


def test_build_graph_rejects_disconnected():
    with pytest.raises(GraphFormatError, match="connected"):
        build_graph(["a", "b", "c", "d"], [(0, 1), (2, 3)])


def test_build_graph_rejects_out_of_range():
    with pytest.raises(GraphFormatError):
        build_graph(["a", "b"], [(0, 5)])


def test_unknown_label_lookup():
    g = path_graph(3)
    with pytest.raises(GraphFormatError, match="nope"):
        g.index("nope")


# ---------------------------------------------------------------------------
# parsing


def test_parse_edge_list_with_comments():
    g = parse_graph("# a triangle\na b\nb c # closing\nc a\n")
    assert g.n == 3
    assert g.num_edges == 3
    assert g.labels == ("a", "b", "c")


def test_parse_error_reports_line_number():
    with pytest.raises(GraphFormatError, match="line 3"):
        parse_graph("a b\nb c\nc\n")
    with pytest.raises(GraphFormatError, match="line 2: self-loop"):
        parse_graph("a b\nb b\n")
    with pytest.raises(GraphFormatError, match="line 3: duplicate"):
        parse_graph("a b\nb c\nc b\n")


def test_parse_empty_is_error():
    with pytest.raises(GraphFormatError, match="no edges"):
        parse_graph("# nothing here\n")


def test_json_and_edge_list_agree(tmp_path):
    text = "0 1\n1 2\n2 0\n"
    doc = '{"nodes": ["0", "1", "2"], "edges": [["0","1"],["1","2"],["2","0"]]}'
    g1 = parse_graph(text)
    g2 = parse_graph_json(doc)
    assert g1.labels == g2.labels
    assert g1.edges == g2.edges

    p_txt = tmp_path / "g.txt"
    p_txt.write_text(text)
    p_json = tmp_path / "g.json"
    p_json.write_text(doc)
    assert load_graph(str(p_txt)).edges == load_graph(str(p_json)).edges


def test_json_errors():
    with pytest.raises(GraphFormatError, match="invalid JSON"):
        parse_graph_json("{nope")
    with pytest.raises(GraphFormatError, match="nodes"):
        parse_graph_json('{"edges": []}')
    with pytest.raises(GraphFormatError, match="unknown node"):
        parse_graph_json('{"nodes": ["a", "b"], "edges": [["a", "z"]]}')


# ---------------------------------------------------------------------------
# generators


def test_generator_shapes():
    assert path_graph(5).num_edges == 4
    assert cycle_graph(7).num_edges == 7
    assert complete_graph(6).num_edges == 15
    g = parallel_paths(3, 4)
    assert g.num_edges == 12
    assert g.n == 2 + 3 * 3
    assert shortest_path_hops(g, 0, 1) == 4


def test_parallel_paths_single_edge_case():
    assert parallel_paths(1, 1).num_edges == 1
    with pytest.raises(ValueError, match="parallel edges"):
        parallel_paths(2, 1)


def test_generator_bounds():
    with pytest.raises(ValueError):
        path_graph(1)
    with pytest.raises(ValueError):
        cycle_graph(2)
    with pytest.raises(ValueError):
        complete_graph(1)


def test_er_reproducible_and_connected():
    g1 = erdos_renyi_connected(12, 5.0, 2024)
    g2 = erdos_renyi_connected(12, 5.0, 2024)
    assert g1.edges == g2.edges
    # connectivity is guaranteed by construction
    assert np.all(bfs_hops(g1, 0) >= 0)
    g3 = erdos_renyi_connected(12, 5.0, 2025)
    assert g3.edges != g1.edges


def test_er_parameter_validation():
    with pytest.raises(ValueError):
        erdos_renyi_connected(12, 0.0, 1)
    with pytest.raises(ValueError):
        erdos_renyi_connected(12, 12.0, 1)  # expected degree > n-1


def test_er_degree_roughly_matches():
    # sampled mean degree over a few seeds should sit near the target
    target = 6.0
    degs = []
    for seed in range(5):
        g = erdos_renyi_connected(20, target, seed)
        degs.append(2.0 * g.num_edges / g.n)
    mean = sum(degs) / len(degs)
    assert abs(mean - target) < 1.5


# ---------------------------------------------------------------------------
# exact routines against oracles


def test_bfs_hops_on_cycle():
    g = cycle_graph(6)
    assert list(bfs_hops(g, 0)) == [0, 1, 2, 3, 2, 1]
    assert shortest_path_hops(g, 0, 3) == 3


def test_min_cut_against_brute_force():
    cases = [
        (path_graph(4), 0, 3),
        (cycle_graph(5), 0, 2),
        (complete_graph(4), 0, 1),
        (parallel_paths(3, 2), 0, 1),
        (erdos_renyi_connected(9, 4.0, 5), 0, 4),
        (erdos_renyi_connected(9, 5.0, 17), 2, 7),
    ]
    for g, a, b in cases:
        res = min_cut(g, a, b)
        assert res.value == brute_min_cut(g, a, b)
        # the reported edge set is a real a-b disconnecting set of that size
        assert len(res.cut_edges) == res.value
        assert a in res.source_side and b not in res.source_side
        crossing = [
            k for k, (x, y) in enumerate(g.edges)
            if (x in res.source_side) != (y in res.source_side)
        ]
        assert sorted(res.cut_edges) == sorted(crossing)


def test_min_cut_known_values():
    assert min_cut(complete_graph(4), 0, 1).value == 3
    assert min_cut(cycle_graph(8), 0, 4).value == 2
    assert min_cut(path_graph(5), 0, 4).value == 1


def test_effective_resistance_closed_forms():
    assert effective_resistance(path_graph(3), 0, 2) == pytest.approx(2.0, rel=1e-12)
    assert effective_resistance(cycle_graph(4), 0, 1) == pytest.approx(0.75, rel=1e-12)
    assert effective_resistance(complete_graph(4), 0, 1) == pytest.approx(0.5, rel=1e-12)


def test_effective_resistance_against_pinv():
    for g, a, b in [
        (cycle_graph(7), 0, 3),
        (complete_graph(5), 1, 4),
        (erdos_renyi_connected(10, 4.0, 3), 0, 9),
    ]:
        assert effective_resistance(g, a, b) == pytest.approx(
            pinv_effective_resistance(g, a, b), rel=1e-10
        )


def test_effective_resistance_matrix_consistent():
    g = erdos_renyi_connected(8, 4.0, 11)
    R = effective_resistance_matrix(g)
    assert np.array_equal(R, R.T)
    assert np.all(np.diag(R) == 0.0)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            assert R[a, b] == pytest.approx(effective_resistance(g, a, b), rel=1e-10)


# ---------------------------------------------------------------------------
# paths


def test_path_from_vertices_validates():
    g = cycle_graph(5)
    p = path_from_vertices(g, [0, 1, 2])
    assert p.hops == 2
    assert p.usage(g.num_edges).sum() == 2
    with pytest.raises(ValueError):
        path_from_vertices(g, [0, 2])  # not adjacent
    with pytest.raises(ValueError):
        path_from_vertices(g, [0, 1, 0])  # repeats a vertex


def test_enumerate_simple_paths_k4():
    g = complete_graph(4)
    paths = enumerate_simple_paths(g, 0, 1)
    # 1 direct + 2 two-hop + 2 three-hop
    assert len(paths) == 5
    assert sorted(p.hops for p in paths) == [1, 2, 2, 3, 3]


def test_enumerate_simple_paths_cycle_split():
    g = cycle_graph(9)
    paths = enumerate_simple_paths(g, 0, 2)
    assert sorted(p.hops for p in paths) == [2, 7]


def test_enumerate_cap():
    g = complete_graph(7)
    with pytest.raises(ValueError, match="more than 10 simple paths"):
        enumerate_simple_paths(g, 0, 1, cap=10)
