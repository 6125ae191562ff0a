import io

import networkx as nx
import pytest
from hypothesis import given

from graphs import connected_graphs
from oracles import treewidth as oracle_treewidth
from pursuit.decomposition import (
    TreeDecomposition,
    clique_tree,
    decomposition_from_ordering,
    grid_bag,
    grid_path_decomposition,
    pairwise_clique_intersections,
    robber_subtree,
    trivial_decomposition,
    tree_centre_and_diameter,
    validate_td,
    width,
)
from pursuit.errors import ParseError, StructuralError
from pursuit.formats import read_td, write_td
from pursuit.generators import clique, cycle, glued_cycles, grid, grid_vertex, k_tree, path, petersen
from pursuit.graph import is_clique, is_isometric_path
from pursuit.treewidth import treewidth_exact


def chain(g, bags):
    return TreeDecomposition.build(g, bags, [(i, i + 1) for i in range(len(bags) - 1)])


def bag_id(n, i, j):
    return (i - 1) * n + (j - 1)


class TestValidate:
    def test_trivial_decomposition(self):
        g = petersen()
        t = trivial_decomposition(g)
        assert validate_td(g, t).valid
        assert width(t) == g.n - 1

    @pytest.mark.parametrize("n", range(3, 9))
    def test_grid_decomposition(self, n):
        g = grid(n)
        assert validate_td(g, grid_path_decomposition(n, g)).valid

    def test_missing_edge_names_property_two(self):
        g = path(4)
        t = chain(g, [[0, 1], [1, 2], [2, 3]])
        assert validate_td(g, t).valid
        broken = chain(g, [[0, 1], [2, 3]])
        report = validate_td(g, broken)
        assert not report.valid
        assert any(v.prop == 2 and v.witness == (1, 2) for v in report.violations)

    def test_missing_vertex_names_property_one(self):
        g = path(3)
        report = validate_td(g, chain(g, [[0, 1]]))
        assert any(v.prop == 1 for v in report.violations)

    def test_disconnected_occurrences_name_property_three(self):
        g = path(3)
        t = chain(g, [[0, 1], [1, 2], [0]])
        report = validate_td(g, t)
        assert [v.witness for v in report.violations if v.prop == 3] == [(0, 0, 1, 2)]

    def test_non_tree_is_structural(self):
        g = path(3)
        t = TreeDecomposition.build(g, [[0, 1], [1, 2], [1]], [(0, 1), (1, 2), (2, 0)])
        with pytest.raises(StructuralError):
            validate_td(g, t)


class TestWidthAndTreewidth:
    def test_clique_single_bag(self):
        assert width(trivial_decomposition(clique(7))) == 6

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_grid_decomposition_width(self, n):
        t = grid_path_decomposition(n)
        assert width(t) == n
        assert len(t.bags) == n * (n - 1)
        assert all(len(b) == n + 1 for b in t.bags)

    def test_clique_tree_of_k_tree(self):
        assert width(clique_tree(k_tree(3, 10, 4))) == 3

    @pytest.mark.parametrize(
        "g, expected", [(clique(6), 5), (grid(4), 4), (path(7), 1), (cycle(6), 2), (petersen(), 4)], ids=str
    )
    def test_exact_values(self, g, expected):
        res = treewidth_exact(g)
        assert res.optimal and res.width == expected
        assert width(res.witness) == expected
        assert validate_td(g, res.witness).valid

    def test_trees_have_width_one(self):
        for seed in range(5):
            assert treewidth_exact(k_tree(1, 11, seed)).width == 1

    def test_above_limit_falls_back(self):
        res = treewidth_exact(grid(5), limit=10)
        assert not res.optimal
        assert res.width >= 5
        assert validate_td(grid(5), res.witness).valid

    def test_limit_from_environment(self, monkeypatch):
        monkeypatch.setenv("PURSUIT_TD_BUDGET", "4")
        assert not treewidth_exact(cycle(6)).optimal

    @given(connected_graphs(max_n=7))
    def test_matches_permutation_oracle(self, g):
        res = treewidth_exact(g)
        assert res.width == oracle_treewidth(g.n, g.edges())
        assert validate_td(g, res.witness).valid

    @given(connected_graphs(max_n=9))
    def test_no_valid_decomposition_beats_it(self, g):
        res = treewidth_exact(g)
        heuristic = decomposition_from_ordering(g, sorted(range(g.n), key=lambda v: -g.degree(v)))
        assert validate_td(g, heuristic).valid
        assert res.width <= width(heuristic)


class TestCliqueTree:
    @pytest.mark.parametrize("seed", range(4))
    def test_two_tree_bags_are_triangles(self, seed):
        g = k_tree(2, 8, seed)
        t = clique_tree(g)
        assert validate_td(g, t).valid
        assert all(len(b) == 3 and is_clique(g, b) for b in t.bags)

    def test_four_cycle_has_none(self):
        assert clique_tree(cycle(4)) is None

    def test_clique_is_one_bag(self):
        assert len(clique_tree(clique(5)).bags) == 1

    @given(connected_graphs(max_n=9))
    def test_exists_exactly_for_chordal_graphs(self, g):
        h = nx.Graph(g.edges())
        h.add_nodes_from(range(g.n))
        t = clique_tree(g)
        assert (t is not None) == nx.is_chordal(h)
        if t is not None:
            assert validate_td(g, t).valid
            assert pairwise_clique_intersections(g, t)


class TestGridDecomposition:
    def test_figure_bag(self):
        n = 5
        want = {grid_vertex(2, k, n) for k in (3, 4, 5)} | {grid_vertex(3, k, n) for k in (1, 2, 3)}
        assert set(grid_path_decomposition(n).bags[bag_id(n, 2, 3)]) == want

    @pytest.mark.parametrize("n", range(3, 9))
    def test_every_bag_is_an_isometric_path(self, n):
        g = grid(n)
        for i in range(1, n):
            for j in range(1, n + 1):
                assert is_isometric_path(g, grid_bag(n, i, j))

    def test_robber_subtree_is_contiguous(self):
        n = 5
        t = grid_path_decomposition(n)
        got = robber_subtree(t, grid_vertex(2, 3, n))
        want = {bag_id(n, 1, j) for j in (3, 4, 5)} | {bag_id(n, 2, j) for j in (1, 2, 3)}
        assert got == want

    def test_intersections_are_not_cliques(self):
        g = grid(3)
        assert not pairwise_clique_intersections(g, grid_path_decomposition(3, g))


class TestTreeShape:
    def test_odd_path(self):
        g = path(6)
        t = chain(g, [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5]])
        assert tree_centre_and_diameter(t) == ((2,), 4)

    def test_even_path_has_two_centres(self):
        g = path(5)
        t = chain(g, [[0, 1], [1, 2], [2, 3], [3, 4]])
        assert tree_centre_and_diameter(t) == ((1, 2), 3)

    def test_star(self):
        g = clique(1)
        t = TreeDecomposition.build(g, [[0], [0], [0], [0]], [(0, 1), (0, 2), (0, 3)])
        assert tree_centre_and_diameter(t) == ((0,), 2)

    def test_single_bag(self):
        t = trivial_decomposition(clique(3))
        assert tree_centre_and_diameter(t) == ((0,), 0)
        assert robber_subtree(t, 2) == {0}

    def test_vertex_in_one_bag(self):
        g = path(4)
        t = chain(g, [[0, 1], [1, 2], [2, 3]])
        assert robber_subtree(t, 0) == {0}

    def test_glued_cycles_meet_in_an_edge(self):
        g = glued_cycles()
        t = TreeDecomposition.build(g, [[0, 1, 2, 3], [0, 1, 4, 5]], [(0, 1)])
        assert validate_td(g, t).valid
        assert pairwise_clique_intersections(g, t)


class TestTdFormat:
    def test_single_bag_file(self):
        g = clique(3)
        t = read_td(io.StringIO("s td 1 3 3\nb 1 1 2 3\n"), g)
        assert t.bags == ((0, 1, 2),)
        assert validate_td(g, t).valid

    @pytest.mark.parametrize("n", [3, 4])
    def test_round_trip(self, n):
        g = grid(n)
        t = grid_path_decomposition(n, g)
        buf = io.StringIO()
        write_td(t, buf)
        back = read_td(io.StringIO(buf.getvalue()), g)
        assert back.bags == t.bags and back.tree_edges == t.tree_edges

    def test_vertex_out_of_range(self):
        with pytest.raises(ParseError, match="line 2"):
            read_td(io.StringIO("s td 1 2 3\nb 1 1 4\n"), clique(3))

    def test_bag_id_out_of_range(self):
        with pytest.raises(ParseError):
            read_td(io.StringIO("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n"), path(3))

    def test_read_does_not_validate(self):
        g = path(3)
        t = read_td(io.StringIO("s td 1 2 3\nb 1 1 2\n"), g)
        assert not validate_td(g, t).valid
