import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphs import connected_graphs
from oracles import cop_number as oracle_cop_number
from oracles import induced, is_retract, is_retraction
from pursuit.decomposition import grid_path_decomposition
from pursuit.errors import BoundNotFoundError, InvalidInputError, ResourceBudgetError
from pursuit.generators import clique, cycle, grid, grid_vertex, path, petersen
from pursuit.retract import (
    GuardCertificate,
    Retraction,
    find_retraction,
    guard_number,
    retraction_for_clique,
    retraction_for_isometric_path,
    verify_guarding,
)
from pursuit.robbers import GreedyRobber, RandomRobber, RushRobber, StationaryRobber, TableRobber
from pursuit.solver import solve_pursuit


class TestFindRetraction:
    def test_whole_graph_is_identity(self):
        g = petersen()
        r = find_retraction(g, range(g.n))
        assert r.f == tuple(range(g.n))

    def test_edge_of_four_cycle(self):
        g = cycle(4)
        r = find_retraction(g, [0, 1])
        assert r.is_valid()
        assert (r.f[2], r.f[3]) == (1, 0)

    def test_three_path_in_five_cycle(self):
        g = cycle(5)
        found = find_retraction(g, [0, 1, 2])
        assert (found is not None) == is_retract(5, g.edges(), [0, 1, 2])

    def test_non_retract_is_none(self):
        # two opposite vertices of C_4 do not even induce a connected subgraph
        assert find_retraction(cycle(4), [0, 2]) is None

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            find_retraction(petersen(), [0, 1, 2, 3, 4], budget=3)

    def test_empty_target_rejected(self):
        with pytest.raises(InvalidInputError):
            find_retraction(path(3), [])

    @given(connected_graphs(max_n=6), st.data())
    def test_existence_matches_brute_force(self, g, data):
        support = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        r = find_retraction(g, support)
        assert (r is not None) == is_retract(g.n, g.edges(), support)
        if r is not None:
            assert is_retraction(g.n, g.edges(), r.support, r.f)


class TestConstructiveRetractions:
    def test_path_is_identity_on_itself(self):
        g = cycle(6)
        p = [0, 1, 2, 3]
        r = retraction_for_isometric_path(g, p)
        assert all(r.f[v] == v for v in p)

    def test_six_cycle_images(self):
        r = retraction_for_isometric_path(cycle(6), [0, 1, 2, 3])
        assert r.f[5] == 1 and r.f[4] == 2

    def test_grid_centre_maps_by_distance(self):
        g = grid(3)
        p = [grid_vertex(1, j, 3) for j in (1, 2, 3)]
        r = retraction_for_isometric_path(g, p)
        assert r.f[grid_vertex(2, 2, 3)] == grid_vertex(1, 3, 3)
        assert r.is_valid()

    def test_non_isometric_path_rejected(self):
        with pytest.raises(InvalidInputError):
            retraction_for_isometric_path(cycle(6), [0, 1, 2, 3, 4])

    def test_single_vertex_clique_is_constant(self):
        r = retraction_for_clique(path(3), [1])
        assert r.f == (1, 1, 1)

    def test_clique_anchor_is_lowest(self):
        r = retraction_for_clique(clique(4), [0, 1])
        assert r.f == (0, 1, 0, 0)

    def test_non_clique_rejected(self):
        with pytest.raises(InvalidInputError):
            retraction_for_clique(path(3), [0, 2])

    def test_violations_are_reported(self):
        g = path(3)
        bad = Retraction(g, (0, 2), (0, 0, 2))
        assert not bad.is_valid()
        assert any("in the image" in v or "non-adjacent" in v for v in bad.violations())

    @given(connected_graphs(max_n=10), st.data())
    def test_shadows_of_edges_stay_adjacent(self, g, data):
        u = data.draw(st.integers(0, g.n - 1))
        v = data.draw(st.integers(0, g.n - 1))
        r = retraction_for_isometric_path(g, g.shortest_path(u, v))
        for x, y in g.edges():
            assert r.f[y] in g.closed_nbhd[r.f[x]]


class TestGuardNumber:
    def test_isometric_path_needs_one(self):
        g = grid(4)
        p = g.shortest_path(0, 15)
        assert guard_number(g, retraction_for_isometric_path(g, p)).guards == 1

    def test_clique_needs_one_and_one_round(self):
        g = petersen()
        cert = guard_number(g, retraction_for_clique(g, [0, 1]))
        assert cert.guards == 1 and cert.rounds_to_guard <= 1

    def test_whole_petersen_needs_three(self):
        g = petersen()
        r = find_retraction(g, range(g.n))
        with pytest.raises(BoundNotFoundError):
            guard_number(g, r, k_max=2)
        assert guard_number(g, r, k_max=3).guards == 3

    def test_invalid_retraction_rejected(self):
        with pytest.raises(InvalidInputError):
            guard_number(path(3), Retraction(path(3), (0, 2), (0, 0, 2)))

    @given(connected_graphs(max_n=7), st.data())
    def test_equals_cop_number_of_image(self, g, data):
        support = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        r = find_retraction(g, support)
        if r is None:
            return
        cert = guard_number(g, r, k_max=3)
        assert cert.guards == oracle_cop_number(*induced(g.n, g.edges(), r.support))

    def test_monotone_in_cops(self):
        g = cycle(6)
        r = find_retraction(g, range(6))
        one = solve_pursuit(g, 1, domain=r.support, target=r.f)
        two = solve_pursuit(g, 2, domain=r.support, target=r.f)
        assert not one.cops_win and two.cops_win


class TestVerifyGuarding:
    def cert_for(self, g, p) -> GuardCertificate:
        return guard_number(g, retraction_for_isometric_path(g, p))

    def test_robber_that_stays_away(self):
        g = grid(4)
        cert = self.cert_for(g, [grid_vertex(1, j, 4) for j in range(1, 5)])
        assert verify_guarding(g, cert, StationaryRobber())

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_rushing_robber_caught_on_grid_bags(self, n):
        g = grid(n)
        t = grid_path_decomposition(n, g)
        d = g.distances
        for bag in t.bags:
            end = max(bag, key=lambda v: max(d[v, w] for w in bag))
            cert = self.cert_for(g, sorted(bag, key=lambda v: d[end, v]))
            report = verify_guarding(g, cert, RushRobber(bag), trials=2, seed=n)
            assert report, report.reason

    def test_optimal_and_random_adversaries(self):
        g = petersen()
        cert = self.cert_for(g, g.shortest_path(0, 7))
        table = solve_pursuit(g, 1, domain=cert.support, target=cert.retraction.f)
        for policy in (TableRobber(table), RandomRobber(), GreedyRobber()):
            assert verify_guarding(g, cert, policy, trials=4)

    def test_detects_a_bogus_claim(self):
        g = cycle(6)
        r = find_retraction(g, range(6))
        honest = guard_number(g, r, k_max=2)
        one_cop = solve_pursuit(g, 1, domain=r.support, target=r.f)
        bogus = GuardCertificate(r, 1, one_cop)
        bogus.solution.capture_time = 3
        assert verify_guarding(g, honest, GreedyRobber())
        report = verify_guarding(g, bogus, GreedyRobber(), max_rounds=30)
        assert not report and report.counterexample
