import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphs import connected_graphs
from oracles import all_retracts, min_cover_weight
from pursuit.cover import CandidatePool, PoolLimits, RetractCatalog, candidate_retracts, rcc
from pursuit.decomposition import grid_path_decomposition
from pursuit.errors import InvalidInputError, UncoverableError
from pursuit.generators import clique, cycle, glued_cycles, grid, petersen


class TestCandidatePool:
    def test_single_vertex(self):
        g = petersen()
        pool = candidate_retracts(g, [4])
        single = [c for c in pool if c.support == (4,)]
        assert single and single[0].guards == 1

    @pytest.mark.parametrize("n", [3, 4])
    def test_grid_bag_is_its_own_entry(self, n):
        g = grid(n)
        for bag in grid_path_decomposition(n, g).bags:
            pool = candidate_retracts(g, bag)
            match = [c for c in pool if c.support == bag]
            assert match and match[0].guards == 1

    def test_whole_clique(self):
        pool = candidate_retracts(clique(5), range(5))
        assert any(c.support == tuple(range(5)) and c.guards == 1 for c in pool)

    def test_entries_meet_target_and_are_deduplicated(self):
        g = grid(4)
        target = (0, 1, 5)
        pool = candidate_retracts(g, target)
        supports = [c.support for c in pool]
        assert len(supports) == len(set(supports))
        assert all(set(s) & set(target) for s in supports)
        assert all(c.retraction.is_valid() for c in pool)

    def test_small_hosts_get_every_retract(self):
        pool = candidate_retracts(cycle(4), range(4))
        assert pool.complete
        assert (0, 1, 2, 3) in {c.support for c in pool}

    def test_large_hosts_are_not_complete(self):
        assert not candidate_retracts(grid(3), [0, 1]).complete

    def test_pool_limit_truncates(self):
        pool = candidate_retracts(grid(4), range(16), PoolLimits(max_pool=5))
        assert len(pool) == 5 and pool.truncated

    def test_path_length_limit(self):
        pool = candidate_retracts(grid(4), [0, 15], PoolLimits(max_path_len=2))
        assert pool.truncated
        assert all(len(c.support) <= 3 for c in pool)

    def test_extra_supports_are_tried(self):
        g = grid(3)
        whole = tuple(range(9))
        pool = candidate_retracts(g, [4], PoolLimits(exhaustive_max_n=0, extra=(whole,)))
        entry = next(c for c in pool if c.support == whole)
        assert entry.guards == 2


class TestRcc:
    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_grid_bags(self, n):
        g = grid(n)
        catalog = RetractCatalog(g)
        for bag in grid_path_decomposition(n, g).bags:
            res = rcc(g, bag, candidate_retracts(g, bag, catalog=catalog))
            assert res.value == 1 and res.exact_over_pool

    def test_clique(self):
        assert rcc(clique(6), range(6), candidate_retracts(clique(6), range(6))).value == 1

    def test_four_cycle_needs_two(self):
        g = cycle(4)
        res = rcc(g, range(4), candidate_retracts(g, range(4)))
        assert res.value == 2 and res.exact
        assert res.cover.covered() >= set(range(4))

    def test_glued_cycle_bag(self):
        g = glued_cycles()
        assert rcc(g, [0, 1, 2, 3], candidate_retracts(g, [0, 1, 2, 3])).value == 2

    def test_uncoverable_lists_missed_vertices(self):
        g = cycle(5)
        pool = [c for c in candidate_retracts(g, [0]) if c.support == (0,)]
        with pytest.raises(UncoverableError) as err:
            rcc(g, [0, 2, 3], pool)
        assert err.value.missed == (2, 3)

    def test_unknown_mode(self):
        g = cycle(4)
        with pytest.raises(InvalidInputError):
            rcc(g, [0], candidate_retracts(g, [0]), mode="fast")

    def test_empty_target(self):
        with pytest.raises(InvalidInputError):
            rcc(cycle(4), [], [])

    def test_plain_list_pool_is_never_complete(self):
        g = cycle(4)
        res = rcc(g, range(4), list(candidate_retracts(g, range(4))))
        assert res.exact_over_pool and not res.exact

    @given(connected_graphs(min_n=2, max_n=7), st.data())
    def test_greedy_never_beats_exact(self, g, data):
        target = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        pool = candidate_retracts(g, target)
        exact = rcc(g, target, pool)
        greedy = rcc(g, target, pool, mode="greedy")
        assert exact.value <= greedy.value
        for res in (exact, greedy):
            assert res.value == res.cover.total_guards >= 1
            assert res.cover.covered() >= set(target)

    @given(connected_graphs(min_n=2, max_n=7), st.data())
    def test_shrinking_the_pool_never_lowers_the_value(self, g, data):
        target = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        pool = candidate_retracts(g, target)
        keep = data.draw(st.lists(st.booleans(), min_size=len(pool), max_size=len(pool)))
        sub = [c for c, k in zip(pool, keep) if k or len(c.support) == 1]
        assert rcc(g, target, pool).value <= rcc(g, target, CandidatePool(sub)).value

    @given(connected_graphs(min_n=2, max_n=6), st.data())
    def test_matches_brute_force_over_all_retract_covers(self, g, data):
        target = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
        res = rcc(g, target, candidate_retracts(g, target))
        assert res.exact
        assert res.value == min_cover_weight(target, all_retracts(g.n, g.edges()))
