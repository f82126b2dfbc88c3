import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strongcolor.coloring import (UNCOLORED, ColoringState, GreedyFailure, NeighborhoodTally,
                                  RetryExhausted, attempt_rng, blank_state, color_class_sizes,
                                  color_until_success, edge_array, greedy_bound, greedy_complete,
                                  greedy_strong_color, resolve_conflicts, run_batch, run_trial,
                                  saved_report, strong_edge_color, validate_strong_coloring,
                                  validate_vertex_coloring)
from strongcolor.graph import Graph, blowup_c5, complete, cycle, random_regular, star
from strongcolor.strong import square_linegraph

from conftest import corpus, graphs


def fixed_state(H, C, colors):
    colors = np.asarray(colors, dtype=np.int64)
    return ColoringState(H, C, colors.copy(), np.zeros(H.m, dtype=bool), colors)


class TestRunTrial:
    def test_k2_one_colour(self):
        H = complete(2)
        for seed in range(20):
            s = run_trial(H, 1, np.random.default_rng(seed))
            assert sorted(s.colors.tolist()) == [0, 1]

    def test_edgeless_keeps_everything(self):
        H = Graph(6)
        s = run_trial(H, 3, np.random.default_rng(1))
        assert np.array_equal(s.colors, s.initial)
        assert s.orientation.shape == (0,)

    def test_triangle_all_orientations(self):
        H = complete(3)
        ends = edge_array(H)
        init = np.ones(3, dtype=np.int64)
        for bits in product([False, True], repeat=3):
            o = np.array(bits)
            colors = resolve_conflicts(ends, init, o)
            victims = {int(a) if d else int(b) for (a, b), d in zip(ends, o)}
            kept = {v for v in range(3) if colors[v] != UNCOLORED}
            assert kept == set(range(3)) - victims
            assert len(kept) <= 1

    def test_victim_is_pointed_endpoint(self):
        ends = np.array([[0, 1]])
        init = np.array([2, 2])
        assert resolve_conflicts(ends, init, np.array([True])).tolist() == [0, 2]
        assert resolve_conflicts(ends, init, np.array([False])).tolist() == [2, 0]

    def test_no_cascade(self):
        # path 0-1-2 with colours 1,1,2: only 0-1 conflicts; 2 untouched even if 1 drops
        ends = edge_array(Graph(3, ((0, 1), (1, 2))))
        out = resolve_conflicts(ends, np.array([1, 1, 1]), np.array([False, True]))
        # 0-1 points at 1, 1-2 points at 1: only vertex 1 loses its colour
        assert out.tolist() == [1, 0, 1]

    def test_bad_palette(self):
        with pytest.raises(ValueError):
            run_trial(complete(2), 0, np.random.default_rng(0))

    @pytest.mark.parametrize("name", sorted(corpus()))
    def test_proper_partial_on_corpus(self, name):
        H = corpus()[name]
        rng = np.random.default_rng(7)
        for C in (1, 2, 3, 5):
            for _ in range(25):
                assert run_trial(H, C, rng).is_proper_partial()

    @given(graphs(min_n=1), st.integers(1, 4), st.integers(0, 2**32 - 1))
    def test_proper_partial_property(self, H, C, seed):
        s = run_trial(H, C, np.random.default_rng(seed))
        assert s.is_proper_partial()
        # uncoloured vertices are exactly the victims of conflict edges
        ends = edge_array(H)
        victims = set()
        for (a, b), d in zip(ends.tolist(), s.orientation.tolist()):
            if s.initial[a] == s.initial[b]:
                victims.add(a if d else b)
        assert set(s.uncolored().tolist()) == victims

    def test_deterministic(self):
        H = random_regular(20, 4, seed=2)
        a = run_trial(H, 4, np.random.default_rng(99))
        b = run_trial(H, 4, np.random.default_rng(99))
        assert np.array_equal(a.initial, b.initial)
        assert np.array_equal(a.orientation, b.orientation)
        assert np.array_equal(a.colors, b.colors)

    def test_colour_permutation_commutes(self):
        H = random_regular(30, 6, seed=4)
        ends = edge_array(H)
        rng = np.random.default_rng(5)
        for _ in range(50):
            init = rng.integers(1, 6, size=H.n)
            o = rng.integers(0, 2, size=H.m).astype(bool)
            perm = np.concatenate([[0], rng.permutation(5) + 1])
            assert np.array_equal(resolve_conflicts(ends, perm[init], o),
                                  perm[resolve_conflicts(ends, init, o)])

    def test_batch_matches_single(self):
        H = random_regular(16, 4, seed=1)
        ends = edge_array(H)
        initial, colors = run_batch(H, 3, np.random.default_rng(3), 40)
        assert colors.shape == (40, 16)
        # re-derive orientation-free check: each batch row is a proper partial colouring
        for row, init in zip(colors, initial):
            a, b = row[ends[:, 0]], row[ends[:, 1]]
            assert not np.any((a == b) & (a != UNCOLORED))
            assert np.all((row == init) | (row == UNCOLORED))


class TestSavedReport:
    def test_two_equal_one_other(self):
        s = saved_report(fixed_state(star(3), 2, [0, 1, 1, 2]), 0)
        assert (s.pu, s.tu, s.saved) == (1, 0, 1)

    def test_four_equal(self):
        s = saved_report(fixed_state(star(4), 2, [0, 1, 1, 1, 1]), 0)
        assert (s.pu, s.tu, s.saved) == (6, 4, 3)
        assert s.saved >= s.pu - s.tu

    def test_clique_neighbourhood(self):
        H = complete(5)
        rng = np.random.default_rng(0)
        for _ in range(30):
            s = run_trial(H, 2, rng)
            assert saved_report(s, 0).pu == 0

    def test_adjacent_pair_not_counted(self):
        # u=0 joined to 1,2 and 1-2 adjacent; same colour on both is impossible
        # after resolution, but a hand-made state still must not count it
        H = complete(3)
        assert saved_report(fixed_state(H, 2, [0, 1, 1]), 0).pu == 0

    def test_uncoloured_ignored(self):
        s = saved_report(fixed_state(star(3), 2, [0, 1, 0, 1]), 0)
        assert (s.pu, s.colored_in_N, s.distinct_colors_in_N) == (1, 2, 1)

    @pytest.mark.parametrize("j", range(1, 30))
    def test_binomial_identity(self, j):
        assert math.comb(j, 2) - math.comb(j, 3) <= j - 1

    @pytest.mark.parametrize("name", ["petersen", "rr12_4", "rr24_6", "gnp20", "blowup2"])
    def test_saving_and_class_identities(self, name):
        H = corpus()[name]
        rng = np.random.default_rng(11)
        for _ in range(40):
            s = run_trial(H, 3, rng)
            for u in range(H.n):
                rep = saved_report(s, u)
                assert rep.saved >= rep.pu - rep.tu
                cls = color_class_sizes(s.colors[list(H.adjacency[u])])
                if all(b not in H.neighbor_sets[a]
                       for a in H.adjacency[u] for b in H.adjacency[u] if a != b):
                    assert rep.pu == sum(math.comb(j, 2) for j in cls.values())
                    assert rep.tu == sum(math.comb(j, 3) for j in cls.values())

    @pytest.mark.parametrize("name", ["petersen", "rr24_6", "gnp20", "K5", "C5"])
    def test_tally_matches_direct(self, name):
        H = corpus()[name]
        _, colors = run_batch(H, 3, np.random.default_rng(2), 60)
        for u in range(H.n):
            t = NeighborhoodTally(H, u)
            pu, tu, sv = t.pu(colors), t.tu(colors), t.saved(colors)
            for i in range(colors.shape[0]):
                rep = saved_report(fixed_state(H, 3, colors[i]), u)
                assert (pu[i], tu[i], sv[i]) == (rep.pu, rep.tu, rep.saved)

    def test_max_class(self):
        t = NeighborhoodTally(star(4), 0)
        cols = np.array([[0, 1, 1, 2, 1], [0, 3, 2, 1, 4], [0, 0, 0, 0, 0]])
        assert t.max_class(cols).tolist() == [3, 1, 1]


class TestGreedy:
    def test_path(self):
        H = Graph(3, ((0, 1), (1, 2)))
        assert greedy_complete(blank_state(H, 2)).tolist() == [1, 2, 1]

    def test_triangle_fails(self):
        with pytest.raises(GreedyFailure) as info:
            greedy_complete(blank_state(complete(3), 2))
        assert info.value.vertex == 2

    def test_fills_gap(self):
        H = star(2)
        st_ = fixed_state(H, 3, [0, 1, 2])
        assert greedy_complete(st_).tolist() == [3, 1, 2]

    def test_keeps_existing(self):
        H = cycle(6)
        out = greedy_complete(fixed_state(H, 3, [2, 0, 0, 0, 0, 0]))
        assert out[0] == 2 and validate_vertex_coloring(H, out)[0]

    def test_orders(self):
        H = star(3)
        by_index = greedy_complete(blank_state(H, 2), "index")
        by_deg = greedy_complete(blank_state(H, 2), "degree")
        explicit = greedy_complete(blank_state(H, 2), [3, 2, 1, 0])
        for out in (by_index, by_deg, explicit):
            assert validate_vertex_coloring(H, out)[0]
        assert explicit.tolist() == [2, 1, 1, 1]
        with pytest.raises(ValueError):
            greedy_complete(blank_state(H, 2), [0, 1])
        with pytest.raises(ValueError):
            greedy_complete(blank_state(H, 2), "random")


class TestRetry:
    @pytest.mark.parametrize("name", sorted(corpus()))
    def test_delta_plus_one_first_attempt(self, name):
        H = corpus()[name]
        res = color_until_success(H, H.max_degree + 1, master_seed=3)
        assert res.attempts == 1
        assert validate_vertex_coloring(H, res.colors)[0]

    def test_edgeless(self):
        res = color_until_success(Graph(5), 1)
        assert res.attempts == 1 and res.uncolored_after_trial == 0

    def test_rr60_sweep(self):
        for s in range(100):
            H = random_regular(60, 6, seed=s)
            res = color_until_success(H, 7, master_seed=s)
            assert res.attempts == 1
            assert validate_vertex_coloring(H, res.colors)[0]

    def test_exhaustion(self):
        with pytest.raises(RetryExhausted) as info:
            color_until_success(complete(4), 3, max_retries=5)
        assert info.value.attempts == 5 and info.value.best_uncolored >= 1

    def test_seeded_streams(self):
        a = attempt_rng(5, 2).integers(0, 1 << 30, size=4)
        b = attempt_rng(5, 2).integers(0, 1 << 30, size=4)
        c = attempt_rng(5, 3).integers(0, 1 << 30, size=4)
        assert np.array_equal(a, b) and not np.array_equal(a, c)

    def test_reproducible(self):
        H = random_regular(30, 4, seed=1)
        a = color_until_success(H, 4, master_seed=8)
        b = color_until_success(H, 4, master_seed=8)
        assert np.array_equal(a.colors, b.colors) and a.attempts == b.attempts


class TestStrongColoring:
    def test_2k2_one_colour(self):
        G = Graph(4, ((0, 1), (2, 3)))
        assert strong_edge_color(G, 1) == {0: 1, 1: 1}

    def test_c5(self):
        G = cycle(5)
        col = strong_edge_color(G, 5)
        assert validate_strong_coloring(G, col)[0]
        assert len(set(col.values())) == 5
        with pytest.raises(RetryExhausted):
            strong_edge_color(G, 4, max_retries=20)

    def test_c5_square_is_k5(self):
        L = square_linegraph(cycle(5))
        assert L.m == 10

    def test_c5_four_colours_exhaustive(self):
        G = cycle(5)
        assert not any(validate_strong_coloring(G, dict(enumerate(c)))[0]
                       for c in product(range(1, 5), repeat=5))

    def test_star(self):
        G = star(3)
        assert validate_strong_coloring(G, strong_edge_color(G, 3))[0]
        with pytest.raises(RetryExhausted):
            strong_edge_color(G, 2, max_retries=10)

    def test_validate_reports_pair(self):
        G = cycle(5)
        col = {0: 1, 1: 2, 2: 3, 3: 4, 4: 1}
        ok, bad = validate_strong_coloring(G, col)
        assert not ok and bad == (0, 4)

    def test_validate_empty(self):
        assert validate_strong_coloring(Graph(3), {}) == (True, None)

    def test_validate_missing_edge(self):
        with pytest.raises(ValueError):
            validate_strong_coloring(cycle(4), {0: 1})


class TestGreedyStrong:
    def test_star3(self):
        col, used = greedy_strong_color(star(3))
        assert used == 3 and used <= greedy_bound(3) == 13

    def test_single_edge(self):
        assert greedy_strong_color(complete(2)) == ({0: 1}, 1)

    def test_blowup2(self):
        G = blowup_c5(2)
        col, used = greedy_strong_color(G)
        assert 20 <= used <= greedy_bound(4) == 25
        assert validate_strong_coloring(G, col)[0]

    @pytest.mark.parametrize("name", sorted(corpus()))
    def test_corpus(self, name):
        G = corpus()[name]
        col, used = greedy_strong_color(G)
        assert validate_strong_coloring(G, col)[0]
        assert used <= greedy_bound(G.max_degree)

    @given(graphs())
    def test_property(self, G):
        col, used = greedy_strong_color(G)
        assert validate_strong_coloring(G, col)[0]
        assert used <= greedy_bound(G.max_degree)
        if G.m:
            assert used >= G.max_degree
