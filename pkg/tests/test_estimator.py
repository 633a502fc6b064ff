import random

import pytest

from fmcard import (
    BuildParams,
    StringSet,
    build_ebwt,
    build_index,
    estimate,
    exact_rank,
    find_starting_char,
    rank_lookup,
)

from oracles import all_substrings, brute_distinct, brute_occurrences, random_string_set


class TestRankLookup:
    def test_exact_mode_matches_oracle_exhaustively(self):
        rng = random.Random(0)
        for _ in range(15):
            strings = random_string_set(rng, max_n=12, max_len=9, sigma=4)
            data = StringSet(strings)
            out = build_ebwt(data)
            params = BuildParams(
                height=rng.choice([1, 2, 3]),
                min_rows=rng.choice([1, 2]),
                min_fit=rng.choice([1, 3, 10]),
                epsilon=0,
            )
            idx = build_index(data, params)
            chars = sorted({c for s in strings for c in s}) + ["\x00"]
            for c in chars:
                for i in range(0, out.n_rows + 1):
                    assert rank_lookup(idx, c, i) == exact_rank(out, c, i), (
                        strings, params, c, i)

    def test_absent_character(self):
        idx = build_index(["ab"], BuildParams(min_rows=1))
        assert rank_lookup(idx, "z", 1) == 0

    def test_row_zero(self):
        idx = build_index(["ab"], BuildParams(min_rows=1))
        assert rank_lookup(idx, "a", 0) == 0


class TestCharTable:
    def test_occ_strictly_increasing_and_sentinel_first(self):
        rng = random.Random(6)
        for _ in range(10):
            strings = random_string_set(rng, max_n=20, max_len=10, sigma=4)
            idx = build_index(strings, BuildParams(min_rows=1))
            occs = [int(v) for v in idx.occ_rows]
            assert occs[0] == 1  # smallest character (the sentinel) leads
            assert all(a < b for a, b in zip(occs, occs[1:]))

    def test_occ_matches_root_child_start_when_present(self):
        idx = build_index(["ab", "b"], BuildParams(min_rows=1))
        for code, child in idx.root.children.items():
            assert idx.occ(code) == child.start


class TestFindStartingChar:
    def test_full_pattern_in_tree(self):
        idx = build_index(["abc", "abd"], BuildParams(height=3, min_rows=1))
        k, node = find_starting_char(idx, "ab")
        assert k == 1
        assert (node.start, node.end) == (
            idx.root.children[ord("a")].children[ord("b")].start,
            idx.root.children[ord("a")].children[ord("b")].end,
        )

    def test_window_limited_by_height(self):
        idx = build_index(["abcdef"], BuildParams(height=2, min_rows=1))
        k, node = find_starting_char(idx, "abcdef")
        assert k == 5  # suffix "ef", the longest fitting under height 2
        assert node.depth == 2

    def test_absent_last_char(self):
        idx = build_index(["abc"], BuildParams(height=2, min_rows=1))
        assert find_starting_char(idx, "az") is None

    def test_pruned_tree_falls_back(self):
        idx = build_index(["abc"], BuildParams(min_rows=10**9))
        assert find_starting_char(idx, "abc") is None
        # but estimation still answers through the full-range search
        assert idx.estimate("abc").value == 1


class TestEstimate:
    def test_single_string_backward_route(self):
        # height 1 forces the anchor to the last character: interval for "c"
        # then two backward steps, counting both occurrences.
        idx = build_index(["abcabc"], BuildParams(height=1, min_rows=1, epsilon=0))
        e = idx.estimate("abc")
        assert e.value == 2
        assert not e.exact
        assert e.kind == "occurrence-level"

    def test_two_strings_exact_backward(self):
        idx = build_index(["ab", "b"], BuildParams(height=1, min_rows=1, epsilon=0))
        e = idx.estimate("ab")
        assert e.value == 1

    def test_tree_served_is_exact_distinct(self):
        idx = build_index(["abcabc"], BuildParams(height=3, min_rows=1, epsilon=0))
        e = idx.estimate("abc")
        assert (e.value, e.exact, e.kind) == (1, True, "string-level")

    def test_absent_character_is_zero(self):
        idx = build_index(["abc"], BuildParams(min_rows=1))
        e = idx.estimate("axc")
        assert e.value == 0

    def test_rejects_empty_and_sentinel(self):
        idx = build_index(["abc"], BuildParams(min_rows=1))
        with pytest.raises(ValueError):
            idx.estimate("")
        with pytest.raises(ValueError):
            idx.estimate("a\x00")

    def _oracle_check(self, strings, params, max_len=8):
        idx = build_index(strings, params)
        for p in all_substrings(strings, max_len):
            e = idx.estimate(p)
            if e.exact:
                want = brute_distinct(strings, p)
            else:
                want = brute_occurrences(strings, p)
            assert e.value == want, (strings, params, p, e)

    def test_exact_mode_oracle_equivalence_random(self):
        rng = random.Random(1)
        for _ in range(25):
            strings = random_string_set(rng, max_n=15, max_len=10, sigma=4)
            params = BuildParams(
                height=rng.choice([1, 2, 3]),
                min_rows=1,
                min_fit=rng.choice([1, 3, 10]),
                epsilon=0,
            )
            self._oracle_check(strings, params)

    def test_exact_mode_with_duplicates(self):
        self._oracle_check(
            ["aba", "aba", "b"], BuildParams(height=2, min_rows=1, epsilon=0)
        )

    def test_exact_mode_root_only_tree(self):
        rng = random.Random(2)
        for _ in range(10):
            strings = random_string_set(rng, max_n=10, max_len=8, sigma=3)
            self._oracle_check(strings, BuildParams(min_rows=10**9, epsilon=0))

    def test_short_patterns_exact_under_any_epsilon(self):
        rng = random.Random(3)
        strings = random_string_set(rng, max_n=40, max_len=12, sigma=4)
        idx = build_index(strings, BuildParams(height=3, min_rows=1, epsilon=32))
        for p in all_substrings(strings, 3):
            e = idx.estimate(p)
            assert e.exact
            assert e.value == brute_distinct(strings, p)

    def test_error_bound_random(self):
        rng = random.Random(4)
        for eps in (4, 8, 32):
            for _ in range(6):
                strings = random_string_set(rng, max_n=60, max_len=12, sigma=4)
                params = BuildParams(
                    height=2,
                    min_rows=rng.choice([1, 4, 16]),
                    min_fit=rng.choice([3, 10]),
                    epsilon=eps,
                )
                idx = build_index(strings, params)
                for p in all_substrings(strings, 8):
                    e = idx.estimate(p)
                    if e.exact:
                        continue
                    true = brute_occurrences(strings, p)
                    assert abs(e.value - true) <= 2 * eps * len(p) + len(p)

    def test_query_cost_is_bounded_by_height_times_length(self):
        rng = random.Random(5)
        strings = random_string_set(rng, max_n=60, max_len=12, sigma=4)
        params = BuildParams(height=3, min_rows=1, epsilon=0)
        idx = build_index(strings, params)
        idx.count_visits = True
        for p in all_substrings(strings, 8):
            idx.visits = 0
            idx.estimate(p)
            # two lookups per backward step, each descending <= height+1
            # nodes and climbing at most as far back up
            budget = 2 * (params.height + 1) * 2 * (len(p) + 1)
            assert idx.visits <= budget, (p, idx.visits, budget)
