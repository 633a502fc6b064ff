import random

import pytest

from fmcard import (
    CyclicShift,
    StringSet,
    build_ebwt,
    compare_shifts,
    exact_rank,
)

from oracles import (
    SENT,
    brute_f_l,
    brute_occurrences,
    brute_rank,
    brute_sorted_rotations,
    random_string_set,
    rotate_compare_literal,
)


def canon(s):
    return s.replace(SENT, "#")


class TestStringSet:
    def test_basic_fields(self):
        d = StringSet(["abc", "de"])
        assert d.n == 2
        assert d.m == 3
        assert d.sigma == {ord(c) for c in "abcde"}

    def test_rejects_empty_set(self):
        with pytest.raises(ValueError):
            StringSet([])

    def test_rejects_empty_string(self):
        with pytest.raises(ValueError):
            StringSet(["ok", ""])

    def test_rejects_sentinel_and_newline(self):
        with pytest.raises(ValueError):
            StringSet(["a\x00b"])
        with pytest.raises(ValueError):
            StringSet(["a\nb"])

    def test_from_file(self, tmp_path):
        p = tmp_path / "data.txt"
        p.write_text("abc\nd e\n", encoding="utf-8")
        d = StringSet.from_file(p)
        assert d.strings == ["abc", "d e"]


class TestCompareShifts:
    # Rotations of "abc#" / "abbc#": prefix-related pair, resolved after two
    # simultaneous rotations ("#abc" vs "#abbc").
    def test_prefix_pair_resolved_by_rotation(self):
        data = StringSet(["abc", "abbc"])
        bc_a = CyclicShift(0, 2, 4)    # "bc#a"
        bc_ab = CyclicShift(1, 3, 5)   # "bc#ab"
        assert bc_ab.text(data) == "bc" + SENT + "ab"
        assert bc_a.text(data) == "bc" + SENT + "a"
        assert compare_shifts(bc_ab, bc_a, data) < 0
        assert compare_shifts(bc_a, bc_ab, data) > 0

    def test_prefix_pair_single_rotation(self):
        data = StringSet(["abc", "abbc"])
        c_abb = CyclicShift(1, 4, 5)   # "c#abb"
        c_ab = CyclicShift(0, 3, 4)    # "c#ab"
        assert compare_shifts(c_abb, c_ab, data) < 0

    def test_identical_rotations_of_duplicates(self):
        data = StringSet(["ab", "ab"])
        a = CyclicShift(0, 2, 3)
        b = CyclicShift(1, 2, 3)
        assert compare_shifts(a, b, data) == 0

    def test_matches_literal_procedure(self):
        rng = random.Random(5)
        for _ in range(60):
            strings = random_string_set(rng, max_n=8, max_len=8, sigma=3)
            data = StringSet(strings)
            shifts = [
                CyclicShift(sid, p + 1, len(s) + 1)
                for sid, s in enumerate(strings)
                for p in range(len(s) + 1)
            ]
            picks = [rng.sample(shifts, 2) for _ in range(20)]
            for a, b in picks:
                want = rotate_compare_literal(a.text(data), b.text(data))
                got = compare_shifts(a, b, data)
                assert (got < 0) == (want < 0) and (got > 0) == (want > 0)

    def test_total_order_properties(self):
        rng = random.Random(9)
        for _ in range(20):
            strings = random_string_set(rng, max_n=6, max_len=6, sigma=3)
            data = StringSet(strings)
            shifts = [
                CyclicShift(sid, p + 1, len(s) + 1)
                for sid, s in enumerate(strings)
                for p in range(len(s) + 1)
            ]
            sample = shifts if len(shifts) <= 12 else rng.sample(shifts, 12)
            for a in sample:
                for b in sample:
                    ab = compare_shifts(a, b, data)
                    ba = compare_shifts(b, a, data)
                    assert (ab == 0) == (ba == 0)
                    if ab != 0:
                        assert (ab < 0) == (ba > 0)
                    for c in sample:
                        if ab <= 0 and compare_shifts(b, c, data) <= 0:
                            assert compare_shifts(a, c, data) <= 0


class TestBuildEbwt:
    def test_single_string_known_arrays(self):
        out = build_ebwt(StringSet(["abcabc"]))
        assert canon("".join(out.f_char)) == "#aabbcc"
        assert canon("".join(out.l_char)) == "cc#aabb"
        assert exact_rank(out, "b", 7) == 2
        assert out.occ("c") == 6

    def test_two_strings_worked_example(self):
        data = StringSet(["ab", "b"])
        out = build_ebwt(data)
        texts = [canon(s.text(data)) for s in out.sorted_shifts]
        assert texts == ["#ab", "#b", "ab#", "b#a", "b#"]
        assert [canon(c) for c in out.f_char] == list("##abb")
        assert [canon(c) for c in out.l_char] == list("bb#a#")
        triples = [(canon(t.char), t.row, t.rank) for t in out.l_triples]
        assert triples == [
            ("b", 1, 1),
            ("b", 2, 2),
            ("#", 3, 1),
            ("a", 4, 1),
            ("#", 5, 2),
        ]

    def test_single_char_string(self):
        data = StringSet(["a"])
        out = build_ebwt(data)
        assert [canon(s.text(data)) for s in out.sorted_shifts] == ["#a", "a#"]
        assert [canon(c) for c in out.f_char] == ["#", "a"]
        assert [canon(c) for c in out.l_char] == ["a", "#"]

    def test_f_array_is_sorted(self):
        rng = random.Random(1)
        for _ in range(10):
            out = build_ebwt(StringSet(random_string_set(rng)))
            f = out.f_codes
            assert (f[1:] >= f[:-1]).all()

    def test_matches_brute_force_rows(self):
        rng = random.Random(2)
        for _ in range(40):
            strings = random_string_set(rng, max_n=10, max_len=8, sigma=4)
            out = build_ebwt(StringSet(strings))
            want = [(sid, p) for sid, p, _ in brute_sorted_rotations(strings)]
            got = list(zip(out.row_string_ids, (int(o) for o in out.off)))
            assert got == want

    def test_radix_equals_comparator_sort(self):
        rng = random.Random(3)
        for _ in range(25):
            strings = random_string_set(rng, max_n=12, max_len=9, sigma=4)
            data = StringSet(strings)
            a = build_ebwt(data, method="radix")
            b = build_ebwt(data, method="comparator")
            assert (a.sid == b.sid).all() and (a.off == b.off).all()

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError):
            build_ebwt(StringSet(["ab"]), method="bogus")


class TestExactRank:
    def test_empty_prefix(self):
        out = build_ebwt(StringSet(["abcabc"]))
        assert exact_rank(out, "a", 0) == 0

    def test_two_string_sentinel_count(self):
        out = build_ebwt(StringSet(["ab", "b"]))
        assert exact_rank(out, "\x00", 5) == 2

    def test_against_l_array_scan(self):
        rng = random.Random(4)
        for _ in range(15):
            strings = random_string_set(rng, max_n=8, max_len=8, sigma=4)
            out = build_ebwt(StringSet(strings))
            _, l_arr, _ = brute_f_l(strings)
            chars = set(l_arr)
            for c in chars:
                for i in range(0, out.n_rows + 1):
                    assert exact_rank(out, c, i) == brute_rank(l_arr, c, i)

    def test_totals_match_character_multiset(self):
        rng = random.Random(6)
        for _ in range(15):
            strings = random_string_set(rng, max_n=10, max_len=8, sigma=4)
            out = build_ebwt(StringSet(strings))
            joined = "".join(strings)
            for c in set(joined):
                assert exact_rank(out, c, out.n_rows) == joined.count(c)
            assert exact_rank(out, "\x00", out.n_rows) == len(strings)

    def test_bounds_check(self):
        out = build_ebwt(StringSet(["ab"]))
        with pytest.raises(ValueError):
            exact_rank(out, "a", -1)
        with pytest.raises(ValueError):
            exact_rank(out, "a", out.n_rows + 1)


def lf_step(out, i):
    """Row of the same rotation advanced one position backward."""
    c = int(out.l_codes[i - 1])
    return out.occ(c) + exact_rank(out, c, i) - 1


class TestLFRoundTrip:
    def _check_set(self, strings):
        data = StringSet(strings)
        out = build_ebwt(data)
        for i in range(1, out.n_rows + 1):
            j = lf_step(out, i)
            assert int(out.f_codes[j - 1]) == int(out.l_codes[i - 1])
            sid_i, off_i = int(out.sid[i - 1]), int(out.off[i - 1])
            ln = data.term_length(sid_i)
            sid_j, off_j = int(out.sid[j - 1]), int(out.off[j - 1])
            assert sid_j == sid_i
            assert off_j == (off_i - 1) % ln

    def test_worked_examples(self):
        self._check_set(["abcabc"])
        self._check_set(["ab", "b"])
        self._check_set(["abc", "abbc"])

    def test_duplicates(self):
        self._check_set(["ab", "ab", "ab"])
        self._check_set(["a", "a"])

    def test_random_sets(self):
        rng = random.Random(7)
        for _ in range(40):
            self._check_set(random_string_set(rng, max_n=12, max_len=9, sigma=4))


class TestBackwardSearchEquivalence:
    """Exact Rank/Occ in the standard backward step reproduce brute-force
    occurrence counts."""

    def _count(self, out, pattern):
        start, end = 1, out.n_rows
        for ch in reversed(pattern):
            base = out.occ(ch)
            if base is None:
                return 0
            start = base + exact_rank(out, ch, start - 1)
            end = base + exact_rank(out, ch, end) - 1
            if start > end:
                return 0
        return end - start + 1

    def test_random_sets(self):
        rng = random.Random(8)
        for _ in range(25):
            strings = random_string_set(rng, max_n=10, max_len=8, sigma=3)
            out = build_ebwt(StringSet(strings))
            pats = set()
            for s in strings:
                for i in range(len(s)):
                    for j in range(i + 1, min(i + 5, len(s)) + 1):
                        pats.add(s[i:j])
            pats.add("zz")
            for p in pats:
                assert self._count(out, p) == brute_occurrences(strings, p)
