from wcindex.oracle import (naive_match, naive_matching_statistics, naive_prefix_segments,
                            naive_suffix_array)

from conftest import SIX_SEGMENTS, SIX_TEXT


def six_codes():
    return [{"$": 0, "φ": 1, "a": 2, "c": 3}[ch] for ch in SIX_TEXT]


def test_naive_match_examples():
    assert naive_match(b"ab??ca?ab", b"aca") == [4, 6]
    assert naive_match(b"ab", b"abc") == []
    assert naive_match(b"a?a", b"b") == [2]


def test_naive_match_custom_wildcard():
    assert naive_match(b"aNa", b"aca", wildcard=b"N") == [1]


def test_naive_suffix_array_examples():
    assert naive_suffix_array(six_codes()) == [21, 8, 1, 10, 18, 4, 13, 7, 9, 3, 12, 2, 11,
                                                19, 5, 15, 20, 17, 6, 14, 16]
    assert naive_suffix_array(b"ab\0") == [3, 1, 2]
    assert naive_suffix_array(b"\0") == [1]


def test_naive_matching_statistics_examples():
    p = [2, 3, 2, 2]
    assert naive_matching_statistics(six_codes(), p).q.tolist() == [3, 2, 2, 1]
    assert len(naive_matching_statistics(six_codes(), [])) == 0
    assert naive_matching_statistics(six_codes(), [7, 7]).q.tolist() == [0, 0]


def test_naive_prefix_segments_examples():
    pairs = naive_prefix_segments(SIX_SEGMENTS, b"acaa")
    # both occurrences of "aa" count, so seven (position, occurrence) pairs
    assert pairs == {(1, 3), (1, 6), (1, 2), (3, 3), (3, 1), (3, 4), (4, 3)}
    assert naive_prefix_segments(SIX_SEGMENTS, b"") == set()
    assert naive_prefix_segments([b"ab", b"a"], b"ab") == {(1, 1), (1, 2)}
