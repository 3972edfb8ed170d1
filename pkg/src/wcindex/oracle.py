"""brute-force reference implementations.

Each function transcribes its definition directly and is meant for tests
and debugging only. Inputs are bytes/str (with an explicit wildcard byte)
or plain integer sequences.
"""

import numpy as np

from .suffix import EMPTY_RANGE, MatchingStatistics, SuffixRange, as_bytes


def _arr(x):
    if isinstance(x, (bytes, bytearray, str)):
        return np.frombuffer(as_bytes(x), dtype=np.uint8).astype(np.int64)
    return np.asarray(x, dtype=np.int64)


def naive_match(text, pattern, wildcard=b"?"):
    """1-based p with text[p+t-1] in {wildcard, pattern[t]} for every t."""
    t = _arr(text)
    p = _arr(pattern)
    w = as_bytes(wildcard)[0] if isinstance(wildcard, (bytes, str)) else int(wildcard)
    n, m = len(t), len(p)
    if m == 0 or m > n:
        return []
    ok = np.ones(n - m + 1, dtype=bool)
    wild = t == w
    for k in range(m):
        ok &= wild[k:n - m + 1 + k] | (t[k:n - m + 1 + k] == p[k])
    return (np.flatnonzero(ok) + 1).tolist()


class NaiveIndex:
    """plain text plus its suffix array from a comparison sort."""

    def __init__(self, text):
        self.text = [int(c) for c in _arr(text)]
        self.sa = naive_suffix_array(self.text)

    def suffix(self, row):
        return self.text[self.sa[row - 1] - 1:]

    def find_range(self, pattern):
        p = [int(c) for c in _arr(pattern)]
        rows = [r for r in range(1, len(self.sa) + 1) if self.suffix(r)[:len(p)] == p]
        if not rows:
            return EMPTY_RANGE
        return SuffixRange(rows[0], rows[-1])


def naive_suffix_array(text):
    t = [int(c) for c in _arr(text)]
    return sorted(range(1, len(t) + 1), key=lambda i: t[i - 1:])


def _occurs(t, s):
    k = len(s)
    return any(t[j:j + k] == s for j in range(len(t) - k + 1))


def naive_matching_statistics(text, pattern):
    ix = NaiveIndex(text)
    t = ix.text
    p = [int(c) for c in _arr(pattern)]
    m = len(p)
    q = np.zeros(m, dtype=np.int64)
    lo = np.ones(m, dtype=np.int64)
    hi = np.full(m, len(t), dtype=np.int64)
    for i in range(m):
        ell = 0
        while i + ell < m and _occurs(t, p[i:i + ell + 1]):
            ell += 1
        q[i] = ell
        if ell:
            lo[i], hi[i] = ix.find_range(p[i:i + ell])
    return MatchingStatistics(q, lo, hi)


def naive_prefix_segments(segments, pattern):
    """every (i, j), both 1-based, with segments[j] a prefix of pattern[i..]."""
    p = [int(c) for c in _arr(pattern)]
    segs = [[int(c) for c in _arr(s)] for s in segments]
    out = set()
    for i in range(len(p)):
        for j, s in enumerate(segs):
            if s and p[i:i + len(s)] == s:
                out.add((i + 1, j + 1))
    return out
