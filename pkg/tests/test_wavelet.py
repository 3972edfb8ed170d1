import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wcindex.wavelet import WaveletTree


@st.composite
def sequences(draw):
    sigma = draw(st.integers(1, 40))
    codes = draw(st.lists(st.integers(0, sigma - 1), max_size=200))
    return codes, sigma


@given(sequences())
@settings(max_examples=120, deadline=None)
def test_rank_access_match_scan(case):
    codes, sigma = case
    wt = WaveletTree(codes, sigma)
    arr = np.array(codes, dtype=np.int64)
    for p, c in enumerate(codes):
        assert wt.access(p) == c
        assert wt.access_rank(p) == (c, int(np.count_nonzero(arr[:p + 1] == c)))
    for c in range(sigma):
        for i in range(0, len(codes) + 1, 7):
            assert wt.rank(c, i) == int(np.count_nonzero(arr[:i] == c))


@given(sequences(), st.data())
@settings(max_examples=120, deadline=None)
def test_range_report_matches_scan(case, data):
    codes, sigma = case
    wt = WaveletTree(codes, sigma)
    n = len(codes)
    a = data.draw(st.integers(0, n))
    b = data.draw(st.integers(a, n))
    y0 = data.draw(st.integers(0, sigma - 1))
    y1 = data.draw(st.integers(0, sigma - 1))
    got = sorted(wt.range_report(a, b, y0, y1))
    want = {}
    for c in codes[a:b]:
        if y0 <= c <= y1:
            want[c] = want.get(c, 0) + 1
    assert got == sorted(want.items())


def test_rank_pair_and_out_of_alphabet():
    wt = WaveletTree([3, 1, 3, 0, 2], 4)
    assert wt.rank_pair(3, 1, 5) == (1, 2)
    assert wt.rank(7, 5) == 0
    assert wt.rank(-1, 5) == 0


def test_rejects_codes_outside_alphabet():
    with pytest.raises(ValueError):
        WaveletTree([0, 4], 4)


def test_roundtrip():
    rng = np.random.default_rng(1)
    codes = rng.integers(0, 6, 3000)
    wt = WaveletTree(codes, 6)
    back = WaveletTree.from_bytes(wt.to_bytes())
    assert [back.access(p) for p in range(0, 3000, 37)] == codes[::37].tolist()
    assert back.rank(4, 2500) == wt.rank(4, 2500)
