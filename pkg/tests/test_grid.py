import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wcindex.grid import PointGrid, build_grid, scan_report


def test_two_point_swap():
    g = build_grid([(1, 2), (2, 1)])
    assert g.report(1, 2, 1, 1) == [(2, 1)]


def test_empty_grid():
    g = build_grid([])
    assert g.report(1, 5, 1, 5) == []
    assert len(g) == 0


def test_three_point_examples():
    g = build_grid([(1, 3), (2, 1), (3, 2)])
    assert g.report(1, 2, 1, 2) == [(2, 1)]
    assert g.report(2, 1, 1, 3) == []
    assert g.report(1, 3, 3, 1) == []
    assert sorted(g.report(1, 3, 1, 3)) == [(1, 3), (2, 1), (3, 2)]


def test_duplicate_coordinates_rejected():
    with pytest.raises(ValueError):
        build_grid([(1, 2), (1, 3)])
    with pytest.raises(ValueError):
        build_grid([(1, 2), (2, 2)])


def test_universe_checked():
    with pytest.raises(ValueError):
        PointGrid.build([(5, 1)], universe=4)


def partial_permutation(rng, count, universe):
    xs = rng.choice(np.arange(1, universe + 1), count, replace=False)
    ys = rng.choice(np.arange(1, universe + 1), count, replace=False)
    return list(zip(xs.tolist(), ys.tolist()))


@pytest.mark.parametrize("count", [1, 5, 17, 64])
def test_exhaustive_rectangles(count):
    rng = np.random.default_rng(count)
    universe = count + 6
    pts = partial_permutation(rng, count, universe)
    g = build_grid(pts, universe)
    for x1, x2 in itertools.combinations_with_replacement(range(0, universe + 2), 2):
        for y1, y2 in itertools.combinations_with_replacement(range(0, universe + 2, 3), 2):
            assert sorted(g.report(x1, x2, y1, y2)) == scan_report(pts, x1, x2, y1, y2)


def test_sampled_rectangles_large():
    rng = np.random.default_rng(0)
    pts = partial_permutation(rng, 512, 2000)
    g = build_grid(pts, 2000)
    for _ in range(500):
        x1, x2 = sorted(rng.integers(1, 2001, 2).tolist())
        y1, y2 = sorted(rng.integers(1, 2001, 2).tolist())
        assert sorted(g.report(x1, x2, y1, y2)) == scan_report(pts, x1, x2, y1, y2)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_report_monotone_under_inclusion(data):
    universe = data.draw(st.integers(1, 40))
    count = data.draw(st.integers(0, universe))
    xs = data.draw(st.permutations(range(1, universe + 1)))[:count]
    ys = data.draw(st.permutations(range(1, universe + 1)))[:count]
    g = build_grid(list(zip(xs, ys)), universe)
    box = sorted(data.draw(st.lists(st.integers(1, universe), min_size=4, max_size=4)))
    inner = g.report(box[1], box[2], box[1], box[2])
    outer = g.report(box[0], box[3], box[0], box[3])
    assert set(inner) <= set(outer)


def test_roundtrip():
    pts = partial_permutation(np.random.default_rng(4), 50, 80)
    g = build_grid(pts, 80)
    back = PointGrid.from_bytes(g.to_bytes())
    assert sorted(back.points()) == sorted(pts)
    assert sorted(back.report(10, 60, 5, 70)) == scan_report(pts, 10, 60, 5, 70)
