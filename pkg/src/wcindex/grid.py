"""static orthogonal range reporting over a partial permutation."""

import numpy as np

from .serial import Reader, Writer
from .wavelet import WaveletTree


class PointGrid:
    """points with distinct x and distinct y in [1, k].

    The x coordinates are kept sorted in a plain array; a wavelet tree
    over the y values in x order answers each rectangle by walking down to
    the qualifying leaves.
    """

    VERSION = 1

    def __init__(self, xs, ys, universe):
        self.xs = np.asarray(xs, dtype=np.int64)
        self.ys = np.asarray(ys, dtype=np.int64)
        self.universe = int(universe)
        self._xs_list = self.xs.tolist()
        self.wt = WaveletTree(self.ys, self.universe + 1) if len(self.ys) else None
        self._x_of_y = {}
        if len(self.ys):
            self._x_of_y = dict(zip(self.ys.tolist(), self._xs_list))

    @classmethod
    def build(cls, points, universe=None):
        pts = [(int(x), int(y)) for x, y in points]
        xs = [x for x, _ in pts]
        ys = [y for _, y in pts]
        if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
            raise ValueError("duplicate coordinate in point set")
        if pts and min(min(xs), min(ys)) < 1:
            raise ValueError("coordinates must be positive")
        if universe is None:
            universe = max(xs + ys, default=0)
        elif pts and max(max(xs), max(ys)) > universe:
            raise ValueError("coordinate outside the universe")
        pts.sort()
        return cls([x for x, _ in pts], [y for _, y in pts], universe)

    def __len__(self):
        return len(self.xs)

    def report(self, x1, x2, y1, y2):
        """points (x, y) with x1 <= x <= x2 and y1 <= y <= y2."""
        if self.wt is None or x1 > x2 or y1 > y2:
            return []
        a = int(np.searchsorted(self.xs, x1, side="left"))
        b = int(np.searchsorted(self.xs, x2, side="right"))
        hits = self.wt.range_report(a, b, max(y1, 0), min(y2, self.universe))
        return [(self._x_of_y[y], y) for y, _ in hits]

    def points(self):
        return list(zip(self._xs_list, self.ys.tolist()))

    def write(self, out):
        out.u8(self.VERSION)
        out.u64(self.universe)
        out.array(self.xs, np.int64)
        out.array(self.ys, np.int64)

    def to_bytes(self):
        out = Writer()
        self.write(out)
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("grid", cls.VERSION)
        universe = reader.u64()
        xs = reader.array(np.int64)
        ys = reader.array(np.int64)
        return cls(xs, ys, universe)

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))


def build_grid(points, universe=None):
    return PointGrid.build(points, universe)


def scan_report(points, x1, x2, y1, y2):
    """linear-scan reference for report."""
    return sorted((x, y) for x, y in points if x1 <= x <= x2 and y1 <= y <= y2)
