"""pointerless balanced wavelet tree over small integer codes."""

import numpy as np

from .serial import Reader, Writer
from .succinct import RankSelectBitVector


class WaveletTree:
    """wavelet tree over a sequence of codes in [0, sigma).

    Every level is one bit vector of length n. A node covering codes
    [lo, hi) occupies positions [C[lo], C[hi]) of its level, where C[c]
    counts the codes smaller than c, so no node pointers are stored.
    Positions passed to rank are prefix lengths (0..n).
    """

    VERSION = 1

    def __init__(self, codes, sigma):
        codes = np.asarray(codes, dtype=np.int64).ravel()
        if codes.size and (codes.min() < 0 or codes.max() >= sigma):
            raise ValueError("code outside [0, sigma)")
        self.n = len(codes)
        self.sigma = sigma
        counts = np.bincount(codes, minlength=sigma)
        C = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
        depth = (sigma - 1).bit_length()
        lo = np.zeros(sigma, dtype=np.int64)
        hi = np.full(sigma, sigma, dtype=np.int64)
        sym = np.arange(sigma)
        seq = codes
        levels = []
        for _ in range(depth):
            mid = (lo + hi) // 2
            internal = hi - lo > 1
            right = internal & (sym >= mid)
            levels.append(RankSelectBitVector(right[seq]))
            lo = np.where(right, mid, lo)
            hi = np.where(internal & ~right, mid, hi)
            seq = seq[np.argsort(lo[seq], kind="stable")]
        self._finish(C, levels)

    def _finish(self, C, levels):
        self._C_np = np.asarray(C, dtype=np.int64)
        self.C = self._C_np.tolist()
        self.levels = levels
        self._node_rank = {}
        self._paths = {}

    def _start_rank(self, level, lo):
        key = (level, lo)
        r = self._node_rank.get(key)
        if r is None:
            r = self._node_rank[key] = self.levels[level]._rank(self.C[lo])
        return r

    def _path(self, c):
        """per-level (bitvector, node start, rank at start, goes right)."""
        path = self._paths.get(c)
        if path is None:
            path = []
            lo, hi, level = 0, self.sigma, 0
            while hi - lo > 1:
                mid = (lo + hi) // 2
                right = c >= mid
                path.append((self.levels[level]._rank, self.C[lo],
                             self._start_rank(level, lo), right))
                if right:
                    lo = mid
                else:
                    hi = mid
                level += 1
            path = self._paths[c] = tuple(path)
        return path

    def rank(self, c, i):
        """occurrences of c among the first i codes."""
        if not 0 <= c < self.sigma:
            return 0
        for rank1, s, rs, right in self._path(c):
            ones = rank1(s + i) - rs
            i = ones if right else i - ones
        return i

    def rank_pair(self, c, i, j):
        """(rank(c, i), rank(c, j)) in one descent."""
        if not 0 <= c < self.sigma:
            return 0, 0
        for rank1, s, rs, right in self._path(c):
            oi = rank1(s + i) - rs
            oj = rank1(s + j) - rs
            if right:
                i, j = oi, oj
            else:
                i, j = i - oi, j - oj
        return i, j

    def access_rank(self, p):
        """(code at 0-based position p, occurrences of that code in [0, p])."""
        lo, hi, level = 0, self.sigma, 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            bv = self.levels[level]
            s = self.C[lo]
            rs = self._start_rank(level, lo)
            q = s + p
            ones = bv._rank(q) - rs
            if (bv._words[q >> 6] >> (q & 63)) & 1:
                p, lo = ones, mid
            else:
                p, hi = p - ones, mid
            level += 1
        return lo, p + 1

    def access(self, p):
        return self.access_rank(p)[0]

    def range_report(self, a, b, y0, y1):
        """codes in [y0, y1] at positions [a, b), as (code, multiplicity) pairs."""
        out = []
        if a >= b or y0 > y1:
            return out
        stack = [(0, self.sigma, a, b, 0)]
        while stack:
            lo, hi, a, b, level = stack.pop()
            if a >= b or hi <= y0 or lo > y1:
                continue
            if hi - lo == 1:
                out.append((lo, b - a))
                continue
            mid = (lo + hi) // 2
            bv = self.levels[level]
            s = self.C[lo]
            rs = bv._rank(s)
            ra = bv._rank(s + a) - rs
            rb = bv._rank(s + b) - rs
            stack.append((mid, hi, ra, rb, level + 1))
            stack.append((lo, mid, a - ra, b - rb, level + 1))
        return out

    def to_bytes(self):
        out = Writer()
        out.u8(self.VERSION)
        out.u64(self.n)
        out.u64(self.sigma)
        out.array(self._C_np, np.int64)
        out.u8(len(self.levels))
        for bv in self.levels:
            out.raw(bv.to_bytes())
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("wavelet", cls.VERSION)
        self = cls.__new__(cls)
        self.n = reader.u64()
        self.sigma = reader.u64()
        C = reader.array(np.int64)
        levels = [RankSelectBitVector.read(reader) for _ in range(reader.u8())]
        self._finish(C, levels)
        return self

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))

    def size_in_bits(self):
        return 8 * len(self.to_bytes())
