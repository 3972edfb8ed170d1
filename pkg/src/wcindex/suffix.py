"""FM-index style compressed suffix array.

Texts are integer code arrays ending in the sentinel code 0. Code 1 is the
wildcard; alphabet bytes are mapped densely onto codes 2, 3, ... so that
``$ < wildcard < every alphabet symbol``. Rows of the suffix array, text
positions and suffix ranges are 1-based.
"""

from bisect import bisect_left
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .serial import FormatError, Reader, Writer
from .succinct import CompressedIntegerArray, MinDirectory, RankSelectBitVector
from .wavelet import WaveletTree

SENTINEL = 0
WILDCARD = 1
FIRST_CODE = 2


class Alphabet:
    """dense byte -> code map; codes start at 2 and follow byte order."""

    def __init__(self, symbols):
        symbols = bytes(sorted(set(symbols)))
        self.symbols = symbols
        self.sigma = len(symbols)
        table = np.full(256, -1, dtype=np.int64)
        for k, b in enumerate(symbols):
            table[b] = FIRST_CODE + k
        self._table = table

    @classmethod
    def from_data(cls, *chunks):
        seen = set()
        for chunk in chunks:
            seen.update(as_bytes(chunk))
        return cls(seen)

    def encode(self, data):
        """codes for data; bytes outside the alphabet map to -1."""
        raw = np.frombuffer(as_bytes(data), dtype=np.uint8)
        return self._table[raw]

    def decode(self, codes, wildcard="φ", sentinel="$"):
        out = []
        for c in np.asarray(codes).tolist():
            if c == SENTINEL:
                out.append(sentinel)
            elif c == WILDCARD:
                out.append(wildcard)
            else:
                out.append(chr(self.symbols[c - FIRST_CODE]))
        return "".join(out)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and other.symbols == self.symbols

    def __repr__(self):
        return f"Alphabet({self.symbols!r})"


def as_bytes(data):
    if isinstance(data, str):
        return data.encode("latin-1")
    return bytes(data)


class SuffixRange(NamedTuple):
    lo: int
    hi: int

    @property
    def empty(self):
        return self.lo > self.hi

    @property
    def size(self):
        return max(0, self.hi - self.lo + 1)


EMPTY_RANGE = SuffixRange(1, 0)


def suffix_array(text):
    """0-based suffix array by prefix doubling; text must end in a unique minimum."""
    t = np.asarray(text, dtype=np.int64)
    n = len(t)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(t, return_inverse=True)
    rank = rank.astype(np.int64)
    k = 1
    while True:
        second = np.zeros(n, dtype=np.int64)
        if k < n:
            second[:n - k] = rank[k:] + 1
        key = rank * (n + 1) + second
        sa = np.argsort(key)
        sk = key[sa]
        fresh = np.empty(n, dtype=np.int64)
        fresh[sa] = np.concatenate(([0], np.cumsum(sk[1:] != sk[:-1])))
        rank = fresh
        if rank[sa[-1]] == n - 1 or k >= n:
            return sa
        k *= 2


@numba.njit(cache=True)
def _kasai(text, sa):
    n = len(sa)
    rank = np.empty(n, dtype=np.int64)
    for r in range(n):
        rank[sa[r]] = r
    lcp = np.zeros(n + 1, dtype=np.int64)
    h = 0
    for i in range(n):
        r = rank[i]
        if r > 0:
            j = sa[r - 1]
            while i + h < n and j + h < n and text[i + h] == text[j + h]:
                h += 1
            lcp[r] = h
            if h > 0:
                h -= 1
        else:
            h = 0
    return lcp


def lcp_array(text, sa):
    """lcp[r] = lcp of rows r-1 and r (0-based), with zero sentinels at 0 and n."""
    return _kasai(np.asarray(text, dtype=np.int64), np.asarray(sa, dtype=np.int64))


class LcpSupport:
    """LCP array in one byte per row plus exceptions, with previous/next
    smaller-value search over exact per-block minima.

    Indexes are 0-based over the n + 1 entries of ``lcp_array``.
    """

    VERSION = 1
    BLOCK = 64
    CAP = 255

    def __init__(self, lcp):
        lcp = np.asarray(lcp, dtype=np.int64)
        big = lcp >= self.CAP
        self._setup(
            np.minimum(lcp, self.CAP).astype(np.uint8),
            np.flatnonzero(big).astype(np.int64),
            lcp[big].astype(np.uint32),
            self._block_minima(lcp),
        )

    @classmethod
    def _block_minima(cls, lcp):
        nb = (len(lcp) + cls.BLOCK - 1) // cls.BLOCK
        pad = nb * cls.BLOCK - len(lcp)
        padded = np.concatenate([lcp, np.full(pad, np.iinfo(np.int32).max, dtype=np.int64)])
        return padded.reshape(nb, cls.BLOCK).min(axis=1).astype(np.int32)

    def _setup(self, small, exc_pos, exc_val, mins):
        self._small = small
        self._exc_pos = exc_pos
        self._exc_val = exc_val
        self._exc_list = exc_pos.tolist()
        self._mins = mins
        self._dir = MinDirectory(mins)
        self.size = len(small)

    def __len__(self):
        return self.size

    def value(self, k):
        v = int(self._small[k])
        if v == self.CAP:
            return int(self._exc_val[bisect_left(self._exc_list, k)])
        return v

    def _leaf(self, lo, hi):
        v = self._small[lo:hi].astype(np.int64)
        capped = np.flatnonzero(v == self.CAP)
        if capped.size:
            v[capped] = self._exc_val[np.searchsorted(self._exc_pos, lo + capped)]
        return v

    def next_less(self, k, t):
        """smallest j >= k with lcp[j] < t, or None."""
        B = self.BLOCK
        if k >= self.size:
            return None
        b = k // B
        hits = np.flatnonzero(self._leaf(k, (b + 1) * B) < t)
        if hits.size:
            return k + int(hits[0])
        nb = self._dir.next_block(b + 1, t - 1)
        if nb is None:
            return None
        return nb * B + int(np.flatnonzero(self._leaf(nb * B, (nb + 1) * B) < t)[0])

    def prev_less(self, k, t):
        """largest j <= k with lcp[j] < t, or None."""
        B = self.BLOCK
        if k < 0:
            return None
        b = k // B
        hits = np.flatnonzero(self._leaf(b * B, k + 1) < t)
        if hits.size:
            return b * B + int(hits[-1])
        pb = self._dir.prev_block(b - 1, t - 1)
        if pb is None:
            return None
        return pb * B + int(np.flatnonzero(self._leaf(pb * B, (pb + 1) * B) < t)[-1])

    def to_numpy(self):
        v = self._small.astype(np.int64)
        v[self._exc_pos] = self._exc_val
        return v

    def write(self, out):
        out.u8(self.VERSION)
        out.array(self._small, np.uint8)
        out.array(self._exc_pos, np.int64)
        out.array(self._exc_val, np.uint32)
        out.array(self._mins, np.int32)

    @classmethod
    def read(cls, reader):
        reader.expect_version("lcp", cls.VERSION)
        self = cls.__new__(cls)
        self._setup(reader.array(np.uint8), reader.array(np.int64),
                    reader.array(np.uint32), reader.array(np.int32))
        return self


@dataclass
class MatchingStatistics:
    """per 1-based query position i: length q[i] of the longest prefix of
    P[i..m] occurring in the text and the SA range [lo[i], hi[i]] of that
    prefix (the whole-text range when q[i] = 0)."""

    q: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __len__(self):
        return len(self.q)

    def __getitem__(self, i):
        k = i - 1
        return int(self.q[k]), SuffixRange(int(self.lo[k]), int(self.hi[k]))

    def suffix_range(self, i):
        """SA range of the whole suffix P[i..m], empty if it does not occur."""
        m = len(self.q)
        k = i - 1
        if self.q[k] == m - k:
            return SuffixRange(int(self.lo[k]), int(self.hi[k]))
        return EMPTY_RANGE


class SequenceIndex:
    """compressed suffix array of a code sequence: wavelet-tree BWT, C table,
    text-position SA samples and optional LCP support for matching
    statistics."""

    VERSION = 1

    def __init__(self, n, wt, sample_rate, sampled, samples, lcp, text=None):
        self.n = n
        self.wt = wt
        self.sigma_total = wt.sigma
        self.C = wt.C
        self.sample_rate = sample_rate
        self.sampled = sampled
        self.samples = samples
        self.lcp = lcp
        self.text = text
        # rows [1, F] hold "$" and the suffixes starting with a wildcard
        self._wild_end = self.C[FIRST_CODE] if self.sigma_total > FIRST_CODE else n
        self._seg_base = self._marker_rank(self._wild_end)

    @classmethod
    def build(cls, text, sample_rate=32, with_lcp=True, keep_text=False, return_sa=False):
        text = np.asarray(text, dtype=np.int64).ravel()
        if text.size == 0 or text[-1] != SENTINEL:
            raise FormatError("text must end with the sentinel")
        if np.count_nonzero(text == SENTINEL) != 1:
            raise FormatError("sentinel must occur exactly once, at the end")
        if text.min() < 0:
            raise FormatError("negative symbol code")
        n = len(text)
        sa = suffix_array(text)
        bwt = text[(sa - 1) % n]
        sigma_total = max(int(text.max()) + 1, FIRST_CODE)
        wt = WaveletTree(bwt, sigma_total)
        sampled = samples = None
        if sample_rate:
            mark = (sa % sample_rate) == 0
            sampled = RankSelectBitVector(mark)
            samples = CompressedIntegerArray(sa[mark] + 1)
        lcp = LcpSupport(lcp_array(text, sa)) if with_lcp else None
        idx = cls(n, wt, sample_rate or 0, sampled, samples, lcp,
                  text.copy() if keep_text else None)
        return (idx, sa) if return_sa else idx

    # -- core FM-index operations ------------------------------------------

    def _extend(self, lo, hi, c):
        if not 0 <= c < self.sigma_total:
            return 1, 0
        ra, rb = self.wt.rank_pair(c, lo - 1, hi)
        base = self.C[c]
        if ra >= rb:
            return 1, 0
        return base + ra + 1, base + rb

    def backward_extend(self, rng, c):
        lo, hi = rng
        if lo > hi:
            return EMPTY_RANGE
        return SuffixRange(*self._extend(lo, hi, int(c)))

    def find_range(self, pattern):
        lo, hi = 1, self.n
        for c in reversed(np.asarray(pattern, dtype=np.int64).tolist()):
            lo, hi = self._extend(lo, hi, c)
            if lo > hi:
                return EMPTY_RANGE
        return SuffixRange(lo, hi)

    def char_rank(self, c, i):
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        return self.wt.rank(c, i)

    def bwt_symbol(self, row):
        return self.wt.access(row - 1)

    def lf(self, row):
        c, r = self.wt.access_rank(row - 1)
        return self.C[c] + r

    def locate(self, row):
        if not 1 <= row <= self.n:
            raise IndexError(f"row {row} outside [1, {self.n}]")
        if self.sampled is None:
            raise ValueError("index was built without locate support")
        steps = 0
        sampled = self.sampled
        words = sampled._words
        C = self.C
        access_rank = self.wt.access_rank
        while True:
            p = row - 1
            if (words[p >> 6] >> (p & 63)) & 1:
                return self.samples.access(sampled._rank(row)) + steps
            c, r = access_rank(p)
            row = C[c] + r
            steps += 1

    def locate_range(self, rng):
        return [self.locate(r) for r in range(rng.lo, rng.hi + 1)]

    def _marker_rank(self, r):
        return self.wt.rank(WILDCARD, r) + self.wt.rank(SENTINEL, r)

    def segment_rank(self, r):
        """segment occurrences starting in rows [1, r].

        A row starts a segment occurrence when its suffix begins with an
        alphabet symbol and is preceded by a wildcard or by nothing (the
        "$" BWT entry). Those are exactly the wildcard/"$" BWT entries past
        the wildcard-prefixed rows.
        """
        if r <= self._wild_end:
            return 0
        return self._marker_rank(r) - self._seg_base

    def segment_id_range(self, rng):
        """lex ids [id1, id2] of the segment occurrences inside a SA range."""
        lo, hi = rng
        if lo > hi:
            return 1, 0
        return self.segment_rank(lo - 1) + 1, self.segment_rank(hi)

    def extract(self):
        """recover the code text by walking LF from the "$" row."""
        out = np.empty(self.n, dtype=np.int64)
        out[-1] = SENTINEL
        row = 1
        for k in range(self.n - 2, -1, -1):
            c, r = self.wt.access_rank(row - 1)
            out[k] = c
            row = self.C[c] + r
        return out

    # -- matching statistics -----------------------------------------------

    def matching_statistics(self, pattern):
        """right-to-left backward search that falls back to the parent
        lcp-interval whenever an extension fails."""
        if self.lcp is None:
            raise ValueError("index was built without LCP support")
        p = np.asarray(pattern, dtype=np.int64).tolist()
        m = len(p)
        n = self.n
        qs = np.zeros(m, dtype=np.int64)
        los = np.zeros(m, dtype=np.int64)
        his = np.zeros(m, dtype=np.int64)
        lcp = self.lcp
        counts = self.C
        lo, hi, q = 1, n, 0
        for k in range(m - 1, -1, -1):
            c = p[k]
            if not FIRST_CODE <= c < self.sigma_total or counts[c + 1] == counts[c]:
                lo, hi, q = 1, n, 0
            else:
                while True:
                    a, b = self._extend(lo, hi, c)
                    if a <= b:
                        lo, hi, q = a, b, q + 1
                        break
                    ell = max(lcp.value(lo - 1), lcp.value(hi))
                    if ell == 0:
                        lo, hi, q = 1, n, 0
                        continue
                    lo = lcp.prev_less(lo - 1, ell) + 1
                    hi = lcp.next_less(hi, ell)
                    q = ell
            qs[k], los[k], his[k] = q, lo, hi
        return MatchingStatistics(qs, los, his)

    def matching_statistics_quadratic(self, pattern):
        """the same statistics by re-searching every suffix from scratch."""
        p = np.asarray(pattern, dtype=np.int64)
        m = len(p)
        qs = np.zeros(m, dtype=np.int64)
        los = np.ones(m, dtype=np.int64)
        his = np.full(m, self.n, dtype=np.int64)
        for i in range(m):
            lo, hi = 1, self.n
            q = 0
            for length in range(1, m - i + 1):
                rng = self.find_range(p[i:i + length])
                if rng.empty:
                    break
                q, (lo, hi) = length, rng
            qs[i], los[i], his[i] = q, lo, hi
        return MatchingStatistics(qs, los, his)

    # -- serialization ------------------------------------------------------

    def write(self, out):
        out.u8(self.VERSION)
        out.u64(self.n)
        out.raw(self.wt.to_bytes())
        out.u32(self.sample_rate)
        if self.sample_rate:
            out.raw(self.sampled.to_bytes())
            out.raw(self.samples.to_bytes())
        out.u8(self.lcp is not None)
        if self.lcp is not None:
            self.lcp.write(out)

    def to_bytes(self):
        out = Writer()
        self.write(out)
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("sequence index", cls.VERSION)
        n = reader.u64()
        wt = WaveletTree.read(reader)
        rate = reader.u32()
        sampled = samples = None
        if rate:
            sampled = RankSelectBitVector.read(reader)
            samples = CompressedIntegerArray.read(reader)
        lcp = LcpSupport.read(reader) if reader.u8() else None
        return cls(n, wt, rate, sampled, samples, lcp)

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))

    def component_bits(self):
        """serialized size of each part, in bits."""
        parts = {"bwt": self.wt.size_in_bits()}
        if self.sample_rate:
            parts["sa_samples"] = self.sampled.size_in_bits() + self.samples.size_in_bits()
        if self.lcp is not None:
            w = Writer()
            self.lcp.write(w)
            parts["lcp"] = 8 * len(w.getvalue())
        return parts


def build_sequence_index(text, sample_rate=32, with_lcp=True, keep_text=False):
    return SequenceIndex.build(text, sample_rate, with_lcp, keep_text)
