"""bit-level building blocks: rank/select bit vectors, fixed-width integer
arrays and balanced parentheses.

All public positions are 1-based, as in the usual succinct data structure
literature: ``rank1(i)`` counts the ones in ``bits[1..i]`` and
``select1(j)`` returns the position of the j-th one. Operations that can
fail to produce a position (select beyond the last one, enclose of a
top-level pair) return ``None``.
"""

from array import array
from bisect import bisect_left

import numpy as np

from .serial import Reader, Writer

_WORD = 64
_SUPER = 1024  # words per superblock (65536 bits)
_MASK64 = (1 << 64) - 1


def _pack_bits(bits):
    """pack a bool array LSB-first into uint64 words, plus one spare word."""
    bits = np.asarray(bits, dtype=bool).ravel()
    nwords = len(bits) // _WORD + 1
    buf = np.zeros(nwords * 8, dtype=np.uint8)
    packed = np.packbits(bits, bitorder="little")
    buf[:len(packed)] = packed
    return buf.view("<u8").astype(np.uint64)


def _select_in_word(x, k):
    """0-based offset of the k-th (1-based) set bit of x."""
    for _ in range(k - 1):
        x &= x - 1
    return (x & -x).bit_length() - 1


class RankSelectBitVector:
    """static bit vector with a two-level rank directory.

    The directory holds one 64-bit count per 65536-bit superblock and one
    16-bit count per word relative to its superblock, so rank is two table
    lookups plus a popcount. select binary-searches the same directory.
    """

    VERSION = 1

    def __init__(self, bits):
        bits = np.asarray(bits, dtype=bool).ravel()
        self._setup(len(bits), _pack_bits(bits))

    @classmethod
    def _from_words(cls, n, words, rel=None, sb=None):
        self = cls.__new__(cls)
        self._setup(n, words, rel, sb)
        return self

    def _setup(self, n, words, rel=None, sb=None):
        self.n = n
        words = np.asarray(words, dtype=np.uint64)
        if rel is None:
            counts = np.bitwise_count(words).astype(np.int64)
            before = np.concatenate(([0], np.cumsum(counts)[:-1]))
            sb = before[::_SUPER].astype(np.uint64)
            rel = (before - np.repeat(sb.astype(np.int64), _SUPER)[:len(words)]).astype(np.uint16)
        self._words_np = words
        self._rel_np = np.asarray(rel, dtype=np.uint16)
        self._sb_np = np.asarray(sb, dtype=np.uint64)
        self._words = array("Q", words.tobytes())
        self._rel = array("H", self._rel_np.tobytes())
        self._sb = array("Q", self._sb_np.tobytes())
        self.ones = self._rank(n)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        """bit at 1-based position i."""
        if not 1 <= i <= self.n:
            raise IndexError(f"bit position {i} outside [1, {self.n}]")
        i -= 1
        return (self._words[i >> 6] >> (i & 63)) & 1

    def bits(self):
        """the bits as a numpy bool array (0-based)."""
        raw = self._words_np.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[:self.n].astype(bool)

    def _rank(self, i):
        w = i >> 6
        r = self._sb[w >> 10] + self._rel[w]
        rem = i & 63
        if rem:
            r += (self._words[w] & ((1 << rem) - 1)).bit_count()
        return r

    def rank1(self, i):
        if not 0 <= i <= self.n:
            raise IndexError(f"rank position {i} outside [0, {self.n}]")
        return self._rank(i)

    def rank0(self, i):
        return i - self.rank1(i)

    def select1(self, j):
        if j < 1 or j > self.ones:
            return None
        sb, rel = self._sb, self._rel
        s = bisect_left(sb, j) - 1
        lo = s * _SUPER
        hi = min(lo + _SUPER, len(self._words))
        w = bisect_left(rel, j - sb[s], lo, hi) - 1
        k = j - sb[s] - rel[w]
        return w * _WORD + _select_in_word(self._words[w], k) + 1

    def select0(self, j):
        if j < 1 or j > self.n - self.ones:
            return None
        sb, rel = self._sb, self._rel
        # last superblock with fewer than j zeros before it
        lo, hi = 0, len(sb)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mid * _SUPER * _WORD - sb[mid] < j:
                lo = mid
            else:
                hi = mid
        s = lo
        base = s * _SUPER
        zeros_sb = base * _WORD - sb[s]
        lo, hi = base, min(base + _SUPER, len(self._words))
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if zeros_sb + (mid - base) * _WORD - rel[mid] < j:
                lo = mid
            else:
                hi = mid
        w = lo
        k = j - (zeros_sb + (w - base) * _WORD - rel[w])
        return w * _WORD + _select_in_word(~self._words[w] & _MASK64, k) + 1

    def to_bytes(self):
        out = Writer()
        out.u8(self.VERSION)
        out.u64(self.n)
        out.array(self._words_np, np.uint64)
        out.array(self._rel_np, np.uint16)
        out.array(self._sb_np, np.uint64)
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("bitvector", cls.VERSION)
        n = reader.u64()
        words = reader.array(np.uint64)
        rel = reader.array(np.uint16)
        sb = reader.array(np.uint64)
        return cls._from_words(n, words, rel, sb)

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))

    def size_in_bits(self):
        return 8 * len(self.to_bytes())


class CompressedIntegerArray:
    """nonnegative integers packed at a fixed width of ceil(log2(max+1)) bits."""

    VERSION = 1

    def __init__(self, values):
        raw = np.asarray(values).ravel()
        if raw.size and raw.dtype.kind in "if" and raw.min() < 0:
            raise ValueError("values must be nonnegative")
        vals = raw.astype(np.uint64)
        self.count = len(vals)
        self.width = max(1, int(vals.max()).bit_length()) if self.count else 1
        w = self.width
        words = np.zeros((self.count * w) // _WORD + 2, dtype=np.uint64)
        if self.count:
            offs = np.arange(self.count, dtype=np.uint64) * np.uint64(w)
            wi = (offs >> np.uint64(6)).astype(np.int64)
            sh = offs & np.uint64(63)
            np.bitwise_or.at(words, wi, vals << sh)
            spill = (sh + np.uint64(w)) > np.uint64(64)
            if spill.any():
                np.bitwise_or.at(words, wi[spill] + 1,
                                 vals[spill] >> (np.uint64(64) - sh[spill]))
        self._set_words(words)

    def _set_words(self, words):
        self._words_np = words
        self._words = array("Q", words.tobytes())
        self._mask = (1 << self.width) - 1

    def __len__(self):
        return self.count

    def access(self, i):
        if not 1 <= i <= self.count:
            raise IndexError(f"index {i} outside [1, {self.count}]")
        off = (i - 1) * self.width
        wi, sh = off >> 6, off & 63
        x = self._words[wi] >> sh
        if sh + self.width > 64:
            x |= self._words[wi + 1] << (64 - sh)
        return x & self._mask

    __getitem__ = access

    def to_numpy(self):
        if not self.count:
            return np.zeros(0, dtype=np.uint64)
        w = np.uint64(self.width)
        offs = np.arange(self.count, dtype=np.uint64) * w
        wi = (offs >> np.uint64(6)).astype(np.int64)
        sh = offs & np.uint64(63)
        lo = self._words_np[wi] >> sh
        hi_shift = np.uint64(64) - sh
        hi = np.where(sh > 0, self._words_np[wi + 1] << (hi_shift % np.uint64(64)),
                      np.uint64(0))
        mask = np.uint64(self._mask)
        return (lo | hi) & mask

    def to_bytes(self):
        out = Writer()
        out.u8(self.VERSION)
        out.u64(self.count)
        out.u8(self.width)
        out.array(self._words_np, np.uint64)
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("intarray", cls.VERSION)
        self = cls.__new__(cls)
        self.count = reader.u64()
        self.width = reader.u8()
        self._set_words(reader.array(np.uint64))
        return self

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))

    def size_in_bits(self):
        return 8 * len(self.to_bytes())


class MinDirectory:
    """hierarchy of block minima with fan-out 64.

    Answers "first block at or after b whose minimum is <= t" and the
    mirrored query, in O(log_64 blocks) numpy slice scans.
    """

    FAN = 64

    def __init__(self, mins):
        big = np.iinfo(np.int64).max
        self.levels = [np.asarray(mins, dtype=np.int64)]
        while len(self.levels[-1]) > self.FAN:
            a = self.levels[-1]
            pad = (-len(a)) % self.FAN
            a = np.concatenate([a, np.full(pad, big, dtype=np.int64)])
            self.levels.append(a.reshape(-1, self.FAN).min(axis=1))

    def next_block(self, b, t):
        F, levels = self.FAN, self.levels
        lvl, idx = 0, b
        while True:
            arr = levels[lvl]
            hits = np.flatnonzero(arr[idx:(idx // F + 1) * F] <= t)
            if hits.size:
                idx += int(hits[0])
                break
            if lvl + 1 == len(levels):
                return None
            idx = idx // F + 1
            lvl += 1
        while lvl:
            lvl -= 1
            start = idx * F
            idx = start + int(np.flatnonzero(levels[lvl][start:start + F] <= t)[0])
        return idx

    def prev_block(self, b, t):
        F, levels = self.FAN, self.levels
        lvl, idx = 0, b
        while True:
            if idx < 0:
                return None
            arr = levels[lvl]
            start = (idx // F) * F
            hits = np.flatnonzero(arr[start:idx + 1] <= t)
            if hits.size:
                idx = start + int(hits[-1])
                break
            if lvl + 1 == len(levels):
                return None
            idx = idx // F - 1
            lvl += 1
        while lvl:
            lvl -= 1
            start = idx * F
            idx = start + int(np.flatnonzero(levels[lvl][start:start + F] <= t)[-1])
        return idx


class BalancedParentheses:
    """balanced parentheses over a rank/select bit vector (open = 1).

    Navigation uses the excess E(i) = #open - #close in [1..i]. A
    MinDirectory over per-word excess minima locates the target word and
    the final answer comes from a bit scan inside that word.
    """

    VERSION = 1

    def __init__(self, parens):
        if isinstance(parens, str):
            if set(parens) - {"(", ")"}:
                raise ValueError("parentheses string may only contain '(' and ')'")
            bits = np.frombuffer(parens.encode(), dtype=np.uint8) == ord("(")
        else:
            bits = np.asarray(parens, dtype=bool).ravel()
        steps = np.where(bits, 1, -1)
        excess = np.cumsum(steps)
        if len(bits) % 2 or (len(bits) and (excess.min() < 0 or excess[-1] != 0)):
            raise ValueError("unbalanced parentheses")
        self._bv = RankSelectBitVector(bits)
        self._build_directory(excess)

    def _build_directory(self, excess=None):
        self.size = len(self._bv)
        if excess is None:
            excess = np.cumsum(np.where(self._bv.bits(), 1, -1))
        nblocks = (self.size + _WORD - 1) // _WORD
        pad = nblocks * _WORD - self.size
        big = np.iinfo(np.int64).max
        padded = np.concatenate([excess.astype(np.int64), np.full(pad, big, dtype=np.int64)])
        self._dir = MinDirectory(padded.reshape(nblocks, _WORD).min(axis=1)
                                 if nblocks else np.zeros(0, dtype=np.int64))

    def __len__(self):
        return self.size

    def __str__(self):
        return "".join("(" if b else ")" for b in self._bv.bits())

    def is_open(self, i):
        return self._bv[i] == 1

    def excess(self, i):
        return 2 * self._bv._rank(i) - i

    def rank_open(self, i):
        return self._bv.rank1(i)

    def rank_close(self, i):
        return self._bv.rank0(i)

    def select_open(self, j):
        return self._bv.select1(j)

    def select_close(self, j):
        return self._bv.select0(j)

    def _fwd_search(self, i, t):
        """smallest j >= i with E(j) <= t, or None."""
        if i > self.size:
            return None
        words = self._bv._words
        e = self.excess(i - 1)
        b = (i - 1) >> 6
        end = min((b + 1) * _WORD, self.size)
        x = words[b]
        for j in range(i, end + 1):
            e += 1 if (x >> ((j - 1) & 63)) & 1 else -1
            if e <= t:
                return j
        nb = self._dir.next_block(b + 1, t)
        if nb is None:
            return None
        e = self.excess(nb * _WORD)
        x = words[nb]
        for j in range(nb * _WORD + 1, min((nb + 1) * _WORD, self.size) + 1):
            e += 1 if (x >> ((j - 1) & 63)) & 1 else -1
            if e <= t:
                return j
        raise AssertionError("directory and bits disagree")

    def _bwd_search(self, i, t):
        """largest j <= i (j >= 0, E(0) = 0) with E(j) <= t, or None."""
        if i <= 0:
            return 0 if i == 0 and t >= 0 else None
        words = self._bv._words
        e = self.excess(i)
        b = (i - 1) >> 6
        x = words[b]
        j = i
        start = b * _WORD
        while j > start:
            if e <= t:
                return j
            e -= 1 if (x >> ((j - 1) & 63)) & 1 else -1
            j -= 1
        pb = self._dir.prev_block(b - 1, t)
        if pb is None:
            return 0 if t >= 0 else None
        j = min((pb + 1) * _WORD, self.size)
        e = self.excess(j)
        x = words[pb]
        while j > pb * _WORD:
            if e <= t:
                return j
            e -= 1 if (x >> ((j - 1) & 63)) & 1 else -1
            j -= 1
        raise AssertionError("directory and bits disagree")

    def _check_open(self, l):
        if not 1 <= l <= self.size or not self.is_open(l):
            raise ValueError(f"position {l} is not an open parenthesis")

    def find_close(self, l):
        self._check_open(l)
        return self._fwd_search(l + 1, self.excess(l - 1))

    def find_open(self, r):
        if not 1 <= r <= self.size or self.is_open(r):
            raise ValueError(f"position {r} is not a close parenthesis")
        return self._bwd_search(r - 1, self.excess(r)) + 1

    def enclose(self, l):
        """(open, close) of the tightest pair strictly containing l, or None."""
        self._check_open(l)
        e = self.excess(l - 1)
        if e == 0:
            return None
        p = self._bwd_search(l - 1, e - 1) + 1
        return p, self.find_close(p)

    def to_bytes(self):
        out = Writer()
        out.u8(self.VERSION)
        out.raw(self._bv.to_bytes())
        return out.getvalue()

    @classmethod
    def read(cls, reader):
        reader.expect_version("parens", cls.VERSION)
        self = cls.__new__(cls)
        self._bv = RankSelectBitVector.read(reader)
        self._build_directory()
        return self

    @classmethod
    def from_bytes(cls, data):
        return cls.read(Reader(data))

    def size_in_bits(self):
        return 8 * len(self.to_bytes())
