"""succinct full-text dictionary over wildcard-separated text segments.

The segments are joined with wildcard runs into one text and indexed by a
``SequenceIndex``. Every segment occurrence owns the SA range of its
string; those ranges are laminar and are stored as a balanced parentheses
sequence whose t-th open parenthesis is the occurrence with lex id t (its
rank among segment occurrences in suffix order). Bit vector B marks rows
where some interval opens or where one closed on the previous row, L holds
segment lengths by lex id and R counts intervals closed before each 1 of B.
"""

from typing import NamedTuple

import numpy as np

from .serial import FormatError, Reader, Writer
from .succinct import BalancedParentheses, CompressedIntegerArray, RankSelectBitVector
from .suffix import SENTINEL, WILDCARD, Alphabet, SequenceIndex, SuffixRange, as_bytes


class EnclosingInterval(NamedTuple):
    open: int
    close: int

    @property
    def defined(self):
        return self.open > 0


UNDEFINED = EnclosingInterval(0, 0)


def join_segments(segments, group_sizes, leading_separator):
    """code text ``[wild^g0] T1 wild^g1 T2 ... Td $`` and 0-based segment starts."""
    d = len(segments)
    expected = d if leading_separator else d - 1
    if group_sizes is None:
        group_sizes = [1] * max(expected, 0)
    if len(group_sizes) != expected:
        raise FormatError(f"expected {expected} group sizes, got {len(group_sizes)}")
    if any(g < 1 for g in group_sizes):
        raise FormatError("group sizes must be positive")
    parts, starts, pos = [], [], 0
    for j, seg in enumerate(segments):
        gap = group_sizes[j] if leading_separator else (group_sizes[j - 1] if j else 0)
        if gap:
            parts.append(np.full(gap, WILDCARD, dtype=np.int64))
            pos += gap
        seg = np.asarray(seg, dtype=np.int64)
        if seg.size == 0:
            raise FormatError(f"segment {j + 1} is empty")
        if seg.min() < 2:
            raise FormatError(f"segment {j + 1} contains a reserved or unknown symbol")
        starts.append(pos)
        parts.append(seg)
        pos += len(seg)
    parts.append(np.array([SENTINEL], dtype=np.int64))
    return np.concatenate(parts), np.asarray(starts, dtype=np.int64)


def segment_intervals(idx, sa, starts, lengths):
    """SA range [c, e] (1-based) of every occurrence, plus its 0-based row."""
    isa = np.empty(len(sa), dtype=np.int64)
    isa[sa] = np.arange(len(sa))
    rows = isa[starts]
    lcp = idx.lcp
    lo = np.empty(len(starts), dtype=np.int64)
    hi = np.empty(len(starts), dtype=np.int64)
    for k, (r, ell) in enumerate(zip(rows.tolist(), np.asarray(lengths).tolist())):
        lo[k] = lcp.prev_less(r, ell) + 1
        hi[k] = lcp.next_less(r + 1, ell)
    return lo, hi, rows


class FullTextDictionary:
    VERSION = 1

    def __init__(self, idx, b_vec, bp, lengths, closed_before, alphabet=None):
        self.idx = idx
        self.b_vec = b_vec
        self.bp = bp
        self.lengths = lengths
        self.closed_before = closed_before
        self.seg_count = len(lengths)
        self.alphabet = alphabet

    @classmethod
    def build(cls, segments, group_sizes=None, leading_separator=True, alphabet=None,
              sample_rate=32, keep_text=False):
        """build over byte strings (or pre-encoded code arrays).

        After construction ``seg_of_lexid`` maps lex ids to 1-based
        position order and ``seg_ranges`` holds each segment's SA range in
        position order; both are build-time products, not serialized here.
        """
        if not segments:
            raise FormatError("at least one segment is required")
        encoded = []
        if all(isinstance(s, (bytes, bytearray, str)) for s in segments):
            if alphabet is None:
                alphabet = Alphabet.from_data(*segments)
            for j, s in enumerate(segments):
                codes = alphabet.encode(s)
                if codes.size and codes.min() < 0:
                    raise FormatError(f"segment {j + 1} has a symbol outside the alphabet")
                encoded.append(codes)
        else:
            encoded = [np.asarray(s, dtype=np.int64) for s in segments]
        text, starts = join_segments(encoded, group_sizes, leading_separator)
        idx, sa = SequenceIndex.build(text, sample_rate, True, keep_text, return_sa=True)
        lengths = np.array([len(s) for s in encoded], dtype=np.int64)
        self = cls._assemble(idx, sa, starts, lengths, alphabet)
        self.text = text
        return self

    @classmethod
    def _assemble(cls, idx, sa, starts, lengths, alphabet):
        n = idx.n
        d = len(starts)
        lo, hi, rows = segment_intervals(idx, sa, starts, lengths)
        order = np.argsort(rows, kind="stable")
        lexid_of_seg = np.empty(d, dtype=np.int64)
        lexid_of_seg[order] = np.arange(1, d + 1)

        b = np.zeros(n + 1, dtype=bool)
        b[lo - 1] = True
        b[hi] = True  # row hi + 1, 1-based
        b_vec = RankSelectBitVector(b)

        # closes (at row hi + 1) precede opens on the same row; equal
        # ranges nest by lex id, so inner intervals close first
        lex = lexid_of_seg
        ev_pos = np.concatenate([hi + 1, lo])
        ev_kind = np.concatenate([np.zeros(d, np.int64), np.ones(d, np.int64)])
        ev_tie = np.concatenate([-lex, lex])
        ev_order = np.lexsort((ev_tie, ev_kind, ev_pos))
        parens = (ev_kind[ev_order] == 1)
        bp = BalancedParentheses(parens)

        ones = np.flatnonzero(b) + 1
        ends = np.sort(hi)
        closed = np.searchsorted(ends, ones - 1, side="right")

        self = cls(idx, b_vec, bp, CompressedIntegerArray(lengths[order]),
                   CompressedIntegerArray(closed), alphabet)
        self.seg_of_lexid = order + 1
        self.lexid_of_seg = lexid_of_seg
        self.seg_ranges = np.stack([lo, hi], axis=1)
        self.seg_rows = rows + 1
        return self

    # -- queries ------------------------------------------------------------

    def encode(self, pattern):
        if isinstance(pattern, (bytes, bytearray, str)):
            if self.alphabet is None:
                raise ValueError("dictionary has no alphabet; pass codes")
            return self.alphabet.encode(as_bytes(pattern))
        return np.asarray(pattern, dtype=np.int64)

    def smallest_enclosing_interval(self, a, plen):
        """BP pair of the largest-lex-id segment that prefixes the string
        whose (non-empty) SA range starts at row a and has length plen."""
        B, bp, idx = self.b_vec, self.bp, self.idx
        k = B.rank1(a)
        c = B.select1(k) if k else None
        d = B.select1(k + 1)
        if c is None or d is None:
            return UNDEFINED
        last = idx.segment_rank(d - 1)
        before = idx.segment_rank(c - 1)
        if last > before:
            # intervals open at row c
            if self.lengths.access(last) > plen:
                l = bp.select_open(before + 1)
                pair = bp.enclose(l)
                return EnclosingInterval(*pair) if pair else UNDEFINED
            l = bp.select_open(last)
            return EnclosingInterval(l, bp.find_close(l))
        # row c only closes intervals
        r = bp.select_close(self.closed_before.access(k))
        pair = bp.enclose(bp.find_open(r))
        return EnclosingInterval(*pair) if pair else UNDEFINED

    def chain_count(self, iv):
        if not iv.defined:
            return 0
        return self.bp.rank_open(iv.open) - self.bp.rank_close(iv.open)

    def iter_chain(self, iv):
        bp = self.bp
        while iv.defined:
            yield bp.rank_open(iv.open)
            pair = bp.enclose(iv.open)
            iv = EnclosingInterval(*pair) if pair else UNDEFINED

    def enclosing_chain(self, iv):
        """(count, iterator of lex ids from iv outward)."""
        return self.chain_count(iv), self.iter_chain(iv)

    def segments_with_prefix(self, rng):
        """lex id range [id1, id2] of segments having the range's string as prefix."""
        return self.idx.segment_id_range(rng)

    def segments_contained_in(self, pattern):
        """every (i, lex id) with segment lex id a prefix of pattern[i..]."""
        p = self.encode(pattern)
        ms = self.idx.matching_statistics(p)
        out = []
        for i in range(1, len(p) + 1):
            q, rng = ms[i]
            if q == 0:
                continue
            iv = self.smallest_enclosing_interval(rng.lo, q)
            out.extend((i, t) for t in self.iter_chain(iv))
        return out

    def count_contained(self, pattern):
        """gamma: number of (position, segment) prefix pairs, without reporting."""
        p = self.encode(pattern)
        ms = self.idx.matching_statistics(p)
        total = 0
        for i in range(1, len(p) + 1):
            q, rng = ms[i]
            if q:
                total += self.chain_count(self.smallest_enclosing_interval(rng.lo, q))
        return total

    def find_range(self, pattern):
        return self.idx.find_range(self.encode(pattern))

    def locate_pattern(self, pattern):
        p = self.encode(pattern)
        if len(p) == 0:
            return list(range(1, self.idx.n + 1))
        if p.min() < 0:
            return []
        return sorted(self.idx.locate_range(self.idx.find_range(p)))

    # -- serialization ------------------------------------------------------

    def write(self, out):
        out.u8(self.VERSION)
        self.idx.write(out)
        out.raw(self.b_vec.to_bytes())
        out.raw(self.bp.to_bytes())
        out.raw(self.lengths.to_bytes())
        out.raw(self.closed_before.to_bytes())

    def to_bytes(self):
        out = Writer()
        self.write(out)
        return out.getvalue()

    @classmethod
    def read(cls, reader, alphabet=None):
        reader.expect_version("dictionary", cls.VERSION)
        idx = SequenceIndex.read(reader)
        b_vec = RankSelectBitVector.read(reader)
        bp = BalancedParentheses.read(reader)
        lengths = CompressedIntegerArray.read(reader)
        closed = CompressedIntegerArray.read(reader)
        return cls(idx, b_vec, bp, lengths, closed, alphabet)

    @classmethod
    def from_bytes(cls, data, alphabet=None):
        return cls.read(Reader(data), alphabet)

    def component_bits(self):
        parts = {f"sequence.{k}": v for k, v in self.idx.component_bits().items()}
        parts["B"] = self.b_vec.size_in_bits()
        parts["BP"] = self.bp.size_in_bits()
        parts["L"] = self.lengths.size_in_bits()
        parts["R"] = self.closed_before.size_in_bits()
        return parts


def build_dictionary(segments, group_sizes=None, leading_separator=True, **kwargs):
    return FullTextDictionary.build(segments, group_sizes, leading_separator, **kwargs)
