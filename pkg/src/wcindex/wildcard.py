"""wildcard text index: T = T1 wild^k1 T2 ... wild^kd T(d+1).

Queries are answered by three pipelines, split by how many wildcard
groups the occurrence window overlaps:

* type 1 (no group): backward search plus locate on the forward index.
* type 2 (one group): split the pattern around the group. A point grid
  holds one point per group; its x axis orders groups by (length, reverse
  lex id of the segment before the group) and its y axis by (length,
  forward lex id of the segment after it), so every group length owns a
  contiguous block on both axes.
* type 3 (two or more groups): walk the segments that prefix each pattern
  suffix and chain prefix/suffix checks through a timestamped bit table W.
"""

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dictionary import FullTextDictionary, segment_intervals
from .grid import PointGrid
from .serial import FormatError, Reader, Writer
from .succinct import BalancedParentheses, CompressedIntegerArray, RankSelectBitVector
from .suffix import SENTINEL, Alphabet, SequenceIndex, as_bytes

MAGIC = b"WCIX"
FORMAT_VERSION = 1


@dataclass
class ParsedText:
    segments: list
    groups: list
    starts: list
    wildcard: int

    @property
    def d(self):
        return len(self.groups)

    @property
    def k_total(self):
        return sum(self.groups)

    @property
    def n(self):
        return self.starts[-1] + len(self.segments[-1]) - 1


def _wild_byte(wildcard):
    if isinstance(wildcard, int):
        return wildcard
    b = as_bytes(wildcard)
    if len(b) != 1:
        raise ValueError("wildcard must be a single byte")
    return b[0]


def parse_wildcard_text(raw, wildcard=b"?"):
    """split raw bytes into segments and wildcard group sizes."""
    data = as_bytes(raw)
    w = _wild_byte(wildcard)
    if not data:
        raise FormatError("empty text")
    if data[0] == w:
        raise FormatError("leading wildcard")
    if data[-1] == w:
        raise FormatError("trailing wildcard")
    arr = np.frombuffer(data, dtype=np.uint8)
    wild = arr == w
    edges = np.flatnonzero(np.diff(wild.astype(np.int8)))
    # runs alternate segment, group, segment, ...
    bounds = np.concatenate(([0], edges + 1, [len(arr)])).tolist()
    segments, groups, starts = [], [], []
    for r in range(len(bounds) - 1):
        a, b = bounds[r], bounds[r + 1]
        if r % 2 == 0:
            segments.append(data[a:b])
            starts.append(a + 1)
        else:
            groups.append(b - a)
    return ParsedText(segments, groups, starts, w)


class MatchResult(NamedTuple):
    position: int
    mtype: int


@dataclass
class QueryReport:
    matches: list = field(default_factory=list)
    occ1: int = 0
    occ2: int = 0
    occ3: int = 0
    gamma: int = 0

    @property
    def positions(self):
        return [r.position for r in self.matches]

    def __iter__(self):
        return iter(self.matches)

    def __len__(self):
        return len(self.matches)


class TypeThreeWorkspace:
    """(d+1) x (m+1) bit table with constant-time reset.

    A bit reads 1 only when its slot holds the current epoch, so reset just
    bumps the epoch; the table is cleared for real once every 65535 resets.
    """

    def __init__(self, rows=1, cols=1):
        self._stamps = np.zeros((rows, cols), dtype=np.uint16)
        self.epoch = 1

    @property
    def shape(self):
        return self._stamps.shape

    def reset(self, rows=None, cols=None):
        r, c = self._stamps.shape
        if (rows is not None and rows > r) or (cols is not None and cols > c):
            self._stamps = np.zeros((max(rows or 0, r), max(cols or 0, c)), dtype=np.uint16)
            self.epoch = 1
            return self
        self.epoch += 1
        if self.epoch > 0xFFFF:
            self._stamps.fill(0)
            self.epoch = 1
        return self

    def get(self, j, i):
        return self._stamps[j, i] == self.epoch

    def set(self, j, i):
        self._stamps[j, i] = self.epoch

    def nbytes(self):
        return self._stamps.nbytes


def reset_workspace(ws):
    return ws.reset()


def _cia(values):
    return CompressedIntegerArray(np.asarray(values, dtype=np.int64))


@dataclass
class SegmentTable:
    """per segment in position order (0-based j): start x, length l, the
    following group size k (0 after the last segment), forward SA range
    and reverse SA range of the reversed segment."""

    x: list
    l: list
    k: list
    rsa_lo: list
    rsa_hi: list
    rev_lo: list
    rev_hi: list

    def __post_init__(self):
        d = len(self.x) - 1
        self.group_start = [self.x[j] + self.l[j] for j in range(d)]
        self.group_end = [self.x[j + 1] - 1 for j in range(d)]
        self.max_group = max(self.k[:d], default=0)

    @property
    def d(self):
        return len(self.x) - 1

    _FIELDS = ("x", "l", "k", "rsa_lo", "rsa_hi", "rev_lo", "rev_hi")

    def write(self, out):
        out.u8(1)
        for name in self._FIELDS:
            out.raw(_cia(getattr(self, name)).to_bytes())

    @classmethod
    def read(cls, reader):
        reader.expect_version("segment table", 1)
        cols = [CompressedIntegerArray.read(reader).to_numpy().astype(np.int64).tolist()
                for _ in cls._FIELDS]
        return cls(*cols)


def _blob(component):
    out = Writer()
    component.write(out)
    return out.getvalue()


class WildcardIndex:
    def __init__(self, fwd, rev, seg, pi, pi_rev, blocks, x_ids, y_ids, grid,
                 alphabet, wildcard, sample_rate, meta=None):
        self.fwd = fwd
        self.rev = rev
        self.seg = seg
        self.pi = pi
        self.pi_rev = pi_rev
        self.block_len, self.block_start = blocks
        self.x_ids = x_ids
        self.y_ids = y_ids
        self.grid = grid
        self.alphabet = alphabet
        self.wildcard = wildcard
        self.sample_rate = sample_rate
        self.meta = meta or {}
        self.d = seg.d
        self.n = fwd.idx.n - 1
        self.k_total = sum(seg.k)
        self._ws = None

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, raw, wildcard=b"?", sample_rate=32, meta=None, keep_text=False):
        parsed = parse_wildcard_text(raw, wildcard)
        alphabet = Alphabet.from_data(*parsed.segments)
        codes = [alphabet.encode(s) for s in parsed.segments]
        fwd = FullTextDictionary.build(codes, parsed.groups, leading_separator=False,
                                       alphabet=alphabet, sample_rate=sample_rate,
                                       keep_text=keep_text)
        text = fwd.text
        n_text = len(text) - 1
        d = parsed.d
        x = np.asarray(parsed.starts, dtype=np.int64)
        lens = np.array([len(s) for s in parsed.segments], dtype=np.int64)
        ks = np.asarray(parsed.groups + [0], dtype=np.int64)

        rev_text = np.concatenate([text[-2::-1], [SENTINEL]])
        rev, rsa = SequenceIndex.build(rev_text, sample_rate=0, with_lcp=True,
                                       return_sa=True)
        rev_starts = n_text - x - lens + 1
        rev_lo, rev_hi, rev_rows = segment_intervals(rev, rsa, rev_starts, lens)
        rev.lcp = None
        order = np.argsort(rev_rows, kind="stable")
        rev_lexid = np.empty(d + 1, dtype=np.int64)
        rev_lexid[order] = np.arange(1, d + 1 + 1)

        fwd_lexid = fwd.lexid_of_seg
        rsa_lo, rsa_hi = fwd.seg_ranges[:, 0], fwd.seg_ranges[:, 1]
        seg = SegmentTable(x.tolist(), lens.tolist(), ks.tolist(), rsa_lo.tolist(),
                           rsa_hi.tolist(), rev_lo.tolist(), rev_hi.tolist())

        gk = ks[:d]
        x_order = np.lexsort((rev_lexid[:d], gk))
        y_order = np.lexsort((fwd_lexid[1:], gk))
        X = np.empty(d, dtype=np.int64)
        Y = np.empty(d, dtype=np.int64)
        X[x_order] = np.arange(1, d + 1)
        Y[y_order] = np.arange(1, d + 1)
        grid = PointGrid.build(zip(X.tolist(), Y.tolist()), universe=d)
        block_len, counts = np.unique(gk, return_counts=True)
        block_start = np.concatenate(([0], np.cumsum(counts)))
        self = cls(fwd, rev, seg, fwd.seg_of_lexid.tolist(), (order + 1).tolist(),
                   (block_len.tolist(), block_start.tolist()),
                   rev_lexid[:d][x_order].tolist(), fwd_lexid[1:][y_order].tolist(),
                   grid, alphabet, parsed.wildcard, sample_rate, meta)
        self.text = text
        return self

    # -- helpers ------------------------------------------------------------

    def encode_pattern(self, pattern):
        data = as_bytes(pattern)
        if not data:
            raise ValueError("empty pattern")
        if self.wildcard in data:
            raise ValueError("pattern contains the wildcard byte")
        sep = self.meta.get("separator")
        if sep is not None and sep in data:
            raise ValueError("pattern contains the record separator")
        return self.alphabet.encode(data)

    def overlap_group_count(self, position, m):
        """wildcard groups intersecting [position, position + m - 1]."""
        end = position + m - 1
        if position < 1 or m < 1 or end > self.n:
            raise IndexError(f"window [{position}, {end}] outside [1, {self.n}]")
        return bisect_right(self.seg.group_start, end) - bisect_left(self.seg.group_end, position)

    def reverse_prefix_ranges(self, p):
        """entry i: reverse-index range of reverse(p[1..i]); entry 0 is unused."""
        out = [(1, self.rev.n)]
        lo, hi = 1, self.rev.n
        for c in np.asarray(p).tolist():
            if lo <= hi:
                lo, hi = self.rev._extend(lo, hi, c)
            out.append((lo, hi))
        return out

    def _group_of_x(self, pos):
        return self.pi_rev[self.x_ids[pos] - 1] - 1

    def _group_of_y(self, pos):
        return self.pi[self.y_ids[pos] - 1] - 2

    # -- type 1 -------------------------------------------------------------

    def match_type1(self, p, ms=None):
        p = np.asarray(p, dtype=np.int64)
        m = len(p)
        if m == 0 or m > self.n:
            return []
        if ms is not None:
            rng = ms.suffix_range(1)
        else:
            rng = self.fwd.idx.find_range(p) if p.min() >= 0 else None
        if rng is None or rng.empty:
            return []
        return sorted(self.fwd.idx.locate_range(rng))

    # -- type 2 -------------------------------------------------------------

    def match_type2(self, p, ms, rev_ranges):
        m = len(p)
        seg = self.seg
        X, L = seg.x, seg.l
        blen, bstart = self.block_len, self.block_start
        nb = len(blen)
        out = set()
        if not nb:
            return []
        # the first block whose groups have length >= g
        first_at_least = lambda g: bisect_left(blen, g)
        rev_ids = self.rev.segment_id_range
        fwd_ids = self.fwd.idx.segment_id_range
        maxk = seg.max_group

        # pattern inside one group
        for b in range(first_at_least(m), nb):
            g = blen[b]
            for pos in range(bstart[b], bstart[b + 1]):
                j = self._group_of_x(pos)
                s = seg.group_start[j]
                out.update(range(s, s + g - m + 1))

        # pattern ends inside a group: p[1..t] is a suffix of T_j
        for t in range(max(1, m - maxk), m):
            lo, hi = rev_ranges[t]
            if lo > hi:
                break
            a, z = rev_ids((lo, hi))
            if a > z:
                continue
            for b in range(first_at_least(m - t), nb):
                u = bisect_left(self.x_ids, a, bstart[b], bstart[b + 1])
                v = bisect_right(self.x_ids, z, u, bstart[b + 1])
                for pos in range(u, v):
                    j = self._group_of_x(pos)
                    out.add(X[j] + L[j] - t)

        # pattern starts inside a group: p[s..m] is a prefix of T_(j+1)
        for s in range(2, min(m, maxk + 1) + 1):
            rng = ms.suffix_range(s)
            if rng.empty:
                continue
            a, z = fwd_ids(rng)
            if a > z:
                continue
            for b in range(first_at_least(s - 1), nb):
                u = bisect_left(self.y_ids, a, bstart[b], bstart[b + 1])
                v = bisect_right(self.y_ids, z, u, bstart[b + 1])
                for pos in range(u, v):
                    j = self._group_of_y(pos)
                    out.add(X[j + 1] - s + 1)

        # group strictly inside: p[1..i-1-g] ends T_j, p[i..m] starts T_(j+1)
        for i in range(3, m + 1):
            rng = ms.suffix_range(i)
            if rng.empty:
                continue
            id1, id2 = fwd_ids(rng)
            if id1 > id2:
                continue
            for b in range(nb):
                g = blen[b]
                s = i - 1 - g
                if s < 1:
                    break
                lo, hi = rev_ranges[s]
                if lo > hi:
                    continue
                id3, id4 = rev_ids((lo, hi))
                if id3 > id4:
                    continue
                b0, b1 = bstart[b], bstart[b + 1]
                x1 = bisect_left(self.x_ids, id3, b0, b1)
                x2 = bisect_right(self.x_ids, id4, x1, b1)
                y1 = bisect_left(self.y_ids, id1, b0, b1)
                y2 = bisect_right(self.y_ids, id2, y1, b1)
                if x1 >= x2 or y1 >= y2:
                    continue
                for gx, _ in self.grid.report(x1 + 1, x2, y1 + 1, y2):
                    j = self._group_of_x(gx - 1)
                    out.add(X[j + 1] - i + 1)

        for pos in out:
            if self.overlap_group_count(pos, m) != 1:
                raise AssertionError(f"type 2 candidate {pos} does not overlap exactly one group")
        return sorted(out)

    # -- type 3 -------------------------------------------------------------

    def match_type3(self, p, ms, rev_ranges, ws):
        """type 3 matches via chained W bits. returns (positions, gamma)."""
        m = len(p)
        d = self.d
        seg = self.seg
        X, L, K = seg.x, seg.l, seg.k
        rev_lo, rev_hi = seg.rev_lo, seg.rev_hi
        rsa_lo, rsa_hi = seg.rsa_lo, seg.rsa_hi
        fwd, pi = self.fwd, self.pi
        qs, los = ms.q.tolist(), ms.lo.tolist()
        out = set()
        gamma = 0
        for i in range(1, m + 1):
            q = qs[i - 1]
            if q == 0:
                continue
            iv = fwd.smallest_enclosing_interval(los[i - 1], q)
            if not iv.defined:
                continue
            gamma += fwd.chain_count(iv)
            for lexid in fwd.iter_chain(iv):
                j = pi[lexid - 1] - 1
                # prefix condition: p[1..i-1] against the text before T_j
                if j == 0:
                    ok = i == 1
                else:
                    kp = K[j - 1]
                    if i - 1 <= kp:
                        ok = True
                    elif i - 1 <= kp + L[j - 1]:
                        lo, hi = rev_ranges[i - 1 - kp]
                        ok = lo <= rev_lo[j - 1] and rev_hi[j - 1] <= hi
                    else:
                        ok = ws.get(j, i)
                if not ok:
                    continue
                # suffix condition: p[i+l_j..m] against the text after T_j
                rem = m - i - L[j] + 1
                if j == d:
                    hit = rem == 0
                elif rem <= K[j]:
                    hit = True
                else:
                    s = i + L[j] + K[j]
                    if rem - K[j] < L[j + 1]:
                        rng = ms.suffix_range(s)
                        hit = not rng.empty and rng.lo <= rsa_lo[j + 1] and rsa_hi[j + 1] <= rng.hi
                    else:
                        ws.set(j + 1, s)
                        hit = False
                if hit:
                    pos = X[j] - i + 1
                    if self.overlap_group_count(pos, m) >= 2:
                        out.add(pos)
        return sorted(out), gamma

    # -- full query ---------------------------------------------------------

    def workspace(self):
        return TypeThreeWorkspace(self.d + 1, 2)

    def query(self, pattern, ws=None):
        """all occurrences of pattern modulo wildcard positions."""
        p = self.encode_pattern(pattern) if isinstance(pattern, (bytes, bytearray, str)) \
            else np.asarray(pattern, dtype=np.int64)
        m = len(p)
        if m == 0:
            raise ValueError("empty pattern")
        report = QueryReport()
        if m > self.n:
            return report
        ms = self.fwd.idx.matching_statistics(p)
        rev_ranges = self.reverse_prefix_ranges(p)
        if ws is None:
            ws = TypeThreeWorkspace(self.d + 1, m + 1)
        else:
            ws.reset(self.d + 1, m + 1)
        t1 = self.match_type1(p, ms)
        t2 = self.match_type2(p, ms, rev_ranges)
        t3, gamma = self.match_type3(p, ms, rev_ranges, ws)
        report.occ1, report.occ2, report.occ3, report.gamma = len(t1), len(t2), len(t3), gamma
        report.matches = sorted([MatchResult(x, 1) for x in t1] + [MatchResult(x, 2) for x in t2]
                                + [MatchResult(x, 3) for x in t3])
        return report

    def positions(self, pattern):
        return self.query(pattern).positions

    # -- serialization ------------------------------------------------------

    def _sections(self):
        fwd = self.fwd
        meta = json.dumps(self.meta, sort_keys=True).encode()
        return [
            ("forward.csa", _blob(fwd.idx)),
            ("forward.B", fwd.b_vec.to_bytes()),
            ("forward.BP", fwd.bp.to_bytes()),
            ("forward.L", fwd.lengths.to_bytes()),
            ("forward.R", fwd.closed_before.to_bytes()),
            ("reverse.csa", _blob(self.rev)),
            ("segments", _blob(self.seg)),
            ("pi", _cia(self.pi).to_bytes() + _cia(self.pi_rev).to_bytes()),
            ("grid", _cia(self.block_len).to_bytes() + _cia(self.block_start).to_bytes()
             + _cia(self.x_ids).to_bytes() + _cia(self.y_ids).to_bytes()
             + self.grid.to_bytes() if self.d else b""),
            ("meta", meta),
        ]

    def _header(self):
        out = Writer()
        out.raw(MAGIC)
        out.u8(FORMAT_VERSION)
        out.u64(self.n)
        out.u32(self.alphabet.sigma)
        out.u64(self.d)
        out.u64(self.k_total)
        out.blob(self.alphabet.symbols)
        out.u32(self.sample_rate)
        out.u8(self.wildcard)
        return out.getvalue()

    def to_bytes(self):
        out = Writer()
        out.raw(self._header())
        sections = self._sections()
        out.u32(len(sections))
        for name, payload in sections:
            out.blob(name.encode())
            out.blob(payload)
        return out.getvalue()

    def section_bits(self):
        """payload bits per file part, plus header and framing; the values sum
        to the file size in bits."""
        parts = {"header": 8 * len(self._header())}
        framing = 4
        for name, payload in self._sections():
            parts[name] = 8 * len(payload)
            framing += 16 + len(name)
        parts["framing"] = 8 * framing
        return parts

    def stats(self):
        parts = self.section_bits()
        total = sum(parts.values())
        return {
            "n": self.n,
            "sigma": self.alphabet.sigma,
            "d": self.d,
            "k": self.k_total,
            "sample_rate": self.sample_rate,
            "sections": parts,
            "detail": {f"forward.csa.{k}": v for k, v in self.fwd.idx.component_bits().items()},
            "total_bits": total,
            "bits_per_symbol": total / self.n,
        }

    @classmethod
    def from_bytes(cls, data):
        r = Reader(data)
        try:
            if r.raw(4) != MAGIC:
                raise FormatError("bad magic")
            r.expect_version("index file", FORMAT_VERSION)
            n, sigma, d, k = r.u64(), r.u32(), r.u64(), r.u64()
            alphabet = Alphabet(r.blob())
            rate = r.u32()
            wildcard = r.u8()
            sections = {}
            for _ in range(r.u32()):
                name = r.blob().decode()
                sections[name] = r.blob()
            if not r.at_end():
                raise FormatError("trailing bytes")
            sr = lambda name: Reader(sections[name])
            idx = SequenceIndex.read(sr("forward.csa"))
            fwd = FullTextDictionary(
                idx,
                RankSelectBitVector.read(sr("forward.B")),
                BalancedParentheses.read(sr("forward.BP")),
                CompressedIntegerArray.read(sr("forward.L")),
                CompressedIntegerArray.read(sr("forward.R")),
                alphabet,
            )
            rev = SequenceIndex.read(sr("reverse.csa"))
            seg = SegmentTable.read(sr("segments"))
            pr = sr("pi")
            pi = CompressedIntegerArray.read(pr).to_numpy().astype(np.int64).tolist()
            pi_rev = CompressedIntegerArray.read(pr).to_numpy().astype(np.int64).tolist()
            if d:
                gr = sr("grid")
                cols = [CompressedIntegerArray.read(gr).to_numpy().astype(np.int64).tolist()
                        for _ in range(4)]
                grid = PointGrid.read(gr)
            else:
                cols = [[], [0], [], []]
                grid = PointGrid.build([], universe=0)
            meta = json.loads(sections["meta"].decode())
        except KeyError as e:
            raise FormatError(f"missing section {e}") from None
        except (ValueError, UnicodeDecodeError) as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"corrupt index: {e}") from None
        self = cls(fwd, rev, seg, pi, pi_rev, (cols[0], cols[1]), cols[2], cols[3], grid,
                   alphabet, wildcard, rate, meta)
        if self.n != n or self.d != d or self.k_total != k or alphabet.sigma != sigma:
            raise FormatError("header counts disagree with the stored components")
        return self

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def build_index(raw, wildcard=b"?", sample_rate=32, **kwargs):
    return WildcardIndex.build(raw, wildcard, sample_rate, **kwargs)
