"""command-line front end: build, query and stats.

Exit codes: 0 success, 1 usage error, 2 input format error, 3 corrupt index.
"""

import argparse
import json
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor

from .oracle import naive_match, naive_prefix_segments
from .serial import FormatError
from .wildcard import WildcardIndex

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CORRUPT = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(f"{self.prog}: error: {message}", EXIT_USAGE)


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}", EXIT_INPUT) from None


def parse_fasta(data):
    """list of (name, sequence bytes)."""
    records = []
    name, chunks = None, []
    for lineno, line in enumerate(data.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(b";"):
            continue
        if line.startswith(b">"):
            if name is not None:
                records.append((name, b"".join(chunks)))
            header = line[1:].split()
            name = header[0].decode("latin-1") if header else f"record{len(records) + 1}"
            chunks = []
            continue
        if name is None:
            raise FormatError(f"malformed FASTA: sequence before header on line {lineno}")
        chunks.append(line)
    if name is not None:
        records.append((name, b"".join(chunks)))
    if not records:
        raise FormatError("malformed FASTA: no records")
    for rec, seq in records:
        if not seq:
            raise FormatError(f"malformed FASTA: record {rec} is empty")
    return records


def fasta_to_text(fasta, snps, wildcard):
    """join FASTA records with a separator byte and put the wildcard at
    every SNP position (1-based, counted over the records without separators
    or written as "record position")."""
    records = parse_fasta(fasta)
    wild = wildcard[0]
    sep = b"#" if wild != ord("#") else b"|"
    seqs = [bytearray(seq) for _, seq in records]
    for seq in seqs:
        if wild in seq or sep[0] in seq:
            raise FormatError("FASTA sequence contains the wildcard or separator byte")
    names = {name: r for r, (name, _) in enumerate(records)}
    lengths = [len(s) for s in seqs]
    total = sum(lengths)
    for lineno, line in enumerate(snps.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith(b"#"):
            continue
        try:
            if len(parts) == 1:
                pos = int(parts[0])
                if not 1 <= pos <= total:
                    raise FormatError(f"SNP position {pos} out of range on line {lineno}")
                r = 0
                while pos > lengths[r]:
                    pos -= lengths[r]
                    r += 1
            elif len(parts) == 2:
                r = names[parts[0].decode("latin-1")]
                pos = int(parts[1])
                if not 1 <= pos <= lengths[r]:
                    raise FormatError(f"SNP position {pos} out of range on line {lineno}")
            else:
                raise ValueError
        except (ValueError, KeyError):
            raise FormatError(f"malformed SNP line {lineno}") from None
        seqs[r][pos - 1] = wild
    offsets, off = [], 1
    for (name, _), seq in zip(records, seqs):
        offsets.append({"name": name, "offset": off, "length": len(seq)})
        off += len(seq) + 1
    meta = {"records": offsets}
    if len(records) > 1:
        meta["separator"] = sep[0]
    return sep.join(bytes(s) for s in seqs), meta


def _load_index(path):
    data = _read(path)
    try:
        return WildcardIndex.from_bytes(data)
    except FormatError as e:
        raise CliError(f"corrupt index {path}: {e}", EXIT_CORRUPT) from None


def _stats_lines(stats, fmt):
    if fmt == "json":
        return [json.dumps(stats, sort_keys=True)]
    lines = [f"{key}\t{stats[key]}" for key in ("n", "sigma", "d", "k", "sample_rate")]
    lines += [f"section.{k}\t{v}" for k, v in stats["sections"].items()]
    lines += [f"detail.{k}\t{v}" for k, v in stats["detail"].items()]
    lines.append(f"total_bits\t{stats['total_bits']}")
    lines.append(f"bits_per_symbol\t{stats['bits_per_symbol']:.4f}")
    return lines


def cmd_build(args):
    wildcard = args.wildcard.encode("latin-1")
    if len(wildcard) != 1:
        raise CliError("--wildcard must be a single byte", EXIT_USAGE)
    if args.text:
        if args.fasta or args.snps:
            raise CliError("--text cannot be combined with --fasta/--snps", EXIT_USAGE)
        raw, meta = _read(args.text).rstrip(b"\r\n"), {}
    elif args.fasta:
        snps = _read(args.snps) if args.snps else b""
        raw, meta = fasta_to_text(_read(args.fasta), snps, wildcard)
    else:
        raise CliError("one of --text or --fasta is required", EXIT_USAGE)
    if args.sample_rate < 1:
        raise CliError("--sample-rate must be positive", EXIT_USAGE)
    ix = WildcardIndex.build(raw, wildcard, args.sample_rate, meta=meta)
    try:
        ix.save(args.out)
    except OSError as e:
        raise CliError(f"cannot write {args.out}: {e.strerror}", EXIT_INPUT) from None
    records = meta.get("records", [])
    if len(records) > 1:
        for rec in records:
            print(f"record\t{rec['name']}\t{rec['offset']}\t{rec['length']}")
    print("\n".join(_stats_lines(ix.stats(), args.format)))


def _read_patterns(args):
    if args.pattern is not None and args.patterns:
        raise CliError("use either --pattern or --patterns", EXIT_USAGE)
    if args.pattern is not None:
        pats = [args.pattern.encode("latin-1")]
    elif args.patterns:
        pats = [line.strip() for line in _read(args.patterns).splitlines()]
        pats = [p for p in pats if p]
    else:
        raise CliError("one of --pattern or --patterns is required", EXIT_USAGE)
    for p in pats:
        if not p:
            raise CliError("empty pattern", EXIT_USAGE)
    return pats


def _oracle_report(ix, text, segments, pattern):
    hits = naive_match(text, pattern, ix.wildcard)
    rows = [(pos, min(ix.overlap_group_count(pos, len(pattern)), 2) + 1) for pos in hits]
    counts = [sum(1 for _, t in rows if t == k) for k in (1, 2, 3)]
    return rows, counts + [len(naive_prefix_segments(segments, pattern))]


def _threads():
    try:
        return max(1, int(os.environ.get("WCIX_THREADS", "1")))
    except ValueError:
        return 1


def cmd_query(args):
    ix = _load_index(args.index)
    pats = _read_patterns(args)
    for p in pats:
        try:
            ix.encode_pattern(p)
        except ValueError as e:
            raise CliError(str(e), EXIT_USAGE) from None

    if args.oracle:
        text = ix.alphabet.decode(ix.fwd.idx.extract()[:-1], wildcard=chr(ix.wildcard),
                                  sentinel="").encode("latin-1")
        segments = [s for s in text.split(bytes([ix.wildcard])) if s]
        run = lambda p: _oracle_report(ix, text, segments, p)
    else:
        local = threading.local()

        def run(p):
            ws = getattr(local, "ws", None)
            if ws is None:
                ws = local.ws = ix.workspace()
            rep = ix.query(p, ws)
            return ([(r.position, r.mtype) for r in rep.matches],
                    [rep.occ1, rep.occ2, rep.occ3, rep.gamma])

    workers = min(_threads(), len(pats))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, pats))
    else:
        results = [run(p) for p in pats]

    totals = [0, 0, 0, 0]
    for _, counts in results:
        for k, v in enumerate(counts):
            totals[k] += v
    keys = ("occ1", "occ2", "occ3", "gamma")
    if args.format == "json":
        doc = {
            "matches": [{"pattern_id": pid, "position": pos, "type": t}
                        for pid, (rows, _) in enumerate(results, 1) for pos, t in rows],
            "patterns": [dict(pattern_id=pid, **dict(zip(keys, counts)))
                         for pid, (_, counts) in enumerate(results, 1)],
            "summary": dict(patterns=len(pats), **dict(zip(keys, totals))),
        }
        print(json.dumps(doc, sort_keys=True))
        return
    out = []
    for pid, (rows, _) in enumerate(results, 1):
        out.extend(f"{pid}\t{pos}\t{t}" for pos, t in rows)
    out.append("#summary\tpatterns=%d\t" % len(pats)
               + "\t".join(f"{k}={v}" for k, v in zip(keys, totals)))
    print("\n".join(out))


def cmd_stats(args):
    ix = _load_index(args.index)
    print("\n".join(_stats_lines(ix.stats(), args.format)))


def make_parser():
    ap = _Parser(prog="wcindex", description="succinct index for texts with wildcard positions")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    b = sub.add_parser("build", help="build an index file")
    b.add_argument("--text", help="raw text file; the wildcard byte marks wildcard positions")
    b.add_argument("--fasta", help="FASTA file")
    b.add_argument("--snps", help="SNP positions, one per line (pos or 'record pos')")
    b.add_argument("--wildcard", default="?")
    b.add_argument("--sample-rate", type=int, default=32)
    b.add_argument("--out", required=True)
    b.add_argument("--format", choices=("tsv", "json"), default="tsv")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="find pattern occurrences")
    q.add_argument("--index", required=True)
    q.add_argument("--pattern")
    q.add_argument("--patterns", help="file with one pattern per line")
    q.add_argument("--format", choices=("tsv", "json"), default="tsv")
    q.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    q.set_defaults(func=cmd_query)

    s = sub.add_parser("stats", help="report index space usage")
    s.add_argument("--index", required=True)
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.set_defaults(func=cmd_stats)
    return ap


def main(argv=None):
    try:
        args = make_parser().parse_args(argv)
        args.func(args)
    except CliError as e:
        print(e, file=sys.stderr)
        return e.code
    except FormatError as e:
        print(f"wcindex: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
