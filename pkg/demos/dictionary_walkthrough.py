"""walk through the full-text dictionary on six short segments.

the segments are joined with a separator, indexed once, and every query
below is answered from that single index.
"""

from wcindex import FullTextDictionary

SEGMENTS = [b"aa", b"aca", b"a", b"aa", b"cacc", b"ac"]


def main():
    D = FullTextDictionary.build(SEGMENTS, sample_rate=1)
    print("joined text :", D.alphabet.decode(D.text))
    print("B ones      :", [i + 1 for i, b in enumerate(D.b_vec.bits()) if b])
    print("BP          :", D.bp)
    print("L           :", D.lengths.to_numpy().tolist())

    # lex ids rank segment occurrences among suffixes
    for t, j in enumerate(D.seg_of_lexid.tolist(), 1):
        print(f"lex id {t}: segment {j} = {SEGMENTS[j - 1].decode()}")

    rng = D.find_range(b"ac")
    iv = D.smallest_enclosing_interval(rng.lo, 2)
    count, ids = D.enclosing_chain(iv)
    print(f"\n'ac' rows {tuple(rng)}, enclosing interval {tuple(iv)}, chain {list(ids)} ({count})")

    for p in (b"acaa", b"cacca"):
        pairs = D.segments_contained_in(p)
        shown = [(i, SEGMENTS[D.seg_of_lexid[t - 1] - 1].decode()) for i, t in pairs]
        print(f"segments in {p.decode()!r}: {sorted(shown)}")
    print("'aa' occurs at", D.locate_pattern(b"aa"))


if __name__ == "__main__":
    main()
