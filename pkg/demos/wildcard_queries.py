"""query a small text with wildcard groups and show the three match types.

type 1 matches touch no wildcard group, type 2 overlap exactly one and
type 3 overlap two or more.
"""

from wcindex import build_index
from wcindex.oracle import naive_match

TEXT = b"ab??ca?ab"


def main():
    ix = build_index(TEXT)
    print(f"text {TEXT.decode()}: n={ix.n}, groups={ix.d}, wildcards={ix.k_total}")
    ws = ix.workspace()
    for p in (b"ab", b"ca", b"aca", b"bca", b"abddcafa", b"bxxcaya"):
        rep = ix.query(p, ws)
        found = [(r.position, r.mtype) for r in rep]
        assert rep.positions == naive_match(TEXT, p)
        print(f"{p.decode():>9}  {found}  gamma={rep.gamma}")

    st = ix.stats()
    print("\nsection bits:")
    for name, bits in st["sections"].items():
        print(f"  {name:<12}{bits:>8}")


if __name__ == "__main__":
    main()
