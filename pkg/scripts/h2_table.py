"""Tabulate |H^2(G; A)| from the closed formula next to a cochain-level count."""

import argparse
import time

from classtwo.abelian import GroupShape
from classtwo.cocycle import h2_order
from classtwo.oracle import brute_h2_count


def partitions(p, bound):
    out = []

    def rec(prefix, lo, total):
        if prefix:
            out.append(tuple(prefix))
        e = lo
        while p ** (total + e) <= bound:
            rec(prefix + [e], e, total + e)
            e += 1

    rec([], 1, 0)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-G", type=int, default=16)
    ap.add_argument("--max-A", type=int, default=4)
    args = ap.parse_args()
    for p in (2, 3, 5, 7):
        for m in partitions(p, args.max_G):
            for d in partitions(p, args.max_A):
                G, A = GroupShape(p, m), GroupShape(p, d)
                t = time.perf_counter()
                brute = brute_h2_count(G, A, budget=args.max_G)
                formula = h2_order(G, A)
                flag = "" if brute == formula else "  MISMATCH"
                print(f"p={p} m={m} d={d}: formula {formula}, brute {brute} ({time.perf_counter() - t:.2f}s){flag}")


if __name__ == "__main__":
    main()
