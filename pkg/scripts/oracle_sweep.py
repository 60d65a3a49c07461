"""Compare |Aut E| from the lifting criterion with a brute-force count.

    python scripts/oracle_sweep.py --pairs 5 --max-order 256 --seed 0
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from classtwo.lifting import aut_order  # noqa: E402
from classtwo.oracle import brute_aut_count, build_table, lifted_G_maps  # noqa: E402
from support import rand_diamond_pair, shape_pairs  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=5, help="random pairs per shape")
    ap.add_argument("--max-order", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    print(f"{'p':>2} {'m':<10} {'d':<8} {'|E|':>5} {'formula':>8} {'brute':>8} {'maps':>5} {'sec':>6}")
    for G, A in shape_pairs(args.max_order):
        if G.rank < 2:
            continue
        for _ in range(args.pairs):
            pair = rand_diamond_pair(rng, G, A)
            if pair is None:
                break
            t = time.perf_counter()
            rep = aut_order(pair)
            brute = brute_aut_count(build_table(pair))
            keys = {tuple(tuple(v % q for v in row) for row, q in zip(x, G.moduli)) for x in rep.frakA_reps}
            maps_ok = keys == lifted_G_maps(pair)
            ok = maps_ok and rep.total_order == brute
            bad += not ok
            print(f"{G.p:>2} {str(G.exponents):<10} {str(A.exponents):<8} {G.order * A.order:>5} "
                  f"{rep.total_order:>8} {brute:>8} {'ok' if maps_ok else 'DIFF':>5} {time.perf_counter() - t:6.2f}")
    print("all agree" if not bad else f"{bad} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
