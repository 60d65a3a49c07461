"""Count where the closed-form lift conditions for two small families disagree with check_lift.

Each family is run twice: with the literal reading of the closed form and
with the rescaled reading. Only the rescaled one matches.
"""

import itertools
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from classtwo.abelian import GroupShape, enumerate_aut_reps  # noqa: E402
from classtwo.lifting import check_lift, prepare  # noqa: E402
from closed_forms import rank_three_lifts, rank_three_pair, rank_two_lifts, rank_two_pair  # noqa: E402


def rank_two(p, m1, m2, d, literal):
    G = GroupShape(p, (m1, m2))
    auts = list(enumerate_aut_reps(G))
    units = [u for u in range(p**d) if u % p]
    bad = total = 0
    for w1, w2 in itertools.product(units, repeat=2):
        inp = prepare(rank_two_pair(p, m1, m2, d, w1, w2))
        for x in auts:
            total += 1
            bad += rank_two_lifts(x, p, m1, m2, d, w1, w2, literal) != check_lift(x, inp, iso=True)
    return bad, total


def rank_three(p, m, d1, d2, literal, trials=1, seed=0):
    rng = random.Random(seed)
    auts = list(enumerate_aut_reps(GroupShape(p, (m, m, m))))
    bad = total = 0
    for _ in range(trials):
        w = [[rng.randrange(p**d2) for _ in range(3)] for _ in range(3)]
        inp = prepare(rank_three_pair(p, m, d1, d2, w))
        for x in auts:
            total += 1
            bad += rank_three_lifts(x, p, m, d1, d2, w, literal) != check_lift(x, inp, iso=True)
    return bad, total


def main() -> None:
    print("rank two, G = Z/p^m1 x Z/p^m2, A = Z/p^d, b = 1")
    for case in [(3, 1, 1, 1), (3, 1, 2, 1), (5, 1, 1, 1), (3, 2, 2, 1), (3, 1, 3, 1)]:
        lit, resc = rank_two(*case, literal=True), rank_two(*case, literal=False)
        print(f"  (p,m1,m2,d)={case}: literal {lit[0]}/{lit[1]} wrong, rescaled {resc[0]}/{resc[1]} wrong")
    print("rank three, G = (Z/p^m)^3, A = Z/p^d1 x Z/p^d2")
    for case in [(3, 1, 1, 1), (2, 1, 1, 1), (2, 2, 1, 2)]:
        lit, resc = rank_three(*case, literal=True), rank_three(*case, literal=False)
        print(f"  (p,m,d1,d2)={case}: literal {lit[0]}/{lit[1]} wrong, rescaled {resc[0]}/{resc[1]} wrong")


if __name__ == "__main__":
    main()
