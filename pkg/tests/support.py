"""Shared builders for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from classtwo.abelian import GroupShape
from classtwo.cocycle import CocyclePair, LambdaIndex, is_diamond


def make_pair(p, m, d, a, b, lambda_order="lex") -> CocyclePair:
    return CocyclePair(GroupShape(p, tuple(m)), GroupShape(p, tuple(d)),
                       tuple(map(tuple, a)), tuple(map(tuple, b)), lambda_order)


def heisenberg(p: int = 3) -> CocyclePair:
    return make_pair(p, [1, 1], [1], [[0, 0]], [[1]])


def d4() -> CocyclePair:
    return make_pair(2, [1, 1], [1], [[0, 0]], [[1]])


def q8() -> CocyclePair:
    return make_pair(2, [1, 1], [1], [[1, 1]], [[1]])


def rand_pair(rng: random.Random, G: GroupShape, A: GroupShape, lambda_order: str = "lex") -> CocyclePair:
    """A uniformly random pair satisfying the kernel bounds."""
    p, dr = G.p, A.top
    q = p**dr
    lam = LambdaIndex(G.rank, lambda_order)

    def entry(bound):
        return p**bound * rng.randrange(q) % q

    m, d = G.exponents, A.exponents
    a = [[entry(dr - min(m[i], d[u])) for i in range(G.rank)] for u in range(A.rank)]
    b = [[entry(dr - min(m[i], d[u])) for i, _ in lam] for u in range(A.rank)]
    return CocyclePair(G, A, tuple(map(tuple, a)), tuple(map(tuple, b)), lambda_order)


def rand_diamond_pair(rng: random.Random, G: GroupShape, A: GroupShape, tries: int = 500) -> CocyclePair | None:
    for _ in range(tries):
        pair = rand_pair(rng, G, A)
        if is_diamond(pair):
            return pair
    return None


def rand_x(rng: random.Random, G: GroupShape) -> list[list[int]]:
    """A random endomorphism matrix of G (not necessarily invertible)."""
    p, m = G.p, G.exponents
    top = p**G.top
    return [[p ** max(0, m[i] - m[j]) * rng.randrange(top) % top for j in range(G.rank)] for i in range(G.rank)]


def rand_aut_x(rng: random.Random, G: GroupShape) -> list[list[int]]:
    from classtwo.abelian import is_automorphism_matrix
    while True:
        x = rand_x(rng, G)
        if is_automorphism_matrix(x, G):
            return x


def rand_aut_y(rng: random.Random, A: GroupShape) -> list[list[int]]:
    """A random automorphism of A in embedded coordinates (||y_ij|| >= d_j - d_i)."""
    from classtwo.linalg import det_mod
    p, d = A.p, A.exponents
    q = p**A.top
    while True:
        y = [[p ** max(0, d[j] - d[i]) * rng.randrange(q) % q for j in range(A.rank)] for i in range(A.rank)]
        if det_mod(y, q, p) % p:
            return y


# desk-scale shapes (|E| <= 256) used across tests
SMALL_SHAPES = [
    ((2, (1, 1)), (1,)),
    ((2, (1, 2)), (1,)),
    ((3, (1, 1)), (1,)),
    ((3, (1, 2)), (1,)),
    ((2, (2, 2)), (2,)),
    ((2, (2, 2)), (1,)),
    ((2, (1, 1, 1)), (1,)),
    ((2, (1, 1, 1)), (1, 1)),
    ((2, (1, 1, 2)), (1,)),
    ((2, (1, 3)), (1,)),
    ((3, (1, 1, 1)), (1,)),
    ((2, (1, 1, 1)), (1, 1, 1)),
    ((3, (2, 2)), (1,)),
    ((2, (1, 2, 2)), (1,)),
    ((2, (2, 2, 2)), (1, 2)),
]


def shape_pairs(max_order: int = 256):
    for (p, m), d in SMALL_SHAPES:
        G, A = GroupShape(p, m), GroupShape(p, d)
        if G.order * A.order <= max_order:
            yield G, A


primes = st.sampled_from([2, 3, 5])


@st.composite
def shapes(draw, max_rank=3, max_exp=3, min_rank=0):
    p = draw(primes)
    k = draw(st.integers(min_rank, max_rank))
    exps = sorted(draw(st.lists(st.integers(1, max_exp), min_size=k, max_size=k)))
    return GroupShape(p, tuple(exps))


@st.composite
def pairs(draw, max_n=3, max_r=2, max_exp=2):
    """Valid pairs with d_r <= m_n."""
    p = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(1, max_n))
    m = sorted(draw(st.lists(st.integers(1, max_exp), min_size=n, max_size=n)))
    r = draw(st.integers(1, max_r))
    d = sorted(draw(st.lists(st.integers(1, m[-1]), min_size=r, max_size=r)))
    seed = draw(st.integers(0, 2**32 - 1))
    return rand_pair(random.Random(seed), GroupShape(p, tuple(m)), GroupShape(p, tuple(d)))
