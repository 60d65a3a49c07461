import random

import numpy as np
import pytest

from classtwo.abelian import BudgetExceeded, GroupShape
from classtwo.cocycle import eval_alpha, eval_eta, is_diamond
from classtwo.extension import (ExtGroup, closure, ext_comm, ext_conj, ext_inv, ext_mul, generates, mul_table,
                                recover_pair)
from classtwo.linalg import kernel
from support import heisenberg, make_pair, q8, rand_diamond_pair, rand_pair, shape_pairs


def test_multiplication_examples():
    E = ExtGroup(heisenberg(3))
    g1, g2 = E.gen(0), E.gen(1)
    u = E.element((2,), (1, 2))
    assert ext_mul(E, E.identity, u) == u
    assert ext_mul(E, g2, g1) == E.element((2,), (1, 1))
    Q = ExtGroup(q8())
    h = Q.gen(0)
    assert ext_mul(Q, h, Q.element(g=(1, 0))) == Q.element((1,), (0, 0))


def test_inverse_examples():
    rng = random.Random(1)
    for G, A in shape_pairs():
        E = ExtGroup(rand_pair(rng, G, A))
        assert ext_inv(E, E.identity) == E.identity
        c = E.element(a=[7] * E.pair.r)
        assert ext_inv(E, c) == E.element(a=[-7] * E.pair.r)
        for u in list(E.elements())[::7]:
            assert E.mul(u, E.inv(u)) == E.identity == E.mul(E.inv(u), u)


def test_conjugation_and_commutator_examples():
    E = ExtGroup(heisenberg(3))
    g1, g2 = E.gen(0), E.gen(1)
    assert ext_conj(E, g1, E.identity) == g1
    assert ext_conj(E, g1, g2) == E.element(tuple(-v for v in eval_eta(E.pair, g1.g, g2.g)), g1.g)
    c = E.element((1,), (0, 0))
    assert ext_conj(E, c, g2) == c
    assert ext_comm(E, g1, g1) == E.identity
    assert ext_comm(E, g1, g2) == E.element((1,), (0, 0))
    u1, u2 = E.element((1,), (1, 0)), E.element((2,), (0, 1))
    assert ext_comm(E, u1, u2) == ext_comm(E, g1, g2)


@pytest.mark.parametrize("G,A", list(shape_pairs()))
def test_closed_forms_agree_with_definitions(G, A):
    rng = random.Random(G.order * 7 + A.order)
    pair = rand_pair(rng, G, A)
    E = ExtGroup(pair)
    els = list(E.elements())
    pts = [(u, v) for u in els for v in els] if E.order <= 64 else [(rng.choice(els), rng.choice(els)) for _ in range(3000)]
    for u, v in pts:
        assert E.conj(u, v) == E.mul(E.mul(v, u), E.inv(v))
        assert E.comm(u, v) == E.comm_direct(u, v)


@pytest.mark.parametrize("G,A", list(shape_pairs()))
def test_associativity(G, A):
    rng = random.Random(G.order + 3 * A.order)
    E = ExtGroup(rand_pair(rng, G, A))
    els = list(E.elements())
    for _ in range(1000):
        u, v, w = (rng.choice(els) for _ in range(3))
        assert E.mul(E.mul(u, v), w) == E.mul(u, E.mul(v, w))


def test_recover_pair_round_trip():
    rng = random.Random(2)
    assert recover_pair(ExtGroup(heisenberg(3))) == heisenberg(3)
    for G, A in shape_pairs(10**6):
        for _ in range(100):
            pair = rand_pair(rng, G, A)
            assert recover_pair(ExtGroup(pair)) == pair


def test_generates_examples():
    E = ExtGroup(heisenberg(3))
    assert generates(E, [E.gen(0), E.gen(1)])
    assert not generates(E, [E.identity])
    assert len(closure(E, [E.gen(0)])) == 3
    assert not generates(E, [E.gen(0)])
    with pytest.raises(BudgetExceeded):
        generates(E, [E.gen(0), E.gen(1)], budget=10)


@pytest.mark.parametrize("G,A", list(shape_pairs(243)))
def test_commutators_span_A_and_generators_generate(G, A):
    rng = random.Random(5)
    pair = rand_diamond_pair(rng, G, A)
    if pair is None:
        pytest.skip("no diamond pair sampled")
    E = ExtGroup(pair)
    els = list(E.elements())
    comms = {E.comm(u, v) for u in els[:: max(1, len(els) // 40)] for v in els}
    derived = closure(E, comms)
    assert derived == {E.element(a=a) for a in {u.a for u in els}}
    assert generates(E, [E.gen(i) for i in range(pair.n)])


def _center_size(pair) -> int:
    T = mul_table(pair)
    return int(np.sum(np.all(T == T.T, axis=1)))


@pytest.mark.parametrize("G,A", list(shape_pairs(256)))
def test_center_is_where_eta_vanishes(G, A):
    rng = random.Random(9)
    pair = rand_diamond_pair(rng, G, A)
    if pair is None:
        pytest.skip("no diamond pair sampled")
    els = list(G.elements())
    radical = [g for g in els if all(not any(eval_eta(pair, g, h)) for h in els)]
    assert _center_size(pair) == A.order * len(radical)
    if kernel(pair.b_matrix(), pair.ring, len(pair.lam)).order() == 1:
        dr = A.top
        pG = sum(1 for g in els if all(c % G.p ** min(dr, m) == 0 for c, m in zip(g, G.exponents)))
        assert len(radical) == pG


def test_mul_table_matches_scalar_multiplication():
    rng = random.Random(4)
    for G, A in shape_pairs(128):
        pair = rand_pair(rng, G, A)
        E = ExtGroup(pair)
        T = mul_table(pair)
        els = list(E.elements())
        for _ in range(300):
            i, j = rng.randrange(len(els)), rng.randrange(len(els))
            assert E.index(E.mul(els[i], els[j])) == T[i, j]


def test_power_and_order():
    Q = ExtGroup(q8())
    x = Q.gen(0)
    assert Q.element_order(x) == 4
    assert Q.pow(x, 4) == Q.identity and Q.pow(x, -1) == Q.inv(x)
