import itertools
import random

import pytest

from classtwo.abelian import GroupShape, aut_order as group_aut_order, enumerate_aut_reps, is_automorphism_matrix
from classtwo.cocycle import class_equal, is_diamond
from classtwo.extension import ExtGroup
from classtwo.linalg import Submodule, identity, matmul
from classtwo.lifting import (LiftingError, aut_order, build_lift, check_lift, find_compatible_y, frak_A, iso_test,
                              kernel_order, normalize, nullspace_N, prepare, product_kernel_order, transform,
                              annihilator_generators)
from classtwo.oracle import brute_aut_count, build_table, lifted_G_maps
from closed_forms import rank_three_b, rank_three_lifts, rank_three_pair, rank_two_lifts, rank_two_pair
from support import d4, heisenberg, make_pair, q8, rand_aut_x, rand_aut_y, rand_diamond_pair, shape_pairs


def _key(x, G):
    return tuple(tuple(v % q for v in row) for row, q in zip(x, G.moduli))


def test_nullspace_examples():
    assert nullspace_N(heisenberg(3)).order() == 1
    p, d1, d2 = 3, 1, 2
    pair = rank_three_pair(p, 2, d1, d2, identity(3))
    want = Submodule.from_generators([[p**d1, 0, 0], [0, 0, 1]], pair.ring, 3)
    assert nullspace_N(pair) == want
    # a zero column of b is always in N
    pair = make_pair(2, [1, 1, 1], [1], [[0, 0, 0]], [[1, 0, 1]])
    assert nullspace_N(pair).contains([0, 1, 0])


def test_annihilator_generators_span_the_kernel_on_random_pairs():
    rng = random.Random(2)
    for G, A in [(GroupShape(2, (2, 2, 2)), GroupShape(2, (1, 2))), (GroupShape(3, (1, 2, 2)), GroupShape(3, (1, 2))),
                 (GroupShape(3, (1, 1, 1, 1)), GroupShape(3, (1, 1, 1)))]:
        for _ in range(20):
            pair = rand_diamond_pair(rng, G, A)
            if pair is None:
                continue
            nullspace_N(pair)  # raises if the explicit generators and the generic kernel differ
            assert all(not any(matmul(pair.b_matrix(), [[v] for v in g], pair.q)[u][0] for u in range(pair.r))
                       for g in annihilator_generators(pair))


def test_lifting_error_on_degenerate_input():
    with pytest.raises(LiftingError):
        prepare(make_pair(3, [1], [1], [[0]], [[]]))
    with pytest.raises(LiftingError):
        prepare(make_pair(3, [1, 1], [], [], []))
    with pytest.raises(LiftingError):
        prepare(make_pair(3, [1, 1], [1], [[0, 0]], [[0]]))


@pytest.mark.parametrize("pair,count", [(q8(), 6), (d4(), 2), (heisenberg(3), 48), (heisenberg(5), 480)])
def test_check_lift_counts(pair, count):
    assert len(frak_A(pair)) == count


def test_check_lift_examples():
    inp = prepare(d4())
    assert check_lift(identity(2), inp, iso=True)
    assert check_lift([[0, 1], [1, 0]], inp, iso=True)
    assert not check_lift([[1, 1], [0, 1]], inp, iso=True)
    with pytest.raises(ValueError):
        check_lift([[1]], inp)


def test_find_compatible_y_and_build_lift_examples():
    pair = heisenberg(3)
    inp = prepare(pair)
    x = [[1, 1], [0, 1]]
    y = find_compatible_y(x, inp, iso=True)
    assert y == [[1]]
    wit = build_lift(x, y, pair)
    E = ExtGroup(pair)
    assert wit(E.identity) == E.identity
    assert wit.is_bijective()
    x = [[2, 0], [0, 1]]
    y = find_compatible_y(x, inp, iso=True)
    assert y == [[2]]
    assert wit.to_json()["x"] == [[1, 1], [0, 1]]
    with pytest.raises(ValueError):
        build_lift(x, [[1]], pair)


def test_kernel_orders():
    G, A = GroupShape(2, (1, 2)), GroupShape(2, (1,))
    assert kernel_order(G, A) == 4
    assert product_kernel_order(G, A) == 16
    assert product_kernel_order(GroupShape(3, (1, 1)), GroupShape(3, (1,))) == 9


def test_solution_independence():
    rng = random.Random(5)
    G, A = GroupShape(2, (1, 2, 2)), GroupShape(2, (1, 2))
    for _ in range(5):
        pair = rand_diamond_pair(rng, G, A)
        i1, i2 = prepare(pair), prepare(pair, order=list(reversed(range(len(pair.lam)))))
        assert i1.w != i2.w
        s1 = {_key(x, G) for x in frak_A(pair, inp=i1)}
        s2 = {_key(x, G) for x in frak_A(pair, inp=i2)}
        assert s1 == s2


def test_liftable_automorphisms_form_a_subgroup():
    rng = random.Random(6)
    G, A = GroupShape(2, (1, 2, 2)), GroupShape(2, (1,))
    pair = rand_diamond_pair(rng, G, A)
    reps = {_key(x, G) for x in frak_A(pair)}
    assert _key(identity(3), G) in reps
    sample = rng.sample(sorted(reps), min(15, len(reps)))
    for x, x2 in itertools.product(sample, repeat=2):
        assert _key(matmul(x, x2), G) in reps


def test_odd_p_with_a_zero_lifts_everything():
    pair = make_pair(3, [1, 1, 1], [1, 1, 1], [[0] * 3] * 3, identity(3))
    assert len(frak_A(pair)) == group_aut_order(pair.G)
    pair = make_pair(5, [1, 2], [1], [[0, 0]], [[1]])
    assert len(frak_A(pair)) == group_aut_order(pair.G)


@pytest.mark.parametrize("G,A", [(G, A) for G, A in shape_pairs(128) if G.rank >= 2])
def test_aut_order_matches_oracle(G, A):
    rng = random.Random(G.order * 31 + A.order)
    for _ in range(3):
        pair = rand_diamond_pair(rng, G, A)
        if pair is None:
            pytest.skip("no diamond pair for this shape")
        report = aut_order(pair)
        assert report.total_order == brute_aut_count(build_table(pair))
        assert {_key(x, G) for x in report.frakA_reps} == lifted_G_maps(pair)


def test_iso_examples():
    assert iso_test(d4(), q8()).status == "no"
    res = iso_test(q8(), q8())
    assert res.status == "witness" and res.checked == 1
    heavy = make_pair(3, [1, 1], [1], [[1, 0]], [[1]])
    assert iso_test(heisenberg(3), heavy).status == "no"
    other = make_pair(2, [1, 1], [1], [[1, 0]], [[1]])
    res = iso_test(d4(), other)
    assert res.status == "witness"
    assert res.witness.to_json()["x"] != [[1, 0], [0, 1]]
    assert iso_test(d4(), other, budget=1).status == "inconclusive"


def test_normalize_examples():
    pair = make_pair(3, [1, 1], [1], [[2, 1]], [[1]])
    out, y, x = normalize(pair)
    assert out.a in (((1, 0),), ((0, 1),))
    assert iso_test(pair, out).status == "witness"
    zero = heisenberg(3)
    assert normalize(zero)[0] == zero


def test_normalize_gives_diagonal_for_exponent_one():
    rng = random.Random(4)
    for p in (3, 5):
        G, A = GroupShape(p, (1, 1, 1)), GroupShape(p, (1, 1))
        for _ in range(5):
            pair = rand_diamond_pair(rng, G, A)
            out, _, _ = normalize(pair)
            assert all(v in (0, 1) for row in out.a for v in row)
            assert all(sum(1 for v in row if v) <= 1 for row in out.a)


def test_transform_lifts_by_construction():
    rng = random.Random(9)
    for G, A in [(GroupShape(2, (1, 2)), GroupShape(2, (1,))), (GroupShape(3, (1, 1, 1)), GroupShape(3, (1,))),
                 (GroupShape(2, (1, 1, 2)), GroupShape(2, (1, 1)))]:
        for _ in range(5):
            pair = rand_diamond_pair(rng, G, A)
            x, y = rand_aut_x(rng, G), rand_aut_y(rng, A)
            out = transform(pair, y, x)
            inp = prepare(pair, out)
            assert check_lift(x, inp, iso=True)
            build_lift(x, find_compatible_y(x, inp, iso=True), pair, out, verify=True)


def test_rank_two_family_rescaled_form():
    p, m1, m2, d = 3, 1, 2, 1
    G = GroupShape(p, (m1, m2))
    auts = list(enumerate_aut_reps(G))
    for w1, w2 in [(1, 1), (1, 2), (2, 1)]:
        inp = prepare(rank_two_pair(p, m1, m2, d, w1, w2))
        assert all(rank_two_lifts(x, p, m1, m2, d, w1, w2) == check_lift(x, inp, iso=True) for x in auts)


def test_rank_two_family_literal_form_disagrees():
    p, m1, m2, d = 3, 1, 2, 1
    G = GroupShape(p, (m1, m2))
    inp = prepare(rank_two_pair(p, m1, m2, d, 1, 1))
    mismatch = [x for x in enumerate_aut_reps(G) if rank_two_lifts(x, p, m1, m2, d, 1, 1, literal=True)
                != check_lift(x, inp, iso=True)]
    assert mismatch


def test_rank_three_family_literal_form_rejects_identity():
    rng = random.Random(1)
    w = [[rng.randrange(9) for _ in range(3)] for _ in range(3)]
    assert not rank_three_lifts(identity(3), 3, 1, 1, 1, w, literal=True)
    assert rank_three_lifts(identity(3), 3, 1, 1, 1, w)
    inp = prepare(rank_three_pair(3, 1, 1, 1, w))
    assert check_lift(identity(3), inp, iso=True)
    assert rank_three_b(3, 1, 2) == [[3, 0, 0], [0, 1, 0]]


def _central_twist(pair, beta):
    """(a, g) -> (a + beta(g), g) for beta given by per-generator images in embedded A."""
    from classtwo.actions import MuFunction
    from classtwo.lifting import LiftWitness
    n, r = pair.n, pair.r
    return LiftWitness(identity(n), identity(r), [tuple(col) for col in beta], pair, pair, MuFunction(identity(n), pair))


def _rand_hom_G_A(rng, pair):
    p, q, dr = pair.p, pair.q, pair.A.top
    # beta_j must be killed by p^{m_j}; in embedded coordinates that is valuation >= d_r - min(m_j, d_u)
    return [[p ** (dr - min(mj, du)) * rng.randrange(q) % q for du in pair.A.exponents] for mj in pair.G.exponents]


def test_hom_G_A_acts_by_automorphisms_homomorphically():
    rng = random.Random(12)
    for G, A in [(GroupShape(2, (1, 2)), GroupShape(2, (1,))), (GroupShape(3, (1, 1, 1)), GroupShape(3, (1, 1)))]:
        pair = rand_diamond_pair(rng, G, A)
        for _ in range(4):
            b1, b2 = _rand_hom_G_A(rng, pair), _rand_hom_G_A(rng, pair)
            t1, t2 = _central_twist(pair, b1), _central_twist(pair, b2)
            t1.verify()
            assert sorted(t1.index_map().tolist()) == list(range(G.order * A.order))
            both = [[(u + v) % pair.q for u, v in zip(c1, c2)] for c1, c2 in zip(b1, b2)]
            composed = t1.index_map()[t2.index_map()]
            assert (composed == _central_twist(pair, both).index_map()).all()


def test_kernel_is_hom_G_A_when_G_has_larger_exponent():
    pair = make_pair(3, [1, 2], [1], [[0, 0]], [[1]])
    rep = aut_order(pair)
    assert rep.kernel_order == 9 and rep.product_kernel_order == 81
    assert rep.total_order == 972 == brute_aut_count(build_table(pair))
