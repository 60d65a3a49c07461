"""Which automorphisms of G lift to E(alpha), and what Aut(E(alpha)) looks like.

A pair (x, y) with x acting on G and y on A lifts to a homomorphism
E(alpha_{a,b}) -> E(alpha_{a',b'}) exactly when the pulled-back class of the
target equals the pushed-forward class of the source. With a = b w this splits
into a condition on the annihilator N = {v : b v = 0} of b and a condition on
the carry data a. Everything here works in embedded coordinates over
J = Z/p^{d_r}.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .abelian import (GroupShape, aut_order as group_aut_order, enumerate_aut_reps,
                      hom_order, is_automorphism_matrix, validate_hom)
from .actions import MuFunction, pullback_class, rescale, sharp, theta
from .arith import valuation
from .cocycle import CocyclePair, embedded_A, is_diamond, is_valid, violations
from .extension import ExtElement, ExtGroup, _coords_array, _index_of, mul_table
from .linalg import (Matrix, Submodule, identity, kernel, mat_inverse, matmul, matvec, solve_linear,
                     transpose)

DEFAULT_COSET_BUDGET = 10**7
EXHAUSTIVE_VERIFY_LIMIT = 729


class LiftingError(ValueError):
    """The input is outside what the lifting machinery handles."""


def require_liftable(pair: CocyclePair) -> None:
    if pair.n < 2:
        raise LiftingError("G needs rank at least 2 for a class-2 extension")
    if pair.r == 0:
        raise LiftingError("A is trivial; E(alpha) is abelian")
    bad = violations(pair)
    if bad:
        raise LiftingError(f"pair violates the kernel bounds at {bad[0]}")
    if not is_diamond(pair):
        raise LiftingError("the columns of b do not generate A")


# --------------------------------------------------------------------------
# the annihilator of b


def b_per_factor(pair: CocyclePair) -> Matrix:
    """b with row u divided by p^{d_r - d_u}, so b = diag(p^{d_r - d_u}) @ b_per_factor."""
    p, dr = pair.p, pair.A.top
    out = []
    for u, du in enumerate(pair.A.exponents):
        step = p ** (dr - du)
        row = []
        for v in pair.b[u]:
            if v % step:
                raise LiftingError(f"b row {u} is not in embedded A")
            row.append(v // step)
        out.append(row)
    return out


def _unit_minor_columns(mat: Matrix, p: int) -> Optional[list[int]]:
    """Columns of an r x k matrix whose r x r minor is a unit mod p (greedy)."""
    r = len(mat)
    basis: list[tuple[int, list[int]]] = []
    chosen = []
    for j in range(len(mat[0]) if mat else 0):
        vec = [mat[u][j] % p for u in range(r)]
        for piv, row in basis:
            if vec[piv]:
                f = vec[piv]
                vec = [(a - f * b) % p for a, b in zip(vec, row)]
        nz = next((u for u, v in enumerate(vec) if v), None)
        if nz is None:
            continue
        inv = pow(vec[nz], -1, p)
        basis.append((nz, [v * inv % p for v in vec]))
        chosen.append(j)
        if len(chosen) == r:
            return chosen
    return None


def annihilator_generators(pair: CocyclePair) -> list[list[int]]:
    """An explicit generating set of N built from an invertible block of b_per_factor.

    Split the columns as [B1 | B2] with B1 invertible. Each column j of B2 gives
    the kernel vector with a 1 in slot j and -B1^{-1} B2 e_j on the B1 slots;
    each factor u of A with d_u < d_r gives p^{d_u} B1^{-1} e_u on the B1 slots.
    """
    p, q = pair.p, pair.q
    bb = b_per_factor(pair)
    cols1 = _unit_minor_columns(bb, p)
    if cols1 is None:
        raise LiftingError("b does not generate A")
    cols2 = [j for j in range(len(pair.lam)) if j not in cols1]
    B1inv = mat_inverse([[row[j] for j in cols1] for row in bb], q)
    k = len(pair.lam)
    gens = []
    for j in cols2:
        coef = matvec(B1inv, [row[j] for row in bb], q)
        vec = [0] * k
        vec[j] = 1
        for c, v in zip(cols1, coef):
            vec[c] = -v % q
        gens.append(vec)
    for u, du in enumerate(pair.A.exponents):
        if du < pair.A.top:
            vec = [0] * k
            for c, row in zip(cols1, B1inv):
                vec[c] = p**du * row[u] % q
            gens.append(vec)
    return gens


def nullspace_N(pair: CocyclePair) -> Submodule:
    """N = {v in J^Lambda : b v = 0}, from the explicit generators, cross-checked."""
    require_liftable(pair)
    N = Submodule.from_generators(annihilator_generators(pair), pair.ring, len(pair.lam))
    generic = kernel(pair.b_matrix(), pair.ring, len(pair.lam))
    if N != generic:
        raise AssertionError("explicit generators of N disagree with the Howell kernel")
    return N


# --------------------------------------------------------------------------
# the criterion


@dataclass(frozen=True)
class LiftCriterionInput:
    """Precomputed data for testing lifts E(alpha_{a,b}) -> E(alpha_{a',b'})."""

    pair: CocyclePair
    target: CocyclePair
    w: tuple[tuple[int, ...], ...]
    w_target: tuple[tuple[int, ...], ...]
    N: Submodule
    N_target: Submodule
    annihilators: tuple[tuple[int, ...], ...]
    # a column j is acceptable when every coordinate u reaches bound[u][j]
    bound: tuple[tuple[int, ...], ...] = field(repr=False)


def _solve_w(pair: CocyclePair, order=None) -> Matrix:
    w = solve_linear(pair.b_matrix(), pair.a_matrix(), pair.ring, order)
    if w is None:
        raise LiftingError("a is not of the form b w")
    return w


def prepare(pair: CocyclePair, target: CocyclePair | None = None, order=None) -> LiftCriterionInput:
    """Validate the pairs and solve a = b w, a' = b' w'.

    ``order`` permutes the unknowns of the solver, giving a different w.
    """
    target = pair if target is None else target
    if (pair.G, pair.A) != (target.G, target.A):
        raise LiftingError("pairs live over different (G, A)")
    if target.lambda_order != pair.lambda_order:
        target = target.reorder(pair.lambda_order)
    require_liftable(pair)
    require_liftable(target)
    w = _solve_w(pair, order)
    w2 = w if target is pair else _solve_w(target, order)
    N = nullspace_N(pair)
    N2 = N if target is pair else nullspace_N(target)
    dr = pair.A.top
    bound = tuple(tuple(min(dr, dr - du + mj) for mj in pair.G.exponents) for du in pair.A.exponents)
    return LiftCriterionInput(pair, target, tuple(map(tuple, w)), tuple(map(tuple, w2)), N, N2,
                              tuple(map(tuple, annihilator_generators(pair))), bound)


def class_defect(x: Sequence[Sequence[int]], inp: LiftCriterionInput) -> Matrix:
    """a' x~ + b' theta_x - b' x^# w, whose column j must lie in p^{m_j} A."""
    t = inp.target
    q, lam = t.q, t.lam
    pb = pullback_class(x, t)
    bxw = matmul(matmul(t.b_matrix(), sharp(x, lam, q), q), inp.w, q)
    return [[(u - v) % q for u, v in zip(r1, r2)] for r1, r2 in zip(pb.a, bxw)]


def check_lift(x: Sequence[Sequence[int]], inp: LiftCriterionInput, iso: bool = False) -> bool:
    """Does phi_x lift to a homomorphism (an isomorphism if ``iso``)?

    The conditions are b' x^# N = 0 and, column by column, that
    a' x~ + b' theta_x - b' x^# w lies in p^{m_j} A.
    """
    pair, t = inp.pair, inp.target
    G = pair.G
    if len(x) != pair.n or any(len(row) != pair.n for row in x):
        raise ValueError("x has the wrong size")
    if not validate_hom(x, G, G):
        raise ValueError("x does not define an endomorphism of G")
    if iso and (inp.N.order() != inp.N_target.order() or not is_automorphism_matrix(x, G)):
        return False
    p, q, lam = pair.p, pair.q, pair.lam
    bxs = matmul(t.b_matrix(), sharp(x, lam, q), q)
    for g in inp.annihilators:
        if any(matvec(bxs, g, q)):
            return False
    lhs = matmul(t.a_matrix(), rescale(x, G), q)
    lhs = [[(u + v) % q for u, v in zip(r1, r2)] for r1, r2 in zip(lhs, matmul(t.b_matrix(), theta(x, G, lam), q))]
    rhs = matmul(bxs, inp.w, q)
    dr = pair.A.top
    for u in range(pair.r):
        for j in range(pair.n):
            if valuation(lhs[u][j] - rhs[u][j], p, dr) < inp.bound[u][j]:
                return False
    return True


# --------------------------------------------------------------------------
# the A-part of a lift


def canonical_endo_A(y: Sequence[Sequence[int]], A: GroupShape) -> Matrix:
    """The matrix acting like ``y`` on embedded A with ||y_ij|| >= d_j - d_i.

    Column j only meets elements divisible by p^{d_r - d_j}, so it is replaced
    by (y e_j p^{d_r - d_j}) / p^{d_r - d_j} reduced mod p^{d_j}.
    """
    p, dr = A.p, A.top
    q = p**dr
    out = [[0] * A.rank for _ in range(A.rank)]
    for j, dj in enumerate(A.exponents):
        step = p ** (dr - dj)
        for i in range(A.rank):
            img = y[i][j] * step % q
            if img % step:
                raise ValueError("y does not map A into A")
            out[i][j] = img // step % p**dj
    return out


def endo_A_bijective(y: Sequence[Sequence[int]], A: GroupShape) -> bool:
    EA = embedded_A(A)
    return EA.image(y) == EA if A.rank else True


def find_compatible_y(x: Sequence[Sequence[int]], inp: LiftCriterionInput, iso: bool = False) -> Matrix:
    """A matrix y with y b = b' x^#, checked against the carry condition."""
    pair, t = inp.pair, inp.target
    q, lam = pair.q, pair.lam
    bxs = matmul(t.b_matrix(), sharp(x, lam, q), q)
    yt = solve_linear(transpose(pair.b_matrix()), transpose(bxs), pair.ring)
    if yt is None:
        raise AssertionError("no y solves y b = b' x^#; the criterion and the solver disagree")
    y = canonical_endo_A(transpose(yt), pair.A)
    if matmul(y, pair.b_matrix(), q) != bxs:
        raise AssertionError("canonical y no longer satisfies y b = b' x^#")
    defect = _carry_defect(x, y, pair, t)
    if defect is None:
        raise AssertionError("y a and a' x~ + b' theta_x differ outside p^{m_j} A")
    if iso and not endo_A_bijective(y, pair.A):
        raise AssertionError(f"y = {y} is not bijective on A although x passed the isomorphism test")
    return y


def _carry_defect(x, y, pair: CocyclePair, target: CocyclePair) -> Optional[list[tuple[int, ...]]]:
    """Per-generator f_j with p^{m_j} f_j = (y a - pullback a')_j, or None."""
    q, p, dr = pair.q, pair.p, pair.A.top
    pb = pullback_class(x, target)
    ya = matmul(y, pair.a_matrix(), q)
    out = []
    for j, mj in enumerate(pair.G.exponents):
        f = []
        for u, du in enumerate(pair.A.exponents):
            c = (ya[u][j] - pb.a[u][j]) % q
            if valuation(c, p, dr) < min(dr, dr - du + mj):
                return None
            f.append(c // p**mj % q if c else 0)
        out.append(tuple(f))
    return out


# --------------------------------------------------------------------------
# explicit lifts


@dataclass
class LiftWitness:
    """The map (a, g) -> (y a + mu(g), x g) from E(alpha_{a,b}) to E(alpha_{a',b'}).

    mu(g^s) = sum_j s_j f_j + mu0(g^s), where mu0 is the coboundary correction
    for pulling the target back along x and the f_j absorb what is left.
    """

    x: Matrix
    y: Matrix
    f: list[tuple[int, ...]]
    pair: CocyclePair
    target: CocyclePair
    mu0: MuFunction = field(repr=False)

    def mu(self, s: Sequence[int]) -> tuple[int, ...]:
        s = self.pair.G.reduce(s)
        q = self.pair.q
        base = self.mu0(s)
        return tuple((sum(sj * fj[u] for sj, fj in zip(s, self.f)) + base[u]) % q
                     for u in range(self.pair.r))

    def __call__(self, e: ExtElement) -> ExtElement:
        q = self.pair.q
        ya = matvec(self.y, e.a, q)
        m = self.mu(e.g)
        g = self.pair.G.reduce(matvec(self.x, e.g))
        return ExtElement(tuple((u + v) % q for u, v in zip(ya, m)), g)

    def index_map(self) -> np.ndarray:
        """Image index of every element, indices as in :func:`mul_table`."""
        pair = self.pair
        A, G = pair.A, pair.G
        q = pair.q
        W = _coords_array(A)
        steps = np.array([A.p ** (A.top - d) for d in A.exponents], dtype=np.int64)
        Aemb = (W * steps) % q
        Y = np.array(self.y, dtype=np.int64).reshape(A.rank, A.rank)
        yA = Aemb @ Y.T % q
        S = _coords_array(G)
        mu = np.array([self.mu(s) for s in S.tolist()], dtype=np.int64).reshape(G.order, A.rank)
        apart = (yA[:, None, :] + mu[None, :, :]) % q
        aidx = _index_of(apart // steps, A.moduli)
        X = np.array(self.x, dtype=np.int64)
        gimg = (S @ X.T) % np.array(G.moduli, dtype=np.int64)
        gidx = _index_of(gimg, G.moduli)
        return (aidx * G.order + gidx[None, :]).reshape(-1)

    def is_bijective(self) -> bool:
        return is_automorphism_matrix(self.x, self.pair.G) and endo_A_bijective(self.y, self.pair.A)

    def verify(self, exhaustive_limit: int = EXHAUSTIVE_VERIFY_LIMIT, samples: int = 2000, seed: int = 0) -> None:
        """Raise AssertionError unless the map is a homomorphism.

        Every product is checked when |E| <= ``exhaustive_limit``; otherwise
        products of generators and ``samples`` random pairs are checked.
        """
        E1, E2 = ExtGroup(self.pair), ExtGroup(self.target)
        if E1.order <= exhaustive_limit:
            phi = self.index_map()
            T1, T2 = mul_table(self.pair), mul_table(self.target)
            bad = np.argwhere(phi[T1] != T2[phi[:, None], phi[None, :]])
            if bad.size:
                i, j = bad[0]
                raise AssertionError(f"lift is not a homomorphism at indices ({i}, {j})")
            return
        rng = np.random.default_rng(seed)
        gens = [E1.gen(i) for i in range(self.pair.n)]
        gens += [E1.central([self.pair.p ** (self.pair.A.top - d) if u == v else 0 for v in range(self.pair.r)])
                 for u, d in enumerate(self.pair.A.exponents)]
        pairs = [(u, v) for u in gens for v in gens]
        for _ in range(samples):
            pairs.append(tuple(_random_element(E1, rng) for _ in range(2)))
        for u, v in pairs:
            if self(E1.mul(u, v)) != E2.mul(self(u), self(v)):
                raise AssertionError(f"lift is not a homomorphism at {u}, {v}")

    def to_json(self) -> dict:
        G = self.pair.G
        return {
            "x": self.x,
            "y": self.y,
            "mu_on_generators": [list(self.mu(G.generator(i))) for i in range(G.rank)],
        }


def _random_element(E: ExtGroup, rng) -> ExtElement:
    A, G = E.pair.A, E.pair.G
    a = [int(rng.integers(0, m)) for m in A.moduli]
    g = [int(rng.integers(0, m)) for m in G.moduli]
    return E.element(a, g)


def build_lift(x, y, pair: CocyclePair, target: CocyclePair | None = None, verify: bool = True) -> LiftWitness:
    """Assemble the lift of (x, y); ``y b = b' x^#`` must already hold."""
    target = pair if target is None else target
    q = pair.q
    if matmul(y, pair.b_matrix(), q) != matmul(target.b_matrix(), sharp(x, pair.lam, q), q):
        raise ValueError("y b != b' x^#")
    f = _carry_defect(x, y, pair, target)
    if f is None:
        raise ValueError("the carry data of (x, y) does not match up to p^{m_j} A")
    x = [list(row) for row in x]
    wit = LiftWitness(x, [list(row) for row in y], f, pair, target, MuFunction(x, target))
    if verify:
        wit.verify()
    return wit


# --------------------------------------------------------------------------
# Aut(E(alpha))


def kernel_order(G: GroupShape, A: GroupShape) -> int:
    """Number of automorphisms of E(alpha) inducing the identity on G, i.e. |hom(G, A)|."""
    return hom_order(G, A)


def product_kernel_order(G: GroupShape, A: GroupShape) -> int:
    """|hom(G, A x p^{d_r} G)|; equals :func:`kernel_order` exactly when p^{d_r} G = 0."""
    dr = A.top
    pG = GroupShape(G.p, tuple(m - dr for m in G.exponents if m > dr))
    return hom_order(G, A) * hom_order(G, pG)


def _filter_chunk(args):
    inp, xs = args
    return [x for x in xs if check_lift(x, inp, iso=True)]


def _chunks(it: Iterable, size: int):
    it = iter(it)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def frak_A(pair: CocyclePair, budget: int = DEFAULT_COSET_BUDGET, workers: int = 1,
           inp: LiftCriterionInput | None = None) -> list[Matrix]:
    """Representatives x of the automorphisms of G that lift to E(alpha)."""
    inp = inp or prepare(pair)
    stream = enumerate_aut_reps(pair.G, budget)
    if workers <= 1:
        return [x for x in stream if check_lift(x, inp, iso=True)]
    out: list[Matrix] = []
    with ProcessPoolExecutor(workers) as pool:
        for part in pool.map(_filter_chunk, ((inp, c) for c in _chunks(stream, 2048))):
            out.extend(part)
    return out


@dataclass
class AutReport:
    """|Aut(E)| = |hom(G, A)| * |liftable automorphisms of G|."""

    kernel_order: int
    frakA_order: int
    frakA_reps: list[Matrix]
    product_kernel_order: int
    aut_G_order: int

    @property
    def total_order(self) -> int:
        return self.kernel_order * self.frakA_order

    def to_json(self, reps: bool = True) -> dict:
        out = {
            "kernel_order": self.kernel_order,
            "frakA_order": self.frakA_order,
            "total_order": self.total_order,
            "aut_G_order": self.aut_G_order,
            "hom_G_A_x_pG_order": self.product_kernel_order,
        }
        if reps:
            out["frakA_reps"] = self.frakA_reps
        return out


def aut_order(pair: CocyclePair, budget: int = DEFAULT_COSET_BUDGET, workers: int = 1) -> AutReport:
    reps = frak_A(pair, budget, workers)
    return AutReport(kernel_order(pair.G, pair.A), len(reps), reps,
                     product_kernel_order(pair.G, pair.A), group_aut_order(pair.G))


# --------------------------------------------------------------------------
# isomorphism testing


@dataclass
class IsoResult:
    status: str  # "witness", "no" or "inconclusive"
    witness: Optional[LiftWitness] = None
    checked: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def iso_test(pair: CocyclePair, target: CocyclePair, budget: int = DEFAULT_COSET_BUDGET,
             verify: bool = True) -> IsoResult:
    """Search Aut(G) for an x lifting to an isomorphism E(pair) -> E(target)."""
    inp = prepare(pair, target)
    if inp.N.order() != inp.N_target.order():
        return IsoResult("no")
    checked = 0
    for x in itertools.chain([identity(pair.n)], enumerate_aut_reps(pair.G, None)):
        if checked >= budget:
            return IsoResult("inconclusive", checked=checked)
        checked += 1
        if check_lift(x, inp, iso=True):
            y = find_compatible_y(x, inp, iso=True)
            wit = build_lift(x, y, pair, inp.target, verify=verify)
            return IsoResult("witness", wit, checked)
    return IsoResult("no", checked=checked)


# --------------------------------------------------------------------------
# simplifying a pair


def transform(pair: CocyclePair, y, x) -> CocyclePair:
    """The pair (a', b') for which phi_x lifts to E(pair) -> E(pair') over psi_y.

    b' = y b (x^#)^{-1} and a' = (y a - b' theta_x) x~^{-1}; ``x`` must be an
    automorphism of G and ``y`` of A.
    """
    q, lam, G = pair.q, pair.lam, pair.G
    if not is_automorphism_matrix(x, G) or not validate_hom(x, G, G):
        raise ValueError("x is not an automorphism of G")
    xs_inv = mat_inverse(sharp(x, lam, q), q)
    b2 = matmul(matmul(y, pair.b_matrix(), q), xs_inv, q)
    ya = matmul(y, pair.a_matrix(), q)
    corr = matmul(b2, theta(x, G, lam), q)
    lhs = [[(u - v) % q for u, v in zip(r1, r2)] for r1, r2 in zip(ya, corr)]
    a2 = matmul(lhs, mat_inverse(rescale(x, G), q), q)
    return pair.with_data(a2, b2)


def unrescale(xt: Sequence[Sequence[int]], G: GroupShape) -> Matrix:
    """An x with rescale(x) = xt, entry (i, j) reduced mod p^{m_i}."""
    p, m = G.p, G.exponents
    out = []
    for i, row in enumerate(xt):
        new = []
        for j, v in enumerate(row):
            k = m[i] - m[j]
            if k >= 0:
                new.append(v * p**k % p ** m[i])
            else:
                if v % p**-k:
                    raise ValueError(f"entry ({i},{j}) is not divisible by p^{-k}")
                new.append(v // p**-k % p ** m[i])
        out.append(new)
    return out


def normalize(pair: CocyclePair, verify: bool = True) -> tuple[CocyclePair, Matrix, Matrix]:
    """Diagonalize a as far as automorphisms of A and G allow; returns (pair', y, x).

    Row operations are those of automorphisms of A (in embedded coordinates a
    multiple of row s may be added to row t when its valuation is at least
    d_s - d_t), column operations those of automorphisms of G.
    """
    from .linalg import _eliminate

    G, A = pair.G, pair.A
    d, m = A.exponents, G.exponents
    n, r = pair.n, pair.r
    ident = (pair, identity(r), identity(n))
    if r == 0 or n == 0:
        return ident
    Y, D, V, _ = _eliminate(pair.a_matrix(), pair.ring,
                             row_ok=lambda t, s, v: v >= d[s] - d[t],
                             col_ok=lambda t, s, v: v >= m[t] - m[s])
    q = pair.q
    try:
        x = unrescale(mat_inverse(V, q), G)
    except ValueError:
        return ident
    if not is_automorphism_matrix(x, G):
        return ident
    y = canonical_endo_A(Y, A)
    out = transform(pair, y, x)
    if not is_valid(out):
        raise AssertionError("normalized pair violates the kernel bounds")
    if verify and pair.n >= 2 and is_diamond(pair):
        inp = prepare(pair, out)
        if not check_lift(x, inp, iso=True):
            raise AssertionError("normalization transform does not lift to an isomorphism")
        if ExtGroup(pair).order <= EXHAUSTIVE_VERIFY_LIMIT:
            build_lift(x, find_compatible_y(x, inp, iso=True), pair, inp.target, verify=True)
    return out, y, x
