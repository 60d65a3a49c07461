"""The central extension E(alpha) on the set A x G."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .abelian import BudgetExceeded
from .cocycle import CocyclePair, embed, eval_alpha, eval_eta, unembed

DEFAULT_CLOSURE_BUDGET = 10**6


class ExtElement(NamedTuple):
    """(a, g) with ``a`` in embedded J^r coordinates and ``g`` reduced per factor."""

    a: tuple[int, ...]
    g: tuple[int, ...]


@dataclass(frozen=True)
class ExtGroup:
    pair: CocyclePair

    @property
    def order(self) -> int:
        return self.pair.A.order * self.pair.G.order

    @property
    def identity(self) -> ExtElement:
        return ExtElement((0,) * self.pair.r, (0,) * self.pair.n)

    def element(self, a: Sequence[int] = (), g: Sequence[int] = ()) -> ExtElement:
        pair = self.pair
        a = tuple(a) or (0,) * pair.r
        g = tuple(g) or (0,) * pair.n
        return ExtElement(tuple(x % pair.q for x in a), pair.G.reduce(g))

    def gen(self, i: int) -> ExtElement:
        """(0, g_i)."""
        return self.element(g=self.pair.G.generator(i))

    def central(self, w: Sequence[int]) -> ExtElement:
        """(a, 0) for ``a`` given in per-factor coordinates."""
        return self.element(a=embed(self.pair.A, w))

    def elements(self):
        A, G = self.pair.A, self.pair.G
        for w in A.elements():
            a = embed(A, w)
            for g in G.elements():
                yield ExtElement(a, g)

    def index(self, u: ExtElement) -> int:
        A, G = self.pair.A, self.pair.G
        return A.index(unembed(A, u.a)) * G.order + G.index(u.g)

    def mul(self, u: ExtElement, v: ExtElement) -> ExtElement:
        q = self.pair.q
        al = eval_alpha(self.pair, u.g, v.g)
        a = tuple((x + y + z) % q for x, y, z in zip(u.a, v.a, al))
        return ExtElement(a, self.pair.G.reduce([x + y for x, y in zip(u.g, v.g)]))

    def inv(self, u: ExtElement) -> ExtElement:
        q = self.pair.q
        neg_g = self.pair.G.reduce([-x for x in u.g])
        al = eval_alpha(self.pair, u.g, neg_g)
        return ExtElement(tuple((-x - y) % q for x, y in zip(u.a, al)), neg_g)

    def conj(self, u: ExtElement, v: ExtElement) -> ExtElement:
        """v u v^-1 by the closed form (a_1 + alpha(g_1, 0) - eta(g_1, g_2), g_1)."""
        q = self.pair.q
        zero = (0,) * self.pair.n
        al = eval_alpha(self.pair, u.g, zero)
        et = eval_eta(self.pair, u.g, v.g)
        return ExtElement(tuple((x + y - z) % q for x, y, z in zip(u.a, al, et)), u.g)

    def comm(self, u: ExtElement, v: ExtElement) -> ExtElement:
        """[u, v] = u v u^-1 v^-1 = (eta(g_1, g_2), 0)."""
        return ExtElement(eval_eta(self.pair, u.g, v.g), (0,) * self.pair.n)

    def comm_direct(self, u: ExtElement, v: ExtElement) -> ExtElement:
        return self.mul(self.mul(u, v), self.mul(self.inv(u), self.inv(v)))

    def pow(self, u: ExtElement, k: int) -> ExtElement:
        if k < 0:
            u, k = self.inv(u), -k
        out = self.identity
        while k:
            if k & 1:
                out = self.mul(out, u)
            u = self.mul(u, u)
            k >>= 1
        return out

    def element_order(self, u: ExtElement) -> int:
        k, x = 1, u
        while x != self.identity:
            x = self.mul(x, u)
            k += 1
        return k


def ext_mul(E: ExtGroup, u, v):
    return E.mul(u, v)


def ext_inv(E: ExtGroup, u):
    return E.inv(u)


def ext_conj(E: ExtGroup, u, v):
    return E.conj(u, v)


def ext_comm(E: ExtGroup, u, v):
    return E.comm(u, v)


def recover_pair(E: ExtGroup) -> CocyclePair:
    """Read a_i off (0, g_i)(0, g_i^-1) and b_lambda off (0, g_j)(0, g_i)."""
    pair = E.pair
    q = pair.q
    cols_a = []
    for i in range(pair.n):
        gi = E.gen(i)
        gi_inv = E.element(g=[-x for x in gi.g])
        cols_a.append(E.mul(gi, gi_inv).a)
    cols_b = []
    for i, j in pair.lam:
        cols_b.append(tuple(-x % q for x in E.mul(E.gen(j), E.gen(i)).a))
    a = [[c[u] for c in cols_a] for u in range(pair.r)]
    b = [[c[u] for c in cols_b] for u in range(pair.r)]
    return pair.with_data(a, b)


def closure(E: ExtGroup, elements: Iterable[ExtElement], budget: int = DEFAULT_CLOSURE_BUDGET) -> set:
    gens = list(elements)
    seen = {E.identity}
    queue = deque([E.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = E.mul(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > budget:
                    raise BudgetExceeded(f"closure exceeded {budget} elements")
                queue.append(y)
    return seen


def generates(E: ExtGroup, elements: Iterable[ExtElement], budget: int = DEFAULT_CLOSURE_BUDGET) -> bool:
    if E.order > budget:
        raise BudgetExceeded(f"|E| = {E.order} exceeds closure budget {budget}", E.order)
    return len(closure(E, elements, budget)) == E.order


# --------------------------------------------------------------------------
# vectorized tables


def _coords_array(shape) -> np.ndarray:
    if shape.rank == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(shape.elements()), dtype=np.int64).reshape(shape.order, shape.rank)


def alpha_table(pair: CocyclePair) -> np.ndarray:
    """alpha(s, t) for all s, t in G, shape (|G|, |G|, r), embedded coordinates."""
    G = pair.G
    S = _coords_array(G)
    N = S.shape[0]
    q = pair.q
    a = np.array(pair.a, dtype=np.int64).reshape(pair.r, pair.n)
    b = np.array(pair.b, dtype=np.int64).reshape(pair.r, len(pair.lam))
    out = np.zeros((N, N, pair.r), dtype=np.int64)
    for i, mod in enumerate(G.moduli):
        carry = (S[:, None, i] + S[None, :, i]) >= mod
        out += carry[:, :, None] * a[:, i][None, None, :]
        out %= q
    for k, (i, j) in enumerate(pair.lam):
        # t_i * s_j with s the row (first argument) index
        coef = (S[None, :, i] * S[:, None, j]) % q
        out -= coef[:, :, None] * b[:, k][None, None, :]
        out %= q
    return out


def mul_table(pair: CocyclePair) -> np.ndarray:
    """Cayley table of E(alpha) on indices ``a_index * |G| + g_index``."""
    A, G = pair.A, pair.G
    nA, nG = A.order, G.order
    W = _coords_array(A)
    Aemb = np.array([embed(A, w) for w in W.tolist()], dtype=np.int64).reshape(nA, A.rank)
    S = _coords_array(G)
    gsum = (S[:, None, :] + S[None, :, :]) % np.array(G.moduli or (1,), dtype=np.int64)[: G.rank]
    gidx = _index_of(gsum, G.moduli)
    al = alpha_table(pair)
    q = pair.q
    steps = np.array([A.p ** (A.top - d) for d in A.exponents], dtype=np.int64)
    table = np.empty((nA * nG, nA * nG), dtype=np.int64)
    for ia in range(nA):
        # a-part of u fixed; combine with every a-part of v and every (g1, g2)
        asum = (Aemb[ia][None, None, None, :] + Aemb[None, :, None, :] + al[:, None, :, :]) % q
        # asum indices: (g1, ia2, g2, r)
        w = asum // steps if A.rank else asum
        aidx = _index_of(w, A.moduli)
        res = aidx * nG + gidx[:, None, :]
        # rows: ia * nG + g1 ; columns: ia2 * nG + g2
        table[ia * nG:(ia + 1) * nG, :] = res.reshape(nG, nA * nG)
    return table


def _index_of(coords: np.ndarray, moduli: Sequence[int]) -> np.ndarray:
    idx = np.zeros(coords.shape[:-1], dtype=np.int64)
    for i, q in enumerate(moduli):
        idx = idx * q + coords[..., i]
    return idx
