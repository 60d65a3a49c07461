"""Brute-force ground truth at desk scale.

Nothing here uses the cohomological description of E(alpha): automorphisms and
isomorphisms are found by searching a Cayley table, and H^2 is counted by
linear algebra on the full cochain spaces.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .abelian import BudgetExceeded, GroupShape
from .cocycle import CocyclePair, is_diamond
from .extension import ExtElement, ExtGroup, mul_table

DEFAULT_TABLE_BUDGET = 2048


@dataclass
class CayleyTable:
    order: int
    mul: list[list[int]]
    labels: list[ExtElement] = field(default_factory=list)
    generators: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.inverse = [row.index(0) for row in self.mul]
        if not self.generators:
            self.generators = greedy_generators(self)

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul[y][x]
            k += 1
        return k

    def orders(self) -> list[int]:
        return [self.element_order(x) for x in range(self.order)]

    def order_census(self) -> dict[int, int]:
        return dict(sorted(Counter(self.orders()).items()))

    def is_latin(self) -> bool:
        full = set(range(self.order))
        rows_ok = all(set(row) == full for row in self.mul)
        cols_ok = all({row[j] for row in self.mul} == full for j in range(self.order))
        return rows_ok and cols_ok

    def closure(self, gens: Sequence[int]) -> set[int]:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def center(self) -> list[int]:
        return [x for x in range(self.order)
                if all(self.mul[x][y] == self.mul[y][x] for y in range(self.order))]

    def to_json(self) -> dict:
        return {"order": self.order, "mul": self.mul,
                "labels": [{"a": list(u.a), "g": list(u.g)} for u in self.labels]}


def greedy_generators(table: CayleyTable) -> list[int]:
    """A generating set picked by repeatedly adding an element of maximal order outside the span."""
    orders = table.orders()
    by_order = sorted(range(table.order), key=lambda x: (-orders[x], x))
    gens: list[int] = []
    span = {0}
    for x in by_order:
        if len(span) == table.order:
            break
        if x not in span:
            gens.append(x)
            span = table.closure(gens)
    return gens


def build_table(pair: CocyclePair, budget: int = DEFAULT_TABLE_BUDGET) -> CayleyTable:
    E = ExtGroup(pair)
    if E.order > budget:
        raise BudgetExceeded(f"|E| = {E.order} exceeds table budget {budget}", E.order)
    mul = mul_table(pair).tolist()
    labels = list(E.elements())
    table = CayleyTable(E.order, mul, labels, generators=[0])
    gens = [E.index(E.gen(i)) for i in range(pair.n)]
    if not (is_diamond(pair) and len(table.closure(gens)) == table.order):
        gens = greedy_generators(table)
    table.generators = gens
    if not table.is_latin():
        raise AssertionError("multiplication table is not a Latin square")
    return table


def _extend(src: CayleyTable, dst: CayleyTable, images: Sequence[int]) -> Optional[list[int]]:
    """The homomorphism sending src.generators to ``images``, if one exists."""
    gens = src.generators
    phi = [-1] * src.order
    phi[0] = 0
    queue = deque([0])
    smul, dmul = src.mul, dst.mul
    while queue:
        x = queue.popleft()
        fx = phi[x]
        for g, h in zip(gens, images):
            y = smul[x][g]
            fy = dmul[fx][h]
            if phi[y] < 0:
                phi[y] = fy
                queue.append(y)
            elif phi[y] != fy:
                return None
    return phi


def _searches(src: CayleyTable, dst: CayleyTable, bijective: bool = True):
    """Yield every homomorphism src -> dst (bijective ones only if requested)."""
    gens = src.generators
    if src.order != dst.order and bijective:
        return
    s_ord = src.orders()
    d_ord = dst.orders()
    cands = [[y for y in range(dst.order) if d_ord[y] == s_ord[g]] for g in gens]
    # pairwise invariants for pruning: order of products and commutators
    def comm(t, x, y):
        m, inv = t.mul, t.inverse
        return m[m[x][y]][m[inv[x]][inv[y]]]

    pair_inv = {(i, j): (s_ord[src.mul[gens[i]][gens[j]]], s_ord[comm(src, gens[i], gens[j])])
                for i in range(len(gens)) for j in range(i)}

    def rec(chosen):
        k = len(chosen)
        if k == len(gens):
            phi = _extend(src, dst, chosen)
            if phi is not None and (not bijective or len(set(phi)) == dst.order):
                yield phi
            return
        for y in cands[k]:
            ok = True
            for j in range(k):
                x = chosen[j]
                if (d_ord[dst.mul[y][x]], d_ord[comm(dst, y, x)]) != pair_inv[(k, j)]:
                    ok = False
                    break
            if ok:
                yield from rec(chosen + [y])

    yield from rec([])


def brute_aut_count(table: CayleyTable, budget: int = DEFAULT_TABLE_BUDGET) -> int:
    if table.order > budget:
        raise BudgetExceeded(f"table order {table.order} exceeds budget {budget}", table.order)
    return sum(1 for _ in _searches(table, table))


def brute_automorphisms(table: CayleyTable, budget: int = DEFAULT_TABLE_BUDGET):
    """Yield every automorphism of the table as an index list."""
    if table.order > budget:
        raise BudgetExceeded(f"table order {table.order} exceeds budget {budget}", table.order)
    yield from _searches(table, table)


def lifted_G_maps(pair: CocyclePair, budget: int = DEFAULT_TABLE_BUDGET) -> set[tuple[tuple[int, ...], ...]]:
    """Matrices of the maps induced on G = E/A by all automorphisms of E(alpha).

    Only meaningful when A is the commutator subgroup, so that every
    automorphism preserves it. Entry (i, j) is reduced mod p^{m_i}.
    """
    table = build_table(pair, budget)
    E = ExtGroup(pair)
    G = pair.G
    nG = G.order
    elems = list(G.elements())
    gens = [E.index(E.gen(i)) for i in range(pair.n)]
    out = set()
    for phi in brute_automorphisms(table, budget):
        cols = [elems[phi[g] % nG] for g in gens]
        out.add(tuple(tuple(cols[j][i] for j in range(pair.n)) for i in range(pair.n)))
    return out


def brute_iso(t1: CayleyTable, t2: CayleyTable, budget: int = DEFAULT_TABLE_BUDGET) -> bool:
    if max(t1.order, t2.order) > budget:
        raise BudgetExceeded("table order exceeds budget")
    if t1.order != t2.order or t1.order_census() != t2.order_census():
        return False
    return next(_searches(t1, t2), None) is not None


# --------------------------------------------------------------------------
# H^2 by linear algebra on cochains


def _kernel_order(M: np.ndarray, p: int, d: int) -> int:
    """|{x in (Z/p^d)^cols : M x = 0}| by valuation-pivoted elimination."""
    q = p**d
    dtype = np.int16 if q * q < 2**14 else np.int64
    M = np.unique(M % q, axis=0).astype(dtype)
    M = M[np.any(M != 0, axis=1)]
    cols = M.shape[1]
    log_ker = 0  # exponent of p
    pivots = 0
    for v in range(d):
        # every remaining entry is divisible by p^v; pivot on entries that are
        # not divisible by p^(v+1). Rows with no such entry keep that property
        # for the rest of the phase, so they are skipped once and for all.
        pv, pv1 = p**v, p ** (v + 1)
        start = 0
        while M.size:
            found = None
            while start < M.shape[0]:
                hits = np.flatnonzero(M[start] % pv1)
                if hits.size:
                    found = (start, int(hits[0]))
                    break
                start += 1
            if found is None:
                break
            i, j = found
            unit = int(M[i, j]) // pv
            row = (M[i].astype(np.int64) * pow(unit, -1, q) % q).astype(dtype)
            rows = np.flatnonzero(M[:, j])
            f = M[rows, j] // pv
            M[rows] = (M[rows] - f[:, None] * row[None, :]) % q
            M = np.delete(np.delete(M, i, axis=0), j, axis=1)
            log_ker += v
            pivots += 1
        if M.size:
            M = M[np.any(M != 0, axis=1)]
    log_ker += d * (cols - pivots)
    return p**log_ker


def _group_tables(G: GroupShape):
    S = list(G.elements())
    idx = {s: k for k, s in enumerate(S)}
    add = [[idx[G.reduce([x + y for x, y in zip(s, t)])] for t in S] for s in S]
    return len(S), add


def cochain_differentials(G: GroupShape):
    """Integer matrices of delta^1: C^1 -> C^2 and delta^2: C^2 -> C^3 (trivial coefficients)."""
    N, add = _group_tables(G)
    d1 = np.zeros((N * N, N), dtype=np.int64)
    for g1 in range(N):
        for g2 in range(N):
            row = d1[g1 * N + g2]
            row[g1] += 1
            row[g2] += 1
            row[add[g1][g2]] -= 1
    d2 = np.zeros((N * N * N, N * N), dtype=np.int64)
    for g1 in range(N):
        for g2 in range(N):
            g12 = add[g1][g2]
            for g3 in range(N):
                row = d2[(g1 * N + g2) * N + g3]
                row[g2 * N + g3] += 1
                row[g12 * N + g3] -= 1
                row[g1 * N + add[g2][g3]] += 1
                row[g1 * N + g2] -= 1
    return d1, d2


def brute_h2_count(G: GroupShape, A: GroupShape, budget: int = 16) -> int:
    """|Z^2| / |B^2| computed one cyclic factor of A at a time."""
    if G.order > budget:
        raise BudgetExceeded(f"|G| = {G.order} exceeds H^2 budget {budget}", G.order)
    if G.order == 1 or A.order == 1:
        return 1
    d1, d2 = cochain_differentials(G)
    N = G.order
    total = 1
    for d in A.exponents:
        p = A.p
        cocycles = _kernel_order(d2, p, d)
        homs = _kernel_order(d1, p, d)
        coboundaries = (p**d) ** N // homs
        total *= cocycles // coboundaries
    return total
