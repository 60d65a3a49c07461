"""Finite abelian p-groups J(l_1, ..., l_k), their elements and endomorphism matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .arith import is_prime, valuation
from .linalg import Matrix, det_mod


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


@dataclass(frozen=True)
class GroupShape:
    """Z/p^{l_1} x ... x Z/p^{l_k} with l_1 <= ... <= l_k."""

    p: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(x) for x in self.exponents))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if any(x < 1 for x in self.exponents):
            raise ValueError(f"exponents must be >= 1, got {self.exponents}")
        if any(a > b for a, b in zip(self.exponents, self.exponents[1:])):
            raise ValueError(f"exponents must be nondecreasing, got {self.exponents}")

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p**m for m in self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @property
    def top(self) -> int:
        """Largest exponent (0 for the trivial group)."""
        return self.exponents[-1] if self.exponents else 0

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(c % q for c, q in zip(coords, self.moduli))

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(q) for q in self.moduli))

    def index(self, coords: Sequence[int]) -> int:
        """Mixed-radix position of ``coords`` in :meth:`elements` order."""
        idx = 0
        for c, q in zip(coords, self.moduli):
            idx = idx * q + c % q
        return idx

    def generator(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.rank))

    def to_json(self) -> dict:
        return {"p": self.p, "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, data: dict) -> "GroupShape":
        return cls(int(data["p"]), tuple(data["exponents"]))


@dataclass(frozen=True)
class GroupElement:
    shape: GroupShape
    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", self.shape.reduce(self.coords))

    def _same(self, other: "GroupElement"):
        if self.shape != other.shape:
            raise ValueError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same(other)
        return GroupElement(self.shape, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.shape, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(self.shape, tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


def element_add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def element_neg(x: GroupElement) -> GroupElement:
    return -x


def element_scale(x: GroupElement, k: int) -> GroupElement:
    return x.scale(k)


def hom_order(dom: GroupShape, cod: GroupShape) -> int:
    """|hom(dom, cod)|."""
    if dom.p != cod.p:
        return 1
    return dom.p ** sum(min(a, b) for a in dom.exponents for b in cod.exponents)


@dataclass(frozen=True)
class HomMatrix:
    """Homomorphism ``dom -> cod``; column j is the image of the j-th generator."""

    domain: GroupShape
    codomain: GroupShape
    entries: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(r) for r in self.entries))
        if len(self.entries) != self.codomain.rank or any(len(r) != self.domain.rank for r in self.entries):
            raise ValueError("matrix dimensions do not match the shapes")

    def __call__(self, coords: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce([sum(x * c for x, c in zip(row, coords)) for row in self.entries])

    def as_list(self) -> Matrix:
        return [list(r) for r in self.entries]


def validate_hom(matrix: Sequence[Sequence[int]], domain: GroupShape, codomain: GroupShape) -> bool:
    """True iff every entry satisfies ``||x_ij|| >= l^cod_i - l^dom_j``."""
    if len(matrix) != codomain.rank or any(len(r) != domain.rank for r in matrix):
        raise ValueError("matrix dimensions do not match the shapes")
    p = domain.p
    for i, row in enumerate(matrix):
        ci = codomain.exponents[i]
        for j, x in enumerate(row):
            need = ci - domain.exponents[j]
            if need > 0 and valuation(x, p, ci) < need:
                return False
    return True


def is_automorphism_matrix(x: Sequence[Sequence[int]], shape: GroupShape) -> bool:
    if shape.rank == 0:
        return True
    return det_mod(x, shape.p, shape.p) != 0


def _blocks(exponents: Sequence[int]) -> list[list[int]]:
    out: list[list[int]] = []
    for i, m in enumerate(exponents):
        if out and exponents[out[-1][0]] == m:
            out[-1].append(i)
        else:
            out.append([i])
    return out


def _gl_mod_p(k: int, p: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All invertible k x k matrices over F_p, as tuples of columns."""

    def reduce(vec, basis):
        vec = list(vec)
        for piv, b in basis:
            if vec[piv]:
                f = vec[piv]
                vec = [(x - f * y) % p for x, y in zip(vec, b)]
        return vec

    def rec(cols, basis):
        if len(cols) == k:
            yield tuple(cols)
            return
        for vec in itertools.product(range(p), repeat=k):
            red = reduce(vec, basis)
            if not any(red):
                continue
            piv = next(i for i, x in enumerate(red) if x)
            inv = pow(red[piv], -1, p)
            red = [x * inv % p for x in red]
            yield from rec(cols + [vec], basis + [(piv, red)])

    yield from rec([], [])


def gl_order(k: int, p: int) -> int:
    out = 1
    for i in range(k):
        out *= p**k - p**i
    return out


def aut_order(shape: GroupShape) -> int:
    """|Aut(G)|, counted from the block-triangular structure of X_G mod p."""
    m = shape.exponents
    out = 1
    for blk in _blocks(m):
        out *= gl_order(len(blk), shape.p)
    free = sum(min(a, b) for a in m for b in m) - sum(len(b) ** 2 for b in _blocks(m))
    return out * shape.p**free


def enumerate_aut_reps(shape: GroupShape, budget: int | None = None) -> Iterator[Matrix]:
    """One matrix per coset of X_G^0 in X_G, i.e. one per automorphism of G.

    Entry (i, j) is reduced mod p^{m_i}. Modulo p the matrices are block upper
    triangular with one block per run of equal exponents, so invertibility only
    constrains the diagonal blocks mod p; every other digit is free.
    """
    count = aut_order(shape)
    if budget is not None and count > budget:
        raise BudgetExceeded(f"|Aut(G)| = {count} exceeds budget {budget}", count)
    return _aut_stream(shape)


def _aut_stream(shape: GroupShape) -> Iterator[Matrix]:
    p, m, n = shape.p, shape.exponents, shape.rank
    if n == 0:
        yield []
        return
    blocks = _blocks(m)
    block_of = {i: bi for bi, blk in enumerate(blocks) for i in blk}
    # free digit ranges per entry: entry = base + step * h, h in range(count)
    slots = []
    for i in range(n):
        for j in range(n):
            if block_of[i] == block_of[j]:
                slots.append((i, j, p, p ** (m[i] - 1)))
            elif m[i] < m[j]:
                slots.append((i, j, 1, p ** m[i]))
            else:
                slots.append((i, j, p ** (m[i] - m[j]), p ** m[j]))
    gl_lists = [list(_gl_mod_p(len(blk), p)) for blk in blocks]
    for lead in itertools.product(*gl_lists):
        base = [[0] * n for _ in range(n)]
        for blk, cols in zip(blocks, lead):
            for cj, col in enumerate(cols):
                for ci, v in enumerate(col):
                    base[blk[ci]][blk[cj]] = v
        for digits in itertools.product(*(range(c) for _, _, _, c in slots)):
            x = [row[:] for row in base]
            for (i, j, step, _), h in zip(slots, digits):
                x[i][j] += step * h
            yield x
