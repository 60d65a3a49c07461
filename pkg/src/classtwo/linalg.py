"""Linear algebra over the local ring Z/p^e.

Matrices are plain lists of rows of Python ints. Elimination always pivots on
an entry of minimal p-adic valuation and rescales the pivot to a pure power of
p, which is what makes the Smith and Howell forms canonical over a chain ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .arith import ResidueRing, valuation

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], mod: Optional[int] = None,
           inner: Optional[int] = None) -> Matrix:
    """Product of an ``r x k`` and a ``k x n`` matrix, reduced mod ``mod`` if given.

    Empty operands need ``inner``/shape hints, so shapes are taken from the
    arguments where possible: ``len(a)`` rows and ``len(b[0])`` columns.
    """
    rows = len(a)
    k = len(b)
    cols = len(b[0]) if b else 0
    if inner is not None and inner == 0:
        return zeros(rows, cols)
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    oi[j] += x * bt[j]
        if mod is not None:
            out[i] = [v % mod for v in oi]
    return out


def matvec(a: Sequence[Sequence[int]], v: Sequence[int], mod: Optional[int] = None) -> list[int]:
    out = [sum(x * y for x, y in zip(row, v)) for row in a]
    if mod is not None:
        out = [x % mod for x in out]
    return out


def reduce_matrix(m: Sequence[Sequence[int]], mod: int) -> Matrix:
    return [[x % mod for x in row] for row in m]


def mat_add(a, b, mod=None) -> Matrix:
    out = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return reduce_matrix(out, mod) if mod is not None else out


def mat_sub(a, b, mod=None) -> Matrix:
    out = [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return reduce_matrix(out, mod) if mod is not None else out


def column(m: Sequence[Sequence[int]], j: int) -> list[int]:
    return [row[j] for row in m]


def det_mod(m: Sequence[Sequence[int]], q: int, p: int) -> int:
    """Determinant modulo ``q = p**e`` by valuation-pivoted elimination."""
    n = len(m)
    a = [[x % q for x in row] for row in m]
    e = 0
    while p**e < q:
        e += 1
    det = 1
    for c in range(n):
        best = None
        for r in range(c, n):
            if a[r][c]:
                v = valuation(a[r][c], p, e)
                if best is None or v < best[0]:
                    best = (v, r)
        if best is None:
            return 0
        v, r = best
        if r != c:
            a[c], a[r] = a[r], a[c]
            det = -det
        piv = a[c][c]
        pv = p**v
        u = piv // pv
        uinv = pow(u, -1, q)
        det = det * piv % q
        for r2 in range(c + 1, n):
            if a[r2][c]:
                # a[r2][c] = f * piv with f = (a[r2][c] / p^v) * u^-1
                f = (a[r2][c] // pv) * uinv % q
                a[r2] = [(x - f * y) % q for x, y in zip(a[r2], a[c])]
    return det % q


def mat_inverse(m: Sequence[Sequence[int]], q: int) -> Matrix:
    """Inverse over Z/q; raises ``ValueError`` if the matrix is singular."""
    n = len(m)
    a = [[x % q for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        r = next((r for r in range(c, n) if _gcd(a[r][c], q) == 1), None)
        if r is None:
            raise ValueError("matrix is not invertible")
        a[c], a[r] = a[r], a[c]
        inv = pow(a[c][c], -1, q)
        a[c] = [x * inv % q for x in a[c]]
        for r2 in range(n):
            if r2 != c and a[r2][c]:
                f = a[r2][c]
                a[r2] = [(x - f * y) % q for x, y in zip(a[r2], a[c])]
    return [row[n:] for row in a]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# --------------------------------------------------------------------------
# Smith normal form


def _eliminate(mat, ring: ResidueRing, row_ok=None, col_ok=None):
    """Diagonalize by valuation-minimal pivoting.

    ``row_ok(target, source, v)`` says whether a multiple of valuation ``v`` of
    row ``source`` may be added to row ``target``; ``col_ok`` likewise for
    columns. Returns ``(Y, D, V, pivots)`` with ``Y @ mat @ V == D``.
    """
    p, e, q = ring.p, ring.e, ring.modulus
    r = len(mat)
    k = len(mat[0]) if mat else 0
    D = reduce_matrix(mat, q)
    Y = identity(r)
    V = identity(k)
    free_rows = set(range(r))
    free_cols = set(range(k))
    pivots = []
    while True:
        cands = sorted(
            (valuation(D[i][j], p, e), i, j)
            for i in free_rows for j in free_cols if D[i][j]
        )
        chosen = None
        for v, i, j in cands:
            ok = True
            if row_ok is not None:
                ok = all(row_ok(i2, i, valuation(D[i2][j], p, e) - v)
                         for i2 in free_rows if i2 != i and D[i2][j])
            if ok and col_ok is not None:
                ok = all(col_ok(j2, j, valuation(D[i][j2], p, e) - v)
                         for j2 in free_cols if j2 != j and D[i][j2])
            if ok:
                chosen = (v, i, j)
                break
        if chosen is None:
            break
        v, i, j = chosen
        pv = p**v
        uinv = pow(D[i][j] // pv, -1, q)
        D[i] = [x * uinv % q for x in D[i]]
        Y[i] = [x * uinv % q for x in Y[i]]
        for i2 in free_rows:
            if i2 != i and D[i2][j]:
                f = D[i2][j] // pv
                D[i2] = [(x - f * y) % q for x, y in zip(D[i2], D[i])]
                Y[i2] = [(x - f * y) % q for x, y in zip(Y[i2], Y[i])]
        for j2 in free_cols:
            if j2 != j and D[i][j2]:
                f = D[i][j2] // pv
                for row in D:
                    row[j2] = (row[j2] - f * row[j]) % q
                for row in V:
                    row[j2] = (row[j2] - f * row[j]) % q
        free_rows.discard(i)
        free_cols.discard(j)
        pivots.append((i, j))
    return Y, D, V, pivots


def smith_normal_form(mat: Sequence[Sequence[int]], ring: ResidueRing):
    """Return ``(y, d, x)`` with ``y @ mat == d @ x`` over ``ring``.

    ``y`` and ``x`` are invertible and ``d`` is diagonal with entries ``p**v``
    (or 0) in nondecreasing valuation.
    """
    r = len(mat)
    k = len(mat[0]) if mat else 0
    Y, D, V, pivots = _eliminate(mat, ring)
    rows = [i for i, _ in pivots] + [i for i in range(r) if i not in {i for i, _ in pivots}]
    cols = [j for _, j in pivots] + [j for j in range(k) if j not in {j for _, j in pivots}]
    y = [Y[i] for i in rows]
    d = [[D[i][j] for j in cols] for i in rows]
    v = [[row[j] for j in cols] for row in V]
    x = mat_inverse(v, ring.modulus) if k else []
    return y, d, x


# --------------------------------------------------------------------------
# Howell form and submodules


def howell_form(rows: Iterable[Sequence[int]], ring: ResidueRing, width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical Howell basis (as rows) of the span of ``rows`` in (Z/p^e)^width."""
    p, e, q = ring.p, ring.e, ring.modulus
    work = [[x % q for x in row] for row in rows]
    work = [row for row in work if any(row)]
    basis: list[tuple[int, int, list[int]]] = []
    for c in range(width):
        best = None
        for idx, row in enumerate(work):
            if row[c]:
                v = valuation(row[c], p, e)
                if best is None or v < best[0]:
                    best = (v, idx)
        if best is None:
            continue
        v, idx = best
        piv = work.pop(idx)
        pv = p**v
        uinv = pow(piv[c] // pv, -1, q)
        piv = [x * uinv % q for x in piv]
        rest = []
        for row in work:
            if row[c]:
                f = row[c] // pv
                row = [(x - f * y) % q for x, y in zip(row, piv)]
            if any(row):
                rest.append(row)
        if v:
            # the Howell property needs the pivot-killing multiple as well
            extra = [x * p ** (e - v) % q for x in piv]
            if any(extra):
                rest.append(extra)
        work = rest
        for _, _, prev in basis:
            f = prev[c] // pv
            if f:
                prev[:] = [(x - f * y) % q for x, y in zip(prev, piv)]
        basis.append((c, v, piv))
    return tuple(tuple(row) for _, _, row in basis)


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x)


@dataclass(frozen=True)
class Submodule:
    """A submodule of (Z/p^e)^rank, stored by its Howell basis."""

    ring: ResidueRing
    rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ring: ResidueRing, rank: int) -> "Submodule":
        gens = [list(g) for g in gens]
        for g in gens:
            if len(g) != rank:
                raise ValueError(f"generator of length {len(g)} in ambient of rank {rank}")
        return cls(ring, rank, howell_form(gens, ring, rank))

    def _check(self, other: "Submodule"):
        if self.ring != other.ring or self.rank != other.rank:
            raise ValueError("submodules live in different ambients")

    def reduce(self, vec: Sequence[int]) -> list[int]:
        p, e, q = self.ring.p, self.ring.e, self.ring.modulus
        vec = [x % q for x in vec]
        for row in self.basis:
            c = _pivot(row)
            pv = row[c]
            if vec[c] % pv:
                return vec
            f = vec[c] // pv
            if f:
                vec = [(x - f * y) % q for x, y in zip(vec, row)]
        return vec

    def contains(self, vec: Sequence[int]) -> bool:
        if len(vec) != self.rank:
            raise ValueError("vector length does not match ambient rank")
        return not any(self.reduce(vec))

    def __le__(self, other: "Submodule") -> bool:
        self._check(other)
        return all(other.contains(row) for row in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Submodule):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.basis == other.basis

    def __hash__(self):
        return hash((self.ring, self.rank, self.basis))

    def order(self) -> int:
        p, e = self.ring.p, self.ring.e
        out = 1
        for row in self.basis:
            out *= p ** (e - valuation(row[_pivot(row)], p, e))
        return out

    def image(self, mat: Sequence[Sequence[int]]) -> "Submodule":
        """Image under left multiplication by ``mat`` (an ``s x rank`` matrix)."""
        s = len(mat)
        gens = [matvec(mat, row, self.ring.modulus) for row in self.basis]
        return Submodule.from_generators(gens, self.ring, s)

    def generators(self) -> list[list[int]]:
        return [list(row) for row in self.basis]


def submodule_from_generators(columns, ring, rank):
    return Submodule.from_generators(columns, ring, rank)


def submodule_contains(s: Submodule, vec) -> bool:
    return s.contains(vec)


def submodule_leq(s: Submodule, t: Submodule) -> bool:
    return s <= t


def submodule_equal(s: Submodule, t: Submodule) -> bool:
    s._check(t)
    return s == t


def submodule_image(x, s: Submodule) -> Submodule:
    return s.image(x)


def column_span(mat: Sequence[Sequence[int]], ring: ResidueRing) -> Submodule:
    r = len(mat)
    k = len(mat[0]) if mat else 0
    return Submodule.from_generators([column(mat, j) for j in range(k)], ring, r)


def _augmented_howell(b, ring, order=None):
    r = len(b)
    k = len(b[0]) if b else 0
    order = list(range(k)) if order is None else list(order)
    rows = []
    # unknowns are listed in the given order, so pivots favour later entries of ``order``
    for pos, lam in enumerate(order):
        rows.append([b[u][lam] for u in range(r)] + [int(t == pos) for t in range(k)])
    return howell_form(rows, ring, r + k), r, k


def kernel(b: Sequence[Sequence[int]], ring: ResidueRing, k: Optional[int] = None) -> Submodule:
    """``{v in (Z/p^e)^k : b v = 0}`` for an ``r x k`` matrix ``b``."""
    if k is None:
        k = len(b[0]) if b else 0
    if not b:
        return Submodule.from_generators([[int(i == j) for j in range(k)] for i in range(k)], ring, k)
    H, r, k = _augmented_howell(b, ring)
    gens = [row[r:] for row in H if _pivot(row) >= r]
    return Submodule.from_generators(gens, ring, k)


def solve_linear(b: Sequence[Sequence[int]], a: Sequence[Sequence[int]], ring: ResidueRing,
                 order: Optional[Sequence[int]] = None) -> Optional[Matrix]:
    """A matrix ``w`` with ``b @ w == a``, or ``None`` if there is none.

    ``order`` permutes the unknowns before elimination, which selects a
    different (equally valid) particular solution.
    """
    q = ring.modulus
    r = len(b)
    n = len(a[0]) if a else 0
    k = len(b[0]) if b else 0
    if r == 0:
        return zeros(k, n)
    order = list(range(k)) if order is None else list(order)
    H, _, _ = _augmented_howell(b, ring, order)
    upper = [row for row in H if _pivot(row) < r]
    w = zeros(k, n)
    for j in range(n):
        vec = [a[u][j] % q for u in range(r)] + [0] * k
        for row in upper:
            c = _pivot(row)
            pv = row[c]
            if vec[c] % pv:
                return None
            f = vec[c] // pv
            if f:
                vec = [(x - f * y) % q for x, y in zip(vec, row)]
        if any(vec[:r]):
            return None
        for pos, t in enumerate(order):
            w[t][j] = -vec[r + pos] % q
    return w
