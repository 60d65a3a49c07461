"""Normal-form 2-cocycles alpha_{a,b} on G = J(m) with values in A = J(d).

A-elements are always held in embedded coordinates: the u-th coordinate of an
element of A lives in J = Z/p^{d_r} and carries a factor p^{d_r - d_u}. Under
that convention a, b and every endomorphism matrix of A live over the single
ring J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .abelian import GroupShape
from .arith import ResidueRing, carry_floor, valuation
from .linalg import Matrix, Submodule, column, column_span, zeros

LAMBDA_ORDERS = ("lex", "example3")


@dataclass(frozen=True)
class LambdaIndex:
    """The pairs (i, j), i < j, in a fixed numeration.

    Indices are 0-based internally. ``"lex"`` orders (0,1), (0,2), ...;
    ``"example3"`` is the reverse of lex, which for n = 3 gives
    (1,2), (0,2), (0,1).
    """

    n: int
    order: str = "lex"
    pairs: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        if self.order not in LAMBDA_ORDERS:
            raise ValueError(f"unknown lambda order {self.order!r}")
        pairs = [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]
        if self.order == "example3":
            pairs.reverse()
        object.__setattr__(self, "pairs", tuple(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def position(self, i: int, j: int) -> int:
        return self.pairs.index((i, j))


def embed(A: GroupShape, w: Sequence[int]) -> tuple[int, ...]:
    """Per-factor coordinates of an A-element -> embedded J^r coordinates."""
    dr = A.top
    q = A.p**dr
    return tuple(A.p ** (dr - d) * x % q for d, x in zip(A.exponents, w))


def unembed(A: GroupShape, c: Sequence[int]) -> tuple[int, ...]:
    dr = A.top
    q = A.p**dr
    out = []
    for d, x in zip(A.exponents, c):
        x %= q
        step = A.p ** (dr - d)
        if x % step:
            raise ValueError(f"{tuple(c)} is not an embedded element of A")
        out.append(x // step)
    return tuple(out)


def embedded_A(A: GroupShape) -> Submodule:
    ring = ResidueRing(A.p, A.top)
    gens = [[A.p ** (A.top - d) if u == v else 0 for v in range(A.rank)]
            for u, d in enumerate(A.exponents)]
    return Submodule.from_generators(gens, ring, A.rank)


@dataclass(frozen=True)
class CocyclePair:
    """Data (a, b) of alpha_{a,b}: ``a`` is r x n, ``b`` is r x n(n-1)/2, over J."""

    G: GroupShape
    A: GroupShape
    a: tuple[tuple[int, ...], ...]
    b: tuple[tuple[int, ...], ...]
    lambda_order: str = "lex"

    def __post_init__(self):
        if self.G.p != self.A.p:
            raise ValueError("G and A must be p-groups for the same prime")
        q = self.q
        object.__setattr__(self, "a", tuple(tuple(x % q for x in row) for row in self.a))
        object.__setattr__(self, "b", tuple(tuple(x % q for x in row) for row in self.b))
        r, n = self.A.rank, self.G.rank
        nl = n * (n - 1) // 2
        if len(self.a) != r or any(len(row) != n for row in self.a):
            raise ValueError(f"a must be {r} x {n}")
        if len(self.b) != r or any(len(row) != nl for row in self.b):
            raise ValueError(f"b must be {r} x {nl}")

    @property
    def p(self) -> int:
        return self.G.p

    @property
    def q(self) -> int:
        """Modulus of J = Z/p^{d_r} (1 when A is trivial)."""
        return self.A.p**self.A.top

    @property
    def ring(self) -> ResidueRing:
        return ResidueRing(self.p, self.A.top)

    @property
    def n(self) -> int:
        return self.G.rank

    @property
    def r(self) -> int:
        return self.A.rank

    @property
    def lam(self) -> LambdaIndex:
        return LambdaIndex(self.G.rank, self.lambda_order)

    def a_matrix(self) -> Matrix:
        return [list(row) for row in self.a]

    def b_matrix(self) -> Matrix:
        return [list(row) for row in self.b]

    def a_col(self, i: int) -> tuple[int, ...]:
        return tuple(row[i] for row in self.a)

    def b_col(self, k: int) -> tuple[int, ...]:
        return tuple(row[k] for row in self.b)

    def with_data(self, a, b) -> "CocyclePair":
        return CocyclePair(self.G, self.A, tuple(map(tuple, a)), tuple(map(tuple, b)), self.lambda_order)

    def __sub__(self, other: "CocyclePair") -> "CocyclePair":
        if (self.G, self.A, self.lambda_order) != (other.G, other.A, other.lambda_order):
            raise ValueError("pairs over different shapes")
        a = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.a, other.a)]
        b = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.b, other.b)]
        return self.with_data(a, b)

    @classmethod
    def zero(cls, G: GroupShape, A: GroupShape, lambda_order: str = "lex") -> "CocyclePair":
        n = G.rank
        return cls(G, A, tuple(map(tuple, zeros(A.rank, n))),
                   tuple(map(tuple, zeros(A.rank, n * (n - 1) // 2))), lambda_order)

    def reorder(self, lambda_order: str) -> "CocyclePair":
        """The same cocycle with the columns of b renumbered."""
        src, dst = self.lam, LambdaIndex(self.n, lambda_order)
        perm = [src.position(*pair) for pair in dst]
        b = [[row[k] for k in perm] for row in self.b]
        return CocyclePair(self.G, self.A, self.a, tuple(map(tuple, b)), lambda_order)


def violations(pair: CocyclePair) -> list[tuple[str, int, int]]:
    """Entries breaking the kernel bounds on a and b, as ``(matrix, u, col)``."""
    out = []
    p, dr = pair.p, pair.A.top
    m, d = pair.G.exponents, pair.A.exponents
    for u in range(pair.r):
        for i in range(pair.n):
            if valuation(pair.a[u][i], p, dr) < dr - min(m[i], d[u]):
                out.append(("a", u, i))
        for k, (i, _) in enumerate(pair.lam):
            if valuation(pair.b[u][k], p, dr) < dr - min(m[i], d[u]):
                out.append(("b", u, k))
    return out


def is_valid(pair: CocyclePair) -> bool:
    return not violations(pair)


def _reduce_G(pair: CocyclePair, s: Sequence[int]) -> list[int]:
    return [x % q for x, q in zip(s, pair.G.moduli)]


def eval_alpha(pair: CocyclePair, s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """alpha_{a,b}(g^s, g^t) in embedded coordinates."""
    q = pair.q
    moduli = pair.G.moduli
    s = _reduce_G(pair, s)
    t = _reduce_G(pair, t)
    coeff_a = [carry_floor(si, ti, mi) for si, ti, mi in zip(s, t, moduli)]
    coeff_b = [-t[i] * s[j] for i, j in pair.lam]
    return tuple(
        (sum(c * x for c, x in zip(coeff_a, arow)) + sum(c * x for c, x in zip(coeff_b, brow))) % q
        for arow, brow in zip(pair.a, pair.b)
    )


def eval_eta(pair: CocyclePair, s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """alpha(s, t) - alpha(t, s), via the 2x2 determinants in (s, t)."""
    q = pair.q
    coeff = [s[i] * t[j] - s[j] * t[i] for i, j in pair.lam]
    return tuple(sum(c * x for c, x in zip(coeff, brow)) % q for brow in pair.b)


def check_cocycle_identity(pair, g1, g2, g3, alpha=None) -> bool:
    """The 2-cocycle identity at one triple; ``alpha`` overrides the evaluator."""
    f = alpha or (lambda s, t: eval_alpha(pair, s, t))
    q = pair.q
    g12 = [x + y for x, y in zip(g1, g2)]
    g23 = [x + y for x, y in zip(g2, g3)]
    terms = zip(f(g1, g2), f(g1, g23), f(g12, g3), f(g2, g3))
    return all((w - x + y - z) % q == 0 for w, x, y, z in terms)


def is_diamond(pair: CocyclePair) -> bool:
    """Do the columns of b generate A?"""
    if pair.r == 0:
        return True
    return column_span(pair.b_matrix(), pair.ring) == embedded_A(pair.A)


def class_is_zero(pair: CocyclePair) -> bool:
    """[alpha_{a,b}] = 0 iff b = 0 and a_i lies in p^{m_i} A for every i."""
    if any(x for row in pair.b for x in row):
        return False
    p, dr = pair.p, pair.A.top
    for u, du in enumerate(pair.A.exponents):
        for i, mi in enumerate(pair.G.exponents):
            if valuation(pair.a[u][i], p, dr) < min(dr, dr - du + mi):
                return False
    return True


def class_equal(pair: CocyclePair, other: CocyclePair) -> bool:
    if (pair.G, pair.A) != (other.G, other.A):
        raise ValueError("pairs over different shapes")
    if pair.lambda_order != other.lambda_order:
        other = other.reorder(pair.lambda_order)
    return class_is_zero(pair - other)


def _ker_order(m: int, A: GroupShape) -> int:
    return A.p ** sum(min(m, d) for d in A.exponents)


def h2_order(G: GroupShape, A: GroupShape) -> int:
    """|H^2(G; A)| = prod_i |coker(p^{m_i})| * prod_{i<j} |ker(p^{m_i})|."""
    out = 1
    m = G.exponents
    for i, mi in enumerate(m):
        out *= _ker_order(mi, A)  # |coker| = |ker| for an endomorphism of a finite group
        out *= _ker_order(mi, A) ** (len(m) - 1 - i)
    return out


def eta_span(pair: CocyclePair, samples: Sequence[tuple[Sequence[int], Sequence[int]]]) -> Submodule:
    """Span of the given eta values, for checking that the commutators generate A."""
    vals = [eval_eta(pair, s, t) for s, t in samples]
    return Submodule.from_generators(vals, pair.ring, pair.r)
