"""How End(A) and End(G) act on normal-form cocycles.

Pushing forward along psi_y multiplies (a, b) on the left by y. Pulling back
along phi_x sends the class of (a, b) to the class of
(a x + b theta_x, b x^#), and :class:`MuFunction` is an explicit cochain whose
coboundary accounts for the difference at the level of cocycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .abelian import GroupShape, validate_hom
from .cocycle import CocyclePair, LambdaIndex, eval_alpha
from .linalg import Matrix, matmul, reduce_matrix


class ContractViolation(AssertionError):
    """The constructed mu does not satisfy its defining identity."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


def pushforward(y: Sequence[Sequence[int]], pair: CocyclePair) -> CocyclePair:
    q = pair.q
    return pair.with_data(matmul(y, pair.a_matrix(), q), matmul(y, pair.b_matrix(), q))


def sharp(x: Sequence[Sequence[int]], lam: LambdaIndex | None = None, mod: int | None = None) -> Matrix:
    """Matrix of 2x2 minors of ``x`` indexed by pairs (second compound matrix)."""
    n = len(x)
    lam = lam or LambdaIndex(n)
    out = []
    for ki, kj in lam:
        row = []
        for li, lj in lam:
            v = x[ki][li] * x[kj][lj] - x[ki][lj] * x[kj][li]
            row.append(v % mod if mod else v)
        out.append(row)
    return out


def theta(x: Sequence[Sequence[int]], G: GroupShape, lam: LambdaIndex | None = None) -> Matrix:
    """Characteristic-2 correction; identically zero for odd p."""
    n = G.rank
    lam = lam or LambdaIndex(n)
    m = G.exponents
    out = [[0] * n for _ in lam]
    if G.p != 2:
        return out
    for k, (ki, kj) in enumerate(lam):
        for ell in range(n):
            if m[ki] == m[kj] == m[ell] and (x[ki][ell] * x[kj][ell]) % 2:
                out[k][ell] = 2 ** (m[ki] - 1)
    return out


def rescale(x: Sequence[Sequence[int]], G: GroupShape) -> Matrix:
    """Entry (i, j) becomes x_ij * p^(m_j - m_i), dividing exactly when m_i > m_j.

    Raising the i-th coordinate of phi_x(g_j) to the order p^{m_j} of g_j picks
    up a_i exactly x_ij * p^(m_j - m_i) times, so this is the matrix that moves
    the carry data a. Row i is first reduced mod p^{m_i}, so the result only
    depends on phi_x.
    """
    p, m = G.p, G.exponents
    out = []
    for i, row in enumerate(x):
        new = []
        for j, v in enumerate(row):
            v %= p ** m[i]
            k = m[j] - m[i]
            if k >= 0:
                new.append(v * p**k)
            else:
                if v % p**-k:
                    raise ValueError(f"entry ({i},{j}) of x is not divisible by p^{-k}")
                new.append(v // p**-k)
        out.append(new)
    return out


def pullback_class(x: Sequence[Sequence[int]], pair: CocyclePair) -> CocyclePair:
    """Representative (a x~ + b theta_x, b x^#) of phi_x^*[alpha_{a,b}], x~ = :func:`rescale`."""
    if not validate_hom(x, pair.G, pair.G):
        raise ValueError("x does not define an endomorphism of G")
    q = pair.q
    lam = pair.lam
    a = pair.a_matrix()
    b = pair.b_matrix()
    th = theta(x, pair.G, lam)
    new_a = matmul(a, rescale(x, pair.G), q) if pair.r else []
    if lam:
        new_a = [[(u + v) % q for u, v in zip(r1, r2)] for r1, r2 in zip(new_a, matmul(b, th, q))]
    new_b = matmul(b, sharp(x, lam), q)
    return pair.with_data(new_a, new_b)


def apply_G(x: Sequence[Sequence[int]], G: GroupShape, s: Sequence[int]) -> tuple[int, ...]:
    """Coordinates of phi_x(g^s)."""
    return G.reduce([sum(xi * si for xi, si in zip(row, s)) for row in x])


def pullback_eval(x, pair: CocyclePair, s, t) -> tuple[int, ...]:
    """(phi_x^* alpha_{a,b})(g^s, g^t) straight from the definition."""
    return eval_alpha(pair, apply_G(x, pair.G, s), apply_G(x, pair.G, t))


@dataclass
class MuFunction:
    """The cochain mu: G -> A with delta(mu) = phi_x^* alpha_{a,b} - alpha_{a', b'}.

    ``(a', b')`` is :func:`pullback_class`. The free values mu(g_j) are fixed
    to zero. ``extra`` is an optional list of per-generator A-values added
    linearly in the reduced coordinates (used to absorb residual coboundaries
    when assembling lifts).
    """

    x: Matrix
    pair: CocyclePair
    extra: list[tuple[int, ...]] | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def __call__(self, s: Sequence[int]) -> tuple[int, ...]:
        s = self.pair.G.reduce(s)
        hit = self._cache.get(s)
        if hit is None:
            hit = self._cache[s] = self._evaluate(s)
        return hit

    def _evaluate(self, s: tuple[int, ...]) -> tuple[int, ...]:
        pair, x = self.pair, self.x
        q, r, n = pair.q, pair.r, pair.n
        moduli = pair.G.moduli
        out = [0] * r
        # carry part, one generator column a_i at a time
        for i in range(n):
            ai = pair.a_col(i)
            if not any(ai):
                continue
            qi = moduli[i]
            coeff = 0
            prefix = 0  # sum_{h<j} x_ih s_h
            for j in range(n):
                xij = x[i][j]
                xr = xij % qi
                for u in range(s[j]):
                    coeff += ((xij * u + prefix) % qi + xr) // qi
                prefix += x[i][j] * s[j]
            for k in range(r):
                out[k] += coeff * ai[k]
        # bilinear part, one pair kappa = (u, v) at a time
        for k, (u, v) in enumerate(pair.lam):
            bk = pair.b_col(k)
            if not any(bk):
                continue
            coeff = sum(si * (si - 1) // 2 * x[u][i] * x[v][i] for i, si in enumerate(s))
            coeff += sum(s[i] * s[j] * x[v][i] * x[u][j] for i, j in pair.lam)
            for t in range(r):
                out[t] -= coeff * bk[t]
        if self.extra:
            for j, c in enumerate(self.extra):
                for t in range(r):
                    out[t] += s[j] * c[t]
        return tuple(v % q for v in out)

    def delta(self, s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
        """mu(s) + mu(t) - mu(s + t)."""
        st = [a + b for a, b in zip(s, t)]
        q = self.pair.q
        return tuple((u + v - w) % q for u, v, w in zip(self(s), self(t), self(st)))


def pullback_residual(x, pair: CocyclePair, mu: MuFunction, target: CocyclePair, s, t) -> tuple[int, ...]:
    """phi_x^* alpha(s, t) - alpha_target(s, t) + delta mu(s, t); zero when the identity holds."""
    q = pair.q
    lhs = pullback_eval(x, pair, s, t)
    rhs = eval_alpha(target, s, t)
    dm = mu.delta(s, t)
    return tuple((u - v + w) % q for u, v, w in zip(lhs, rhs, dm))


def mu_correction(x: Sequence[Sequence[int]], pair: CocyclePair, points=None) -> MuFunction:
    """Build mu for (x, pair) and verify the coboundary identity on ``points``.

    ``points`` defaults to the pairs of generators and their sums; pass an
    iterable of (s, t) to check more.
    """
    if not validate_hom(x, pair.G, pair.G):
        raise ValueError("x does not define an endomorphism of G")
    x = [list(row) for row in x]
    mu = MuFunction(x, pair)
    target = pullback_class(x, pair)
    if points is None:
        gens = [pair.G.generator(i) for i in range(pair.n)]
        points = [(g, h) for g in gens for h in gens]
        points += [(g, [a + b for a, b in zip(g, h)]) for g in gens for h in gens]
    for s, t in points:
        res = pullback_residual(x, pair, mu, target, s, t)
        if any(res):
            raise ContractViolation(f"delta(mu) mismatch at s={tuple(s)}, t={tuple(t)}: {res}", (s, t))
    return mu
