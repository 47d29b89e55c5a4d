"""Quadratic forms and pruned enumeration of lattice points in ellipsoids.

``enumerate_points`` lists every ``x`` in N^r with ``x >= lo`` and
``x.Q.x/2 + s.x <= budget``.  A certified rational lower bound on the least
eigenvalue of ``Q`` gives a box that provably contains all such points;
inside the box a Fincke-Pohst descent prunes each coordinate with the exact
minimum of the form over the not-yet-fixed coordinates.  The final test on
every candidate is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import EnumerationError, ParameterError

Matrix = tuple[tuple[Fraction, ...], ...]


def cartan_matrix(rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix of A_rank: 2 on the diagonal, -1 next to it."""
    return tuple(
        tuple(2 if a == b else (-1 if abs(a - b) == 1 else 0) for b in range(rank))
        for a in range(rank)
    )


def _as_matrix(Q) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in Q)


def is_positive_definite(Q) -> bool:
    """Exact test by symmetric Gaussian elimination (all pivots positive)."""
    A = [list(row) for row in _as_matrix(Q)]
    n = len(A)
    for k in range(n):
        if A[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return True


@lru_cache(maxsize=None)
def lambda_min_lower(Q: Matrix, steps: int = 40) -> Fraction:
    """Certified rational ``t > 0`` with ``Q - t*I`` positive definite.

    Bisection on ``t`` with the exact definiteness test; the returned value
    is always a verified lower bound on the least eigenvalue.
    """
    Q = _as_matrix(Q)
    n = len(Q)
    if n == 0:
        return Fraction(1)
    if not is_positive_definite(Q):
        raise ParameterError("quadratic form is not positive definite")
    lo = Fraction(0)
    hi = max(Q[i][i] + sum(abs(Q[i][j]) for j in range(n) if j != i) for i in range(n))
    for _ in range(steps):
        mid = (lo + hi) / 2
        shifted = tuple(tuple(Q[i][j] - (mid if i == j else 0) for j in range(n)) for i in range(n))
        if is_positive_definite(shifted):
            lo = mid
        else:
            hi = mid
    if lo == 0:
        # extremely ill-conditioned; fall back to a tiny certified value
        t = hi
        while t > 0:
            t /= 2
            shifted = tuple(tuple(Q[i][j] - (t if i == j else 0) for j in range(n)) for i in range(n))
            if is_positive_definite(shifted):
                return t
    return lo


def _inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        p = M[c][c]
        M[c] = [x / p for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


@lru_cache(maxsize=None)
def _schur_chain(Q: Matrix, s: tuple[Fraction, ...]):
    """Per prefix length j: (S_j, u_j, kappa_j) as floats.

    ``min over x_{j+1..r} in R`` of ``x.Q.x/2 + s.x`` equals
    ``x_F.S_j.x_F/2 + u_j.x_F - kappa_j`` for the first j coordinates x_F.
    """
    r = len(Q)
    out = []
    for j in range(r + 1):
        F, R = range(j), range(j, r)
        if j == r:
            S = [list(Q[a]) for a in F]
            u = list(s)
            kappa = Fraction(0)
        else:
            QRR_inv = _inverse([[Q[a][b] for b in R] for a in R])
            QFR = [[Q[a][b] for b in R] for a in F]
            sR = [s[b] for b in R]
            # QFR . QRR^-1
            T = [[sum(QFR[a][k] * QRR_inv[k][b] for k in range(len(R))) for b in range(len(R))] for a in range(j)]
            S = [[Q[a][b] - sum(T[a][k] * Q[R[k]][b] for k in range(len(R))) for b in F] for a in F]
            u = [s[a] - sum(T[a][k] * sR[k] for k in range(len(R))) for a in F]
            w = [sum(QRR_inv[a][b] * sR[b] for b in range(len(R))) for a in range(len(R))]
            kappa = sum(x * y for x, y in zip(sR, w)) / 2
        out.append(
            (
                [[float(x) for x in row] for row in S],
                [float(x) for x in u],
                float(kappa),
            )
        )
    return out


def form_value(Q, s, x) -> Fraction:
    r = len(x)
    quad = sum(Fraction(Q[a][b]) * x[a] * x[b] for a in range(r) for b in range(r)) / 2
    return quad + sum(Fraction(s[a]) * x[a] for a in range(r))


def radius_bound(Q, s, budget) -> int:
    """Integer R with ``||x|| <= R`` for every real x in the sublevel set."""
    lam = lambda_min_lower(_as_matrix(Q))
    snorm = math.sqrt(float(sum(Fraction(c) ** 2 for c in s)))
    b = max(float(budget), 0.0)
    R = (snorm + math.sqrt(snorm * snorm + 2 * float(lam) * b)) / float(lam)
    return int(math.floor(R * (1 + 1e-12))) + 1


def enumerate_points(
    Q,
    s: Optional[Sequence] = None,
    budget=0,
    lo: Optional[Sequence[int]] = None,
    bound_scale: int = 1,
) -> list[tuple[tuple[int, ...], Fraction]]:
    """All ``(x, value)`` with x in N^r, ``x >= lo`` and ``value <= budget``.

    ``bound_scale > 1`` multiplies the certified box and switches off the
    Fincke-Pohst pruning, which gives an independent (slow) cross-check.
    """
    Qm = _as_matrix(Q)
    r = len(Qm)
    s = tuple(Fraction(c) for c in (s if s is not None else [0] * r))
    lo = tuple(lo) if lo is not None else (0,) * r
    budget = Fraction(budget)
    if r == 0:
        return [((), Fraction(0))] if budget >= 0 else []
    R = radius_bound(Qm, s, budget) * bound_scale
    out: list[tuple[tuple[int, ...], Fraction]] = []
    if bound_scale != 1:
        _box(Qm, s, budget, lo, R, out)
        return out
    chain = _schur_chain(Qm, s)
    # exact leaf test in integers: x.Qi.x + si.x <= bi, all scaled by 2*den
    den = math.lcm(*(c.denominator for row in Qm for c in row), *(c.denominator for c in s))
    Qi = [[int(c * den) for c in row] for row in Qm]
    si = [int(2 * c * den) for c in s]
    bi = 2 * den * budget
    two_den = 2 * den
    fb = float(budget)
    slack = 1e-7 * (1.0 + abs(fb))
    x = [0] * r

    def rec(j: int, exact: int):
        # exact = integer value of the form on the fixed prefix x[:j]
        if j == r:
            if exact <= bi:
                out.append((tuple(x), Fraction(exact, two_den)))
            return
        S, u, kappa = chain[j + 1]
        a = 0.5 * S[j][j]
        b = u[j] + sum(S[j][l] * x[l] for l in range(j))
        c = -kappa
        for l in range(j):
            c += u[l] * x[l] + 0.5 * S[l][l] * x[l] * x[l]
            for m in range(l):
                c += S[l][m] * x[l] * x[m]
        disc = b * b - 4 * a * (c - fb - slack)
        if disc < 0:
            return
        root = math.sqrt(disc)
        t_lo = max(lo[j], math.ceil((-b - root) / (2 * a) - 1e-9))
        t_hi = min(R, math.floor((-b + root) / (2 * a) + 1e-9))
        lin = 2 * sum(Qi[j][l] * x[l] for l in range(j)) + si[j]
        quad = Qi[j][j]
        for t in range(t_lo, t_hi + 1):
            x[j] = t
            rec(j + 1, exact + t * (lin + quad * t))
        x[j] = 0

    rec(0, 0)
    return out


def _box(Q, s, budget, lo, R, out):
    r = len(Q)
    den = math.lcm(*(c.denominator for row in Q for c in row), *(c.denominator for c in s))
    Qi = [[int(c * den) for c in row] for row in Q]
    si = [int(2 * c * den) for c in s]
    bi = 2 * den * budget
    for x in itertools.product(*(range(lo[j], R + 1) for j in range(r))):
        val = sum(x[a] * (sum(Qi[a][b] * x[b] for b in range(r)) + si[a]) for a in range(r))
        if val <= bi:
            out.append((x, Fraction(val, 2 * den)))
    out.sort()


@dataclass(frozen=True)
class QuadraticFormSpec:
    """The form ``B = C (x) T^{-1}`` with ``B_{ai,bj} = C_ab min(i,j)``.

    Rows and columns are indexed by ``(a, i)`` with ``1 <= a <= N-1`` and
    ``1 <= i <= k-1``, flattened as ``(a-1)*(k-1) + (i-1)``.
    """

    N: int
    k: int
    matrix: Matrix = field(init=False, repr=False)

    def __post_init__(self):
        if self.N < 1 or self.k < 1:
            raise ParameterError("N and k must be positive")
        C = cartan_matrix(self.N - 1)
        K = self.k - 1
        B = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for a in range(self.N - 1):
            for b in range(self.N - 1):
                for i in range(K):
                    for j in range(K):
                        B[a * K + i][b * K + j] = Fraction(C[a][b] * min(i + 1, j + 1))
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in B))

    @property
    def dim(self) -> int:
        return (self.N - 1) * (self.k - 1)

    @property
    def cartan(self):
        return cartan_matrix(self.N - 1)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.matrix)

    def lambda_min_lower(self) -> Fraction:
        return lambda_min_lower(self.matrix)

    def value(self, m: Sequence[int]) -> Fraction:
        """``m.B.m/2`` for a flattened vector ``m``."""
        return form_value(self.matrix, [0] * self.dim, m)


def check_inside(points, bound: int):
    """Raise if any enumerated coordinate escaped the proven box."""
    for x, _ in points:
        if any(c > bound for c in x):
            raise EnumerationError(f"point {x} lies outside the certified bound {bound}")
