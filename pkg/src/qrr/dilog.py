"""Rogers dilogarithm and the A_{N-1} dilogarithm sum rules.

``L(x) = Li2(x) + log(x) log(1-x) / 2`` on ``[0, 1]``, normalized so that
``L(1) = pi^2/6``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import QSeriesError

L1 = math.pi ** 2 / 6
_CLAMP = 1e-12


class DilogDomainError(QSeriesError, ValueError):
    """Argument outside ``[0, 1]``."""


class ConvergenceError(QSeriesError, ArithmeticError):
    """Fixed-point iteration did not settle within its budget."""


def _li2_small(x: float) -> float:
    """``sum x^k / k^2`` for ``0 <= x <= 1/2``."""
    total, term, k = 0.0, x, 1
    while term > 1e-18 * max(total, 1e-300) or k == 1:
        total += term / (k * k)
        k += 1
        term *= x
        if term == 0.0:
            break
    return total


def rogers_L(x: float) -> float:
    """Rogers dilogarithm on ``[0, 1]``.

    Series for ``x <= 1/2``; the reflection ``L(x) = L(1) - L(1-x)`` covers
    the rest.
    """
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise DilogDomainError(f"L(x) needs 0 <= x <= 1, got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return L1
    if x > 0.5:
        return L1 - rogers_L(1.0 - x)
    return _li2_small(x) + 0.5 * math.log(x) * math.log1p(-x)


def _clamp01(x: float) -> float:
    if -_CLAMP < x < 0.0:
        return 0.0
    if 1.0 < x < 1.0 + _CLAMP:
        return 1.0
    return x


def sine_ratio(a: int, i: int, N: int, kappa: int) -> float:
    """``sin(a pi/k) sin((N-a) pi/k) / (sin((i+a) pi/k) sin((i+N-a) pi/k))``."""
    s = math.sin
    c = math.pi / kappa
    return _clamp01(s(a * c) * s((N - a) * c) / (s((i + a) * c) * s((i + N - a) * c)))


def summand(K: int, N: int, a: int, i: int) -> float:
    """``L(sine_ratio) / L(1)`` with level ``K``, i.e. ``kappa = K + N - 1``."""
    return rogers_L(sine_ratio(a, i, N, K + N - 1)) / L1


def kirillov_check(K: int, N: int) -> tuple[float, float]:
    """``sum_{a<N, i<K} summand`` against ``(N^2-1)(K-1)/(K+N-1)``."""
    lhs = sum(summand(K, N, a, i) for a in range(1, N) for i in range(1, K))
    rhs = (N * N - 1) * (K - 1) / (K + N - 1)
    return lhs, rhs


def kirillov_even_check(k: int, N: int) -> tuple[float, float]:
    """Half of the level-2k sum: ``i < k`` only, against ``N(N-1)(k-1)/(2k+N-1)``.

    Also checks the mirror symmetry ``i <-> 2k-1-i`` of the summands and that
    the unpaired ``i = 2k-1`` term equals 1; raises ArithmeticError on a
    violation beyond ``1e-12``.
    """
    K = 2 * k
    for a in range(1, N):
        if abs(summand(K, N, a, K - 1) - 1.0) > 1e-12:
            raise ArithmeticError(f"unpaired term is not L(1) at a={a}")
        for i in range(1, k):
            left, right = summand(K, N, a, i), summand(K, N, a, K - i - 1)
            if abs(left - right) > 1e-12:
                raise ArithmeticError(f"mirror symmetry fails at a={a}, i={i}: {left} vs {right}")
    lhs = sum(summand(K, N, a, i) for a in range(1, N) for i in range(1, k))
    rhs = N * (N - 1) * (k - 1) / (2 * k + N - 1)
    return lhs, rhs


@dataclass
class DilogSystem:
    """Unknowns ``f[a][i]`` (0-based) of ``f_i^a = prod_{b,j} (1 - f_j^b)^{C_ab min(i,j)}``."""

    N: int
    k: int
    values: list
    iterations: int = 0
    method: str = "fixed-point"

    def residual(self) -> float:
        return max((abs(r) for row in _residual(self.N, self.k, self.values) for r in row), default=0.0)

    def dilog_sum(self) -> float:
        return sum(rogers_L(f) for row in self.values for f in row) / L1


def _cartan(a: int, b: int) -> int:
    return 2 if a == b else (-1 if abs(a - b) == 1 else 0)


def _rhs(N: int, k: int, f) -> list:
    logs = [[math.log1p(-x) for x in row] for row in f]
    out = []
    for a in range(N - 1):
        row = []
        for i in range(k - 1):
            s = 0.0
            for b in range(max(0, a - 1), min(N - 1, a + 2)):
                c = _cartan(a, b)
                for j in range(k - 1):
                    s += c * min(i + 1, j + 1) * logs[b][j]
            row.append(math.exp(s))
        out.append(row)
    return out


def _residual(N: int, k: int, f) -> list:
    img = _rhs(N, k, f)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(f, img)]


def closed_form(N: int, k: int) -> list:
    """``f_i^a = sine_ratio(a, i, N, 2k+N-1)``."""
    kappa = 2 * k + N - 1
    return [[sine_ratio(a, i, N, kappa) for i in range(1, k)] for a in range(1, N)]


def _solve_linear(A: list, b: list) -> list:
    """Dense Gaussian elimination with partial pivoting."""
    n = len(b)
    M = [row[:] + [v] for row, v in zip(A, b)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(M[r][c]))
        M[c], M[piv] = M[piv], M[c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, n + 1):
                    M[r][j] -= f * M[c][j]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        x[r] = (M[r][n] - sum(M[r][j] * x[j] for j in range(r + 1, n))) / M[r][r]
    return x


def _flat_form(N: int, k: int) -> list:
    K = k - 1
    return [
        [_cartan(a, b) * min(i + 1, j + 1) for b in range(N - 1) for j in range(K)]
        for a in range(N - 1)
        for i in range(K)
    ]


def _newton(N: int, k: int, f0: list, tol: float, max_iter: int):
    """Newton on ``y = log f`` for ``y - B log(1 - e^y) = 0`` with backtracking."""
    B = _flat_form(N, k)
    d = len(B)
    y = [math.log(v) for row in f0 for v in row]

    def F(y):
        w = [math.log(-math.expm1(v)) for v in y]
        return [y[r] - sum(B[r][c] * w[c] for c in range(d)) for r in range(d)]

    fy = F(y)
    for it in range(1, max_iter + 1):
        if max(abs(v) for v in fy) < tol:
            return y, it
        norm = math.fsum(v * v for v in fy)
        g = [1.0 / math.expm1(-v) for v in y]  # e^y / (1 - e^y)
        J = [[(r == c) + B[r][c] * g[c] for c in range(d)] for r in range(d)]
        step = _solve_linear(J, [-v for v in fy])
        t = 1.0
        while t > 1e-12:
            trial = [v + t * s for v, s in zip(y, step)]
            if all(v < 0 for v in trial):
                ft = F(trial)
                if math.fsum(v * v for v in ft) <= (1 - 1e-4 * t) * norm:
                    break
            t /= 2
        else:
            return None, it
        y, fy = trial, ft
    return None, max_iter


def tba_solve(N: int, k: int, damping: float = 0.5, tol: float = 1e-14, max_iter: int = 20000) -> DilogSystem:
    """Solve the system starting from ``f = 1/2``.

    Damped fixed-point iteration runs first.  For rank >= 2 that map is
    often unstable and leaves the unit cube; then a damped Newton solve in
    ``log f`` takes over from the same starting point.  ``method`` on the
    result records which one converged.
    """
    if N < 2 or k < 2:
        raise ValueError("need N >= 2 and k >= 2")
    start = [[0.5] * (k - 1) for _ in range(N - 1)]
    f = start
    for it in range(1, max_iter + 1):
        img = _rhs(N, k, f)
        new = [[(1 - damping) * x + damping * y for x, y in zip(r1, r2)] for r1, r2 in zip(f, img)]
        if any(not 0.0 < v < 1.0 for row in new for v in row):
            break
        step = max(abs(x - y) for r1, r2 in zip(f, new) for x, y in zip(r1, r2))
        f = new
        if step < tol:
            return DilogSystem(N, k, f, it, "fixed-point")
    y, it = _newton(N, k, start, tol, 200)
    if y is None:
        raise ConvergenceError(f"no convergence for N={N}, k={k}")
    K = k - 1
    values = [[math.exp(y[a * K + i]) for i in range(K)] for a in range(N - 1)]
    return DilogSystem(N, k, values, it, "newton")
