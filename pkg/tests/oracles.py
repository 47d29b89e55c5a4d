"""Slow, independent reference computations on plain integer lists.

Nothing here touches the package's series arithmetic.  A series is a list
``c`` with ``c[e]`` the coefficient of ``q^e`` for ``0 <= e < n``.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def inv(a, n):
    """Reciprocal of a list with ``a[0] = 1``."""
    assert a[0] == 1
    out = [0] * n
    out[0] = 1
    for e in range(1, n):
        out[e] = -sum(a[j] * out[e - j] for j in range(1, min(e, len(a) - 1) + 1))
    return out


def one_minus(e, n):
    c = [0] * n
    c[0] = 1
    if e < n:
        c[e] -= 1
    return c


def poch(start, m, n, step=1):
    """``prod_{l<m} (1 - q^(start + step*l))`` truncated to length n."""
    out = [1] + [0] * (n - 1)
    for l in range(m):
        out = mul(out, one_minus(start + step * l, n), n)
    return out


def qinf(n, step=1, power=1):
    base = poch(step, n // step + 1, n, step)
    out = [1] + [0] * (n - 1)
    for _ in range(abs(power)):
        out = mul(out, base if power > 0 else inv(base, n), n)
    return out


def shifted(c, s, n):
    out = [0] * n
    for i, x in enumerate(c):
        if 0 <= i + s < n:
            out[i + s] += x
    return out


def add(a, b):
    return [x + y for x, y in zip(a, b)]


# -- combinatorial oracles ----------------------------------------------------


def partitions_count(n):
    """p(0..n-1) by counting partitions explicitly."""

    def count(left, cap):
        if left == 0:
            return 1
        return sum(count(left - p, p) for p in range(min(left, cap), 0, -1))

    return [count(e, e) for e in range(n)]


def gap_two_partitions(n, smallest=1):
    """Partitions of e with parts differing by >= 2 and every part >= smallest."""

    def count(left, cap):
        if left == 0:
            return 1
        return sum(count(left - p, p - 2) for p in range(smallest, min(left, cap) + 1))

    return [count(e, e) for e in range(n)]


def rr_sum(n, linear):
    """``sum_m q^(m^2 + linear*m) / (q)_m`` by direct summation."""
    out = [0] * n
    m = 0
    while m * m + linear * m < n:
        out = add(out, shifted(inv(poch(1, m, n), n), m * m + linear * m, n))
        m += 1
    return out


def pentagonal(n):
    out = [0] * n
    for j in range(-n, n + 1):
        e = j * (3 * j - 1) // 2
        if 0 <= e < n:
            out[e] += (-1) ** (j % 2)
    return out


# -- brute-force multi-sum ----------------------------------------------------


def fermionic_bruteforce(N, k, p, n, linear_sign=1, even_last=False):
    """Direct multi-sum with an eigenvalue-based box; for small ranks only."""
    r, K = N - 1, k - 1
    if r == 0 or K == 0:
        return [1] + [0] * (n - 1)
    C = np.array([[2 if a == b else (-1 if abs(a - b) == 1 else 0) for b in range(r)] for a in range(r)], float)
    lam = float(np.linalg.eigvalsh(C).min())
    s = [linear_sign * (-1) ** a for a in range(r)]
    # exponent >= (lam/2)|M_i|^2 - sqrt(r)|M_i| per column, all terms >= 0
    top = int((math.sqrt(r) + math.sqrt(r + 2 * lam * n)) / lam) + 2
    out = [0] * n
    for flat in itertools.product(range(top + 1), repeat=r * K):
        m = [flat[a * K:(a + 1) * K] for a in range(r)]
        M = [[sum(m[a][j] for j in range(i, K)) for i in range(K)] for a in range(r)]
        e2 = 0
        for i in range(K):
            e2 += sum(C[a][b] * M[a][i] * M[b][i] for a in range(r) for b in range(r))
            if i + 1 >= p:
                e2 += 2 * sum(s[a] * M[a][i] for a in range(r))
        e = int(round(e2)) // 2
        if e >= n:
            continue
        assert e >= 0
        term = [1] + [0] * (n - 1)
        for a in range(r):
            for i in range(K):
                step = 2 if (even_last and i == K - 1) else 1
                term = mul(term, inv(poch(step, m[a][i], n, step), n), n)
        out = add(out, shifted(term, e, n))
    return out


def lattice_bruteforce(modulus, base, weight, ref, sign_rule, exp_denom, n, radius):
    """Weighted lattice sum over ``base + modulus*t`` with ``|t_i| <= radius``."""
    base = [Fraction(b) for b in base]
    ref = [Fraction(w) for w in ref]
    acc = [Fraction(0)] * n
    norm0 = sum(b * b for b in base)
    for t in itertools.product(range(-radius, radius + 1), repeat=len(base)):
        v = [b + modulus * x for b, x in zip(base, t)]
        e = (sum(x * x for x in v) - norm0) / exp_denom
        assert e.denominator == 1 and e >= 0
        if e >= n:
            continue
        w = Fraction(1)
        if weight in ("xi", "chi"):
            for i in range(len(v)):
                for j in range(i + 1, len(v)):
                    w *= (v[i] ** 2 - v[j] ** 2) / (ref[i] ** 2 - ref[j] ** 2)
        if weight == "chi":
            for x, y in zip(v, ref):
                w *= x / y
        d = sum(v) - sum(base)
        if sign_rule == "parity" and d % 2:
            w = -w
        if sign_rule == "parity_over_modulus" and (d / modulus) % 2:
            w = -w
        acc[int(e)] += w
    assert all(c.denominator == 1 for c in acc)
    return [int(c) for c in acc]


def rogers_L_quad(x):
    """Rogers dilogarithm from its integral definition."""
    from scipy.integrate import quad

    if x <= 0:
        return 0.0
    val, _ = quad(lambda t: math.log1p(-t) / t + math.log(t) / (1 - t), 0, x, epsabs=1e-13, epsrel=1e-13, limit=400)
    return -0.5 * val


def kirillov_lhs_quad(K, N):
    """Level sum with every dilogarithm taken from quadrature."""
    total = 0.0
    kappa = K + N - 1
    s, c = math.sin, math.pi / kappa
    for a in range(1, N):
        for i in range(1, K):
            x = s(a * c) * s((N - a) * c) / (s((i + a) * c) * s((i + N - a) * c))
            total += rogers_L_quad(min(max(x, 0.0), 1.0))
    return total / (math.pi ** 2 / 6)
