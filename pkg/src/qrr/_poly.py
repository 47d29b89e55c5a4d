"""Truncated integer polynomial kernels.

A polynomial is a plain ``list`` of ints, index = exponent on some fixed grid.
Every routine takes a length cap ``n`` and never returns more than ``n``
coefficients. These are the hot loops; ``ExactSeries`` and the sum engines
are thin layers over them.
"""
from __future__ import annotations

from functools import lru_cache


def mul(a: list[int], b: list[int], n: int) -> list[int]:
    """Product of ``a`` and ``b`` truncated to length ``n``."""
    if not a or not b or n <= 0:
        return []
    if len(a) > len(b):
        a, b = b, a
    out = [0] * min(n, len(a) + len(b) - 1)
    lo = len(out)
    for i, ai in enumerate(a):
        if i >= lo:
            break
        if not ai:
            continue
        lim = min(len(b), lo - i)
        for j in range(lim):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def mul_sparse(a: list[int], b: list[int], n: int) -> list[int]:
    """Same contract as :func:`mul`, iterating only over nonzero entries."""
    if n <= 0:
        return []
    na = [(i, c) for i, c in enumerate(a[:n]) if c]
    nb = [(j, c) for j, c in enumerate(b[:n]) if c]
    if not na or not nb:
        return []
    top = min(n, na[-1][0] + nb[-1][0] + 1)
    out = [0] * top
    for i, ai in na:
        for j, bj in nb:
            k = i + j
            if k >= top:
                break
            out[k] += ai * bj
    return out


def mul_one_minus(a: list[int], e: int, n: int, sign: int = -1) -> list[int]:
    """In-place multiply by ``1 + sign*t**e`` (e > 0), growing up to length n."""
    if e >= n or not a:
        return a
    size = min(n, len(a) + e)
    a.extend([0] * (size - len(a)))
    for k in range(size - 1, e - 1, -1):
        a[k] += sign * a[k - e]
    return a


def div_one_minus(a: list[int], e: int, n: int) -> list[int]:
    """In-place divide by ``1 - t**e`` (e > 0) as a power series, length n."""
    if len(a) < n:
        a.extend([0] * (n - len(a)))
    for k in range(e, n):
        a[k] += a[k - e]
    return a


@lru_cache(maxsize=None)
def inv_poch(m: int, step: int, n: int) -> tuple[int, ...]:
    """Coefficients of ``1/(t^step; t^step)_m`` truncated to length ``n``."""
    m = min(m, (n - 1) // step + 1) if n > 0 else 0
    if m == 0:
        return (1,) if n > 0 else ()
    prev = list(inv_poch(m - 1, step, n))
    return tuple(div_one_minus(prev, m * step, n))


@lru_cache(maxsize=None)
def poch(m: int, step: int, n: int) -> tuple[int, ...]:
    """Coefficients of ``(t^step; t^step)_m`` truncated to length ``n``."""
    out = [1]
    for j in range(1, m + 1):
        if j * step >= n:
            break
        mul_one_minus(out, j * step, n)
    return tuple(out[:n])


def add_into(acc: list[int], a, shift: int = 0, scale: int = 1) -> None:
    """``acc[shift+i] += scale*a[i]`` for all indices that fit in ``acc``."""
    top = len(acc) - shift
    for i in range(min(len(a), top)):
        c = a[i]
        if c:
            acc[shift + i] += scale * c
