"""Partitions and the modified Hall-Littlewood values needed for the proofs.

Covers ``b_lambda(q)``, ``n(lambda)``, the pairing ``(lambda|mu)``, skew
``Q'_{lambda/mu}(1)`` in two closed forms, the chain expansion of
``Q'_{(2^m)}`` on monomial alphabets ``x_i = q^sigma_i``, and a
Kostka-Foulkes oracle built from the charge statistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .errors import ConsistencyError, ParameterError
from .series import ExactSeries, poch, qbin


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(p for p in self.parts if p)
        if any(p < 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ParameterError(f"not a partition: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_conjugate(cls, cols: Sequence[int]) -> "Partition":
        return cls(tuple(_conjugate(tuple(c for c in cols if c))))

    @cached_property
    def conjugate(self) -> "Partition":
        return Partition(_conjugate(self.parts))

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        """1-based part, zero beyond the length."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def col(self, i: int) -> int:
        """``lambda'_i`` (1-based), zero beyond the first row."""
        return self.conjugate[i]

    def contains(self, other: "Partition") -> bool:
        return len(other) <= len(self) and all(b <= a for a, b in zip(self.parts, other.parts))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


@lru_cache(maxsize=None)
def _conjugate(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1))


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """All partitions with at most ``rows`` parts, each at most ``cols``."""

    def rec(prefix, left, cap):
        yield Partition(tuple(prefix))
        if left == 0:
            return
        for p in range(1, cap + 1):
            prefix.append(p)
            yield from rec(prefix, left - 1, p)
            prefix.pop()

    yield from rec([], rows, cols)


def n_of(lam: Partition) -> int:
    """``n(lambda)``; both defining sums are evaluated and must agree."""
    by_rows = sum((i - 1) * p for i, p in enumerate(lam.parts, 1))
    by_cols = sum(math.comb(c, 2) for c in lam.conjugate.parts)
    if by_rows != by_cols:
        raise ConsistencyError(f"n({lam}) disagrees: {by_rows} vs {by_cols}")
    return by_rows


def n_skew(lam: Partition, mu: Partition) -> int:
    top = max(len(lam.conjugate), 1)
    return sum(math.comb(lam.col(i) - mu.col(i), 2) for i in range(1, top + 1))


def b_of(lam: Partition) -> ExactSeries:
    """``b_lambda(q) = prod_i (q)_{lambda'_i - lambda'_{i+1}}``."""
    out = ExactSeries.one()
    conj = lam.conjugate
    for i in range(1, len(conj) + 1):
        out = out * poch(1, 1, conj[i] - conj[i + 1])
    return out


def bracket(lam: Partition, mu: Partition) -> int:
    """``(lambda|mu) = sum_i lambda'_i mu'_i``."""
    a, b = lam.conjugate.parts, mu.conjugate.parts
    return sum(x * y for x, y in zip(a, b))


@lru_cache(maxsize=None)
def skew_qprime_one(lam: Partition, mu: Partition) -> ExactSeries:
    """``Q'_{lambda/mu}(1)`` as an exact polynomial in q.

    Evaluated both as the product ``q^n/b_mu * prod(1 - q^(lambda'_{mu_i}-i+1))``
    and as the q-binomial product; a disagreement raises ConsistencyError.
    Zero when ``mu`` is not contained in ``lam``.
    """
    if not lam.contains(mu):
        return ExactSeries.zero()
    nn = n_skew(lam, mu)
    binomial_form = ExactSeries.monomial(nn)
    for i in range(1, len(lam.conjugate) + 1):
        binomial_form = binomial_form * qbin(lam.col(i) - mu.col(i + 1), lam.col(i) - mu.col(i))
    numerator = ExactSeries.monomial(nn)
    for i, mi in enumerate(mu.parts, 1):
        numerator = numerator * poch(lam.col(mi) - i + 1, 1, 1)
    if numerator != binomial_form * b_of(mu):
        raise ConsistencyError(f"skew Q'({lam}/{mu})(1): closed forms disagree")
    return binomial_form


@dataclass(frozen=True)
class AlphabetSpec:
    """Monomial alphabet ``x_i = q^{exponents[i]}``."""

    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.exponents:
            raise ParameterError("alphabet must be nonempty")
        object.__setattr__(self, "exponents", tuple(Fraction(e) for e in self.exponents))

    @classmethod
    def ones(cls, n: int) -> "AlphabetSpec":
        return cls((Fraction(0),) * n)

    @classmethod
    def alternating(cls, n: int) -> "AlphabetSpec":
        """``(1, q^-1, 1, q^-1, ...)``."""
        return cls(tuple(Fraction(0 if i % 2 == 0 else -1) for i in range(n)))

    @classmethod
    def half_alternating(cls, n: int) -> "AlphabetSpec":
        """``(q^(1/2), q^(-1/2), ...)``."""
        return cls(tuple(Fraction(1 if i % 2 == 0 else -1, 2) for i in range(n)))

    def __len__(self):
        return len(self.exponents)


def _two_column(c1: int, c2: int) -> Partition:
    return Partition.from_conjugate((c1, c2))


def qprime_2m_table(mmax: int, alphabet: AlphabetSpec, order) -> list[ExactSeries]:
    """``Q'_{(2^m)}(x)`` for ``m = 0..mmax`` via the branching over chains.

    Chains ``0 = mu^(n) <= ... <= mu^(0) = (2^m)`` only involve partitions
    with parts <= 2, i.e. two columns ``(c1, c2)``.  The sum over chains is a
    product of transfer matrices over those states, shared by every ``m``.
    Intermediate values are kept to ``order`` plus the largest possible loss
    from negative alphabet exponents; the returned series carry honest orders.
    """
    sigma = alphabet.exponents
    neg = max([Fraction(0)] + [-s for s in sigma])
    cap = Fraction(order) + 2 * mmax * neg
    states = [(c1, c2) for c1 in range(mmax + 1) for c2 in range(c1 + 1)]
    level = {(0, 0): ExactSeries.one(cap)}
    for i in range(len(sigma), 0, -1):
        x = sigma[i - 1]
        targets = states if i > 1 else [(m, m) for m in range(mmax + 1)]
        nxt = {}
        for s in targets:
            big = _two_column(*s)
            acc = ExactSeries.zero(cap)
            for t, val in level.items():
                if t[0] > s[0] or t[1] > s[1] or val.is_zero():
                    continue
                small = _two_column(*t)
                w = skew_qprime_one(big, small)
                if w.is_zero():
                    continue
                term = (w * val).shift_by(x * (big.weight - small.weight))
                acc = acc + term.truncate(cap)
            nxt[s] = acc
        level = nxt
    return [level[(m, m)] for m in range(mmax + 1)]


def qprime_2m(m: int, alphabet: AlphabetSpec, order) -> ExactSeries:
    """``Q'_{(2^m)}(q^sigma_1, ..., q^sigma_n)`` up to ``order``."""
    out = qprime_2m_table(m, alphabet, order)[m]
    if out.order is not None and out.order < Fraction(order):
        raise ConsistencyError("chain expansion lost precision below the requested order")
    return out.truncate(order)


def chu_vandermonde_sides(a: int, b: int, order) -> tuple[ExactSeries, ExactSeries]:
    """Both sides of the q-Chu-Vandermonde reduction, as Laurent series.

    ``sum_k q^(k(k-a-b)) [a,k] / (q)_(b-k)`` and ``q^(-ab) / (q)_b``, each
    correct through ``q^order``.
    """
    if a < 0 or b < 0:
        raise ParameterError("a and b must be nonnegative")
    order = Fraction(order)
    lhs = ExactSeries.zero(order)
    for k in range(min(a, b) + 1):
        shift = k * (k - a - b)
        term = (qbin(a, k) * poch(1, 1, b - k).invert(order - shift)).shift_by(shift)
        lhs = lhs + term
    rhs = poch(1, 1, b).invert(order + a * b).shift_by(-a * b)
    return lhs.truncate(order), rhs.truncate(order)


# -- Kostka-Foulkes oracle ----------------------------------------------------


def semistandard_tableaux(shape: Partition, content: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """SSYT of the given shape whose letter ``j+1`` occurs ``content[j]`` times."""
    if shape.weight != sum(content):
        return
    cells = [(r, c) for r, p in enumerate(shape.parts) for c in range(p)]
    grid = [[0] * p for p in shape.parts]
    left = list(content)

    def rec(k):
        if k == len(cells):
            yield tuple(tuple(row) for row in grid)
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, grid[r][c - 1])
        if r > 0:
            lo = max(lo, grid[r - 1][c] + 1)
        for v in range(lo, len(left) + 1):
            if left[v - 1]:
                left[v - 1] -= 1
                grid[r][c] = v
                yield from rec(k + 1)
                left[v - 1] += 1
        grid[r][c] = 0

    yield from rec(0)


def reading_word(tableau) -> list[int]:
    """Rows read left to right, from the bottom row up."""
    return [v for row in reversed(tableau) for v in row]


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a word with partition content."""
    letters = list(word)
    total = 0
    while letters:
        top = max(letters)
        picked = []  # positions into `letters`
        cur = len(letters)
        for r in range(1, top + 1):
            # scan leftwards cyclically from `cur` for letter r
            found = None
            for step in range(1, len(letters) + 1):
                j = (cur - step) % len(letters)
                if letters[j] == r and j not in picked:
                    found = j
                    break
            if found is None:
                if r == 1:
                    raise ValueError("word content is not a partition")
                break
            picked.append(found)
            cur = found
        index = 0
        for a, b in zip(picked, picked[1:]):
            if b > a:
                index += 1
            total += index
        for j in sorted(picked, reverse=True):
            del letters[j]
    return total


def kostka_foulkes(lam: Partition, mu: Partition) -> ExactSeries:
    """``K_{lambda,mu}(q)`` as the charge generating function over SSYT."""
    terms: dict[int, int] = {}
    for t in semistandard_tableaux(lam, mu.parts):
        c = charge(reading_word(t))
        terms[c] = terms.get(c, 0) + 1
    return ExactSeries.from_terms(terms)


def schur_at_ones(lam: Partition, n: int) -> int:
    """``s_lambda(1^n)`` by the hook-content formula."""
    num, den = 1, 1
    conj = lam.conjugate
    for i, p in enumerate(lam.parts, 1):
        for j in range(1, p + 1):
            num *= n + j - i
            den *= (p - j) + (conj[j] - i) + 1
    return num // den


def partitions_of(total: int, cap: int | None = None) -> Iterator[Partition]:
    cap = total if cap is None else cap

    def rec(left, mx, prefix):
        if left == 0:
            yield Partition(tuple(prefix))
            return
        for p in range(min(left, mx), 0, -1):
            prefix.append(p)
            yield from rec(left - p, p, prefix)
            prefix.pop()

    yield from rec(total, cap, [])


ORACLE_MAX_M = 4
ORACLE_MAX_N = 4


def kostka_foulkes_oracle(m: int, n: int) -> ExactSeries:
    """``Q'_{(2^m)}(1^n) = sum_lambda K_{lambda,(2^m)}(q) s_lambda(1^n)``.

    Exhaustive over tableaux, so only for ``m <= 4`` and ``n <= 4``.
    """
    if not (0 <= m <= ORACLE_MAX_M and 1 <= n <= ORACLE_MAX_N):
        raise ParameterError(f"oracle limited to m <= {ORACLE_MAX_M}, n <= {ORACLE_MAX_N}")
    mu = Partition((2,) * m)
    out = ExactSeries.zero()
    for lam in partitions_of(2 * m):
        dim = schur_at_ones(lam, n)
        if dim:
            out = out + kostka_foulkes(lam, mu).scale(dim)
    return out
