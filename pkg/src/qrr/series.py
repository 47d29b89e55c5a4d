"""Exact truncated Puiseux series in q with integer coefficients.

An :class:`ExactSeries` stores ``q**shift * sum_i c_i q**(i/denom)`` together
with an inclusive truncation bound ``order``: every coefficient at an
exponent ``<= order`` is exact, anything above is unknown.  ``order=None``
marks an exact (finite) Laurent polynomial.

The body grid ``denom`` is kept minimal and the leading coefficient is always
nonzero, so structurally equal series compare equal with ``==``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union

from . import _poly
from .errors import (
    ConsistencyError,
    DivergentProductError,
    NonUnitError,
    ParameterError,
)

Rational = Union[int, Fraction]
Order = Optional[Fraction]
INF = math.inf


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _as_order(order) -> Order:
    if order is None or order == INF:
        return None
    return _frac(order)


def _min_order(a: Order, b: Order) -> Order:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


class ExactSeries:
    """Immutable truncated Puiseux series with arbitrary-precision coefficients."""

    __slots__ = ("shift", "denom", "coeffs", "order")

    def __init__(
        self,
        coeffs: Iterable[int] = (),
        denom: int = 1,
        shift: Rational = 0,
        order=None,
    ):
        if denom <= 0:
            raise ParameterError("grid denominator must be positive")
        shift = _frac(shift)
        order = _as_order(order)
        cs = list(coeffs)
        if order is not None:
            top = math.floor((order - shift) * denom)
            if top < 0:
                cs = []
            elif top + 1 < len(cs):
                del cs[top + 1:]
        while cs and cs[-1] == 0:
            cs.pop()
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        if lead == len(cs):
            cs, shift, denom = [], Fraction(0), 1
        elif lead:
            shift += Fraction(lead, denom)
            del cs[:lead]
        if len(cs) == 1:
            denom = 1
        elif len(cs) > 1:
            g = denom
            for i, c in enumerate(cs):
                if c and i:
                    g = math.gcd(g, i)
                    if g == 1:
                        break
            if g > 1:
                cs = cs[::g]
                denom //= g
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, key, value):
        raise AttributeError("ExactSeries is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order=None) -> "ExactSeries":
        return cls((), order=order)

    @classmethod
    def one(cls, order=None) -> "ExactSeries":
        return cls((1,), order=order)

    @classmethod
    def monomial(cls, exponent: Rational, coeff: int = 1, order=None) -> "ExactSeries":
        return cls((coeff,), shift=exponent, order=order)

    @classmethod
    def from_terms(cls, terms: Mapping[Rational, int], order=None) -> "ExactSeries":
        """Build a series from a mapping ``exponent -> coefficient``."""
        items = [(_frac(e), c) for e, c in terms.items() if c]
        if not items:
            return cls.zero(order)
        lo = min(e for e, _ in items)
        denom = _lcm(*((e - lo).denominator for e, _ in items))
        size = max(int((e - lo) * denom) for e, _ in items) + 1
        cs = [0] * size
        for e, c in items:
            cs[int((e - lo) * denom)] += c
        return cls(cs, denom=denom, shift=lo, order=order)

    # -- views --------------------------------------------------------------

    @property
    def grid_denom(self) -> int:
        """Global grid denominator D: every exponent is an integer over D."""
        return _lcm(self.denom, self.shift.denominator)

    @property
    def offset(self) -> int:
        """Numerator of the lowest tracked exponent on the global grid."""
        return int(self.shift * self.grid_denom)

    @property
    def valuation(self) -> Optional[Fraction]:
        """Lowest exponent with nonzero coefficient, ``None`` for zero."""
        return self.shift if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.order is None

    def is_integral(self) -> bool:
        """True when every nonzero coefficient sits on an integer exponent."""
        return self.denom == 1 and self.shift.denominator == 1

    def terms(self) -> Iterator[tuple[Fraction, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.shift + Fraction(i, self.denom), c

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.terms())

    def coefficient(self, exponent: Rational) -> int:
        e = _frac(exponent)
        if self.order is not None and e > self.order:
            raise ValueError(f"exponent {e} lies beyond truncation order {self.order}")
        pos = (e - self.shift) * self.denom
        if pos.denominator != 1 or pos < 0 or pos >= len(self.coeffs):
            return 0
        return self.coeffs[int(pos)]

    def integer_coefficients(self, upto: Optional[int] = None) -> list[int]:
        """Coefficients of q^0..q^upto for an integral series with valuation >= 0."""
        if not self.is_zero() and not self.is_integral():
            raise ValueError("series has fractional exponents")
        if upto is None:
            if self.order is None:
                upto = int(self.shift) + len(self.coeffs) - 1 if self.coeffs else 0
            else:
                upto = math.floor(self.order)
        out = [0] * (upto + 1)
        for e, c in self.terms():
            if e < 0:
                raise ValueError("series has negative exponents")
            if e <= upto:
                out[int(e)] = c
        return out

    # -- truncation ---------------------------------------------------------

    def truncate(self, order) -> "ExactSeries":
        order = _min_order(self.order, _as_order(order))
        return ExactSeries(self.coeffs, self.denom, self.shift, order)

    # -- arithmetic ---------------------------------------------------------

    def _spread(self, base: Fraction, denom: int, n: Optional[int]) -> list[int]:
        """Coefficient list on grid ``base + i/denom`` (denom a multiple of ours)."""
        start = (self.shift - base) * denom
        assert start.denominator == 1 and start >= 0
        start = int(start)
        stride = denom // self.denom
        size = start + stride * (len(self.coeffs) - 1) + 1 if self.coeffs else 0
        if n is not None:
            size = min(size, n)
        out = [0] * max(size, 0)
        for i, c in enumerate(self.coeffs):
            k = start + i * stride
            if k >= size:
                break
            out[k] = c
        return out

    def __add__(self, other) -> "ExactSeries":
        if isinstance(other, int):
            other = ExactSeries.monomial(0, other)
        if not isinstance(other, ExactSeries):
            return NotImplemented
        order = _min_order(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        base = min(self.shift, other.shift)
        denom = _lcm(
            self.denom,
            other.denom,
            (self.shift - base).denominator,
            (other.shift - base).denominator,
        )
        n = None if order is None else max(math.floor((order - base) * denom) + 1, 0)
        a = self._spread(base, denom, n)
        b = other._spread(base, denom, n)
        if len(a) < len(b):
            a, b = b, a
        for i, c in enumerate(b):
            a[i] += c
        return ExactSeries(a, denom, base, order)

    __radd__ = __add__

    def __neg__(self) -> "ExactSeries":
        return ExactSeries([-c for c in self.coeffs], self.denom, self.shift, self.order)

    def __sub__(self, other) -> "ExactSeries":
        if isinstance(other, int):
            other = ExactSeries.monomial(0, other)
        return self + (-other)

    def __rsub__(self, other) -> "ExactSeries":
        return (-self) + other

    def scale(self, k: int) -> "ExactSeries":
        return ExactSeries([k * c for c in self.coeffs], self.denom, self.shift, self.order)

    def __mul__(self, other) -> "ExactSeries":
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, ExactSeries):
            return NotImplemented
        order = _product_order(self, other)
        if self.is_zero() or other.is_zero():
            return ExactSeries.zero(order)
        shift = self.shift + other.shift
        denom = _lcm(self.denom, other.denom)
        n = None if order is None else math.floor((order - shift) * denom) + 1
        if n is not None and n <= 0:
            return ExactSeries.zero(order)
        a = self._spread(self.shift, denom, n)
        b = other._spread(other.shift, denom, n)
        cap = len(a) + len(b) - 1 if n is None else n
        if denom > 1 and (self.denom != denom or other.denom != denom):
            prod = _poly.mul_sparse(a, b, cap)
        else:
            prod = _poly.mul(a, b, cap)
        return ExactSeries(prod, denom, shift, order)

    __rmul__ = __mul__

    def shift_by(self, exponent: Rational) -> "ExactSeries":
        """Multiply by the monomial ``q**exponent``."""
        e = _frac(exponent)
        order = None if self.order is None else self.order + e
        return ExactSeries(self.coeffs, self.denom, self.shift + e, order)

    def subs_power(self, t: int) -> "ExactSeries":
        """Substitute ``q -> q**t`` for a positive integer ``t``."""
        if t <= 0:
            raise ParameterError("substitution power must be positive")
        cs = [0] * ((len(self.coeffs) - 1) * t + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            cs[i * t] = c
        order = None if self.order is None else self.order * t
        return ExactSeries(cs, self.denom, self.shift * t, order)

    def invert(self, order=None) -> "ExactSeries":
        """Multiplicative inverse; the leading coefficient must be +1 or -1.

        The result is truncated at ``order`` if given, and never claims more
        precision than the input supports.
        """
        if self.is_zero():
            raise NonUnitError("cannot invert the zero series")
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise NonUnitError(f"leading coefficient {c0} is not a unit")
        target = _as_order(order)
        if self.order is not None:
            target = _min_order(target, self.order - 2 * self.shift)
        if target is None:
            if len(self.coeffs) == 1:
                return ExactSeries((c0,), self.denom, -self.shift)
            raise ValueError("inverting a non-monomial exact series needs an order")
        n = math.floor((target + self.shift) * self.denom) + 1
        if n <= 0:
            return ExactSeries.zero(target)
        nz = [(j, c) for j, c in enumerate(self.coeffs[:n]) if c and j]
        h = [0] * n
        h[0] = c0
        for k in range(1, n):
            acc = 0
            for j, c in nz:
                if j > k:
                    break
                hk = h[k - j]
                if hk:
                    acc += c * hk
            h[k] = -c0 * acc
        return ExactSeries(h, self.denom, -self.shift, target)

    def __pow__(self, e: int) -> "ExactSeries":
        if e < 0:
            raise ValueError("use .power(e, order) for negative powers")
        return self.power(e)

    def power(self, e: int, order=None) -> "ExactSeries":
        base = self if e >= 0 else self.invert(order)
        out = ExactSeries.one()
        for _ in range(abs(e)):
            out = out * base
            if order is not None:
                out = out.truncate(order)
        return out

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactSeries):
            return NotImplemented
        return (
            self.shift == other.shift
            and self.denom == other.denom
            and self.coeffs == other.coeffs
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.shift, self.denom, self.coeffs, self.order))

    def first_mismatch(self, other: "ExactSeries", order=None):
        """Lowest exponent at which the two series differ.

        Compares only exponents ``<= min(self.order, other.order, order)``.
        Returns ``None`` on agreement, else ``(exponent, self_coeff, other_coeff)``.
        """
        limit = _min_order(_min_order(self.order, other.order), _as_order(order))
        a = self.as_dict()
        b = other.as_dict()
        for e in sorted(set(a) | set(b)):
            if limit is not None and e > limit:
                break
            ca, cb = a.get(e, 0), b.get(e, 0)
            if ca != cb:
                return e, ca, cb
        return None

    def agrees_with(self, other: "ExactSeries", order=None) -> bool:
        return self.first_mismatch(other, order) is None

    def __repr__(self) -> str:
        parts = []
        for e, c in list(self.terms())[:8]:
            parts.append(f"{c}*q^{e}")
        if len(self.coeffs) > 8:
            parts.append("...")
        body = " + ".join(parts) if parts else "0"
        tail = "" if self.order is None else f" + O(q^>{self.order})"
        return f"ExactSeries({body}{tail})"


def _product_order(f: ExactSeries, g: ExactSeries) -> Order:
    # f*g is exact up to min(of + val(g), og + val(f)).
    vf = f.valuation if not f.is_zero() else f.order
    vg = g.valuation if not g.is_zero() else g.order
    cands = []
    if f.order is not None:
        cands.append(None if vg is None else f.order + vg)
    if g.order is not None:
        cands.append(None if vf is None else g.order + vf)
    out: Order = None
    for c in cands:
        out = _min_order(out, c)
    return out


def mul(f: ExactSeries, g: ExactSeries) -> ExactSeries:
    return f * g


def add(f: ExactSeries, g: ExactSeries) -> ExactSeries:
    return f + g


def invert(f: ExactSeries, order=None) -> ExactSeries:
    return f.invert(order)


# -- q-building blocks ------------------------------------------------------


def poch(a_num: int, a_den: int, m, order=None) -> ExactSeries:
    """``(q^(a_num/a_den); q)_m`` for natural ``m`` or ``m = INF``.

    With ``m`` infinite the base exponent must be positive and ``order`` is
    required.  Finite products are exact polynomials unless ``order`` is given.
    """
    a = Fraction(a_num, a_den)
    order = _as_order(order)
    infinite = m is None or m == INF
    if infinite:
        if a <= 0:
            raise DivergentProductError(f"(q^{a};q)_inf diverges: exponent must be positive")
        if order is None:
            raise ValueError("an infinite product needs a truncation order")
    elif m < 0 or int(m) != m:
        raise ParameterError("m must be a natural number or INF")
    D = a.denominator
    exps = []
    sign, mono = 1, Fraction(0)
    l = 0
    while infinite or l < m:
        c = a + l
        if c == 0:
            return ExactSeries.zero(order)
        if c < 0:
            # 1 - q^c = -q^c (1 - q^-c)
            sign, mono = -sign, mono + c
            exps.append(int(-c * D))
        elif infinite and c > order:
            break
        else:
            exps.append(int(c * D))
        l += 1
    if order is None:
        n = sum(exps) + 1
    else:
        n = math.floor((order - mono) * D) + 1
        if n <= 0:
            return ExactSeries.zero(order)
    body = [1]
    for e in exps:
        _poly.mul_one_minus(body, e, n)
    return ExactSeries([sign * c for c in body], D, mono, order)


def poch_inf(step: int, order, power: int = 1) -> ExactSeries:
    """``(q^step; q^step)_inf ** power`` (power may be negative)."""
    order = _frac(order)
    n = math.floor(order) + 1
    if n <= 0:
        return ExactSeries.zero(order)
    body = [1]
    for _ in range(abs(power)):
        j = step
        while j < n:
            if power > 0:
                _poly.mul_one_minus(body, j, n)
            else:
                _poly.div_one_minus(body, j, n)
            j += step
    return ExactSeries(body, order=order)


@lru_cache(maxsize=None)
def _qbin_list(m: int, k: int) -> tuple[int, ...]:
    if k < 0 or k > m:
        return ()
    if k == 0 or k == m:
        return (1,)
    # [m,k] = [m-1,k-1] + q^k [m-1,k]
    a = _qbin_list(m - 1, k - 1)
    b = _qbin_list(m - 1, k)
    out = [0] * (k * (m - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


def qbin(m: int, k: int) -> ExactSeries:
    """Gaussian binomial coefficient as an exact polynomial (zero if k > m)."""
    if m < 0 or k < 0:
        raise ParameterError("q-binomial arguments must be natural numbers")
    return ExactSeries(_qbin_list(m, k))


@dataclass(frozen=True)
class EtaQuotient:
    """``prod eta(t*tau)**e`` over ``factors = ((t, e), ...)``."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for t, e in self.factors:
            if t <= 0 or e == 0:
                raise ParameterError(f"bad eta factor eta({t}tau)^{e}")

    @property
    def prefactor(self) -> Fraction:
        return sum((Fraction(t * e, 24) for t, e in self.factors), Fraction(0))


def eta_quotient(spec: EtaQuotient, order) -> ExactSeries:
    """Expand an eta quotient, fractional prefactor ``q**(sum t*e/24)`` included."""
    order = _frac(order)
    pre = spec.prefactor
    rel = order - pre
    out = ExactSeries.one(rel)
    for t, e in spec.factors:
        out = out * poch_inf(t, rel, e)
    return out.shift_by(pre)


def _triple_product_list(p: int, M: int, n: int) -> list[int]:
    body = [1]
    for a in (p, M - p, M):
        e = a
        while e < n:
            _poly.mul_one_minus(body, e, n)
            e += M
    return body


def _bilateral_list(p: int, M: int, n: int) -> list[int]:
    out = [0] * n
    for direction in (1, -1):
        j = 0 if direction == 1 else -1
        while True:
            e = M * j * (j - 1) // 2 + p * j
            if e >= n:
                break
            out[e] += -1 if j % 2 else 1
            j += direction
    return out


def triple_product(p: int, M: int, order) -> ExactSeries:
    """``(q^p, q^(M-p), q^M; q^M)_inf``, cross-checked against its bilateral sum."""
    if not 1 <= p < M:
        raise ParameterError(f"need 1 <= p < M, got p={p}, M={M}")
    order = _frac(order)
    n = math.floor(order) + 1
    if n <= 0:
        return ExactSeries.zero(order)
    prod = _triple_product_list(p, M, n)
    prod += [0] * (n - len(prod))
    lattice = _bilateral_list(p, M, n)
    if prod != lattice:
        k = next(i for i in range(n) if prod[i] != lattice[i])
        raise ConsistencyError(
            f"triple product ({p},{M}) disagrees with its bilateral sum at q^{k}"
        )
    return ExactSeries(prod, order=order)
