"""Sum engines.

* ``bosonic_sum``: weighted lattice sums over a shifted residue class.
* ``fermionic_sum``: multi-sums ``q^{quadratic}/prod (q)_m`` evaluated by a
  transfer recursion over partition columns.
* ``hl_form_sum``: the same multi-sum written over tuples of partitions.
* ``hua_lhs`` / ``hua_product``: both sides of the A_{N-1} quiver identity.
* ``qprime_sum``: ``sum_m q^{sm}/(q)_m Q'_{(2^m)}`` on ones or alternating alphabets.
* ``milne_lhs`` / ``milne_rhs``: both sides of the C_n Rogers-Selberg
  identity at ``x_i = q^{sigma_i}``.
"""
from __future__ import annotations

import functools
import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from operator import sub
from typing import Optional, Sequence

from . import _poly
from .errors import DivergentProductError, IntegralityError, ParameterError, SpecializationError
from .lattice import QuadraticFormSpec, cartan_matrix, enumerate_points, lambda_min_lower
from .partitions import AlphabetSpec, Partition, b_of, bracket, qprime_2m_table
from .series import INF, ExactSeries, poch, poch_inf

# -- call tracing (used to prove the two sides of a check share nothing) -----

_TRACE: ContextVar[Optional[list]] = ContextVar("qrr_trace", default=None)


@contextmanager
def trace_engines():
    """Collect ``(engine_name, result)`` for every engine call in the block."""
    log: list = []
    token = _TRACE.set(log)
    try:
        yield log
    finally:
        _TRACE.reset(token)


def _traced(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        out = fn(*args, **kwargs)
        log = _TRACE.get()
        if log is not None:
            log.append((fn.__name__, out))
        return out

    return wrapper


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


# -- weights ------------------------------------------------------------------


def xi_weight(v: Sequence, w: Sequence) -> Fraction:
    """``prod_{i<j} (v_i^2 - v_j^2) / (w_i^2 - w_j^2)``."""
    v, w = _frac_vec(v), _frac_vec(w)
    out = Fraction(1)
    for i in range(len(v)):
        for j in range(i + 1, len(v)):
            out *= (v[i] ** 2 - v[j] ** 2) / (w[i] ** 2 - w[j] ** 2)
    return out


def chi_weight(v: Sequence, w: Sequence) -> Fraction:
    """``xi_weight(v, w) * prod_i v_i / w_i``."""
    v, w = _frac_vec(v), _frac_vec(w)
    out = xi_weight(v, w)
    for a, b in zip(v, w):
        out *= a / b
    return out


# -- bosonic sums -------------------------------------------------------------

WEIGHTS = ("xi", "chi", "trivial")
SIGN_RULES = ("none", "parity", "parity_over_modulus")


@dataclass(frozen=True)
class BosonicSpec:
    """Lattice sum ``sum_v weight(v/ref) * sign * q^{(|v|^2 - |base|^2)/exp_denom}``.

    ``v`` runs over ``base + modulus * Z^n``; ``sign`` is ``(-1)^(|v|-|base|)``
    for ``parity`` and ``(-1)^((|v|-|base|)/modulus)`` for ``parity_over_modulus``.
    """

    modulus: int
    base: tuple
    weight: str = "xi"
    weight_ref: Optional[tuple] = None
    sign_rule: str = "none"
    exp_denom: int = 1

    def __post_init__(self):
        base = _frac_vec(self.base)
        ref = base if self.weight_ref is None else _frac_vec(self.weight_ref)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "weight_ref", ref)
        if self.modulus <= 0 or self.exp_denom <= 0:
            raise ParameterError("modulus and exponent denominator must be positive")
        if self.weight not in WEIGHTS or self.sign_rule not in SIGN_RULES:
            raise ParameterError(f"unknown weight {self.weight!r} or sign rule {self.sign_rule!r}")
        if any((2 * b).denominator != 1 for b in base):
            raise ParameterError("base vector must lie in (Z/2)^n")
        if len(ref) != len(base):
            raise ParameterError("weight reference has the wrong dimension")
        if self.weight != "trivial":
            squares = [r * r for r in ref]
            if len(set(squares)) != len(squares):
                raise ParameterError("weight reference has repeated squares")
            if self.weight == "chi" and any(r == 0 for r in ref):
                raise ParameterError("chi weight reference has a zero entry")

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def half_integer(self) -> bool:
        return any(b.denominator == 2 for b in self.base)


@_traced
def bosonic_sum(spec: BosonicSpec, order, bound_scale: int = 1) -> ExactSeries:
    """Expand the lattice sum up to ``order``.

    Work happens in doubled units ``u = 2v`` so everything is an integer; the
    weight denominators are a single integer applied once at the end.
    """
    order = Fraction(order)
    if order < 0:
        return ExactSeries.zero(order)
    n = spec.n
    U = [int(2 * b) for b in spec.base]
    W = [int(2 * w) for w in spec.weight_ref]
    step = 2 * spec.modulus
    e4 = 4 * spec.exp_denom
    norm0 = sum(u * u for u in U)
    top = math.floor(order)
    limit = e4 * top + norm0
    enum_limit = limit * bound_scale * bound_scale

    den = 1
    if spec.weight != "trivial":
        for i in range(n):
            for j in range(i + 1, n):
                den *= W[i] ** 2 - W[j] ** 2
        if spec.weight == "chi":
            for w in W:
                den *= w
    acc = [0] * (top + 1)
    u = [0] * n
    sum_u0 = sum(U)

    def leaf():
        num = 1
        if spec.weight != "trivial":
            for i in range(n):
                for j in range(i + 1, n):
                    num *= u[i] * u[i] - u[j] * u[j]
                if not num:
                    return
            if spec.weight == "chi":
                for x in u:
                    num *= x
                if not num:
                    return
        diff = sum(x * x for x in u) - norm0
        if diff % e4 or diff < 0:
            raise IntegralityError(
                f"lattice point v={[Fraction(x, 2) for x in u]} gives exponent {Fraction(diff, e4)}"
            )
        expo = diff // e4
        if expo > top:
            return
        d2 = sum(u) - sum_u0
        if spec.sign_rule == "parity":
            if d2 % 2:
                raise IntegralityError(f"|v|-|w| is not an integer at v={[Fraction(x, 2) for x in u]}")
            if (d2 // 2) % 2:
                num = -num
        elif spec.sign_rule == "parity_over_modulus":
            if d2 % step:
                raise IntegralityError(
                    f"modulus does not divide |v|-|w| at v={[Fraction(x, 2) for x in u]}"
                )
            if (d2 // step) % 2:
                num = -num
        acc[expo] += num

    def rec(i: int, rem: int):
        if i == n:
            leaf()
            return
        r = math.isqrt(rem)
        t_lo = -((r + U[i]) // step)
        t_hi = (r - U[i]) // step
        for t in range(t_lo, t_hi + 1):
            u[i] = U[i] + step * t
            rec(i + 1, rem - u[i] * u[i])

    rec(0, enum_limit)
    out = []
    for expo, c in enumerate(acc):
        if c % den:
            raise IntegralityError(f"coefficient of q^{expo} is {Fraction(c, den)}, not an integer")
        out.append(c // den)
    return ExactSeries(out, order=order)


# -- column transfer recursion --------------------------------------------------


def _column_states(C, lin, order, D, bound_scale):
    """Column vectors with exponent <= order, exponents in units of q^(1/D)."""
    out = []
    for x, val in enumerate_points(C, lin, order, bound_scale=bound_scale):
        g = val * D
        if g.denominator != 1:
            raise IntegralityError(f"column {x} has exponent {val} off the q^(1/{D}) grid")
        if g < 0:
            raise DivergentProductError(
                f"column {x} has negative exponent {val}; the sum is not a power series"
            )
        out.append((x, int(g)))
    return out


def _column_sum(C, lins: Sequence[Sequence[Fraction]], last_step: int, order, bound_scale: int = 1) -> ExactSeries:
    """``sum q^{sum_i g_i(M_i)} / prod_i (q)_{M_i - M_{i+1}}`` over ``M_1 >= ... >= M_K >= 0``.

    ``g_i(x) = x.C.x/2 + lins[i].x``; the last column uses ``(q^s;q^s)_{M_K}``
    with ``s = last_step``.  Vectors live in N^r, r = size of C.
    """
    order = Fraction(order)
    if order < 0:
        return ExactSeries.zero(order)
    K = len(lins)
    if K == 0:
        return ExactSeries.one(order)
    lins = [_frac_vec(s) for s in lins]
    D = math.lcm(1, *(c.denominator for s in lins for c in s))
    L = math.floor(order * D) + 1
    state_cache: dict = {}

    def states(lin):
        if lin not in state_cache:
            state_cache[lin] = _column_states(C, lin, order, D, bound_scale)
        return state_cache[lin]

    all_states = [states(lin) for lin in lins]
    # Every series below has nonnegative coefficients, each bounded by
    # (number of partial chains) * [q^E] (q)_inf^(-r*K).  Polynomials are
    # packed into big integers with slots wide enough for that bound.
    chains = 1
    for st in all_states:
        chains *= max(len(st), 1)
    r = len(C)
    bound = chains * max(poch_inf(1, math.floor(order), -r * K).integer_coefficients())
    bits = bound.bit_length() + 1
    slot = (1 << bits) - 1

    def pack(coeffs) -> int:
        v = 0
        for c in reversed(coeffs):
            v = (v << bits) | c
        return v

    full = (1 << (bits * L)) - 1
    den_cache: dict = {}

    def inv_den(d, step) -> int:
        """Packed ``prod_a 1/(q^step;q^step)_{d_a}``, cached by multiset."""
        key = tuple(sorted(m for m in d if m))
        return _inv_den_key(key, step)

    def _inv_den_key(key, step) -> int:
        got = den_cache.get((key, step))
        if got is None:
            if not key:
                got = 1
            else:
                last = pack(list(_poly.inv_poch(key[-1], step * D, L)))
                got = (_inv_den_key(key[:-1], step) * last) & full
            den_cache[(key, step)] = got
        return got

    def trans(key):
        return inv_den(key, 1)

    # level[x] = (G, packed t^G W(x)) with W(x) kept below t^L
    level = {}
    for x, G in all_states[-1]:
        level[x] = (G, (inv_den(x, last_step) << (bits * G)) & ((1 << (bits * L)) - 1))
    for i in range(K - 2, -1, -1):
        by_first: dict = {}
        for y, val in level.items():
            by_first.setdefault(y[0], []).append((y, val))
        firsts = sorted(by_first)
        nxt = {}
        for x, G in all_states[i]:
            n = L - G
            grouped: dict = {}
            for f in firsts:
                if f > x[0]:
                    break
                for y, (Gy, sy) in by_first[f]:
                    if Gy >= n:
                        continue
                    d = tuple(map(sub, x, y))
                    if min(d) < 0:
                        continue
                    key = tuple(sorted(d))
                    grouped[key] = grouped.get(key, 0) + sy
            acc = 0
            for key, s in grouped.items():
                acc += s * trans(key)
            nxt[x] = (G, (acc & ((1 << (bits * n)) - 1)) << (bits * G))
        level = nxt
    packed = sum(v for _, v in level.values())
    total = [(packed >> (bits * j)) & slot for j in range(L)]
    return ExactSeries(total, denom=D, order=order)


# -- fermionic sums -----------------------------------------------------------

LAST_COLUMN = ("standard", "even")


@dataclass(frozen=True)
class FermionicSpec:
    """Multi-sum over ``m_i^(a)``, ``1 <= a <= N-1``, ``1 <= i <= k-1``.

    Exponent ``1/2 sum C_ab M_i^a M_i^b + sum_a s_a sum_{i>=p} M_i^a`` with
    ``s_a = (-1)^(a-1)`` when ``linear_sign = 1`` and ``(-1)^a`` when it is -1.
    """

    N: int
    k: int
    p: int
    linear_sign: int = 1
    last_column: str = "standard"

    def __post_init__(self):
        if self.N < 1 or self.k < 1:
            raise ParameterError("N and k must be positive")
        if not 1 <= self.p <= self.k:
            raise ParameterError(f"need 1 <= p <= k, got p={self.p}, k={self.k}")
        if self.linear_sign not in (1, -1):
            raise ParameterError("linear_sign must be +1 or -1")
        if self.last_column not in LAST_COLUMN:
            raise ParameterError(f"last_column must be one of {LAST_COLUMN}")

    @property
    def rank(self) -> int:
        return self.N - 1

    def linear_vector(self) -> tuple[int, ...]:
        return tuple(self.linear_sign * (-1) ** a for a in range(self.rank))

    def quadratic_form(self) -> QuadraticFormSpec:
        return QuadraticFormSpec(self.N, self.k)


@_traced
def fermionic_sum(spec: FermionicSpec, order, bound_scale: int = 1) -> ExactSeries:
    """Expand the multi-sum up to ``order``.

    With ``last_column='even'`` and ``k=1`` the empty last column stands for
    the factor ``((q)_inf / (q^2;q^2)_inf)^(N-1)``.
    """
    order = Fraction(order)
    r = spec.rank
    C = cartan_matrix(r)
    zero = (0,) * r
    s = spec.linear_vector()
    lins = [s if i >= spec.p else zero for i in range(1, spec.k)]
    last_step = 2 if spec.last_column == "even" else 1
    out = _column_sum(C, lins, last_step, order, bound_scale)
    if spec.k == 1 and spec.last_column == "even" and r and order >= 0:
        out = out * poch_inf(1, order, r) * poch_inf(2, order, -r)
    return out


# -- Hall-Littlewood form -----------------------------------------------------


def _conjugates_bounded(width: int, budget: int):
    """Weakly decreasing tuples of length ``width`` with sum of squares <= budget."""

    def rec(prefix, cap, left):
        if len(prefix) == width:
            yield tuple(prefix)
            return
        top = min(cap, math.isqrt(left))
        for c in range(top + 1):
            prefix.append(c)
            yield from rec(prefix, c, left - c * c)
            prefix.pop()

    yield from rec([], math.isqrt(budget), budget)


@_traced
def hl_form_sum(N: int, k: int, p: int, order) -> ExactSeries:
    """Sum over (N-1)-tuples of partitions with largest part <= k-1 of
    ``q^{1/2 sum C_ab (lam_a|lam_b)} prod z_a^{|lam_a|} / b_{lam_a}(q)``.

    ``z_a = 1`` for ``p = k``; ``z = (q, 1/q, q, ...)`` for ``p = 1``.
    """
    if N < 2:
        raise ParameterError("need N >= 2")
    if p not in (1, k):
        raise ParameterError("p must be 1 or k")
    order = Fraction(order)
    if order < 0:
        return ExactSeries.zero(order)
    r, width = N - 1, k - 1
    if width == 0:
        return ExactSeries.one(order)
    C = cartan_matrix(r)
    z = [0] * r if p == k else [(-1) ** a for a in range(r)]
    # sum_i M_i.C.M_i/2 >= lam/2 |M|^2 over all columns M_i in Z^r
    lam = float(lambda_min_lower(tuple(tuple(Fraction(c) for c in row) for row in C)))
    cz = max(abs(c) for c in z)
    dim = r * width
    R = (cz * math.sqrt(dim) + math.sqrt(cz * cz * dim + 2 * lam * float(order))) / lam
    budget = math.floor(R * R * (1 + 1e-12)) + 1

    groups: dict = {}
    tup: list[Partition] = []

    def rec(a: int, left: int):
        if a == r:
            expo = Fraction(
                sum(C[i][j] * bracket(tup[i], tup[j]) for i in range(r) for j in range(r)), 2
            ) + sum(z[i] * tup[i].weight for i in range(r))
            if expo > order:
                return
            if expo.denominator != 1 or expo < 0:
                raise IntegralityError(f"partition tuple {tup} gives exponent {expo}")
            key = tuple(
                sorted(
                    c - d
                    for lam_a in tup
                    for c, d in zip(lam_a.conjugate.parts, lam_a.conjugate.parts[1:] + (0,))
                    if c - d
                )
            )
            entry = groups.setdefault(key, [list(tup), {}])
            entry[1][int(expo)] = entry[1].get(int(expo), 0) + 1
            return
        for cols in _conjugates_bounded(width, left):
            tup.append(Partition.from_conjugate(cols))
            rec(a + 1, left - sum(c * c for c in cols))
            tup.pop()

    rec(0, budget)
    total = ExactSeries.zero(order)
    for rep, terms in groups.values():
        bprod = ExactSeries.one()
        for lam_a in rep:
            bprod = bprod * b_of(lam_a)
        low = min(terms)
        total = total + ExactSeries.from_terms(terms) * bprod.invert(order - low)
    return total.truncate(order)


# -- Hua's identity -----------------------------------------------------------


def _root_exponents(N: int, z: Sequence[Fraction]) -> list[Fraction]:
    return [1 + sum(z[i : j + 1], Fraction(0)) for i in range(N - 1) for j in range(i, N - 1)]


def _check_z(N: int, z) -> tuple[Fraction, ...]:
    if N < 1:
        raise ParameterError("N must be positive")
    z = _frac_vec(z)
    if len(z) != N - 1:
        raise ParameterError(f"need {N - 1} z-exponents, got {len(z)}")
    for e in _root_exponents(N, z):
        if e <= 0:
            raise DivergentProductError(f"root monomial q^{e} has nonpositive exponent")
    return z


@_traced
def hua_product(N: int, z_exponents: Sequence, order) -> ExactSeries:
    """``prod over positive roots alpha of 1/(z^alpha q; q)_inf``."""
    z = _check_z(N, z_exponents)
    order = Fraction(order)
    out = ExactSeries.one(order)
    for e in _root_exponents(N, z):
        out = out * poch(e.numerator, e.denominator, INF, order).invert(order)
    return out


@_traced
def hua_lhs(N: int, z_exponents: Sequence, order) -> ExactSeries:
    """Same summand as ``hl_form_sum`` over unrestricted partition tuples.

    A nonzero column contributes at least ``delta`` (least nonzero column
    exponent) so ``floor(order/delta)`` columns suffice.
    """
    z = _check_z(N, z_exponents)
    order = Fraction(order)
    if order < 0:
        return ExactSeries.zero(order)
    r = N - 1
    if r == 0:
        return ExactSeries.one(order)
    C = cartan_matrix(r)
    pts = enumerate_points(C, z, order)
    nonzero = [val for x, val in pts if any(x)]
    if not nonzero:
        return ExactSeries.one(order)
    delta = min(nonzero)
    if delta <= 0:
        raise DivergentProductError(f"a nonzero column has exponent {delta} <= 0")
    K = math.floor(order / delta)
    return _column_sum(C, [z] * K, 1, order)


# -- Q'_(2^m) sums ------------------------------------------------------------


def _chain_mmax(n: int, shift: int, neg: Fraction, order: Fraction) -> int:
    """Largest m whose term can reach ``order``.

    The term for m has valuation at least ``shift*m + m(m/n - 1) - 2m*neg``
    (convexity of binomial(d, 2) over the n chain steps of each column).
    """

    def low(m):
        return shift * m + Fraction(m * m, n) - m - 2 * m * neg

    m = 0
    vertex = Fraction(n) * (1 + 2 * neg - shift) / 2
    best = 0
    while m <= vertex or low(m) <= order:
        if low(m) <= order:
            best = m
        m += 1
    return best


def _qprime_series(alphabet: AlphabetSpec, shift: int, order: Fraction) -> ExactSeries:
    neg = max([Fraction(0)] + [-s for s in alphabet.exponents])
    mmax = _chain_mmax(len(alphabet), shift, neg, order)
    table = qprime_2m_table(mmax, alphabet, order)
    total = ExactSeries.zero(order)
    for m, qp in enumerate(table):
        term = (qp * poch(1, 1, m).invert(order + 2 * m * neg)).shift_by(shift * m)
        total = total + term.truncate(order)
    return total


@_traced
def qprime_sum(n: int, variant: str, order) -> ExactSeries:
    """``sum_m q^m/(q)_m Q'_(2^m)(1^n)`` (ones) or
    ``sum_m q^{2m}/(q)_m Q'_(2^m)(1, 1/q, 1, ...)`` (alternating)."""
    if n < 1:
        raise ParameterError("n must be positive")
    if variant == "ones":
        return _qprime_series(AlphabetSpec.ones(n), 1, Fraction(order))
    if variant == "alternating":
        return _qprime_series(AlphabetSpec.alternating(n), 2, Fraction(order))
    raise ParameterError(f"variant must be 'ones' or 'alternating', got {variant!r}")


# -- Milne's C_n identity -----------------------------------------------------


def _check_sigma(n: int, sigma) -> tuple[Fraction, ...]:
    sigma = _frac_vec(sigma)
    if n < 1 or len(sigma) != n:
        raise ParameterError(f"need {n} exponents, got {len(sigma)}")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if sigma[i] == sigma[j]:
                raise SpecializationError(f"x_{i+1} = x_{j+1} makes the Vandermonde product vanish")
            if i < j and sigma[i] + sigma[j] == 0:
                raise SpecializationError(f"x_{i+1} x_{j+1} = 1 makes the Vandermonde product vanish")
            gap = sigma[j] - sigma[i] - 1
            if gap.denominator == 1 and gap >= 0:
                raise SpecializationError(f"(q x_{i+1}/x_{j+1})_u vanishes for u > {gap}")
    return sigma


def _one_minus(c: Fraction) -> ExactSeries:
    return ExactSeries.one() - ExactSeries.monomial(c)


def _milne_term(n, sigma, u, order):
    """Summand for ``u`` as (factors, monomial exponent, sign) or None if zero."""
    num: list[Fraction] = []
    den: list[Fraction] = []
    for i in range(n):
        for j in range(i + 1, n):
            num.append(sigma[i] - sigma[j] + u[i] - u[j])
            den.append(sigma[i] - sigma[j])
            num.append(sigma[i] + sigma[j] + u[i] + u[j])
            den.append(sigma[i] + sigma[j])
    for i in range(n):
        # (1 - x_i^2 q^{2u}) / (1 - x_i^2) * (x_i^2)_u = (1 - x_i^2 q^{2u}) (q x_i^2)_{u-1}
        if u[i]:
            num.append(2 * sigma[i] + 2 * u[i])
            num.extend(2 * sigma[i] + 1 + l for l in range(u[i] - 1))
        for j in range(n):
            if j != i:
                num.extend(sigma[i] + sigma[j] + l for l in range(u[i]))
            den.extend(1 + sigma[i] - sigma[j] + l for l in range(u[i]))
    if any(c == 0 for c in num):
        return None
    if any(c == 0 for c in den):
        raise SpecializationError(f"vanishing denominator at u={u}")
    tot = sum(u)
    mono = (
        sum(i * ui for i, ui in enumerate(u))
        + Fraction(n + 4, 2) * sum(x * x for x in u)
        - Fraction(n, 2) * tot
        + sum(s * ((n + 4) * x - tot) for s, x in zip(sigma, u))
    )
    sign = -1 if (n * tot) % 2 else 1
    return num, den, mono, sign


def _milne_box(n: int, sigma, order: Fraction) -> int:
    """U with every term of max-norm > U above ``order``."""
    s = float(max(abs(x) for x in sigma))
    A = n / 2 + s * (2 * n + 4) + (n - 1)
    B = 2 * n * (n - 1) * s + n * (2 * s + 1) ** 2 + n * (n - 1) * (2 * s + 1) ** 2 / 2 + n * (2 * s + 1)
    a = (n + 4) / 2
    # a U^2 - A n U - B > order
    root = (A * n + math.sqrt((A * n) ** 2 + 4 * a * (B + float(order)))) / (2 * a)
    return int(math.floor(root)) + 1


@_traced
def milne_lhs(n: int, sigma: Sequence, order) -> ExactSeries:
    sigma = _check_sigma(n, sigma)
    order = Fraction(order)
    total = ExactSeries.zero(order)
    box = _milne_box(n, sigma, order)
    for u in product(range(box + 1), repeat=n):
        term = _milne_term(n, sigma, u, order)
        if term is None:
            continue
        num, den, mono, sign = term
        val_num = sum(min(Fraction(0), c) for c in num)
        val_den = sum(min(Fraction(0), c) for c in den)
        if mono + val_num - val_den > order:
            continue
        top = ExactSeries.monomial(mono, sign)
        for c in num:
            top = top * _one_minus(c)
        bottom = ExactSeries.one()
        for c in den:
            bottom = bottom * _one_minus(c)
        total = total + top * bottom.invert(order - mono - val_num)
    return total.truncate(order)


@_traced
def milne_rhs(n: int, sigma: Sequence, order) -> ExactSeries:
    sigma = _check_sigma(n, sigma)
    order = Fraction(order)
    pref = ExactSeries.one(order)
    exps = [1 + 2 * s for s in sigma] + [1 + sigma[i] + sigma[j] for i in range(n) for j in range(i + 1, n)]
    for e in exps:
        pref = pref * poch(e.numerator, e.denominator, INF, order)
    return (pref * _qprime_series(AlphabetSpec(sigma), 1, order)).truncate(order)
