"""Catalog of identities and the exact comparison engine.

Each entry binds parameters to two independent builders, one per side.
Orders passed to :func:`verify` count from the leading prefactor of the
identity (``q^{e/24}`` style offsets are added internally).
"""
from __future__ import annotations

import functools
import json
import time
from importlib import resources
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import ConsistencyError, ParameterError, QSeriesError
from .series import EtaQuotient, ExactSeries, eta_quotient, poch_inf, triple_product
from .sums import (
    BosonicSpec,
    FermionicSpec,
    bosonic_sum,
    fermionic_sum,
    hl_form_sum,
    hua_lhs,
    hua_product,
    milne_lhs,
    milne_rhs,
    qprime_sum,
    trace_engines,
)

Builder = Callable[[Fraction], ExactSeries]
KINDS = ("classical", "theorem", "conjecture")


# -- reference vectors ----------------------------------------------------------


def rho_half(n: int) -> tuple[Fraction, ...]:
    """``(1/2, 3/2, ..., n - 1/2)``."""
    return tuple(Fraction(2 * i + 1, 2) for i in range(n))


def rho_one(n: int) -> tuple[Fraction, ...]:
    """``(1, 2, ..., n)``."""
    return tuple(Fraction(i + 1) for i in range(n))


def rho_zero(n: int) -> tuple[Fraction, ...]:
    """``(0, 1, ..., n - 1)``."""
    return tuple(Fraction(i) for i in range(n))


def _plus(v, a) -> tuple[Fraction, ...]:
    return tuple(x + a for x in v)


def _norm2(v) -> Fraction:
    return sum((x * x for x in v), Fraction(0))


def parse_rationals(text) -> tuple[Fraction, ...]:
    """``"0,1/7"`` -> ``(0, 1/7)``; empty string -> ``()``."""
    if isinstance(text, (list, tuple)):
        return tuple(Fraction(x) for x in text)
    text = str(text).strip()
    if not text:
        return ()
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"cannot parse rational list {text!r}") from exc


# -- building blocks for right-hand sides --------------------------------------


def _over_qinf(series_fn: Builder, power: int) -> Builder:
    """``order -> series_fn(order) / (q)_inf^power``."""

    def build(order):
        return series_fn(order) * poch_inf(1, order, -power)

    return build


def _lattice(spec: BosonicSpec, shift: Fraction = Fraction(0)) -> Builder:
    def build(order):
        return bosonic_sum(spec, order - shift).shift_by(shift)

    return build


def _fermionic(spec: FermionicSpec) -> Builder:
    return lambda order: fermionic_sum(spec, order)


def _eta(factors) -> Builder:
    spec = EtaQuotient(tuple(factors))
    return lambda order: eta_quotient(spec, order)


# -- entries ------------------------------------------------------------------


@dataclass
class Sides:
    lhs: Builder
    rhs: Builder
    prefactor: Fraction = Fraction(0)
    notes: list = field(default_factory=list)
    # extra named checks run after the main comparison: order -> (ok, detail)
    extras: list = field(default_factory=list)


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    kind: str
    title: str
    defaults: Mapping[str, object]
    default_order: int
    build: Callable[[dict], Sides] = field(repr=False)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(self.defaults)


@dataclass
class IdentityInstance:
    id: str
    kind: str
    params: dict
    lhs_builder: Builder
    rhs_builder: Builder
    default_order: int
    prefactor: Fraction = Fraction(0)
    notes: list = field(default_factory=list)
    extras: list = field(default_factory=list)


_REGISTRY: dict[str, IdentityEntry] = {}


def _entry(id, kind, title, defaults, default_order):
    def deco(fn):
        _REGISTRY[id] = IdentityEntry(id, kind, title, dict(defaults), default_order, fn)
        return fn

    return deco


def _need(cond, msg):
    if not cond:
        raise ParameterError(msg)


def _ag_rhs(k: int, p: int) -> Builder:
    return _over_qinf(lambda o: triple_product(p, 2 * k + 1, o), 1)


@_entry("rr-1", "classical", "Rogers-Ramanujan, first identity", {}, 200)
def _rr1(P):
    return Sides(_fermionic(FermionicSpec(2, 2, 2)), _ag_rhs(2, 2))


@_entry("rr-2", "classical", "Rogers-Ramanujan, second identity", {}, 200)
def _rr2(P):
    return Sides(_fermionic(FermionicSpec(2, 2, 1)), _ag_rhs(2, 1))


def _ag_lattice_spec(k: int, p: int) -> BosonicSpec:
    return BosonicSpec(
        modulus=2 * k + 1,
        base=(Fraction(2 * k - 2 * p + 1, 2),),
        weight="trivial",
        sign_rule="parity",
        exp_denom=2 * (2 * k + 1),
    )


@_entry("andrews-gordon", "classical", "Andrews-Gordon identities (odd moduli)", {"k": 2, "p": 2}, 100)
def _ag(P):
    k, p = P["k"], P["p"]
    _need(k >= 1 and 1 <= p <= k, "need k >= 1 and 1 <= p <= k")
    spec = _ag_lattice_spec(k, p)

    def product_vs_lattice(order):
        prod = triple_product(p, 2 * k + 1, order)
        lat = bosonic_sum(spec, order)
        mm = prod.first_mismatch(lat, order)
        return mm is None, "product and lattice forms of the right side agree" if mm is None else f"forms differ at q^{mm[0]}"

    return Sides(
        _fermionic(FermionicSpec(2, k, p)),
        _ag_rhs(k, p),
        extras=[("rhs-product-vs-lattice", product_vs_lattice)],
    )


@_entry("bressoud", "classical", "Bressoud identities (even moduli)", {"k": 2, "p": 2}, 100)
def _bressoud(P):
    k, p = P["k"], P["p"]
    _need(k >= 1 and 1 <= p <= k, "need k >= 1 and 1 <= p <= k")
    notes = []
    if k == 1:
        notes.append("k=1: empty last column read as (q)_inf/(q^2;q^2)_inf")
    return Sides(
        _fermionic(FermionicSpec(2, k, p, last_column="even")),
        _over_qinf(lambda o: triple_product(p, 2 * k, o), 1),
        notes=notes,
    )


@_entry("macdonald-a2n2-eta", "classical", "eta(tau)^(2n^2-n) as an A2n(2) lattice sum", {"n": 1}, 100)
def _mac_a2n2(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    rho = rho_half(n)
    e = 2 * (2 * n + 1)
    spec = BosonicSpec(2 * n + 1, rho, "xi", rho, "parity", e)
    pre = Fraction(2 * n * n - n, 24)
    return Sides(_eta([(1, 2 * n * n - n)]), _lattice(spec, _norm2(rho) / e), prefactor=pre)


@_entry("macdonald-cn-eta", "classical", "eta(tau)^(2n^2+n) as a Cn(1) lattice sum", {"n": 1}, 100)
def _mac_cn(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    rho = rho_one(n)
    e = 4 * (n + 1)
    spec = BosonicSpec(2 * n + 2, rho, "chi", rho, "none", e)
    return Sides(_eta([(1, 2 * n * n + n)]), _lattice(spec, _norm2(rho) / e), prefactor=Fraction(2 * n * n + n, 24))


@_entry("jacobi-cube", "classical", "eta(tau)^3 = sum (-1)^m (2m+1) q^((2m+1)^2/8)", {}, 100)
def _jacobi(P):
    eta = EtaQuotient(((1, 3),))

    def rhs(order):
        terms = {}
        m = 0
        while Fraction((2 * m + 1) ** 2, 8) <= order:
            terms[Fraction((2 * m + 1) ** 2, 8)] = (-1) ** m * (2 * m + 1)
            m += 1
        return ExactSeries.from_terms(terms, order)

    return Sides(lambda o: eta_quotient(eta, o), rhs, prefactor=eta.prefactor)


@_entry(
    "macdonald-a2n-1-2-eta",
    "classical",
    "eta(tau)^(2n^2+n-1)/eta(2tau)^(2n-1) as an A2n-1(2) lattice sum",
    {"n": 1},
    100,
)
def _mac_a2n1(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    rho = rho_zero(n)
    e = 4 * n
    spec = BosonicSpec(2 * n, rho, "xi", rho, "parity_over_modulus", e)
    eta = EtaQuotient(((1, 2 * n * n + n - 1), (2, -(2 * n - 1))))
    return Sides(lambda o: eta_quotient(eta, o), _lattice(spec, _norm2(rho) / e), prefactor=eta.prefactor)


@_entry(
    "macdonald-a2n-2-eta-even",
    "classical",
    "eta(tau)^(2n^2+3n)/eta(2tau)^(2n) as an A2n(2) lattice sum",
    {"n": 1},
    100,
)
def _mac_a2n_even(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    rho = rho_half(n)
    e = 2 * (2 * n + 1)
    spec = BosonicSpec(2 * n + 1, rho, "chi", rho, "none", e)
    eta = EtaQuotient(((1, 2 * n * n + 3 * n), (2, -2 * n)))
    return Sides(
        lambda o: eta_quotient(eta, o),
        _lattice(spec, _norm2(rho) / e),
        prefactor=eta.prefactor,
        notes=["lattice runs over v = rho mod 2n+1 (half-integer vectors)"],
    )


def _a2n_odd_sides(n: int, k: int, p: int, linear_sign: int = 1) -> tuple[Builder, Builder]:
    """Fermionic sum over A_{2n-1} and its xi-weighted lattice side."""
    M = 2 * k + 2 * n - 1
    rho = rho_half(n)
    spec = BosonicSpec(M, _plus(rho, k - p), "xi", rho, "parity", 2 * M)
    lhs = _fermionic(FermionicSpec(2 * n, k, p, linear_sign=linear_sign))
    rhs = _over_qinf(lambda o: bosonic_sum(spec, o), 2 * n * n - n)
    return lhs, rhs


def _alt_convention_note(N: int, k: int, p: int, rhs: Builder, order_cap: int = 20):
    """Outcome of the (-1)^a linear-term convention, recorded as a note."""

    def check(order):
        o = min(Fraction(order), Fraction(order_cap))
        alt = fermionic_sum(FermionicSpec(N, k, p, linear_sign=-1), o)
        mm = alt.first_mismatch(rhs(o), o)
        if mm is None:
            return True, f"(-1)^a convention: also agrees to order {o}"
        return True, f"(-1)^a convention: differs at q^{mm[0]} (lhs {mm[1]}, rhs {mm[2]})"

    return ("alternate-sign-convention", check)


@_entry("a2n-1-sum-k2", "theorem", "A2n-1 fermionic sums, k=2", {"n": 1, "p": 2}, 60)
def _thm12(P):
    n, p = P["n"], P["p"]
    _need(n >= 1 and p in (1, 2), "need n >= 1 and p in {1, 2}")
    lhs, rhs = _a2n_odd_sides(n, 2, p)
    extras = [_alt_convention_note(2 * n, 2, p, rhs)] if p == 1 else []
    notes = ["linear term uses (-1)^(a-1)"] if p == 1 else []
    return Sides(lhs, rhs, notes=notes, extras=extras)


@_entry("a2n-1-sum", "conjecture", "A2n-1 fermionic sums, general k", {"n": 1, "k": 3, "p": 3}, 30)
def _conj1(P):
    n, k, p = P["n"], P["k"], P["p"]
    _need(n >= 1 and k >= 1 and p in (1, k), "need n, k >= 1 and p in {1, k}")
    lhs, rhs = _a2n_odd_sides(n, k, p)
    return Sides(lhs, rhs)


def _a2n_even_sides(n: int, k: int, p: int) -> tuple[Builder, Builder]:
    """Fermionic sum over A_{2n} and its chi-weighted lattice side."""
    M = 2 * k + 2 * n
    rho = rho_one(n)
    spec = BosonicSpec(M, _plus(rho, k - p), "chi", rho, "none", 2 * M)
    lhs = _fermionic(FermionicSpec(2 * n + 1, k, p))
    rhs = _over_qinf(lambda o: bosonic_sum(spec, o), 2 * n * n + n)
    return lhs, rhs


@_entry("a2n-sum-p-equals-k", "theorem", "A2n fermionic sums, p=k", {"n": 1, "k": 2}, 40)
def _thm_fs(P):
    n, k = P["n"], P["k"]
    _need(n >= 1 and k >= 1, "need n, k >= 1")
    return Sides(*_a2n_even_sides(n, k, k))


@_entry("a2n-sum-p1", "conjecture", "A2n fermionic sums, p=1", {"n": 1, "k": 3}, 30)
def _conj22(P):
    n, k = P["n"], P["k"]
    _need(n >= 1 and k >= 1, "need n, k >= 1")
    return Sides(*_a2n_even_sides(n, k, 1))


@_entry("a2n-sum-k2", "theorem", "A2n fermionic sums, k=2", {"n": 1, "p": 1}, 60)
def _thm24(P):
    n, p = P["n"], P["p"]
    _need(n >= 1 and p in (1, 2), "need n >= 1 and p in {1, 2}")
    lhs, rhs = _a2n_even_sides(n, 2, p)
    notes = ["odd rank: both linear-term conventions give the same sum"] if p == 1 else []
    return Sides(lhs, rhs, notes=notes)


@_entry("even-column-sum", "conjecture", "A_{N-1} sums with an even last column", {"N": 2, "k": 2}, 30)
def _conj25(P):
    N, k = P["N"], P["k"]
    _need(N >= 1 and k >= 1, "need N, k >= 1")
    M = 2 * k + N - 2
    n = N // 2
    notes = []
    if M < 1:
        raise ParameterError("modulus 2k+N-2 must be positive")
    if N % 2 == 0:
        ref = rho_zero(n)
        spec = BosonicSpec(M, ref, "xi", ref, "parity_over_modulus", 2 * M)
    else:
        ref = rho_half(n)
        spec = BosonicSpec(M, ref, "chi", ref, "none", 2 * M)
        notes.append("odd N: lattice runs over v = rho mod 2k+N-2 (half-integer vectors)")
    if k == 1:
        notes.append("k=1: empty last column read as (q)_inf/(q^2;q^2)_inf")
    return Sides(
        _fermionic(FermionicSpec(N, k, k, last_column="even")),
        _over_qinf(lambda o: bosonic_sum(spec, o), N * (N - 1) // 2),
        notes=notes,
    )


@_entry("partition-tuple-vs-multisum", "theorem", "partition-tuple form vs multi-sum form", {"N": 4, "k": 3, "p": 3}, 15)
def _hl(P):
    N, k, p = P["N"], P["k"], P["p"]
    _need(N >= 2 and k >= 1 and p in (1, k), "need N >= 2, k >= 1 and p in {1, k}")
    return Sides(lambda o: hl_form_sum(N, k, p, o), _fermionic(FermionicSpec(N, k, p)))


@_entry("hua", "theorem", "Hua's A_{N-1} quiver identity", {"N": 2, "z": ""}, 25)
def _hua(P):
    N = P["N"]
    _need(N >= 1, "need N >= 1")
    z = parse_rationals(P["z"]) or (Fraction(0),) * (N - 1)
    _need(len(z) == N - 1, f"z needs {N - 1} exponents")
    return Sides(lambda o: hua_lhs(N, z, o), lambda o: hua_product(N, z, o), notes=[f"z = q^({', '.join(map(str, z))})"])


@_entry("qprime-sum-ones", "theorem", "sum q^m/(q)_m Q'_(2^m)(1^n)", {"n": 1}, 30)
def _t41a(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    return Sides(lambda o: qprime_sum(n, "ones", o), _fermionic(FermionicSpec(n + 1, 2, 2)))


@_entry("qprime-sum-alternating", "theorem", "sum q^2m/(q)_m Q'_(2^m)(1,1/q,...)", {"n": 1}, 30)
def _t41b(P):
    n = P["n"]
    _need(n >= 1, "need n >= 1")
    return Sides(lambda o: qprime_sum(n, "alternating", o), _fermionic(FermionicSpec(n + 1, 2, 1)))


@_entry("milne-specialized", "theorem", "Milne's Cn Rogers-Selberg identity at x_i = q^sigma_i", {"n": 1, "sigma": "1/3"}, 10)
def _milne(P):
    n = P["n"]
    sigma = parse_rationals(P["sigma"])
    _need(n >= 1 and len(sigma) == n, f"sigma needs {n} exponents")
    notes = []
    if any(s == 0 for s in sigma):
        notes.append("x_i = 1 handled by cancelling (1 - x_i^2) against (x_i^2)_u")
    return Sides(lambda o: milne_lhs(n, sigma, o), lambda o: milne_rhs(n, sigma, o), notes=notes)


# -- public API ---------------------------------------------------------------


def list_identities() -> list[IdentityEntry]:
    return [_REGISTRY[k] for k in sorted(_REGISTRY)]


@functools.lru_cache(maxsize=None)
def _aliases() -> dict[str, str]:
    # retired ids from earlier releases, kept so old configs still run
    return json.loads(resources.files(__package__).joinpath("aliases.json").read_text())


def get_entry(id: str) -> IdentityEntry:
    try:
        return _REGISTRY[_aliases().get(id, id)]
    except KeyError:
        raise ParameterError(f"unknown identity {id!r}") from None


def make_instance(id: str, params: Optional[Mapping[str, object]] = None) -> IdentityInstance:
    """Validate parameters and bind both builders."""
    entry = get_entry(id)
    id = entry.id
    params = dict(params or {})
    unknown = set(params) - set(entry.defaults)
    if unknown:
        raise ParameterError(f"{id}: unknown parameter(s) {sorted(unknown)}")
    full = dict(entry.defaults)
    for key, val in params.items():
        default = entry.defaults[key]
        if isinstance(default, int):
            try:
                val = int(val)
            except (TypeError, ValueError):
                raise ParameterError(f"{id}: parameter {key} must be an integer") from None
        else:
            val = str(val)
        full[key] = val
    sides = entry.build(full)
    return IdentityInstance(
        id=id,
        kind=entry.kind,
        params=full,
        lhs_builder=sides.lhs,
        rhs_builder=sides.rhs,
        default_order=entry.default_order,
        prefactor=sides.prefactor,
        notes=list(sides.notes),
        extras=list(sides.extras),
    )


@dataclass
class VerificationReport:
    id: str
    kind: str
    params: dict
    order: int
    status: str  # pass | fail | error
    first_mismatch: Optional[dict]
    wall_time_ms: float
    convention_notes: list
    effective_order: Optional[Fraction] = None
    error_type: Optional[str] = None

    @property
    def summary(self) -> str:
        if self.status == "error":
            return f"error ({self.error_type})"
        if self.status == "fail":
            fm = self.first_mismatch
            exp = Fraction(fm["exponent_num"], fm["exponent_den"]) if fm else "?"
            return f"mismatch at q^{exp}"
        if self.kind == "conjecture":
            return f"verified to order {self.effective_order}"
        return "pass"

    def to_dict(self) -> dict:
        eff = self.effective_order
        return {
            "id": self.id,
            "kind": self.kind,
            "params": self.params,
            "order": self.order,
            "effective_order": None if eff is None else str(eff),
            "status": self.status,
            "summary": self.summary,
            "first_mismatch": self.first_mismatch,
            "wall_time_ms": round(self.wall_time_ms, 3),
            "convention_notes": self.convention_notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_independent(lhs_log, rhs_log):
    left = {id(out) for _, out in lhs_log}
    for name, out in rhs_log:
        if id(out) in left:
            raise ConsistencyError(f"{name} result is shared between the two sides")


def verify(
    instance: IdentityInstance,
    order=None,
    rhs_hook: Optional[Callable[[ExactSeries], ExactSeries]] = None,
) -> VerificationReport:
    """Build both sides independently and compare them exactly.

    ``rhs_hook`` may replace the right side before comparison (used to
    inject deliberate perturbations in tests).
    """
    order = instance.default_order if order is None else order
    notes = list(instance.notes)
    t0 = time.perf_counter()
    status, mismatch, eff, err = "pass", None, None, None
    try:
        target = instance.prefactor + Fraction(order)
        with trace_engines() as lhs_log:
            lhs = instance.lhs_builder(target)
        with trace_engines() as rhs_log:
            rhs = instance.rhs_builder(target)
        _check_independent(lhs_log, rhs_log)
        notes.append(
            "lhs engines: " + (", ".join(sorted({n for n, _ in lhs_log})) or "none")
            + "; rhs engines: " + (", ".join(sorted({n for n, _ in rhs_log})) or "none")
        )
        if rhs_hook is not None:
            rhs = rhs_hook(rhs)
        bound = target
        for s in (lhs, rhs):
            if s.order is not None and s.order < bound:
                bound = s.order
        eff = bound - instance.prefactor
        mm = lhs.first_mismatch(rhs, bound)
        if mm is not None:
            status = "fail"
            exp, a, b = mm
            mismatch = {
                "exponent_num": exp.numerator,
                "exponent_den": exp.denominator,
                "lhs_coeff": str(a),
                "rhs_coeff": str(b),
            }
        for name, check in instance.extras:
            ok, detail = check(target)
            notes.append(f"{name}: {detail}")
            if not ok and status == "pass":
                status = "fail"
    except QSeriesError as exc:
        status, err = "error", type(exc).__name__
        notes.append(f"{type(exc).__name__}: {exc}")
    if instance.kind == "conjecture" and status == "pass":
        notes.append(f"verified to order {eff} (evidence, not a proof)")
    return VerificationReport(
        id=instance.id,
        kind=instance.kind,
        params=dict(instance.params),
        order=int(order),
        status=status,
        first_mismatch=mismatch,
        wall_time_ms=(time.perf_counter() - t0) * 1000,
        convention_notes=notes,
        effective_order=eff,
        error_type=err,
    )


def verify_id(id: str, order=None, rhs_hook=None, **params) -> VerificationReport:
    return verify(make_instance(id, params), order, rhs_hook)


# -- cross-entry consistency ----------------------------------------------------


def cross_entry_checks(order: int = 40) -> list[tuple[str, bool, str]]:
    """Relations between entries, each side rebuilt from scratch."""
    out = []
    order = Fraction(order)
    for n in (1, 2, 3):
        c1 = make_instance("a2n-1-sum", {"n": n, "k": 1, "p": 1})
        mac = make_instance("macdonald-a2n2-eta", {"n": n})
        pre = mac.prefactor
        lhs_one = c1.lhs_builder(order).first_mismatch(ExactSeries.one(order), order) is None
        # (q)_inf^(2n^2-n) * rhs of the k=1 case, shifted by the eta offset, is eta^(2n^2-n)
        scaled = (c1.rhs_builder(order) * poch_inf(1, order, 2 * n * n - n)).shift_by(pre)
        mm = scaled.first_mismatch(mac.lhs_builder(pre + order), pre + order)
        out.append(
            (f"a2n-1-sum(n={n},k=1) == macdonald-a2n2-eta(n={n})", lhs_one and mm is None, "" if mm is None else f"q^{mm[0]}")
        )
    for n in (1, 2, 3):
        for p in (1, 2):
            c1 = make_instance("a2n-1-sum", {"n": n, "k": 2, "p": p})
            th = make_instance("a2n-1-sum-k2", {"n": n, "p": p})
            a = c1.lhs_builder(order).first_mismatch(th.lhs_builder(order), order)
            b = c1.rhs_builder(order).first_mismatch(th.rhs_builder(order), order)
            out.append((f"a2n-1-sum(n={n},k=2,p={p}) == a2n-1-sum-k2(n={n},p={p})", a is None and b is None, ""))
    ag = make_instance("andrews-gordon", {"k": 2, "p": 2})
    rr = make_instance("rr-1")
    mm = ag.lhs_builder(order).first_mismatch(rr.lhs_builder(order), order)
    out.append(("andrews-gordon(k=2,p=2) lhs == rr-1 lhs", mm is None, ""))
    return out
