"""Exact q-series verification of Rogers-Ramanujan type identities."""
from .errors import (
    ConsistencyError,
    DivergentProductError,
    EnumerationError,
    IntegralityError,
    NonUnitError,
    ParameterError,
    QSeriesError,
    SpecializationError,
)
from .series import ExactSeries, EtaQuotient, eta_quotient, poch, poch_inf, qbin, triple_product
from .partitions import AlphabetSpec, Partition, qprime_2m, skew_qprime_one
from .lattice import QuadraticFormSpec, enumerate_points
from .sums import BosonicSpec, FermionicSpec, bosonic_sum, fermionic_sum
from .registry import (
    IdentityInstance,
    VerificationReport,
    cross_entry_checks,
    list_identities,
    make_instance,
    verify,
    verify_id,
)
from .dilog import rogers_L, tba_solve

__version__ = "0.1.0"

__all__ = [
    "AlphabetSpec",
    "BosonicSpec",
    "ConsistencyError",
    "DivergentProductError",
    "EnumerationError",
    "EtaQuotient",
    "ExactSeries",
    "FermionicSpec",
    "IdentityInstance",
    "IntegralityError",
    "NonUnitError",
    "ParameterError",
    "Partition",
    "QSeriesError",
    "QuadraticFormSpec",
    "SpecializationError",
    "VerificationReport",
    "bosonic_sum",
    "cross_entry_checks",
    "enumerate_points",
    "eta_quotient",
    "fermionic_sum",
    "list_identities",
    "make_instance",
    "poch",
    "poch_inf",
    "qbin",
    "qprime_2m",
    "rogers_L",
    "skew_qprime_one",
    "tba_solve",
    "triple_product",
    "verify",
    "verify_id",
]
