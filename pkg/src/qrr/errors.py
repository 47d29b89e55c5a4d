"""Exception hierarchy for the q-series engine."""


class QSeriesError(Exception):
    """Base class for all errors raised by this package."""


class DivergentProductError(QSeriesError):
    """An infinite product whose factors do not tend to 1 as a formal series."""


class NonUnitError(QSeriesError):
    """Inversion of a series whose leading coefficient is not +1 or -1."""


class ConsistencyError(QSeriesError):
    """Two routes to the same quantity disagree. Always indicates a bug."""


class IntegralityError(ConsistencyError):
    """A lattice or fermionic term landed off the expected exponent grid."""


class EnumerationError(ConsistencyError):
    """A term was found outside a bound that was proven to contain all terms."""


class SpecializationError(QSeriesError):
    """An alphabet specialisation makes a denominator vanish identically."""


class ParameterError(QSeriesError, ValueError):
    """Invalid parameters for an identity, sum or spec object."""
