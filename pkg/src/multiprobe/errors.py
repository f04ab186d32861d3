"""Exception types shared across the package.

The CLI maps these onto exit codes, so raise the most specific one that
applies rather than a bare ValueError.
"""


class DimensionError(ValueError):
    """Mode counts, pattern lengths or matrix shapes do not line up."""


class EnergyError(ValueError):
    """Squeezing/energy parameter outside its physical domain."""


class PartitionError(ValueError):
    """A partition set violates its structural invariants."""


class CapacityError(ValueError):
    """Request exceeds the hard enumeration guards."""


class ComparabilityError(ValueError):
    """Two bound reports cannot be compared (average channel use differs)."""


class UnsupportedBenchmarkError(ValueError):
    """No optimal classical benchmark is defined for this channel family."""


class NoClosedFormError(ValueError):
    """No closed-form expression is available for the requested quantity."""


class NumericError(ArithmeticError):
    """A numerical computation left its domain of validity."""
