"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes, so raising the right class matters:
data problems (files, schemas, labels) are distinct from shape mismatches
and from numerical failures.
"""


class DeepLdaError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(DeepLdaError, ValueError):
    """Operands have incompatible dimensions. The message names both shapes."""


class DataError(DeepLdaError, ValueError):
    """Input data or schema is unusable: missing files, ragged rows,
    unmappable labels, absent columns."""


class ContractError(DeepLdaError, RuntimeError):
    """An API protocol was violated, e.g. a backward pass fed a cache that
    does not belong to the network's current parameters."""


class NumericalError(DeepLdaError, ArithmeticError):
    """A numerical procedure failed, e.g. a singular linear solve."""
