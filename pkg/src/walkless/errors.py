"""Exception types shared across the package.

Two broad groups: malformed input (bad files, bad indices, unsupported
dimensions) and violated numerical contracts (unitarity, equivalence,
normalization). The CLI maps the first group to exit code 2 and the
second to exit code 3.
"""

from __future__ import annotations


class WalklessError(Exception):
    """Base class for every error raised by this package."""


class InputError(WalklessError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class ContractViolation(WalklessError):
    """A numerical contract did not hold at run time (CLI exit code 3)."""


# graph-core
class ParseError(InputError):
    pass


class ValidationError(InputError):
    pass


class RemovalNotPresent(InputError):
    pass


class NodeOutOfRange(InputError):
    pass


# state-space
class IndexOutOfRange(InputError):
    pass


class EmptyGraph(InputError):
    pass


# coin-forge
class DimensionUnsupported(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotUnitary(ContractViolation):
    pass


# walk-engine
class InitialAmplitudeOnIsolatedState(InputError):
    pass


class EquivalenceViolation(ContractViolation):
    pass


class NormViolation(ContractViolation):
    pass


# csd-compiler
class NotPowerOfTwo(InputError):
    pass


class BadBlockSize(InputError):
    pass


class IndexCollision(ContractViolation):
    pass


# lattice-sim
class SiteOutOfRange(InputError):
    pass


class TransportOutOfRange(InputError):
    pass
