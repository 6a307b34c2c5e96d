"""Exception types shared across the package."""

from __future__ import annotations


class EtacalcError(Exception):
    """Base class for every error raised deliberately by this package."""


class DegreeMismatchError(EtacalcError, ValueError):
    """Permutations of different degrees were combined."""


class MembershipError(EtacalcError, ValueError):
    """An element was required to lie in a group it does not belong to."""


class CapacityError(EtacalcError, RuntimeError):
    """A computation exceeded its configured size cap.

    The ``count`` attribute records how far the computation got (cosets
    defined, or the order bound that was crossed) so callers can report it.
    """

    def __init__(self, message: str, *, count: int):
        super().__init__(message)
        self.count = count


class ParseError(EtacalcError, ValueError):
    """Malformed presentation text; carries 1-based line and column."""

    def __init__(self, message: str, *, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class IllDefinedHomError(EtacalcError, ValueError):
    """A generator-image assignment does not extend to a homomorphism.

    ``relator`` holds one offending word over the source generators (as a
    tuple of (generator index, sign) pairs) whose image is not the identity.
    """

    def __init__(self, message: str, *, relator=None):
        super().__init__(message)
        self.relator = relator


class InvalidActionError(EtacalcError, ValueError):
    """An action table violates the action axioms; carries the report."""

    def __init__(self, message: str, *, report=None):
        super().__init__(message)
        self.report = report


class IncompatibleActionError(EtacalcError, ValueError):
    """A pair of mutual actions fails the compatibility condition."""

    def __init__(self, message: str, *, report=None):
        super().__init__(message)
        self.report = report


class InvarianceError(EtacalcError, ValueError):
    """A subgroup is not invariant under the partner group's action.

    ``witness`` is one (element label, actor label) pair that escapes.
    """

    def __init__(self, message: str, *, witness=None):
        super().__init__(message)
        self.witness = witness


class IncompleteTableError(EtacalcError, ValueError):
    """An operation needed a complete coset table but got a partial one."""


class ConstructionError(EtacalcError, RuntimeError):
    """An internal invariant of a constructed object failed verification."""
