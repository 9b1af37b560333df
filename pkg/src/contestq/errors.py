"""Exception hierarchy shared across the library."""

from __future__ import annotations


class ContestError(Exception):
    """Base class for all library errors."""


class GameValidationError(ContestError, ValueError):
    """A game, profile, or game file violates a structural invariant."""


class PreconditionError(ContestError, ValueError):
    """An operation was invoked on a game outside its guaranteed domain."""


class CapExceededError(ContestError, RuntimeError):
    """An exhaustive operation would exceed its configured state-space cap."""


class MissingTableEntryError(ContestError, KeyError):
    """A table-backed payment has no entry for the requested configuration."""


class ContigufyError(ContestError, RuntimeError):
    """The inversion-swap procedure failed to preserve equilibrium."""
