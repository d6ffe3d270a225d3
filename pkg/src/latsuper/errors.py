"""Exception hierarchy.

Two top-level families matter for callers: InputError (bad inputs or unmet
preconditions, CLI exit code 1) and VerificationError / InternalConsistencyError
(a mathematical check failed, CLI exit code 2).  Every error can carry a
JSON-serializable witness so failures name the offending object.
"""

from __future__ import annotations

from typing import Any, Optional


class LatsuperError(Exception):
    def __init__(self, message: str, *, check: Optional[str] = None, witness: Any = None):
        super().__init__(message)
        self.check = check
        self.witness = witness

    def payload(self) -> dict:
        out: dict = {"category": type(self).__name__, "message": str(self)}
        if self.check is not None:
            out["check"] = self.check
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class InputError(LatsuperError):
    """Invalid input or unmet precondition."""


class ConstructionError(InputError):
    """A group or table invariant failed at construction."""


class CapacityError(InputError):
    """Input exceeds the desk-scale caps."""


class ArgumentError(InputError):
    """Arguments outside an operation's domain."""


class UnsupportedStructureError(InputError):
    """Operation requires a distributive lattice."""


class FormulaInapplicableError(InputError):
    """A closed formula's hypotheses (general position) do not hold."""


class AmbiguityError(InputError):
    """The minimal cover subset for a character value is not well defined."""


class UnfavorableEmbeddingError(InputError):
    """Lattice pair fails the restriction-favorable conditions."""


class CompatibilityError(InputError):
    """Restricted values are not constant on the subgroup's superclasses."""


class VerificationError(LatsuperError):
    """A mathematical check failed on otherwise valid inputs."""


class InternalConsistencyError(LatsuperError):
    """Two independent routes to the same value disagreed (bug signal)."""
