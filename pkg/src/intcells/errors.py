"""Exception types shared across the package."""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or out-of-contract input (bad dimension, bad parameter, bad file)."""


class PreconditionError(ValueError):
    """A mathematical precondition does not hold for the given input.

    ``witness`` carries whatever certifies the failure, e.g. a facet that
    separates the origin from the interior of a polytope.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
