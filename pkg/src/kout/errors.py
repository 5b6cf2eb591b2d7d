"""Exception types shared across the package."""

from __future__ import annotations


class DigraphFormatError(ValueError):
    """Raised when a serialized digraph cannot be parsed.

    ``offset`` is the byte position at which parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class RejectionLimitError(RuntimeError):
    """A rejection sampler exceeded its attempt cap.

    Signals pathological parameters (e.g. simple generation with large k, or a
    surjection size that the one-in-core almost never hits) rather than a bug.
    """

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} after {attempts} attempts")
        self.attempts = attempts


class CycleCapError(RuntimeError):
    """Cycle enumeration found more elementary cycles than the cap allows."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} elementary cycles (cap={cap})")
        self.cap = cap


class ComponentCapError(RuntimeError):
    """A nontrivial strongly connected component is too large for exact search."""

    def __init__(self, size: int, cap: int):
        super().__init__(
            f"nontrivial strongly connected component of size {size} exceeds cap {cap}"
        )
        self.size = size
        self.cap = cap


class InvariantViolationError(AssertionError):
    """A structural invariant failed during a validated Monte Carlo run."""
