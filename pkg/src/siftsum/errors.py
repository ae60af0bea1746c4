"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapError(RuntimeError):
    """A resource cap (divisor count, memory, table size) would be exceeded."""


class InvariantError(AssertionError):
    """A computed quantity violated an invariant that must always hold."""
