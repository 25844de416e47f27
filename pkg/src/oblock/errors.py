"""Exception hierarchy shared by all oblock modules."""


class OblockError(Exception):
    """Base class for every error raised by this package."""


class InfiniteGroupError(OblockError, ValueError):
    """The Coxeter matrix does not describe a finite group."""


class GroupTooLargeError(OblockError, ValueError):
    """Enumeration would exceed the configured element cap."""


class NotInBlockError(OblockError, ValueError):
    """An element is not one of the longest coset representatives of a block."""

    def __init__(self, element, representative, walls):
        self.element = element
        self.representative = representative
        self.walls = walls
        super().__init__(
            f"element {element} is not a longest coset representative for walls "
            f"{sorted(walls)}; its coset is represented by {representative}"
        )


class InvariantViolation(OblockError, AssertionError):
    """A checked identity failed; this always points at an implementation bug."""


class CacheError(OblockError):
    """A KL cache file exists but cannot be read."""

    def __init__(self, path, reason):
        self.path = path
        super().__init__(f"corrupt KL cache {path}: {reason}")
