"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input: bad site indices, wrong shapes, broken invariants."""


class CapacityError(ValidationError):
    """System size exceeds the configured dense-matrix cap."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""
