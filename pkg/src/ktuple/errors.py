class KTupleError(Exception):
    """Base class for library errors."""


class InvalidRangeError(KTupleError, ValueError):
    pass


class OutOfRangeError(KTupleError, IndexError):
    """A lookup fell outside the sieved segment."""


class CoverageError(OutOfRangeError):
    """Sieve data does not cover every member of a tuple."""


class MalformedOffsetsError(KTupleError, ValueError):
    pass


class InvalidArgumentError(KTupleError, ValueError):
    pass


class CapacityError(KTupleError, MemoryError):
    pass


class ExactnessError(KTupleError, ArithmeticError):
    """An exact characteristic value came out non-integral (internal bug)."""
