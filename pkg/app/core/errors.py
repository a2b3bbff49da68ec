"""Exception hierarchy shared by the geometry, CLI and HTTP layers."""
from typing import Any, Sequence

EXIT_PASS = 0
EXIT_VERIFICATION_FAILED = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 4


class GeometryError(Exception):
    """Base class for all errors raised by this package."""

    exit_code: int = EXIT_USAGE


class FieldZeroDivisionError(GeometryError, ZeroDivisionError):
    """Inverse of the zero residue was requested."""

    def __init__(self, modulus: int):
        self.modulus = modulus
        super().__init__(f"0 has no inverse modulo {modulus}")


class UnsupportedCharacteristicError(GeometryError, ValueError):
    """Modulus is 2, not prime, or out of the supported range."""


class SingularMatrixError(GeometryError, ValueError):
    """A linear system has no unique solution."""


class DegenerateConfigurationError(GeometryError, ValueError):
    """Points expected to be in general position are not."""

    def __init__(self, message: str, subset: Sequence[int] = ()):
        self.subset = tuple(subset)
        if self.subset:
            message = f"{message} (dependent subset: {list(self.subset)})"
        super().__init__(message)


class FieldTooSmallError(GeometryError, ValueError):
    """The field has fewer than d - 1 elements."""

    exit_code = EXIT_INFEASIBLE


class ZeroFormError(GeometryError, ValueError):
    """The zero quadratic form was supplied."""


class FormParseError(GeometryError, ValueError):
    """A form specification could not be parsed."""


class NotRichError(GeometryError, ValueError):
    """The construction needs a rich form and got an irreducible rank-2 one."""

    exit_code = EXIT_INFEASIBLE


class PrimeNotFoundError(GeometryError, ValueError):
    """No admissible prime exists in the scanned range."""

    exit_code = EXIT_INFEASIBLE

    def __init__(
        self,
        message: str,
        scanned: tuple[int, int],
        rejected: Sequence[tuple[int, str]] = ()
    ):
        self.scanned = scanned
        self.rejected = list(rejected)
        details = f"{message} (scanned [{scanned[0]}, {scanned[1]}])"
        if self.rejected:
            reasons = "; ".join(f"p={p}: {why}" for p, why in self.rejected)
            details = f"{details}; rejected: {reasons}"
        super().__init__(details)


class FormMismatchError(GeometryError, ValueError):
    """A rational form does not reduce to the form a construction used."""


class ContractViolationError(GeometryError, RuntimeError):
    """An operation was called without its precondition being established."""


class InconsistentClassificationError(GeometryError, RuntimeError):
    """The classification dichotomy was contradicted by a search result."""


class PointSetFormatError(GeometryError, ValueError):
    """A point-set file is malformed or disagrees with its header."""


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code."""
    if isinstance(error, GeometryError):
        return error.exit_code
    return EXIT_USAGE


def describe(error: BaseException) -> dict[str, Any]:
    """Structured description used by the CLI and HTTP error payloads."""
    return {"error": type(error).__name__, "message": str(error)}


def http_status_for(error: BaseException) -> int:
    """422 for infeasible constructions, 400 for every other input error."""
    return 422 if exit_code_for(error) == EXIT_INFEASIBLE else 400
