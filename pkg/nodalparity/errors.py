from typing import Optional

from nodalparity.config.constants import ExitCode


class NodalParityError(Exception):
    """Base class for every failure the toolkit reports on purpose."""

    exit_code: int = ExitCode.VERIFICATION_FAILED


class ArithmeticDomainError(NodalParityError, ValueError):
    exit_code = ExitCode.USAGE


class TorusSpecError(NodalParityError, ValueError):
    exit_code = ExitCode.USAGE


class UnsupportedRegimeError(NodalParityError):
    exit_code = ExitCode.UNSUPPORTED_REGIME


class AntisymmetryError(NodalParityError):
    """Translation does not act as -identity; `basis_function` is the first offender."""

    def __init__(self, message: str, basis_function: Optional[object] = None):
        super().__init__(message)
        self.basis_function = basis_function


class PairingError(NodalParityError):
    pass


class VanishingFunctionError(NodalParityError, ValueError):
    exit_code = ExitCode.USAGE


class UnstableCountError(NodalParityError):
    exit_code = ExitCode.UNSTABLE_COUNT


class ConstructionError(NodalParityError, ValueError):
    exit_code = ExitCode.USAGE


class ReportIOError(NodalParityError, OSError):
    exit_code = ExitCode.IO


class SpectrumError(NodalParityError, ValueError):
    exit_code = ExitCode.USAGE
