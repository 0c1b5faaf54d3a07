"""Exception hierarchy shared by every layer of the engine."""


class HopfForgeError(Exception):
    """Base class for all engine errors."""


class UnmappedGenerator(HopfForgeError):
    pass


class UnknownGenerator(HopfForgeError):
    pass


class WordTooLong(HopfForgeError):
    """A power would produce a word past the run-length limit."""


class GeneratorClash(HopfForgeError):
    """Two visible generators of a node share a name."""


class CosetOverflow(HopfForgeError):
    pass


class EmptyPresentation(HopfForgeError):
    pass


class TrivialGenerator(HopfForgeError):
    pass


class BoundUnavailable(HopfForgeError):
    pass


class NotAFreeProduct(HopfForgeError):
    pass


class AssocValidationFailed(HopfForgeError):
    pass


class Unverified(HopfForgeError):
    pass


class HomomorphismCheckFailed(HopfForgeError):
    def __init__(self, message, failing=()):
        super().__init__(message)
        self.failing = list(failing)


class InvalidCertificate(HopfForgeError):
    pass


class HypothesesNotChecked(HopfForgeError):
    pass


class TrivialU(HopfForgeError):
    pass


class SurjectivityWitnessFailed(HopfForgeError):
    pass


class NonInjectivityFailed(HopfForgeError):
    pass


class PlanSyntaxError(HopfForgeError):
    def __init__(self, line, col, expected, found=None):
        self.line, self.col, self.expected, self.found = line, col, expected, found
        msg = f"{line}:{col}: expected {expected}"
        if found is not None:
            msg += f", found {found!r}"
        super().__init__(msg)


class UndefinedName(HopfForgeError):
    pass


class DuplicateName(HopfForgeError):
    pass


class ResolveError(HopfForgeError):
    """A construction error raised while elaborating one plan declaration."""

    def __init__(self, span, cause):
        self.span, self.cause = span, cause
        line, col = span if span else (0, 0)
        super().__init__(f"{line}:{col}: {type(cause).__name__}: {cause}")


class WitnessIncomplete(HopfForgeError):
    """A recipe stage other than surjectivity or non-injectivity failed."""
