"""Exception types shared across the package."""


class RingcheckError(Exception):
    pass


class ParseError(RingcheckError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ValidationError(RingcheckError):
    """Base class for well-formedness violations of an algorithm."""

    def __init__(self, message, transition=None):
        self.transition = transition
        if transition is not None:
            message = f"transition {transition}: {message}"
        super().__init__(message)


class DuplicateRecvRegister(ValidationError):
    pass


class DuplicateUpdateTarget(ValidationError):
    pass


class IdRegisterWritten(ValidationError):
    pass


class UndeclaredIdentifier(ValidationError):
    pass


class DuplicateTransition(ValidationError):
    pass


class SizeMismatch(RingcheckError):
    pass


class InapplicableTuple(RingcheckError):
    def __init__(self, round_no, process=None, reason=""):
        self.round = round_no
        self.process = process
        msg = f"round {round_no}"
        if process is not None:
            msg += f", process {process}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class InvalidStagePair(RingcheckError):
    pass


class ResourceBudgetExceeded(RingcheckError):
    pass


class NotAPartialOrder(RingcheckError):
    pass


class RunReverificationFailed(RingcheckError):
    pass


class ExhaustedWithoutViolation(RingcheckError):
    pass


class FragmentRejected(RingcheckError):
    pass
