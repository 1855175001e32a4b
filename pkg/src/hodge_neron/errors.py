"""Exception types.  Each carries a short machine-readable code."""


class HodgeNeronError(Exception):
    code = "error"

    def __init__(self, message="", **info):
        super().__init__(message)
        self.info = info


class NotNilpotent(HodgeNeronError):
    code = "not-nilpotent"


class NoSolution(HodgeNeronError):
    code = "no-solution"


class NotExists(HodgeNeronError):
    code = "relative-filtration-not-exists"


class NotMHS(HodgeNeronError):
    code = "not-mhs"


class NoTriple(HodgeNeronError):
    code = "no-sl2-triple"


class InconsistentTriple(HodgeNeronError):
    code = "inconsistent-triple"


class IndexMismatch(HodgeNeronError):
    code = "index-mismatch"


class PreconditionViolated(HodgeNeronError):
    code = "precondition"


class NoIntegralLift(HodgeNeronError):
    code = "no-integral-lift"


class UnsupportedShape(HodgeNeronError):
    code = "unsupported-shape"


class NotQuasiUnipotent(HodgeNeronError):
    code = "not-quasi-unipotent"


class NoLift(HodgeNeronError):
    code = "no-lift"


class ParseError(HodgeNeronError):
    code = "parse-error"


class ValidationError(HodgeNeronError):
    code = "validation-error"

    def __init__(self, message="", errors=None, **info):
        super().__init__(message, **info)
        self.errors = list(errors or [])


class UnknownCommand(HodgeNeronError):
    code = "unknown-command"
