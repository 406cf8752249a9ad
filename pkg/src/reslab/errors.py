"""Exception hierarchy.

Every error carries a stable ``code`` string and the process ``exit_code``
used by the command-line front end.
"""


class ReslabError(Exception):
    code = "error"
    exit_code = 1

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class ValidationError(ReslabError, ValueError):
    code = "validation"
    exit_code = 2


class DegenerateConfigurationError(ValidationError):
    code = "degenerate-configuration"


class InvalidParameterError(ValidationError):
    code = "invalid-parameter"


class CapacityError(ValidationError):
    code = "capacity"


class NumericalError(ReslabError, ArithmeticError):
    code = "numeric"
    exit_code = 3


class EstimationError(NumericalError):
    code = "estimation-failed"


class ContourError(NumericalError):
    code = "zero-on-contour"


class ResolutionError(NumericalError):
    code = "resolution"


class ConsistencyError(NumericalError):
    code = "consistency"


class ConfigIOError(ReslabError, OSError):
    code = "io"
    exit_code = 4


class ConfigParseError(ValidationError):
    code = "parse"
