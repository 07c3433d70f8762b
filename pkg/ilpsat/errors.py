from typing import Optional


class IlpSatError(Exception):
    """Base class for every error raised by ilpsat."""


# ----------------------------------------------------------------------
# WCNF / solution text
# ----------------------------------------------------------------------

class WcnfFormatError(IlpSatError, ValueError):
    pass


class MalformedLineError(WcnfFormatError):
    def __init__(self, line_no: int, line: str, reason: str):
        self.line_no = line_no
        self.line = line
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}: {line!r}")


class WeightError(WcnfFormatError):
    pass


class WeightOverflowError(WcnfFormatError):
    pass


class SolutionFormatError(IlpSatError, ValueError):
    pass


class NoSolutionLineError(SolutionFormatError):
    pass


class LengthMismatchError(SolutionFormatError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"value line covers {got} variables, expected {expected}")


# ----------------------------------------------------------------------
# ILP / presolve
# ----------------------------------------------------------------------

class EmptyHardClauseError(IlpSatError):
    """The instance contains an empty hard clause and is trivially UNSAT."""


class InfeasibleError(IlpSatError):
    def __init__(self, reason: str = "model is infeasible"):
        self.reason = reason
        super().__init__(reason)


class PresolveError(IlpSatError):
    pass


# ----------------------------------------------------------------------
# Encoding
# ----------------------------------------------------------------------

class EncodingError(IlpSatError):
    pass


class EmptyConstraintError(EncodingError):
    pass


class TriviallyFalseError(EncodingError):
    pass


class UnencodableError(EncodingError):
    def __init__(self, constraint_class: str, index: Optional[int] = None):
        self.constraint_class = constraint_class
        self.index = index
        where = f" (row {index})" if index is not None else ""
        super().__init__(f"no CNF encoding for constraint class '{constraint_class}'{where}")


class NegativeCostOffsetError(EncodingError):
    pass


# ----------------------------------------------------------------------
# Reconstruction / solving
# ----------------------------------------------------------------------

class ReconstructionError(IlpSatError):
    pass


class RangeError(ReconstructionError):
    pass


class OracleError(IlpSatError):
    pass


class TooLargeError(OracleError):
    pass


class BudgetExceededError(OracleError):
    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"node budget exhausted after {nodes} nodes")


class SolverError(IlpSatError):
    pass


class SolverTimeoutError(SolverError):
    pass


class SolverFailureError(SolverError):
    pass


class VerificationFailureError(IlpSatError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"reconstructed solution failed verification: {verdict.summary()}")
