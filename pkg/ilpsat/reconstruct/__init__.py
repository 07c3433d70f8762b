from .record import RECORD_VERSION, ReconstructionRecord
from .lifting import FailureReason, Verdict, VerdictStatus, reconstruct, verify_lifted, verify_optimal

__all__ = [
    "RECORD_VERSION",
    "ReconstructionRecord",
    "FailureReason",
    "Verdict",
    "VerdictStatus",
    "reconstruct",
    "verify_lifted",
    "verify_optimal",
]
