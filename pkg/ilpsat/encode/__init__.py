from .clauses import AmoMethod, encode_amo, encode_and, encode_or, encode_partitioning, sequential_counter
from .pb import PbMethod, encode_at_most, encode_pb, normalize_pb
from .session import EncodeSession, encode_variables
from .model import EncodeConfig, EncodedModel, encode_model, encode_objective

__all__ = [
    "AmoMethod",
    "encode_amo",
    "encode_and",
    "encode_or",
    "encode_partitioning",
    "sequential_counter",
    "PbMethod",
    "encode_at_most",
    "encode_pb",
    "normalize_pb",
    "EncodeSession",
    "encode_variables",
    "EncodeConfig",
    "EncodedModel",
    "encode_model",
    "encode_objective",
]
