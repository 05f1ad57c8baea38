"""Time-sensitive KP-ABE over an abstract bilinear group.

The scheme gates decryption on (a) an LSSS access structure over
attributes and (b) a hierarchical year/month/day time tree with
set-cover validity periods.  Correctness is checked with a symbolic
exponent-tracking backend; a production pairing curve can be slotted in
behind the same interface.
"""

from .backend import SymbolicBackend, PRIME
from .timetree import TimeTree, encode_period, set_cover, covers, RangeError
from .lsss import AccessStructure, formula_to_lsss, lsss_satisfy, UnsupportedFormula
from .scheme import (
    setup,
    keygen,
    encrypt,
    decrypt,
    Bottom,
    AttributeMismatch,
    TimeMismatch,
    InvalidIdentity,
    UnknownAttribute,
)
from .hybrid import hybrid_seal, hybrid_open, parse_sealed, MalformedSealedFile
from .serial import (
    serialize_public_params, deserialize_public_params,
    serialize_master_key, deserialize_master_key,
    serialize_private_key, deserialize_private_key,
)

__all__ = [
    "SymbolicBackend", "PRIME",
    "TimeTree", "encode_period", "set_cover", "covers", "RangeError",
    "AccessStructure", "formula_to_lsss", "lsss_satisfy", "UnsupportedFormula",
    "setup", "keygen", "encrypt", "decrypt",
    "Bottom", "AttributeMismatch", "TimeMismatch", "InvalidIdentity", "UnknownAttribute",
    "hybrid_seal", "hybrid_open", "MalformedSealedFile",
]
