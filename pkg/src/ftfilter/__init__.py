"""Minimal fault-tolerant filtering networks for CSS codeword states.

Standard-form check matrices, latin-rectangle gate scheduling, circuit
emitters, and the fault-enumeration / Monte Carlo / statevector machinery used
to check them.
"""

__version__ = "0.1.0"

from .codes import CodeSpec, builtin, codewords, load_code, repetition
from .gf2 import nullspace, rank, rref, syndrome, to_standard_form

__all__ = [
    "CodeSpec",
    "builtin",
    "codewords",
    "load_code",
    "nullspace",
    "rank",
    "repetition",
    "rref",
    "syndrome",
    "to_standard_form",
]
