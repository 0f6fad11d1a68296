"""Monte Carlo laboratory for measurement-based fault-tolerant gadgets.

Pauli-frame sampling of verified-ancilla teleportation circuits on the
Steane and Golay codes, with a tableau oracle for exact cross-checks, the
benchmarking procedures built on top, and analytic resource estimation.
"""

from .pauli import PauliString, pauli_mul, commutes, conjugate
from .circuit import Circuit
from .codes import (CssCode, LookupTable, steane_code, golay_code,
                    build_lookup, corrected_logical, encoding_circuit)

__all__ = [
    "PauliString", "pauli_mul", "commutes", "conjugate", "Circuit",
    "CssCode", "LookupTable", "steane_code", "golay_code",
    "build_lookup", "corrected_logical", "encoding_circuit",
]

__version__ = "0.1.0"
