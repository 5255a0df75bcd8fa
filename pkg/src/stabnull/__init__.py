"""Stabilizer nullity of qubit states and unitaries.

The s-value of a unitary counts Paulis it maps to signed Paulis under
conjugation; the nullity is ``2n - log2 s``. For states it counts Paulis with
expectation +-1 and the nullity is ``n - log2 s``. Both are Clifford
invariant, and the unitary nullity lower-bounds the T-count.
"""

from .backend import *  # noqa: F401,F403
from .circuit import *  # noqa: F401,F403
from .errors import (  # noqa: F401
    BackendError,
    CircuitParseError,
    InvariantViolation,
    QubitMismatchError,
    ResourceLimitError,
    StabNullError,
)
from .nullity import *  # noqa: F401,F403
from .pauli import *  # noqa: F401,F403
from .pauli import product  # noqa: F401
from .stabilizer import *  # noqa: F401,F403
from .theorems import run_all, run_check  # noqa: F401

__version__ = "0.1.0"
