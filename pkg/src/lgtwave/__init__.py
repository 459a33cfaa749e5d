"""lgtwave: wave-packet creation toolkit for lattice gauge theories."""

__version__ = "0.1.0"

from .paulis import (  # noqa: F401
    LcuDecomposition,
    OperatorSum,
    PauliTerm,
    StateVector,
    multiply,
    nested_commutator_norm,
    one_norm,
)
