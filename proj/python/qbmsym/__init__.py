"""Symmetry groups of qubit Boltzmann machines."""

from ._qbmsym import (
    InputError,
    ResourceError,
    __version__,
    analyze,
    boltzmann_state,
    check_degeneracy,
    check_equivalence,
    commutes,
    dense,
    element_unitary,
    equations,
    minimize_sm,
    multiply,
    nu,
    omega,
    parse_spec,
    reduce_visible,
    relative_entropy,
    solve,
)

__all__ = [
    "InputError",
    "ResourceError",
    "__version__",
    "analyze",
    "boltzmann_state",
    "check_degeneracy",
    "check_equivalence",
    "commutes",
    "dense",
    "element_unitary",
    "equations",
    "minimize_sm",
    "multiply",
    "nu",
    "omega",
    "parse_spec",
    "reduce_visible",
    "relative_entropy",
    "solve",
]
