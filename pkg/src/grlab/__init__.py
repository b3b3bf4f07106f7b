"""Exact group-ring computations over Q, F_p and Z/p^k.

Idempotent decompositions, fixed-point subrings, relative traces,
double-action characters and p-adic conjugators for torsion units.
"""
from .groups import FiniteGroup, GroupError, Subgroup, from_permutations, load_group
from .grouprings import GroupRingElement, GroupRingError
from .idempotents import (AlgebraPresentation, IdempotentDecomposition, are_conjugate,
                          correspondence_AT, hensel_lift, primitive_decomposition, radical)
from .presets import PRESET_NAMES, designated_normal_subgroups, preset
from .rings import ScalarRing
from .subalgebras import (Subalgebra, fixed_point_subring, group_fixed_subring, relative_trace,
                          trace_ideal)

__version__ = "0.1.0"

__all__ = [
    "AlgebraPresentation", "FiniteGroup", "GroupError", "GroupRingElement", "GroupRingError",
    "IdempotentDecomposition", "PRESET_NAMES", "ScalarRing", "Subalgebra", "Subgroup",
    "are_conjugate", "correspondence_AT", "designated_normal_subgroups", "fixed_point_subring",
    "from_permutations", "group_fixed_subring", "hensel_lift", "load_group", "preset",
    "primitive_decomposition", "radical", "relative_trace", "trace_ideal",
]
