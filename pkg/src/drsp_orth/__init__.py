"""Sign-permutation orthogonal matrices for deterministic remote state preparation."""

from .canonical import (
    Feasibility,
    MappingTable,
    Simplification,
    feasibility,
    generate_ordered_type,
    order_mapping_table,
    simplify_to_ordered,
)
from .core_types import (
    ParameterVector,
    SignedEntry,
    SymbolicMatrix,
    instantiate_numeric,
    validate_semi_orthogonal,
    validate_special_orthogonal,
)
from .drsp import phase_equivalence_check, simulate_drsp
from .gf2 import Gf2System, eliminate_and_solve
from .operators import (
    Couple,
    Division,
    MatchingOperator,
    SignedPermutation,
    apply,
    compose,
    cooperates,
    is_matching_operator,
    operator_from_division,
)
from .oracle import brute_force_gf2, brute_force_signs
from .sign_solver import DivisionTable, assign_signs, build_equations, compute_divisions, find_solution

__version__ = "0.1.0"
