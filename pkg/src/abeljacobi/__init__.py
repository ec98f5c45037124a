"""Period matrices and the Abel-Jacobi map of hyperelliptic curves ``y**2 = f(x)``."""
from .abel import (
    AbelMap,
    JacobianPoint,
    abel_divisor,
    abel_point,
    base_point_shift,
    check_principal,
    choose_base_tuple,
    dlog_periods,
    embedding_spot_check,
    jacobi_invert_local,
)
from .curve import (
    INFINITY,
    CurvePoint,
    DifferentialBasis,
    Divisor,
    HyperellipticCurve,
    RationalFunctionSpec,
    branch_point,
    curve_from_roots,
    differential_vector,
    divisor_of_function,
    evaluate_differential,
    finite_point,
    holomorphic_basis,
    involution,
    linear,
    new_curve,
    random_curve,
    ycoord,
)
from .elliptic import agm, elliptic_periods_agm, lattice_equivalent
from .errors import AbelJacobiError, InputError, NumericalError, VerificationFailure
from .homology import symplectic_basis
from .kernels import BACKEND
from .lattice import PeriodLattice, lattice_distance, period_lattice, real_coordinates, reduce_mod_lattice
from .paths import continue_y, integrate, integrate_path, plan_path
from .periods import PeriodMatrices, period_matrices, riemann_matrix, verify_riemann_relations

__version__ = "0.1.0"

__all__ = [
    "AbelMap", "JacobianPoint", "abel_divisor", "abel_point", "base_point_shift", "check_principal",
    "choose_base_tuple", "dlog_periods", "embedding_spot_check", "jacobi_invert_local",
    "INFINITY", "CurvePoint", "DifferentialBasis", "Divisor", "HyperellipticCurve",
    "RationalFunctionSpec", "branch_point", "curve_from_roots", "differential_vector",
    "divisor_of_function", "evaluate_differential", "finite_point", "holomorphic_basis",
    "involution", "linear", "new_curve", "random_curve", "ycoord",
    "agm", "elliptic_periods_agm", "lattice_equivalent",
    "AbelJacobiError", "InputError", "NumericalError", "VerificationFailure",
    "symplectic_basis", "BACKEND",
    "PeriodLattice", "lattice_distance", "period_lattice", "real_coordinates", "reduce_mod_lattice",
    "continue_y", "integrate", "integrate_path", "plan_path",
    "PeriodMatrices", "period_matrices", "riemann_matrix", "verify_riemann_relations",
]
