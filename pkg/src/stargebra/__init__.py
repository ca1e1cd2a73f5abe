"""Spectral theory of finite-dimensional *-algebras as checkable computations."""

from .algebra import (
    GroupRingSpec,
    StarAlgebra,
    algebra_from_basis,
    build_algebra,
    counterexample_ratio,
    group_ring,
    hermitian_parts,
    unitize,
)
from .commutant import (
    Subspace,
    bicommutant,
    center,
    commutant,
    cyclic_separating_duality,
    intertwiners,
    is_maximal_commutative,
    is_von_neumann,
    wstar,
)
from .errors import NumericalError, PreconditionError, StargebraError
from .evolution import cayley, evolve, inverse_cayley, ivp_residual, propagator, psi_P, truncated_model
from .gelfand import (
    CharacterSet,
    DiscreteMeasure,
    bochner_measure,
    characters,
    gelfand_transform,
    wiener_inverse_demo,
)
from .measures import (
    Resolution,
    atom_eigen_check,
    fuglede_check,
    image_resolution,
    pi_P,
    resolve_normal,
    resolve_representation,
    spectral_representation,
    vector_measure,
)
from .spectral import (
    RationalFn,
    Spectrum,
    abs_value,
    cayley_bounded,
    functional_calculus,
    orth_decompose,
    polar_factorize,
    positive_sqrt,
    ptak,
    rational_apply,
    reflection_split,
    spectral_radius,
    spectral_radius_limit,
    spectrum,
    sqrt_series,
)
from .states import (
    Functional,
    GnsResult,
    classify_state,
    decompose_cyclic,
    eigen_state_check,
    gn_norm,
    gns,
    is_positive,
    variation,
)

__version__ = "0.1.0"
