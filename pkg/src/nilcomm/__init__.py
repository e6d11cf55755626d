"""Commuting tuples in reduced Heisenberg and unitriangular groups."""

from .errors import DomainError, GeodesicError, NilcommError, ShapeError, UnsupportedRegimeError
from .lie_core import (
    Convention,
    FieldTag,
    GroupTuple,
    Lattice,
    StrictUpperElement,
    adjoint_action,
    bch_product_2step,
    group_commutator_log,
    heis,
    is_almost_commuting,
    nilpotent_exp,
    nilpotent_log,
    omega_form,
    riffle,
    st,
    st_bracket,
)
from .invariant import (
    LinearMap,
    SkewLabel,
    SkewMatrix,
    component_label,
    darboux_normal_form,
    is_realizable,
    phi,
    phi_rowwedge,
    plucker_rank2_test,
)
from .components import (
    FiberPath,
    SpherePoint,
    canonical_representative,
    connect_in_fiber,
    homeo_k2,
    retract_kernel,
    retract_strict_to_heis,
)
from .frames import (
    DoubledFrame,
    IsotropicEmbedding,
    OrthSymplecticFrame,
    SymplecticFrame,
    isotropic_to_symplectic,
    pack_cayley_dickson,
    polar_isotropic,
    stiefel_path,
    symplectic_to_isotropic,
    unpack_cayley_dickson,
)
from .strata import (
    OrbitPoint,
    StratumPoint,
    SummandDescriptor,
    conjugate_tuple,
    is_rational_point,
    kernel_projection,
    orbit_normal_form,
    splitting_inventory,
    stratum_index,
)

__version__ = "0.1.0"
