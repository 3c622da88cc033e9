"""Finite-group simulator for quantum reference frames: superpositions of
symmetric models, sections and counterpart relations, QRF changes, and
comparison maps between superposed discretised spacetimes."""

from .errors import (
    AmbiguityError,
    DegenerateFrameError,
    DomainError,
    GroupMismatchError,
    PreconditionError,
    QRFError,
    SameOrbitError,
    ValidationError,
)
from .groups import (
    ConfigSpace,
    CyclicGroup,
    FiniteGroup,
    GroupElement,
    PermutationGroup,
    SymmetricGroup,
    TableGroup,
    act,
    compose,
    inverse,
    is_regular,
    stabiliser,
)
from .models import (
    Model,
    ModelSpace,
    OrbitLabel,
    Section,
    convention_change,
    counter,
    lowering_element,
    orbit_label,
    relating_element,
)
from .states import (
    BranchState,
    DensityMatrix,
    controlled_transform,
    embed_vector,
    entanglement_entropy,
    frame_factorizes,
    qrf_change,
    reduced_density_matrix,
    superpose,
)

__version__ = "0.1.0"
