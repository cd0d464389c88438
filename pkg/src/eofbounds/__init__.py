"""Bounds for the entanglement of formation of two-mode Gaussian states."""

from .bounds import (
    BoundFlags,
    BoundReport,
    NaturalBounds,
    NoiseMatrix,
    bound_report,
    difference_upper_bound,
    natural_bounds,
    noise_decomposition,
    searched_upper_bound,
    sigma_lower_bound,
)
from .entanglement import eeof, entanglement_entropy, eof_symmetric
from .errors import (
    DegenerateInvariantsError,
    DomainError,
    EofBoundsError,
    IncomparableBlocksError,
    NonPhysicalStateError,
    NonPositiveMatrixError,
    NotPSDError,
    NotSymmetricError,
    ParseError,
)
from .geof import GeofResult, geof, pure_cms_from_parameters
from .states import (
    CovMat,
    Invariants,
    StandardForm,
    invariants,
    is_entangled,
    is_physical,
    ppt_eigenvalues,
    random_local_symplectic,
    random_standard_form,
    reduced_symmetric,
    require_physical,
    standard_form,
    standard_form_from_invariants,
    symplectic_eigenvalues,
)
from .symplectic import (
    J2,
    J4,
    PSD_TOL,
    SympSpectrum,
    is_psd,
    loewner_ge,
    partial_transpose,
    symmetrize,
    symplectic_form,
    symplectic_spectrum,
)

__version__ = "0.1.0"
