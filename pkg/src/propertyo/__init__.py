"""Explicit Ozawa kernels on computable groups, with exact certificates.

Two kernel constructions witness Property O at desk scale: the geodesic-ray
overlap kernel on free groups and the Følner-translate intersection kernel
on amenable groups.  Every kernel value is an exact rational, positive
semidefiniteness is certified by exact feature factorization, and the
verifier assembles machine-checkable certificates for the three Property O
conditions.
"""

from .folner import FolnerKernel, FolnerProvider, TranslateIndex
from .groups import (
    DEFAULT_ELEMENT_BUDGET,
    BudgetExceededError,
    DirectProduct,
    FiniteCyclic,
    FreeAbelian,
    FreeGroup,
    GroupElement,
    GroupModel,
    Heisenberg,
    ModelMismatchError,
    parse_group,
)
from .treekernel import RayFeatureVector, RaySegment, TreeKernel
from .verify import (
    FactorizationCertificate,
    FactorizationError,
    GramSample,
    PropertyOCertificate,
    PsdReport,
    SampleSpec,
    certify_psd_exact,
    check_psd_numeric,
    find_parameter_folner,
    find_parameter_tree,
    gram_matrix,
    make_kernel,
    random_elements,
    sample_points,
    verify_property_o,
)

__all__ = [
    "BudgetExceededError",
    "DEFAULT_ELEMENT_BUDGET",
    "DirectProduct",
    "FactorizationCertificate",
    "FactorizationError",
    "FiniteCyclic",
    "FolnerKernel",
    "FolnerProvider",
    "FreeAbelian",
    "FreeGroup",
    "GramSample",
    "GroupElement",
    "GroupModel",
    "Heisenberg",
    "ModelMismatchError",
    "PropertyOCertificate",
    "PsdReport",
    "RayFeatureVector",
    "RaySegment",
    "SampleSpec",
    "TranslateIndex",
    "TreeKernel",
    "certify_psd_exact",
    "check_psd_numeric",
    "find_parameter_folner",
    "find_parameter_tree",
    "gram_matrix",
    "make_kernel",
    "parse_group",
    "random_elements",
    "sample_points",
    "verify_property_o",
]

__version__ = "0.1.0"
