"""Exact-arithmetic Lie algebra cohomology for graded nilpotent symbols.

The package computes Chevalley-Eilenberg cohomology of graded nilpotent Lie
algebras with module coefficients over exact rationals, Tanaka prolongations,
invariant subspaces under the degree-0 action, and the curvature classes of
the catalog's homogeneous models.
"""

__version__ = "0.1.0"

from .linalg import Matrix, Rational, SubspaceBasis, rat
from .lie_core import (
    GradedLieAlgebra,
    InnerProduct,
    Representation,
    StructureError,
    ValidationReport,
    quotient_module,
    restricted_adjoint,
    validate,
)
from .catalog import (
    CatalogError,
    FilteredDeformation,
    SymbolPackage,
    filtration_submodule,
    from_identifier,
    model_deformations,
)
from .cohomology import (
    Cochain,
    CochainSpace,
    CohomologyCell,
    CohomologyError,
    cohomology_cell,
    connecting_hom,
    differential,
    envelope_pair,
    generator_cochains,
    homogeneity_scan,
    long_exact_sequence_nodes,
    spencer_split,
    theorem3_split,
)
from .prolongation import ProlongationError, ProlongationResult, prolong
from .models import (
    ClassificationReport,
    Curvature,
    InvariantReport,
    ModelError,
    classify,
    deformation_curvature,
    g0_invariants,
    invariant_report,
)
from .specfile import ParsedFile, SpecFileError, dumps, load, loads

__all__ = [
    "__version__",
    "Matrix", "Rational", "SubspaceBasis", "rat",
    "GradedLieAlgebra", "InnerProduct", "Representation", "StructureError",
    "ValidationReport", "quotient_module", "restricted_adjoint", "validate",
    "CatalogError", "FilteredDeformation", "SymbolPackage",
    "filtration_submodule", "from_identifier", "model_deformations",
    "Cochain", "CochainSpace", "CohomologyCell", "CohomologyError",
    "cohomology_cell", "connecting_hom", "differential", "envelope_pair",
    "generator_cochains", "homogeneity_scan", "long_exact_sequence_nodes",
    "spencer_split", "theorem3_split",
    "ProlongationError", "ProlongationResult", "prolong",
    "ClassificationReport", "Curvature", "InvariantReport", "ModelError",
    "classify", "deformation_curvature", "g0_invariants", "invariant_report",
    "ParsedFile", "SpecFileError", "dumps", "load", "loads",
]
