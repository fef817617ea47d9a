"""Persistence scale-space kernels, landscapes and matching distances on persistence diagrams."""
from . import _backend
from .diagram import (
    PersistenceDiagram,
    multiset_union,
    parse_diagram,
    read_diagram_file,
    write_diagram,
    write_diagram_file,
)
from .filtration import (
    FilteredComplex,
    build_cubical_filtration,
    build_lower_star_filtration,
    build_path_filtration,
)
from .gram import GramMatrix, distance_matrix, export_gram, gram_matrix
from .indefiniteness import indefiniteness_search
from .kernel import feature_map_eval, feature_map_raster, pssk_distance, pssk_eval, stability_constant
from .landscape import Landscape, build_landscape, landscape_distance, landscape_kernel, landscape_stability_rhs
from .linalg import definiteness_check, sym_eigenvalues
from .matching import bottleneck_distance, wasserstein_distance
from .persistence import compute_persistence
from .retrieval import retrieval_eval
from .svm import cross_validate, svm_predict, svm_train

__version__ = "0.1.0"
BACKEND = _backend.NAME

__all__ = [
    "PersistenceDiagram", "multiset_union", "parse_diagram", "read_diagram_file", "write_diagram",
    "write_diagram_file", "FilteredComplex", "build_cubical_filtration", "build_lower_star_filtration",
    "build_path_filtration", "GramMatrix", "distance_matrix", "export_gram", "gram_matrix",
    "indefiniteness_search", "feature_map_eval", "feature_map_raster", "pssk_distance", "pssk_eval",
    "stability_constant", "Landscape", "build_landscape", "landscape_distance", "landscape_kernel",
    "landscape_stability_rhs", "definiteness_check", "sym_eigenvalues", "bottleneck_distance",
    "wasserstein_distance", "compute_persistence", "retrieval_eval", "cross_validate", "svm_predict",
    "svm_train",
]
