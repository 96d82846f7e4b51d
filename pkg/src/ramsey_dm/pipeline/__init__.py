"""Search drivers: degree-matrix pipeline, subcoloring libraries, embeddings, circulants."""

from .embedding import (
    CirculantResult,
    EmbeddingInstance,
    EmbeddingSet,
    RefutationReport,
    complete_instance,
    find_circulant_coloring,
    generate_embeddings,
    neighborhood_libraries,
    realize,
    refute_degree_triple,
    refute_instance_file,
    vertex_degrees,
)
from .manifest import JobManifest, ManifestLocked, run_jobs
from .runner import run_degree_matrix_pipeline
from .stages import (
    BoundsVerdict,
    FilterResult,
    PipelineResult,
    color_symmetries,
    color_variants,
    enumerate_lex,
    enumerate_per_matrix,
    filter_matrices_sat,
    filter_sequences_sat,
    ramsey_classes,
    solution_classes,
    subcoloring_library,
    verify_degree_bounds,
)

__all__ = [
    "BoundsVerdict",
    "CirculantResult",
    "EmbeddingInstance",
    "EmbeddingSet",
    "FilterResult",
    "JobManifest",
    "ManifestLocked",
    "PipelineResult",
    "RefutationReport",
    "color_symmetries",
    "color_variants",
    "complete_instance",
    "enumerate_lex",
    "enumerate_per_matrix",
    "filter_matrices_sat",
    "filter_sequences_sat",
    "find_circulant_coloring",
    "generate_embeddings",
    "neighborhood_libraries",
    "ramsey_classes",
    "realize",
    "refute_degree_triple",
    "refute_instance_file",
    "run_degree_matrix_pipeline",
    "run_jobs",
    "solution_classes",
    "subcoloring_library",
    "verify_degree_bounds",
    "vertex_degrees",
]
