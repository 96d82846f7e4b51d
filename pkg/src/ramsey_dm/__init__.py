"""SAT-based search for multicolor Ramsey colorings, partitioned by degree matrices."""

from .canon import canonical_form, canonical_labeling, class_representatives, reduce_mod_weak_iso, weakly_isomorphic
from .degseq import dm_equivalent, enum_degree_matrices, enum_degree_sequences, is_graphical, lex_canonical_dm
from .graph import (
    BudgetExceeded,
    ColoredGraph,
    PartialColoredGraph,
    apply_perms,
    color_degree,
    degree_matrix,
    is_ramsey_coloring,
    neighbor_subgraph,
    read_graph,
    read_graphs,
    write_graph,
    write_graphs,
)
from .model import (
    ColoringProblem,
    ConstraintModel,
    circulant_model,
    degree_matrix_model,
    fix_partial,
    ramsey_model,
    sb_lex,
    sb_lex_dm,
)

__all__ = [
    "BudgetExceeded",
    "ColoredGraph",
    "ColoringProblem",
    "ConstraintModel",
    "PartialColoredGraph",
    "apply_perms",
    "canonical_form",
    "canonical_labeling",
    "circulant_model",
    "class_representatives",
    "color_degree",
    "degree_matrix",
    "degree_matrix_model",
    "dm_equivalent",
    "enum_degree_matrices",
    "enum_degree_sequences",
    "fix_partial",
    "is_graphical",
    "is_ramsey_coloring",
    "lex_canonical_dm",
    "neighbor_subgraph",
    "ramsey_model",
    "read_graph",
    "read_graphs",
    "reduce_mod_weak_iso",
    "sb_lex",
    "sb_lex_dm",
    "weakly_isomorphic",
    "write_graph",
    "write_graphs",
]
