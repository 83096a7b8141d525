"""Selectable-set randomized Kaczmarz solvers.

Thin Python layer over the C++ core. Matrices come from ``load_matrix`` with a
generator spec (``"circulant:100"``, ``"block:100:10"``, ``"path:12"``, ...)
or a Matrix Market path.
"""

from ._core import (
    InvalidMatrix,
    MatrixMarketError,
    PlantedSystem,
    SparseMatrix,
    bench,
    bounds,
    gramian,
    graph_edges,
    load_matrix,
    max_independent_set,
    plant_solution,
    read_matrix_market,
    smallest_nonzero_singular_value,
    solve,
    structural_lower_bound,
    verify,
    write_matrix_market,
)

__all__ = [
    "InvalidMatrix",
    "MatrixMarketError",
    "PlantedSystem",
    "SparseMatrix",
    "bench",
    "bounds",
    "gramian",
    "graph_edges",
    "load_matrix",
    "max_independent_set",
    "plant_solution",
    "read_matrix_market",
    "smallest_nonzero_singular_value",
    "solve",
    "structural_lower_bound",
    "verify",
    "write_matrix_market",
]
