#pragma once

#include <cstdint>
#include <span>

#include "ssrk/linalg.hpp"
#include "ssrk/pattern.hpp"

namespace ssrk {

struct PlantedSystem {
    SparseMatrix a;
    Vector x_star;
    Vector b;
};

/// Block-diagonal m x n matrix of `blocks` dense standard-normal blocks.
SparseMatrix gen_block_random(index_t m, index_t n, index_t blocks, std::uint64_t seed);

/// Row i carries stencil[k] at column (i + k) mod m. The values are used
/// verbatim; `seed` is accepted for interface uniformity and has no effect.
SparseMatrix gen_circulant(index_t m, std::span<const double> stencil, std::uint64_t seed = 0);

/**
 * Matrix whose non-orthogonality graph is exactly `pattern`.
 *
 * Nonzeros are uniform in [0.5, 1.5] with a random sign.
 *   path     row i on columns {i, i+1}, n = m + 1
 *   star     row 0 all ones over n = m - 1 columns, row i = e_{i-1}
 *   cycle    circulant support {i, i+1 mod m}
 *   banded   row i on columns {i, ..., i + l1 + l2}, n = m + l1 + l2
 *   regular  circulant support {i, ..., i + l/2 mod m}
 */
SparseMatrix gen_structured(const StructuredPattern& pattern, std::uint64_t seed);

/// x* = A^T y with y standard normal, b = A x*.
PlantedSystem plant_solution(const SparseMatrix& a, std::uint64_t seed);
PlantedSystem plant_solution_from(const SparseMatrix& a, std::span<const double> y);

}  // namespace ssrk
