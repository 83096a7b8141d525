#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ssrk/generators.hpp"
#include "ssrk/random.hpp"

namespace ssrk::testing {

/// Pearson statistic of `counts` against `pmf`, cells with zero probability must be empty.
inline double chi_square_statistic(const std::vector<long>& counts, const std::vector<double>& pmf, long draws) {
    double stat = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (pmf[i] == 0.0) {
            if (counts[i] != 0) return INFINITY;
            continue;
        }
        const double expected = pmf[i] * static_cast<double>(draws);
        const double d = static_cast<double>(counts[i]) - expected;
        stat += d * d / expected;
    }
    return stat;
}

inline double chi_square_p_value(double stat, int dof) {
    if (dof <= 0) return stat == 0.0 ? 1.0 : 0.0;
    if (!std::isfinite(stat)) return 0.0;
    const boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

inline Eigen::MatrixXd random_dense(index_t m, index_t n, Rng& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd d(m, n);
    for (index_t i = 0; i < m; ++i)
        for (index_t j = 0; j < n; ++j) d(i, j) = normal(rng);
    return d;
}

/// Random sparse matrix with no zero rows: each row keeps each column with probability `density`.
inline SparseMatrix random_sparse(index_t m, index_t n, double density, Rng& rng) {
    std::normal_distribution<double> normal;
    std::vector<Triplet> t;
    for (index_t i = 0; i < m; ++i) {
        bool any = false;
        for (index_t j = 0; j < n; ++j) {
            if (rng.uniform() < density) {
                t.push_back({i, j, normal(rng)});
                any = true;
            }
        }
        if (!any) t.push_back({i, static_cast<index_t>(rng() % static_cast<std::uint64_t>(n)), 1.0 + rng.uniform()});
    }
    return SparseMatrix::from_triplets(m, n, std::move(t));
}

}  // namespace ssrk::testing
