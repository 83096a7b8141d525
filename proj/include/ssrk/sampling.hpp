#pragma once

#include <span>
#include <vector>

#include "ssrk/linalg.hpp"
#include "ssrk/random.hpp"
#include "ssrk/selectable_set.hpp"

namespace ssrk {

enum class WeightMode { uniform, row_norm };

/// Fixed row probabilities with their cumulative sums.
class RowWeights {
public:
    RowWeights(std::vector<double> probabilities, WeightMode mode);

    WeightMode mode() const { return mode_; }
    index_t size() const { return static_cast<index_t>(p_.size()); }
    std::span<const double> probabilities() const { return p_; }
    double probability(index_t i) const { return p_[static_cast<std::size_t>(i)]; }
    double min_probability() const { return p_min_; }

    /// Inverse-CDF draw: the first i with cumulative[i] > u * total.
    index_t draw(double u) const;

    /// Total probability of the members of `s`.
    double mass(const SelectableSet& s) const;

private:
    std::vector<double> p_;
    std::vector<double> cumulative_;
    WeightMode mode_;
    double p_min_ = 0.0;
};

RowWeights build_weights(const SparseMatrix& a, WeightMode mode);

index_t sample_row(const RowWeights& w, Rng& rng);

struct SampleResult {
    index_t row = -1;
    index_t attempts = 0;  // draws from the full distribution; 0 on the exact fallback path
};

/// Thrown by sample_selectable when the selectable set is empty.
class EmptySelectableSet : public std::runtime_error {
public:
    EmptySelectableSet() : std::runtime_error("selectable set is empty; every equation is solved") {}
};

/**
 * Draw i in S with probability p_i / sum_{j in S} p_j.
 *
 * Rejection sampling from the full distribution. When the expected number of
 * attempts 1 / p(S) would exceed 8m, switches to an exact inverse-CDF over
 * the members of S.
 */
SampleResult sample_selectable(const RowWeights& w, const SelectableSet& s, Rng& rng);

/// p_i / p(S) for i in S, zero elsewhere.
std::vector<double> conditional_pmf(const RowWeights& w, const SelectableSet& s);

}  // namespace ssrk
