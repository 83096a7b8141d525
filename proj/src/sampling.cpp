#include "ssrk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ssrk {

RowWeights::RowWeights(std::vector<double> probabilities, WeightMode mode)
    : p_(std::move(probabilities)), cumulative_(p_.size()), mode_(mode) {
    if (p_.empty()) throw std::invalid_argument("row weights need at least one row");
    for (double p : p_)
        if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("row probabilities must be positive");
    std::partial_sum(p_.begin(), p_.end(), cumulative_.begin());
    if (std::abs(cumulative_.back() - 1.0) > 1e-12)
        throw std::invalid_argument("row probabilities must sum to one");
    p_min_ = *std::min_element(p_.begin(), p_.end());
}

index_t RowWeights::draw(double u) const {
    const double target = u * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const auto i = static_cast<index_t>(it - cumulative_.begin());
    return std::min(i, size() - 1);
}

double RowWeights::mass(const SelectableSet& s) const {
    double total = 0.0;
    for (index_t i : s.members()) total += p_[i];
    return total;
}

RowWeights build_weights(const SparseMatrix& a, WeightMode mode) {
    const auto m = static_cast<std::size_t>(a.rows());
    std::vector<double> p(m);
    if (mode == WeightMode::uniform) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(m));
    } else {
        const RowGeometry geo = row_norms(a);
        for (std::size_t i = 0; i < m; ++i) p[i] = geo.squared_norms[i] / geo.frobenius_sq;
    }
    return RowWeights(std::move(p), mode);
}

index_t sample_row(const RowWeights& w, Rng& rng) { return w.draw(rng.uniform()); }

SampleResult sample_selectable(const RowWeights& w, const SelectableSet& s, Rng& rng) {
    if (s.universe() != w.size()) throw std::invalid_argument("selectable set and weights sizes differ");
    if (s.empty()) throw EmptySelectableSet();

    const double m = static_cast<double>(w.size());
    // p(S) >= |S| p_min, so only small sets can need the fallback
    if (static_cast<double>(s.size()) * w.min_probability() * 8.0 * m < 1.0) {
        const double mass = w.mass(s);
        if (mass * 8.0 * m < 1.0) {
            const std::vector<index_t> members = s.members();
            const double target = rng.uniform() * mass;
            double running = 0.0;
            for (index_t i : members) {
                running += w.probability(i);
                if (target < running) return {i, 0};
            }
            return {members.back(), 0};
        }
    }

    SampleResult result;
    do {
        result.row = sample_row(w, rng);
        ++result.attempts;
    } while (!s.contains(result.row));
    return result;
}

std::vector<double> conditional_pmf(const RowWeights& w, const SelectableSet& s) {
    if (s.universe() != w.size()) throw std::invalid_argument("selectable set and weights sizes differ");
    if (s.empty()) throw EmptySelectableSet();
    std::vector<double> pmf(static_cast<std::size_t>(w.size()), 0.0);
    const double mass = w.mass(s);
    for (index_t i : s.members()) pmf[i] = w.probability(i) / mass;
    return pmf;
}

}  // namespace ssrk
