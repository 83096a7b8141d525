#include "ssrk/selectable_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ssrk {

SelectableSet::SelectableSet(index_t universe, bool full)
    : universe_(universe), words_((static_cast<std::size_t>(universe) + 63) / 64, 0) {
    if (universe < 0) throw std::invalid_argument("selectable set universe must be non-negative");
    if (full) fill();
}

void SelectableSet::check(index_t i) const {
    if (i < 0 || i >= universe_)
        throw std::out_of_range("index " + std::to_string(i) + " outside [0, " + std::to_string(universe_) + ")");
}

void SelectableSet::insert(index_t i) {
    check(i);
    auto& word = words_[static_cast<std::size_t>(i) >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (static_cast<std::size_t>(i) & 63U);
    if (!(word & bit)) {
        word |= bit;
        ++count_;
    }
}

void SelectableSet::erase(index_t i) {
    check(i);
    auto& word = words_[static_cast<std::size_t>(i) >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (static_cast<std::size_t>(i) & 63U);
    if (word & bit) {
        word &= ~bit;
        --count_;
    }
}

void SelectableSet::fill() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    if (const auto tail = static_cast<std::size_t>(universe_) & 63U; tail != 0)
        words_.back() = (std::uint64_t{1} << tail) - 1;
    count_ = universe_;
}

std::vector<index_t> SelectableSet::members() const {
    std::vector<index_t> out;
    out.reserve(static_cast<std::size_t>(count_));
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word) {
            out.push_back(static_cast<index_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(word))));
            word &= word - 1;
        }
    }
    return out;
}

std::vector<index_t> SelectableSet::complement() const {
    std::vector<index_t> out;
    out.reserve(static_cast<std::size_t>(universe_ - count_));
    for (index_t i = 0; i < universe_; ++i)
        if (!contains(i)) out.push_back(i);
    return out;
}

NonOrthogonalityGraph NonOrthogonalityGraph::from_edges(index_t nodes,
                                                        std::span<const std::pair<index_t, index_t>> edges) {
    if (nodes < 0) throw std::invalid_argument("graph node count must be non-negative");
    std::vector<std::vector<index_t>> lists(static_cast<std::size_t>(nodes));
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= nodes || j < 0 || j >= nodes) throw std::out_of_range("edge endpoint out of range");
        if (i == j) continue;
        lists[i].push_back(j);
        lists[j].push_back(i);
    }
    NonOrthogonalityGraph g;
    g.offsets_.push_back(0);
    for (auto& list : lists) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        g.adjacency_.insert(g.adjacency_.end(), list.begin(), list.end());
        g.offsets_.push_back(static_cast<index_t>(g.adjacency_.size()));
    }
    return g;
}

std::span<const index_t> NonOrthogonalityGraph::neighbors(index_t i) const {
    if (i < 0 || i >= nodes()) throw std::out_of_range("graph node out of range");
    return std::span<const index_t>(adjacency_).subspan(static_cast<std::size_t>(offsets_[i]),
                                                        static_cast<std::size_t>(degree(i)));
}

bool NonOrthogonalityGraph::adjacent(index_t i, index_t j) const {
    const auto adj = neighbors(i);
    return std::binary_search(adj.begin(), adj.end(), j);
}

std::vector<std::pair<index_t, index_t>> NonOrthogonalityGraph::edges() const {
    std::vector<std::pair<index_t, index_t>> out;
    for (index_t i = 0; i < nodes(); ++i)
        for (index_t j : neighbors(i))
            if (i < j) out.emplace_back(i, j);
    return out;
}

bool NonOrthogonalityGraph::is_independent(std::span<const index_t> set) const {
    std::vector<char> in(static_cast<std::size_t>(nodes()), 0);
    for (index_t v : set) in.at(static_cast<std::size_t>(v)) = 1;
    for (index_t v : set)
        for (index_t u : neighbors(v))
            if (in[u]) return false;
    return true;
}

SelectableSet init_full(index_t m) {
    if (m < 1) throw std::invalid_argument("selectable set needs at least one row");
    return SelectableSet(m, true);
}

void update_nonrepetitive(SelectableSet& s, index_t chosen) {
    if (chosen < 0 || chosen >= s.universe()) throw std::out_of_range("chosen row out of range");
    s.fill();
    s.erase(chosen);
}

void update_gramian(SelectableSet& s, index_t chosen, const NonOrthogonalityGraph& g) {
    if (g.nodes() != s.universe()) throw std::invalid_argument("graph and selectable set sizes differ");
    if (chosen < 0 || chosen >= s.universe() || !s.contains(chosen))
        throw std::invalid_argument("chosen row " + std::to_string(chosen) + " is not selectable");
    for (index_t j : g.neighbors(chosen)) s.insert(j);
    s.erase(chosen);
}

NonOrthogonalityGraph build_graph(const SparseMatrix& gram) {
    if (gram.rows() != gram.cols()) throw std::invalid_argument("build_graph: Gramian must be square");
    std::vector<std::pair<index_t, index_t>> edges;
    for (index_t i = 0; i < gram.rows(); ++i) {
        const RowView r = gram.row(i);
        for (std::size_t k = 0; k < r.size(); ++k)
            if (r.cols[k] > i && r.values[k] != 0.0) edges.emplace_back(i, r.cols[k]);
    }
    return NonOrthogonalityGraph::from_edges(gram.rows(), edges);
}

index_t structural_lower_bound(const StructuredPattern& pattern) {
    pattern.validate();
    const index_t m = pattern.size;
    switch (pattern.kind) {
        case StructuredPattern::Kind::path: return m / 2;
        case StructuredPattern::Kind::star: return 1;
        case StructuredPattern::Kind::cycle: return (m + 1) / 2;
        case StructuredPattern::Kind::banded: {
            const index_t band = pattern.upper_bandwidth + pattern.lower_bandwidth;
            return m * band / (band + 1);
        }
        case StructuredPattern::Kind::regular: return std::max((m + 1) / 2, pattern.degree);
    }
    throw std::invalid_argument("unknown structured pattern");
}

std::vector<index_t> forced_mis_sequence(const NonOrthogonalityGraph& g) {
    return max_independent_set(g, MisMode::exact).members;
}

}  // namespace ssrk
