#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ssrk/linalg.hpp"
#include "ssrk/pattern.hpp"

namespace ssrk {

/// Bitset over [m] with a cached cardinality.
class SelectableSet {
public:
    SelectableSet() = default;
    explicit SelectableSet(index_t universe, bool full = false);

    index_t universe() const { return universe_; }
    index_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(index_t i) const {
        return (words_[static_cast<std::size_t>(i) >> 6] >> (static_cast<std::size_t>(i) & 63U)) & 1U;
    }
    void insert(index_t i);
    void erase(index_t i);
    void fill();

    std::vector<index_t> members() const;
    std::vector<index_t> complement() const;

    friend bool operator==(const SelectableSet&, const SelectableSet&) = default;

private:
    void check(index_t i) const;

    index_t universe_ = 0;
    index_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Rows as nodes, an edge wherever two distinct rows are not orthogonal.
class NonOrthogonalityGraph {
public:
    NonOrthogonalityGraph() = default;

    /// Symmetrises and deduplicates; self-loops are dropped.
    static NonOrthogonalityGraph from_edges(index_t nodes, std::span<const std::pair<index_t, index_t>> edges);

    index_t nodes() const { return static_cast<index_t>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::span<const index_t> neighbors(index_t i) const;
    index_t degree(index_t i) const { return offsets_[i + 1] - offsets_[i]; }
    bool adjacent(index_t i, index_t j) const;
    std::size_t edge_count() const { return adjacency_.size() / 2; }

    /// Edges (i, j) with i < j in lexicographic order.
    std::vector<std::pair<index_t, index_t>> edges() const;
    bool is_independent(std::span<const index_t> nodes) const;

    friend bool operator==(const NonOrthogonalityGraph&, const NonOrthogonalityGraph&) = default;

private:
    std::vector<index_t> offsets_;
    std::vector<index_t> adjacency_;
};

enum class Strategy { full, non_repetitive, gramian };

SelectableSet init_full(index_t m);

/// S <- [m] \ {i}.
void update_nonrepetitive(SelectableSet& s, index_t chosen);

/// S <- (S u adj(i)) \ {i}. Throws std::invalid_argument when i is not in S.
void update_gramian(SelectableSet& s, index_t chosen, const NonOrthogonalityGraph& g);

/// Off-diagonal nonzero pattern of a square symmetric matrix.
NonOrthogonalityGraph build_graph(const SparseMatrix& gram);

enum class MisMode {
    exact,      // branch and bound, throws above kExactMisLimit nodes
    greedy,     // maximal set from minimum-degree greedy
    automatic,  // exact when it fits, greedy otherwise
};

inline constexpr index_t kExactMisLimit = 64;

struct MisResult {
    std::vector<index_t> members;  // sorted
    bool exact = false;
};

MisResult max_independent_set(const NonOrthogonalityGraph& g, MisMode mode = MisMode::exact);

/// Closed-form lower bound on |S_k| for Gramian selectable sets on `pattern`.
index_t structural_lower_bound(const StructuredPattern& pattern);

/// Members of an exact maximum independent set in increasing order. Feeding
/// them to GSSRK one after another leaves exactly m - |M| selectable rows.
std::vector<index_t> forced_mis_sequence(const NonOrthogonalityGraph& g);

}  // namespace ssrk
