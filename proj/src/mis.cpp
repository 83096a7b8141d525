#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ssrk/selectable_set.hpp"

namespace ssrk {

namespace {

using Mask = std::uint64_t;

Mask bit(index_t v) { return Mask{1} << v; }

class BranchAndBound {
public:
    explicit BranchAndBound(const NonOrthogonalityGraph& g) : adj_(static_cast<std::size_t>(g.nodes()), 0) {
        for (index_t v = 0; v < g.nodes(); ++v)
            for (index_t u : g.neighbors(v)) adj_[v] |= bit(u);
    }

    Mask solve(Mask initial_best) {
        best_ = initial_best;
        best_size_ = std::popcount(initial_best);
        const Mask all = adj_.size() == 64 ? ~Mask{0} : (bit(static_cast<index_t>(adj_.size())) - 1);
        search(all, 0);
        return best_;
    }

private:
    // Greedy clique partition of `cand`; an independent set meets each clique at most once.
    int clique_cover(Mask cand) const {
        int cliques = 0;
        while (cand) {
            const int v = std::countr_zero(cand);
            Mask clique = bit(v);
            Mask grow = cand & adj_[v];
            while (grow) {
                const int u = std::countr_zero(grow);
                clique |= bit(u);
                grow &= adj_[u];
            }
            cand &= ~clique;
            ++cliques;
        }
        return cliques;
    }

    void search(Mask cand, Mask current) {
        // vertices of degree <= 1 belong to some maximum independent set
        for (bool reduced = true; reduced && cand;) {
            reduced = false;
            for (Mask scan = cand; scan; scan &= scan - 1) {
                const int v = std::countr_zero(scan);
                if (std::popcount(adj_[v] & cand) <= 1) {
                    current |= bit(v);
                    cand &= ~(bit(v) | adj_[v]);
                    reduced = true;
                    break;
                }
            }
        }
        const int size = std::popcount(current);
        if (!cand) {
            if (size > best_size_) {
                best_ = current;
                best_size_ = size;
            }
            return;
        }
        if (size + std::popcount(cand) <= best_size_) return;
        if (size + clique_cover(cand) <= best_size_) return;

        int pivot = -1, pivot_degree = -1;
        for (Mask scan = cand; scan; scan &= scan - 1) {
            const int v = std::countr_zero(scan);
            const int d = std::popcount(adj_[v] & cand);
            if (d > pivot_degree) {
                pivot = v;
                pivot_degree = d;
            }
        }
        search(cand & ~(bit(pivot) | adj_[pivot]), current | bit(pivot));
        search(cand & ~bit(pivot), current);
    }

    std::vector<Mask> adj_;
    Mask best_ = 0;
    int best_size_ = 0;
};

std::vector<index_t> greedy_mis(const NonOrthogonalityGraph& g) {
    const index_t m = g.nodes();
    std::vector<char> alive(static_cast<std::size_t>(m), 1);
    std::vector<index_t> degree(static_cast<std::size_t>(m));
    for (index_t v = 0; v < m; ++v) degree[v] = g.degree(v);

    std::vector<index_t> chosen;
    for (index_t remaining = m; remaining > 0;) {
        index_t pick = -1;
        for (index_t v = 0; v < m; ++v)
            if (alive[v] && (pick < 0 || degree[v] < degree[pick])) pick = v;
        chosen.push_back(pick);
        auto kill = [&](index_t v) {
            if (!alive[v]) return;
            alive[v] = 0;
            --remaining;
            for (index_t u : g.neighbors(v))
                if (alive[u]) --degree[u];
        };
        kill(pick);
        for (index_t u : g.neighbors(pick)) kill(u);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace

MisResult max_independent_set(const NonOrthogonalityGraph& g, MisMode mode) {
    const index_t m = g.nodes();
    if (mode == MisMode::exact && m > kExactMisLimit)
        throw std::invalid_argument("exact maximum independent set limited to " + std::to_string(kExactMisLimit) +
                                    " nodes, graph has " + std::to_string(m));
    std::vector<index_t> greedy = greedy_mis(g);
    if (mode == MisMode::greedy || m > kExactMisLimit) return {std::move(greedy), false};

    Mask seed = 0;
    for (index_t v : greedy) seed |= bit(v);
    const Mask best = BranchAndBound(g).solve(seed);

    MisResult result{{}, true};
    for (Mask scan = best; scan; scan &= scan - 1) result.members.push_back(std::countr_zero(scan));
    return result;
}

}  // namespace ssrk
