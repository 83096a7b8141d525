#include "ssrk/generators.hpp"

#include <random>
#include <stdexcept>

#include "ssrk/random.hpp"

namespace ssrk {

void StructuredPattern::validate(bool constructible) const {
    if (size < 2) throw std::invalid_argument("structured pattern needs m >= 2");
    switch (kind) {
        case Kind::path:
        case Kind::star:
            break;
        case Kind::cycle:
            if (constructible && size < 3) throw std::invalid_argument("cycle needs m >= 3");
            break;
        case Kind::banded:
            if (upper_bandwidth < 0 || lower_bandwidth < 0)
                throw std::invalid_argument("bandwidths must be non-negative");
            if (1 + upper_bandwidth + lower_bandwidth > size)
                throw std::invalid_argument("band width 1 + l1 + l2 exceeds m");
            break;
        case Kind::regular:
            if (degree < 0) throw std::invalid_argument("regular degree must be non-negative");
            if (constructible) {
                if (degree % 2 != 0)
                    throw std::invalid_argument("regular(l) is built from symmetric circulants; l must be even");
                if (degree >= size) throw std::invalid_argument("regular(l) needs l < m");
            }
            break;
    }
}

std::string StructuredPattern::name() const {
    switch (kind) {
        case Kind::path: return "path(" + std::to_string(size) + ")";
        case Kind::star: return "star(" + std::to_string(size) + ")";
        case Kind::cycle: return "cycle(" + std::to_string(size) + ")";
        case Kind::banded:
            return "banded(" + std::to_string(size) + "," + std::to_string(upper_bandwidth) + "," +
                   std::to_string(lower_bandwidth) + ")";
        case Kind::regular: return "regular(" + std::to_string(size) + "," + std::to_string(degree) + ")";
    }
    return "unknown";
}

namespace {

double signed_magnitude(Rng& rng) {
    const double magnitude = 0.5 + rng.uniform();
    return (rng() & 1U) ? magnitude : -magnitude;
}

SparseMatrix random_circulant_support(index_t m, index_t width, Rng& rng) {
    std::vector<Triplet> entries;
    for (index_t i = 0; i < m; ++i)
        for (index_t k = 0; k < width; ++k) entries.push_back({i, (i + k) % m, signed_magnitude(rng)});
    return SparseMatrix::from_triplets(m, m, std::move(entries));
}

}  // namespace

SparseMatrix gen_block_random(index_t m, index_t n, index_t blocks, std::uint64_t seed) {
    if (m < 1 || n < 1 || blocks < 1) throw std::invalid_argument("block_random: sizes must be positive");
    if (m % blocks != 0 || n % blocks != 0)
        throw std::invalid_argument("block_random: block count must divide both m and n");
    const index_t br = m / blocks, bc = n / blocks;
    Rng rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(blocks * br * bc));
    for (index_t blk = 0; blk < blocks; ++blk)
        for (index_t i = 0; i < br; ++i)
            for (index_t j = 0; j < bc; ++j) entries.push_back({blk * br + i, blk * bc + j, normal(rng)});
    return SparseMatrix::from_triplets(m, n, std::move(entries));
}

SparseMatrix gen_circulant(index_t m, std::span<const double> stencil, std::uint64_t /*seed*/) {
    const auto w = static_cast<index_t>(stencil.size());
    if (w < 1 || w >= m) throw std::invalid_argument("circulant: stencil length must satisfy 1 <= w < m");
    std::vector<Triplet> entries;
    for (index_t i = 0; i < m; ++i)
        for (index_t k = 0; k < w; ++k) entries.push_back({i, (i + k) % m, stencil[k]});
    return SparseMatrix::from_triplets(m, m, std::move(entries));
}

SparseMatrix gen_structured(const StructuredPattern& pattern, std::uint64_t seed) {
    pattern.validate(true);
    const index_t m = pattern.size;
    Rng rng(seed);
    std::vector<Triplet> entries;

    switch (pattern.kind) {
        case StructuredPattern::Kind::path:
            for (index_t i = 0; i < m; ++i) {
                entries.push_back({i, i, 1.0});
                entries.push_back({i, i + 1, signed_magnitude(rng)});
            }
            return SparseMatrix::from_triplets(m, m + 1, std::move(entries));

        case StructuredPattern::Kind::star:
            for (index_t j = 0; j < m - 1; ++j) entries.push_back({0, j, 1.0});
            for (index_t i = 1; i < m; ++i) entries.push_back({i, i - 1, 1.0});
            return SparseMatrix::from_triplets(m, m - 1, std::move(entries));

        case StructuredPattern::Kind::cycle:
            return random_circulant_support(m, 2, rng);

        case StructuredPattern::Kind::banded: {
            const index_t width = 1 + pattern.upper_bandwidth + pattern.lower_bandwidth;
            for (index_t i = 0; i < m; ++i)
                for (index_t k = 0; k < width; ++k) entries.push_back({i, i + k, signed_magnitude(rng)});
            return SparseMatrix::from_triplets(m, m + width - 1, std::move(entries));
        }

        case StructuredPattern::Kind::regular:
            return random_circulant_support(m, pattern.degree / 2 + 1, rng);
    }
    throw std::invalid_argument("unknown structured pattern");
}

PlantedSystem plant_solution_from(const SparseMatrix& a, std::span<const double> y) {
    if (y.size() != static_cast<std::size_t>(a.rows())) throw std::invalid_argument("plant_solution: |y| != m");
    Vector x_star = a.multiply_transpose(y);
    Vector b = a.multiply(x_star);
    return {a, std::move(x_star), std::move(b)};
}

PlantedSystem plant_solution(const SparseMatrix& a, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Vector y(static_cast<std::size_t>(a.rows()));
    for (auto& v : y) v = normal(rng);
    return plant_solution_from(a, y);
}

}  // namespace ssrk
