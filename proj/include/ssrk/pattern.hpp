#pragma once

#include <string>

#include "ssrk/linalg.hpp"

namespace ssrk {

/// Named non-orthogonality graph shapes with closed-form selectable-set bounds.
struct StructuredPattern {
    enum class Kind { path, star, cycle, banded, regular };

    Kind kind = Kind::path;
    index_t size = 2;
    index_t upper_bandwidth = 0;  // banded: l1
    index_t lower_bandwidth = 0;  // banded: l2
    index_t degree = 0;           // regular: l

    static StructuredPattern path(index_t m) { return {Kind::path, m}; }
    static StructuredPattern star(index_t m) { return {Kind::star, m}; }
    static StructuredPattern cycle(index_t m) { return {Kind::cycle, m}; }
    static StructuredPattern banded(index_t m, index_t l1, index_t l2) { return {Kind::banded, m, l1, l2}; }
    static StructuredPattern regular(index_t m, index_t l) { return {Kind::regular, m, 0, 0, l}; }

    /// Throws std::invalid_argument on m < 2 or a band wider than m. When
    /// `constructible` is set, also requires what gen_structured can realise
    /// (regular degree even and below m, cycle of at least 3 nodes).
    void validate(bool constructible = false) const;

    std::string name() const;
};

}  // namespace ssrk
