#include <doctest.h>

#include "ssrk/sampling.hpp"
#include "support.hpp"

using namespace ssrk;

namespace {

RowWeights seven_ths() { return RowWeights({1.0 / 7, 4.0 / 7, 2.0 / 7}, WeightMode::row_norm); }

SelectableSet set_of(index_t m, std::initializer_list<index_t> members) {
    SelectableSet s(m);
    for (index_t i : members) s.insert(i);
    return s;
}

double p_value_of_draws(const RowWeights& w, const SelectableSet& s, long draws, Rng& rng) {
    std::vector<long> counts(static_cast<std::size_t>(w.size()), 0);
    for (long k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(sample_selectable(w, s, rng).row)];
    return testing::chi_square_p_value(testing::chi_square_statistic(counts, conditional_pmf(w, s), draws),
                                       static_cast<int>(s.size()) - 1);
}

}  // namespace

TEST_CASE("weights") {
    Eigen::MatrixXd d(3, 2);
    d << 1, 0, 0, 2, 1, 1;
    const SparseMatrix a = SparseMatrix::from_dense(d);
    const RowWeights rn = build_weights(a, WeightMode::row_norm);
    CHECK(rn.probability(0) == doctest::Approx(1.0 / 7));
    CHECK(rn.probability(1) == doctest::Approx(4.0 / 7));
    CHECK(rn.probability(2) == doctest::Approx(2.0 / 7));
    const RowWeights un = build_weights(SparseMatrix::identity(4), WeightMode::uniform);
    for (index_t i = 0; i < 4; ++i) CHECK(un.probability(i) == 0.25);
    CHECK_THROWS(RowWeights({0.5, 0.0, 0.5}, WeightMode::uniform));
    CHECK_THROWS(RowWeights({0.5, 0.6}, WeightMode::uniform));
}

TEST_CASE("conditional pmf") {
    const RowWeights u3({1.0 / 3, 1.0 / 3, 1.0 / 3}, WeightMode::uniform);
    const auto full = conditional_pmf(u3, init_full(3));
    for (double p : full) CHECK(p == doctest::Approx(1.0 / 3));
    CHECK(conditional_pmf(u3, set_of(3, {2})) == std::vector<double>{0, 0, 1});
    const auto pmf = conditional_pmf(seven_ths(), set_of(3, {0, 1}));
    CHECK(pmf[0] == doctest::Approx(0.2));
    CHECK(pmf[1] == doctest::Approx(0.8));
    CHECK(pmf[2] == 0.0);
    const auto pmf2 = conditional_pmf(seven_ths(), set_of(3, {0, 2}));
    CHECK(pmf2[0] == doctest::Approx(1.0 / 3));
    CHECK(pmf2[2] == doctest::Approx(2.0 / 3));
}

TEST_CASE("sample_row law") {
    Rng rng(1);
    const RowWeights u2({0.5, 0.5}, WeightMode::uniform);
    long zeros = 0;
    for (int k = 0; k < 100000; ++k) zeros += sample_row(u2, rng) == 0;
    CHECK(zeros >= 49000);
    CHECK(zeros <= 51000);

    const RowWeights w = seven_ths();
    std::vector<long> counts(3, 0);
    for (int k = 0; k < 100000; ++k) ++counts[static_cast<std::size_t>(sample_row(w, rng))];
    const std::vector<double> p(w.probabilities().begin(), w.probabilities().end());
    CHECK(testing::chi_square_p_value(testing::chi_square_statistic(counts, p, 100000), 2) > 0.001);
}

TEST_CASE("sample_selectable law") {
    Rng rng(2);
    const RowWeights u4({0.25, 0.25, 0.25, 0.25}, WeightMode::uniform);
    CHECK(p_value_of_draws(u4, set_of(4, {1, 3}), 100000, rng) > 0.001);
    CHECK(p_value_of_draws(seven_ths(), set_of(3, {0, 2}), 100000, rng) > 0.001);
    CHECK(p_value_of_draws(seven_ths(), init_full(3), 100000, rng) > 0.001);

    // a full set never rejects
    for (int k = 0; k < 1000; ++k) CHECK(sample_selectable(u4, init_full(4), rng).attempts == 1);
    CHECK_THROWS_AS(sample_selectable(u4, SelectableSet(4), rng), EmptySelectableSet);
}

TEST_CASE("tiny selectable mass uses the exact fallback") {
    std::vector<double> p(100, 0.0);
    p[0] = 1e-6;
    for (std::size_t i = 1; i < p.size(); ++i) p[i] = (1.0 - 1e-6) / 99.0;
    const RowWeights w(p, WeightMode::row_norm);
    Rng rng(3);
    const SampleResult r = sample_selectable(w, set_of(100, {0}), rng);
    CHECK(r.row == 0);
    CHECK(r.attempts == 0);
}

TEST_CASE("non-repetitive rejection attempts average m/(m-1)") {
    Rng rng(4);
    for (index_t m : {2, 5, 20}) {
        const RowWeights w(std::vector<double>(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m)),
                           WeightMode::uniform);
        SelectableSet s = init_full(m);
        s.erase(0);
        long attempts = 0;
        const long draws = 100000;
        for (long k = 0; k < draws; ++k) attempts += sample_selectable(w, s, rng).attempts;
        const double expected = static_cast<double>(m) / static_cast<double>(m - 1);
        CHECK(static_cast<double>(attempts) / draws == doctest::Approx(expected).epsilon(0.02));
    }
}
