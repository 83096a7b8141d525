#pragma once

#include <span>
#include <string>
#include <vector>

#include "ssrk/linalg.hpp"
#include "ssrk/sampling.hpp"
#include "ssrk/selectable_set.hpp"

namespace ssrk {

/// sigma_min(P^{1/2} D^{-1} A)^2 for the given weights.
double weighted_sigma_min_sq(const SparseMatrix& a, const RowWeights& w);

/// ||A||_F^2 - min_i ||A_i||^2.
double gamma_constant(const RowGeometry& geo);

/// Brute-force form: max over i of the sum of the other rows' squared norms.
double gamma_constant_by_exclusion(const RowGeometry& geo);

/// 1 - sigma_min^2(P^{1/2} D^{-1} A) / sum_{j in S} p_j.
double thm1_factor(const SparseMatrix& a, const RowWeights& w, const SelectableSet& s);

/// Uniform-probability form: 1 - sigma_min^2(D^{-1} A) / |S|.
double cor_uniform_factor(const SparseMatrix& a, index_t s_size);

/// Row-norm-probability form: 1 - sigma_min^2(A) / sum_{j in S} ||A_j||^2.
double cor_rownorm_factor(const SparseMatrix& a, const SelectableSet& s);

/// Relaxed greedy rate: 1 - (theta ||A||_F^2 / gamma + 1 - theta) sigma_min^2(A) / ||A||_F^2.
double rgrk_factor(const SparseMatrix& a, double theta);

/// E ||x' - x*||^2 over one SSRK step from x, by enumerating every i in S.
double exact_one_step_expectation(const SparseMatrix& a, std::span<const double> b, std::span<const double> x,
                                  std::span<const double> x_star, const RowWeights& w, const SelectableSet& s);

/**
 * Contraction factors for one matrix with the singular values computed once.
 *
 * Factors that round marginally outside [0, 1] are clamped and a warning is
 * written to std::clog.
 */
class BoundsEngine {
public:
    BoundsEngine(const SparseMatrix& a, const RowWeights& w);

    double sigma_min_sq() const { return sigma_min_sq_; }
    double sigma_min_sq_normalized() const { return sigma_min_sq_normalized_; }
    double sigma_min_sq_weighted() const { return sigma_min_sq_weighted_; }
    double frobenius_sq() const { return geo_.frobenius_sq; }
    double gamma() const { return gamma_constant(geo_); }
    const RowGeometry& geometry() const { return geo_; }

    double selectable_factor(const SelectableSet& s) const;
    double uniform(index_t s_size) const;
    double rownorm(const SelectableSet& s) const;
    double rgrk(double theta) const;

private:
    RowWeights weights_;
    RowGeometry geo_;
    double sigma_min_sq_ = 0.0;
    double sigma_min_sq_normalized_ = 0.0;
    double sigma_min_sq_weighted_ = 0.0;
};

struct BoundReport {
    index_t rows = 0;
    index_t cols = 0;
    WeightMode weights = WeightMode::uniform;
    double sigma_min_sq = 0.0;             // sigma_min^2(A)
    double sigma_min_sq_normalized = 0.0;  // sigma_min^2(D^{-1} A)
    double sigma_min_sq_weighted = 0.0;    // sigma_min^2(P^{1/2} D^{-1} A)
    double frobenius_sq = 0.0;
    double gamma = 0.0;

    struct Factor {
        std::string name;
        double value;
    };
    std::vector<Factor> factors;
};

/// Report with the standard queries: full-set rate, |S| = m - 1 rates,
/// the row-norm worst case over single exclusions, and rgrk at theta in {0, 1/2, 1}.
BoundReport bound_report(const SparseMatrix& a, WeightMode mode);

std::string format_report_text(const BoundReport& report);
std::string format_report_csv(const BoundReport& report);

/// Clamps to [0, 1], warning on std::clog when the value was outside.
double clamp_factor(double value, const char* what);

}  // namespace ssrk
