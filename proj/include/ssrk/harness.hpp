#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssrk/generators.hpp"
#include "ssrk/solver.hpp"

namespace ssrk {

/**
 * Resolve a matrix source: either a generator spec or a Matrix Market path.
 *
 *   circulant:M[:W]      ones stencil of width W (default 2)
 *   block:M:B | block:M:N:B
 *   identity:M
 *   path:M  star:M  cycle:M  banded:M:L1:L2  regular:M:L
 *
 * Anything else is read as a .mtx file.
 */
SparseMatrix load_matrix(const std::string& source, std::uint64_t seed);

/// Seed used for the planted solution of a matrix generated from `seed`.
std::uint64_t planted_seed(std::uint64_t seed);

struct ExperimentConfig {
    std::string matrix = "circulant:100";
    std::vector<Method> methods{Method::rk, Method::nssrk, Method::gssrk, Method::rgrk};
    WeightMode weights = WeightMode::uniform;
    double theta = 0.5;
    index_t trials = 200;
    index_t iterations = 5000;
    double tolerance = 1e-10;
    std::uint64_t seed = 0;
    std::string output;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Reads key=value lines (# comments) into `cfg`; unknown keys throw.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

struct AveragedCurve {
    std::string method;
    std::vector<double> mean_sq_error;
    std::vector<double> mean_selectable_size;
};

/**
 * Runs every method for `trials` independent trials on one planted system
 * and averages pointwise per iteration. Trial t samples from stream t of the
 * base seed. Runs that stop early hold their final values for the remaining
 * iterations. The reduction sums in trial order, so the output does not
 * depend on thread scheduling.
 */
std::vector<AveragedCurve> run_experiment(const ExperimentConfig& cfg);
std::vector<AveragedCurve> run_experiment(const PlantedSystem& planted, const ExperimentConfig& cfg);

void emit_csv(const std::vector<AveragedCurve>& curves, std::ostream& out);
std::vector<AveragedCurve> parse_curves_csv(std::istream& in);

void emit_trace_csv(const ConvergenceTrace& trace, std::ostream& out);

// Invariant checks shared by `verify` and the test suites.

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t evaluations = 0;
    double worst = 0.0;  // largest violation ratio seen (<= 1 passes)
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    std::string format() const;
};

struct CheckOptions {
    index_t iterations = 400;
    std::uint64_t seed = 0;
    index_t max_snapshots = 200;
    SelectableUpdate gramian_update;  // replaces update_gramian when set
};

/// |A_i x^k - b_i| <= 1e-8 ||A_i|| (1 + ||x^k||) for every row outside S_k.
CheckResult check_residual_contract(const System& sys, Method method, const CheckOptions& opts);

/// S_k^C independent in the graph; also |S_k| >= m - alpha when exact MIS fits.
CheckResult check_complement_independence(const System& sys, const CheckOptions& opts);

/// ||x^{k+1} - x*||^2 = ||x^k - x*||^2 - r_i^2 / ||A_i||^2 and monotone decrease.
CheckResult check_pythagorean(const System& sys, std::span<const double> x_star, Method method,
                              WeightMode weights, const CheckOptions& opts);

/// Rows solved before a step and orthogonal to the chosen row stay solved.
CheckResult check_orthogonal_rows_stay_solved(const System& sys, Method method, const CheckOptions& opts);

/// Exact one-step expectation never exceeds the selectable-set contraction bound.
CheckResult check_one_step_bound(const System& sys, std::span<const double> x_star, Method method, WeightMode weights,
                       const CheckOptions& opts);

/// Iterates stay in the row space of A (dense projector; small systems only).
CheckResult check_row_space(const System& sys, Method method, const CheckOptions& opts);

struct VerifyOptions {
    CheckOptions check;
};

VerifyReport verify(const SparseMatrix& a, std::uint64_t seed, const VerifyOptions& opts = {});

}  // namespace ssrk
