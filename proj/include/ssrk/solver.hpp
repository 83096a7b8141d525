#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssrk/linalg.hpp"
#include "ssrk/random.hpp"
#include "ssrk/sampling.hpp"
#include "ssrk/selectable_set.hpp"

namespace ssrk {

enum class Method { rk, nssrk, gssrk, mdk, rgrk };

std::string to_string(Method method);
Method parse_method(const std::string& name);
std::string to_string(WeightMode mode);
WeightMode parse_weight_mode(const std::string& name);

struct MethodSpec {
    Method method = Method::rk;
    WeightMode weights = WeightMode::uniform;
    std::optional<double> theta;  // rgrk only
    index_t max_iterations = 1000;
    double tolerance = 1e-10;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument when theta is set for a non-rgrk method,
    /// out of [0, 1], or tolerance is not positive.
    void validate() const;
    double theta_or_default() const { return theta.value_or(0.5); }
};

struct TraceRecord {
    index_t iteration = 0;
    std::optional<double> sq_error;  // ||x^k - x*||^2 when x* is known
    double sq_residual = 0.0;        // ||A x^k - b||^2
    index_t selectable_size = 0;     // |S_k|, the set the step from x^k samples from
    std::optional<index_t> row;      // row chosen to produce x^k
    index_t attempts = 0;            // sampling attempts spent on that row
};

enum class StopReason { max_iterations, tolerance, selectable_set_empty };

struct ConvergenceTrace {
    std::vector<TraceRecord> records;  // records[0] describes x^0
    Vector x;                          // final iterate
    StopReason stop = StopReason::max_iterations;

    index_t iterations() const { return static_cast<index_t>(records.size()) - 1; }
    std::vector<index_t> rows() const;
};

/**
 * Everything a run needs that depends only on (A, b): row geometry, the
 * Gramian and its non-orthogonality graph. Built once and shared read-only
 * across trials.
 */
class System {
public:
    System(SparseMatrix a, Vector b, double orth_tol = 0.0);

    const SparseMatrix& a() const { return a_; }
    std::span<const double> b() const { return b_; }
    const RowGeometry& geometry() const { return geometry_; }
    const SparseMatrix& gram() const { return gram_; }
    const NonOrthogonalityGraph& graph() const { return graph_; }
    index_t rows() const { return a_.rows(); }
    index_t cols() const { return a_.cols(); }

private:
    SparseMatrix a_;
    Vector b_;
    RowGeometry geometry_;
    SparseMatrix gram_;
    NonOrthogonalityGraph graph_;
};

/// Projects x onto {y : A_i y = b_i} in place; returns the pre-step residual A_i x - b_i.
double kaczmarz_step(const SparseMatrix& a, std::span<const double> b, std::span<double> x, index_t i);

/// Value-returning form of the projection.
Vector kaczmarz_step_copy(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, index_t i);

/// Lowest-index argmax of |r_i| / ||A_i||.
index_t select_max_distance(std::span<const double> residual, const RowGeometry& geo);
index_t select_max_distance(const SparseMatrix& a, std::span<const double> b, std::span<const double> x);

/// Squared normalised residual threshold a row must meet to be eligible for RGRK.
double rgrk_threshold(std::span<const double> residual, const RowGeometry& geo, double theta);

/// RGRK row choice: sample proportional to r_i^2 among rows meeting the
/// threshold. theta = 1 is the deterministic lowest-index argmax.
index_t select_rgrk(std::span<const double> residual, const RowGeometry& geo, double theta, Rng& rng);
index_t select_rgrk(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, double theta,
                    Rng& rng);

/// Called after every step with the iterate, the selectable set that will
/// govern the next step (full set for mdk/rgrk), and the chosen row.
using StepObserver = std::function<void(index_t iteration, std::span<const double> x, const SelectableSet& s,
                                        index_t row)>;

/// Strategy override for the selectable-set update, used by negative-control tests.
using SelectableUpdate = std::function<void(SelectableSet& s, index_t row, const NonOrthogonalityGraph& g)>;

struct RunOptions {
    std::optional<Vector> x0;
    std::optional<Vector> x_star;
    StepObserver observer;
    SelectableUpdate update_override;
    /// Stream id passed to Rng(spec.seed, stream).
    std::uint64_t stream = 0;
};

/// Selectable-set Kaczmarz loop for rk (full), nssrk and gssrk.
ConvergenceTrace run_ssrk(const System& sys, const MethodSpec& spec, Strategy strategy,
                          const RunOptions& options = {});

/// Dispatches every method, including the greedy baselines mdk and rgrk.
ConvergenceTrace run_method(const System& sys, const MethodSpec& spec, const RunOptions& options = {});

Strategy strategy_for(Method method);

}  // namespace ssrk
