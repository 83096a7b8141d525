#include "ssrk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssrk {

std::string to_string(Method method) {
    switch (method) {
        case Method::rk: return "rk";
        case Method::nssrk: return "nssrk";
        case Method::gssrk: return "gssrk";
        case Method::mdk: return "mdk";
        case Method::rgrk: return "rgrk";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "rk") return Method::rk;
    if (name == "nssrk") return Method::nssrk;
    if (name == "gssrk") return Method::gssrk;
    if (name == "mdk") return Method::mdk;
    if (name == "rgrk" || name == "grk") return Method::rgrk;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(WeightMode mode) { return mode == WeightMode::uniform ? "uniform" : "rownorm"; }

WeightMode parse_weight_mode(const std::string& name) {
    if (name == "uniform") return WeightMode::uniform;
    if (name == "rownorm" || name == "row-norm" || name == "squared-row-norm") return WeightMode::row_norm;
    throw std::invalid_argument("unknown weight mode '" + name + "'");
}

void MethodSpec::validate() const {
    if (theta && method != Method::rgrk) throw std::invalid_argument("theta only applies to rgrk");
    if (theta && !(*theta >= 0.0 && *theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be non-negative");
}

std::vector<index_t> ConvergenceTrace::rows() const {
    std::vector<index_t> out;
    for (const auto& r : records)
        if (r.row) out.push_back(*r.row);
    return out;
}

System::System(SparseMatrix a, Vector b, double orth_tol)
    : a_(std::move(a)), b_(std::move(b)), geometry_(row_norms(a_)), gram_(gramian(a_, orth_tol)),
      graph_(build_graph(gram_)) {
    if (b_.size() != static_cast<std::size_t>(a_.rows())) throw std::invalid_argument("System: |b| != rows of A");
    for (double v : b_)
        if (!std::isfinite(v)) throw std::invalid_argument("System: b has non-finite entries");
}

Strategy strategy_for(Method method) {
    switch (method) {
        case Method::rk: return Strategy::full;
        case Method::nssrk: return Strategy::non_repetitive;
        case Method::gssrk: return Strategy::gramian;
        default: throw std::invalid_argument(to_string(method) + " is not a selectable-set method");
    }
}

double kaczmarz_step(const SparseMatrix& a, std::span<const double> b, std::span<double> x, index_t i) {
    if (i < 0 || i >= a.rows()) throw std::out_of_range("kaczmarz_step: row index out of range");
    if (x.size() != static_cast<std::size_t>(a.cols()) || b.size() != static_cast<std::size_t>(a.rows()))
        throw std::invalid_argument("kaczmarz_step: dimension mismatch");
    const RowView row = a.row(i);
    const double residual = row.dot(x) - b[i];
    if (residual == 0.0) return 0.0;
    const double step = residual / row.squared_norm();
    for (std::size_t k = 0; k < row.size(); ++k) x[row.cols[k]] -= step * row.values[k];
    return residual;
}

Vector kaczmarz_step_copy(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, index_t i) {
    Vector out(x.begin(), x.end());
    kaczmarz_step(a, b, out, i);
    return out;
}

index_t select_max_distance(std::span<const double> residual, const RowGeometry& geo) {
    index_t best = 0;
    double best_value = -1.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const double v = residual[i] * residual[i] / geo.squared_norms[i];
        if (v > best_value) {
            best_value = v;
            best = static_cast<index_t>(i);
        }
    }
    return best;
}

index_t select_max_distance(const SparseMatrix& a, std::span<const double> b, std::span<const double> x) {
    Vector r = a.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return select_max_distance(r, row_norms(a));
}

double rgrk_threshold(std::span<const double> residual, const RowGeometry& geo, double theta) {
    double max_normalized = 0.0, total = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const double sq = residual[i] * residual[i];
        max_normalized = std::max(max_normalized, sq / geo.squared_norms[i]);
        total += sq;
    }
    const double threshold = theta * max_normalized + (1.0 - theta) * total / geo.frobenius_sq;
    // a convex combination never exceeds the max; rounding must not either
    return std::min(threshold, max_normalized);
}

index_t select_rgrk(std::span<const double> residual, const RowGeometry& geo, double theta, Rng& rng) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("select_rgrk: theta must lie in [0, 1]");
    if (std::all_of(residual.begin(), residual.end(), [](double r) { return r == 0.0; }))
        throw std::invalid_argument("select_rgrk: residual is zero, the iterate already solves the system");
    if (theta == 1.0) return select_max_distance(residual, geo);

    const double threshold = rgrk_threshold(residual, geo, theta);
    std::vector<index_t> eligible;
    std::vector<double> cumulative;
    double total = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const double sq = residual[i] * residual[i];
        if (sq > 0.0 && sq / geo.squared_norms[i] >= threshold) {
            total += sq;
            eligible.push_back(static_cast<index_t>(i));
            cumulative.push_back(total);
        }
    }
    const double target = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const auto pos = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), eligible.size() - 1);
    return eligible[pos];
}

index_t select_rgrk(const SparseMatrix& a, std::span<const double> b, std::span<const double> x, double theta,
                    Rng& rng) {
    Vector r = a.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return select_rgrk(r, row_norms(a), theta, rng);
}

namespace {

/// Iterate plus a residual r = A x - b kept current through Gramian columns.
class IterateState {
public:
    IterateState(const System& sys, Vector x) : sys_(sys), x_(std::move(x)) { resync(); }

    std::span<const double> x() const { return x_; }
    std::span<const double> residual() const { return r_; }

    /// Projects onto row i. Returns false when the row was already solved.
    bool step(index_t i) {
        const RowView row = sys_.a().row(i);
        const double res = row.dot(x_) - sys_.b()[i];
        if (res == 0.0) {
            r_[i] = 0.0;
            return false;
        }
        const double t = res / sys_.geometry().squared_norms[i];
        for (std::size_t k = 0; k < row.size(); ++k) x_[row.cols[k]] -= t * row.values[k];
        const RowView g = sys_.gram().row(i);
        for (std::size_t k = 0; k < g.size(); ++k) r_[g.cols[k]] -= t * g.values[k];
        r_[i] = row.dot(x_) - sys_.b()[i];
        if (++since_resync_ >= resync_period()) resync();
        return true;
    }

    double sq_residual() const { return squared_norm(r_); }

    void resync() {
        r_ = sys_.a().multiply(x_);
        for (std::size_t i = 0; i < r_.size(); ++i) r_[i] -= sys_.b()[i];
        since_resync_ = 0;
    }

    Vector release() && { return std::move(x_); }

private:
    index_t resync_period() const { return std::max<index_t>(64, sys_.rows()); }

    const System& sys_;
    Vector x_;
    Vector r_;
    index_t since_resync_ = 0;
};

Vector initial_iterate(const System& sys, const RunOptions& options) {
    if (!options.x0) return Vector(static_cast<std::size_t>(sys.cols()), 0.0);
    if (options.x0->size() != static_cast<std::size_t>(sys.cols()))
        throw std::invalid_argument("x0 has the wrong length");
    return *options.x0;
}

void check_x_star(const System& sys, const RunOptions& options) {
    if (options.x_star && options.x_star->size() != static_cast<std::size_t>(sys.cols()))
        throw std::invalid_argument("x_star has the wrong length");
}

class TraceBuilder {
public:
    TraceBuilder(const System& sys, const RunOptions& options, const MethodSpec& spec)
        : options_(options), stop_sq_(spec.tolerance * spec.tolerance * squared_norm(sys.b())) {}

    void record(index_t k, IterateState& state, index_t selectable, std::optional<index_t> row, index_t attempts) {
        TraceRecord rec;
        rec.iteration = k;
        if (options_.x_star) rec.sq_error = squared_distance(state.x(), *options_.x_star);
        rec.sq_residual = state.sq_residual();
        rec.selectable_size = selectable;
        rec.row = row;
        rec.attempts = attempts;
        trace_.records.push_back(rec);
    }

    /// True once the residual meets the tolerance, confirmed on a fresh residual.
    bool converged(IterateState& state) {
        if (trace_.records.back().sq_residual > stop_sq_) return false;
        state.resync();
        trace_.records.back().sq_residual = state.sq_residual();
        return trace_.records.back().sq_residual <= stop_sq_;
    }

    ConvergenceTrace finish(IterateState&& state, StopReason reason) {
        trace_.stop = reason;
        trace_.x = std::move(state).release();
        return std::move(trace_);
    }

private:
    const RunOptions& options_;
    double stop_sq_;
    ConvergenceTrace trace_;
};

}  // namespace

ConvergenceTrace run_ssrk(const System& sys, const MethodSpec& spec, Strategy strategy, const RunOptions& options) {
    spec.validate();
    check_x_star(sys, options);
    const index_t m = sys.rows();
    const RowWeights weights = build_weights(sys.a(), spec.weights);
    Rng rng(spec.seed, options.stream);

    IterateState state(sys, initial_iterate(sys, options));
    SelectableSet s = init_full(m);
    TraceBuilder trace(sys, options, spec);
    trace.record(0, state, s.size(), std::nullopt, 0);

    for (index_t k = 1; k <= spec.max_iterations; ++k) {
        if (trace.converged(state)) return trace.finish(std::move(state), StopReason::tolerance);

        const SampleResult pick = sample_selectable(weights, s, rng);
        state.step(pick.row);

        if (options.update_override) {
            options.update_override(s, pick.row, sys.graph());
        } else {
            switch (strategy) {
                case Strategy::full: break;
                case Strategy::non_repetitive: update_nonrepetitive(s, pick.row); break;
                case Strategy::gramian: update_gramian(s, pick.row, sys.graph()); break;
            }
        }
        trace.record(k, state, s.size(), pick.row, pick.attempts);
        if (options.observer) options.observer(k, state.x(), s, pick.row);
        if (s.empty()) return trace.finish(std::move(state), StopReason::selectable_set_empty);
    }
    if (trace.converged(state)) return trace.finish(std::move(state), StopReason::tolerance);
    return trace.finish(std::move(state), StopReason::max_iterations);
}

ConvergenceTrace run_method(const System& sys, const MethodSpec& spec, const RunOptions& options) {
    spec.validate();
    if (spec.method == Method::rk || spec.method == Method::nssrk || spec.method == Method::gssrk)
        return run_ssrk(sys, spec, strategy_for(spec.method), options);

    check_x_star(sys, options);
    const index_t m = sys.rows();
    const double theta = spec.method == Method::mdk ? 1.0 : spec.theta_or_default();
    Rng rng(spec.seed, options.stream);

    IterateState state(sys, initial_iterate(sys, options));
    const SelectableSet all = init_full(m);
    TraceBuilder trace(sys, options, spec);
    trace.record(0, state, m, std::nullopt, 0);

    for (index_t k = 1; k <= spec.max_iterations; ++k) {
        if (trace.converged(state)) return trace.finish(std::move(state), StopReason::tolerance);
        const auto r = state.residual();
        if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; }))
            return trace.finish(std::move(state), StopReason::tolerance);

        const index_t row = spec.method == Method::mdk ? select_max_distance(r, sys.geometry())
                                                       : select_rgrk(r, sys.geometry(), theta, rng);
        state.step(row);
        trace.record(k, state, m, row, 1);
        if (options.observer) options.observer(k, state.x(), all, row);
    }
    if (trace.converged(state)) return trace.finish(std::move(state), StopReason::tolerance);
    return trace.finish(std::move(state), StopReason::max_iterations);
}

}  // namespace ssrk
