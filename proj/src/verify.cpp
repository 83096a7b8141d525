#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ssrk/bounds.hpp"
#include "ssrk/harness.hpp"

namespace ssrk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

MethodSpec spec_for(Method method, WeightMode weights, const CheckOptions& opts) {
    MethodSpec spec;
    spec.method = method;
    spec.weights = weights;
    if (method == Method::rgrk) spec.theta = 0.5;
    spec.max_iterations = opts.iterations;
    spec.seed = opts.seed;
    // invariant checks run the full budget instead of stopping at the tolerance
    spec.tolerance = 1e-300;
    return spec;
}

Vector residual(const System& sys, std::span<const double> x) {
    Vector r = sys.a().multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.b()[i];
    return r;
}

void note(CheckResult& result, double ratio, const std::string& where) {
    ++result.evaluations;
    if (ratio > result.worst) result.worst = ratio;
    if (!(ratio <= 1.0) && result.passed) {
        result.passed = false;
        result.detail = where;
    }
}

std::string label(const std::string& base, Method method, std::optional<WeightMode> weights = std::nullopt) {
    std::string out = base + "[" + to_string(method);
    if (weights) out += "," + to_string(*weights);
    return out + "]";
}

}  // namespace

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::format() const {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(40) << c.name << " evaluations=" << std::setw(8)
            << c.evaluations << " worst_ratio=" << std::setprecision(3) << std::scientific << c.worst
            << std::defaultfloat;
        if (!c.detail.empty()) out << "  " << c.detail;
        out << '\n';
    }
    out << (passed() ? "all checks passed" : "some checks FAILED") << '\n';
    return out.str();
}

CheckResult check_residual_contract(const System& sys, Method method, const CheckOptions& opts) {
    CheckResult result;
    result.name = label("residual_contract", method);
    RunOptions run;
    if (method == Method::gssrk && opts.gramian_update) run.update_override = opts.gramian_update;
    run.observer = [&](index_t k, std::span<const double> x, const SelectableSet& s, index_t) {
        const double scale = 1.0 + std::sqrt(squared_norm(x));
        for (index_t j = 0; j < sys.rows(); ++j) {
            if (s.contains(j)) continue;
            const double r = std::abs(sys.a().row(j).dot(x) - sys.b()[j]);
            const double allowed = 1e-8 * std::sqrt(sys.geometry().squared_norms[j]) * scale;
            note(result, r / allowed, "iteration " + std::to_string(k) + ", row " + std::to_string(j));
        }
    };
    run_method(sys, spec_for(method, WeightMode::uniform, opts), run);
    return result;
}

CheckResult check_complement_independence(const System& sys, const CheckOptions& opts) {
    CheckResult result;
    result.name = "complement_independence[gssrk]";
    const index_t m = sys.rows();
    std::optional<index_t> alpha;
    if (m <= kExactMisLimit) alpha = static_cast<index_t>(max_independent_set(sys.graph(), MisMode::exact).members.size());

    RunOptions run;
    if (opts.gramian_update) run.update_override = opts.gramian_update;
    run.observer = [&](index_t k, std::span<const double>, const SelectableSet& s, index_t) {
        const std::vector<index_t> comp = s.complement();
        note(result, sys.graph().is_independent(comp) ? 0.0 : 2.0,
             "iteration " + std::to_string(k) + ": complement of S is not independent");
        if (alpha) {
            note(result, s.size() >= m - *alpha ? 0.0 : 2.0,
                 "iteration " + std::to_string(k) + ": |S| = " + std::to_string(s.size()) + " < m - alpha = " +
                     std::to_string(m - *alpha));
        }
    };
    run_method(sys, spec_for(Method::gssrk, WeightMode::uniform, opts), run);
    if (result.passed && alpha) result.detail = "alpha = " + std::to_string(*alpha);
    return result;
}

CheckResult check_pythagorean(const System& sys, std::span<const double> x_star, Method method, WeightMode weights,
                              const CheckOptions& opts) {
    CheckResult result;
    result.name = label("pythagorean_step_identity", method, weights);
    Vector prev(static_cast<std::size_t>(sys.cols()), 0.0);
    const double star_sq = squared_norm(x_star);
    RunOptions run;
    run.observer = [&](index_t k, std::span<const double> x, const SelectableSet&, index_t row) {
        const double before = squared_distance(prev, x_star);
        const double after = squared_distance(x, x_star);
        const double r = sys.a().row(row).dot(prev) - sys.b()[row];
        const double predicted = before - r * r / sys.geometry().squared_norms[row];
        // relative to the current error; the floor is the rounding of x - x* when x is stored to eps
        const double scale = std::sqrt(std::max(star_sq, squared_norm(x)));
        const double allowed = 1e-10 * before + 64.0 * kEps * scale * (std::sqrt(before) + kEps * scale);
        const std::string where = "iteration " + std::to_string(k);
        note(result, std::abs(after - predicted) / allowed, where + ": step identity");
        note(result, after <= before + allowed ? 0.0 : 2.0, where + ": error increased");
        prev.assign(x.begin(), x.end());
    };
    run_method(sys, spec_for(method, weights, opts), run);
    return result;
}

CheckResult check_orthogonal_rows_stay_solved(const System& sys, Method method, const CheckOptions& opts) {
    CheckResult result;
    result.name = label("orthogonal_rows_stay_solved", method);
    Vector prev(static_cast<std::size_t>(sys.cols()), 0.0);
    Vector prev_r = residual(sys, prev);
    RunOptions run;
    run.observer = [&](index_t k, std::span<const double> x, const SelectableSet&, index_t row) {
        const Vector r = residual(sys, x);
        const double prev_scale = 1.0 + std::sqrt(squared_norm(prev));
        const double scale = 1.0 + std::sqrt(squared_norm(x));
        for (index_t j = 0; j < sys.rows(); ++j) {
            if (j == row || sys.graph().adjacent(row, j)) continue;
            const double norm = std::sqrt(sys.geometry().squared_norms[j]);
            if (std::abs(prev_r[j]) > 1e-10 * norm * prev_scale) continue;
            note(result, std::abs(r[j]) / (1e-10 * norm * scale),
                 "iteration " + std::to_string(k) + ", row " + std::to_string(j) + " unsolved by step on " +
                     std::to_string(row));
        }
        prev.assign(x.begin(), x.end());
        prev_r = r;
    };
    run_method(sys, spec_for(method, WeightMode::uniform, opts), run);
    return result;
}

CheckResult check_one_step_bound(const System& sys, std::span<const double> x_star, Method method, WeightMode weights,
                       const CheckOptions& opts) {
    CheckResult result;
    result.name = label("one_step_bound", method, weights);
    const RowWeights w = build_weights(sys.a(), weights);
    const BoundsEngine engine(sys.a(), w);

    struct Snapshot {
        index_t k;
        Vector x;
        SelectableSet s;
    };
    std::vector<Snapshot> snapshots;
    snapshots.push_back({0, Vector(static_cast<std::size_t>(sys.cols()), 0.0), init_full(sys.rows())});
    const index_t stride = std::max<index_t>(1, opts.iterations / std::max<index_t>(1, opts.max_snapshots));
    RunOptions run;
    run.observer = [&](index_t k, std::span<const double> x, const SelectableSet& s, index_t) {
        if (k % stride == 0 && static_cast<index_t>(snapshots.size()) < opts.max_snapshots && !s.empty())
            snapshots.push_back({k, Vector(x.begin(), x.end()), s});
    };
    run_method(sys, spec_for(method, weights, opts), run);

    for (const auto& snap : snapshots) {
        const double err = squared_distance(snap.x, x_star);
        if (err == 0.0) continue;
        const double expected = exact_one_step_expectation(sys.a(), sys.b(), snap.x, x_star, w, snap.s);
        const double bound = engine.selectable_factor(snap.s) * err;
        const double slack = 1e-10 * err;
        // ratio <= 1 iff expected <= bound + slack
        note(result, std::max(0.0, expected - bound) / slack, "snapshot at iteration " + std::to_string(snap.k));
    }
    return result;
}

CheckResult check_row_space(const System& sys, Method method, const CheckOptions& opts) {
    CheckResult result;
    result.name = label("row_space_confinement", method);
    if (sys.rows() > 50 || sys.cols() > 50) {
        result.detail = "skipped: needs m, n <= 50";
        return result;
    }
    const Eigen::MatrixXd dense = sys.a().to_dense();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double threshold = static_cast<double>(std::max(dense.rows(), dense.cols())) * kEps * sv(0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > threshold) ++rank;
    const Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);

    RunOptions run;
    run.observer = [&](index_t k, std::span<const double> x, const SelectableSet&, index_t) {
        const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
        const double off = (v - basis * (basis.transpose() * v)).norm();
        note(result, off / 1e-8, "iteration " + std::to_string(k));
    };
    run_method(sys, spec_for(method, WeightMode::uniform, opts), run);
    return result;
}

VerifyReport verify(const SparseMatrix& a, std::uint64_t seed, const VerifyOptions& opts) {
    const PlantedSystem planted = plant_solution(a, planted_seed(seed));
    const System sys(planted.a, planted.b);
    CheckOptions check = opts.check;
    check.seed = seed;

    VerifyReport report;
    report.checks.push_back(check_residual_contract(sys, Method::gssrk, check));
    report.checks.push_back(check_residual_contract(sys, Method::nssrk, check));
    report.checks.push_back(check_complement_independence(sys, check));
    for (Method method : {Method::rk, Method::nssrk, Method::gssrk, Method::mdk, Method::rgrk})
        report.checks.push_back(check_pythagorean(sys, planted.x_star, method, WeightMode::uniform, check));
    report.checks.push_back(check_orthogonal_rows_stay_solved(sys, Method::gssrk, check));
    report.checks.push_back(check_orthogonal_rows_stay_solved(sys, Method::rk, check));
    if (std::min(sys.rows(), sys.cols()) <= 2000) {
        for (Method method : {Method::rk, Method::nssrk, Method::gssrk})
            for (WeightMode weights : {WeightMode::uniform, WeightMode::row_norm})
                report.checks.push_back(check_one_step_bound(sys, planted.x_star, method, weights, check));
    }
    report.checks.push_back(check_row_space(sys, Method::gssrk, check));

    CheckResult termination;
    termination.name = "gssrk_edgeless_termination";
    if (sys.graph().edge_count() == 0) {
        MethodSpec spec = spec_for(Method::gssrk, WeightMode::uniform, check);
        spec.max_iterations = std::max(spec.max_iterations, sys.rows());
        const ConvergenceTrace trace = run_method(sys, spec);
        termination.evaluations = 1;
        termination.passed =
            trace.stop == StopReason::selectable_set_empty && trace.iterations() == sys.rows();
        termination.detail = "terminated after " + std::to_string(trace.iterations()) + " iterations (m = " +
                             std::to_string(sys.rows()) + ")";
    } else {
        termination.detail = "not applicable: graph has " + std::to_string(sys.graph().edge_count()) + " edges";
    }
    report.checks.push_back(termination);
    return report;
}

}  // namespace ssrk
