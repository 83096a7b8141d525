#include "ssrk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "ssrk/solver.hpp"

namespace ssrk {

double clamp_factor(double value, const char* what) {
    if (value >= 0.0 && value <= 1.0) return value;
    std::clog << "warning: " << what << " contraction factor " << std::setprecision(17) << value
              << " outside [0, 1]; clamped\n";
    return std::clamp(value, 0.0, 1.0);
}

double weighted_sigma_min_sq(const SparseMatrix& a, const RowWeights& w) {
    if (w.size() != a.rows()) throw std::invalid_argument("weights and matrix sizes differ");
    const RowGeometry geo = row_norms(a);
    std::vector<double> scale(static_cast<std::size_t>(a.rows()));
    for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = std::sqrt(w.probabilities()[i] / geo.squared_norms[i]);
    const double s = smallest_nonzero_singular_value(scale_rows(a, scale));
    return s * s;
}

double gamma_constant(const RowGeometry& geo) { return geo.frobenius_sq - geo.min_squared_norm; }

double gamma_constant_by_exclusion(const RowGeometry& geo) {
    double best = 0.0;
    for (std::size_t i = 0; i < geo.squared_norms.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < geo.squared_norms.size(); ++j)
            if (j != i) sum += geo.squared_norms[j];
        best = std::max(best, sum);
    }
    return best;
}

namespace {

double selectable_mass(const RowWeights& w, const SelectableSet& s) {
    if (s.universe() != w.size()) throw std::invalid_argument("selectable set and weights sizes differ");
    if (s.empty()) throw std::invalid_argument("contraction factor undefined for an empty selectable set");
    const double mass = w.mass(s);
    if (!(mass > 0.0)) throw std::invalid_argument("selectable set carries no probability");
    return mass;
}

double selectable_norm_sq(const RowGeometry& geo, const SelectableSet& s) {
    if (s.universe() != static_cast<index_t>(geo.squared_norms.size()))
        throw std::invalid_argument("selectable set and matrix sizes differ");
    if (s.empty()) throw std::invalid_argument("contraction factor undefined for an empty selectable set");
    double sum = 0.0;
    for (index_t j : s.members()) sum += geo.squared_norms[j];
    return sum;
}

double rgrk_formula(double theta, double frobenius_sq, double gamma, double sigma_sq) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    // one-row matrices have gamma = 0; the greedy choice then solves in one step
    if (gamma == 0.0) return theta > 0.0 ? 0.0 : 1.0 - sigma_sq / frobenius_sq;
    return 1.0 - (theta * frobenius_sq / gamma + (1.0 - theta)) * sigma_sq / frobenius_sq;
}

}  // namespace

double thm1_factor(const SparseMatrix& a, const RowWeights& w, const SelectableSet& s) {
    const double mass = selectable_mass(w, s);
    return clamp_factor(1.0 - weighted_sigma_min_sq(a, w) / mass, "selectable-set");
}

double cor_uniform_factor(const SparseMatrix& a, index_t s_size) {
    if (s_size < 1) throw std::invalid_argument("selectable set size must be at least one");
    const RowGeometry geo = row_norms(a);
    std::vector<double> scale(geo.squared_norms.size());
    for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = 1.0 / std::sqrt(geo.squared_norms[i]);
    const double s = smallest_nonzero_singular_value(scale_rows(a, scale));
    return clamp_factor(1.0 - s * s / static_cast<double>(s_size), "uniform");
}

double cor_rownorm_factor(const SparseMatrix& a, const SelectableSet& s) {
    const RowGeometry geo = row_norms(a);
    const double denom = selectable_norm_sq(geo, s);
    const double sigma = smallest_nonzero_singular_value(a);
    return clamp_factor(1.0 - sigma * sigma / denom, "row-norm");
}

double rgrk_factor(const SparseMatrix& a, double theta) {
    const RowGeometry geo = row_norms(a);
    const double sigma = smallest_nonzero_singular_value(a);
    return clamp_factor(rgrk_formula(theta, geo.frobenius_sq, gamma_constant(geo), sigma * sigma), "rgrk");
}

double exact_one_step_expectation(const SparseMatrix& a, std::span<const double> b, std::span<const double> x,
                                  std::span<const double> x_star, const RowWeights& w, const SelectableSet& s) {
    if (x_star.size() != x.size()) throw std::invalid_argument("x and x_star lengths differ");
    const std::vector<double> pmf = conditional_pmf(w, s);
    double expectation = 0.0;
    for (index_t i : s.members()) expectation += pmf[i] * squared_distance(kaczmarz_step_copy(a, b, x, i), x_star);
    return expectation;
}

BoundsEngine::BoundsEngine(const SparseMatrix& a, const RowWeights& w) : weights_(w), geo_(row_norms(a)) {
    if (w.size() != a.rows()) throw std::invalid_argument("weights and matrix sizes differ");
    const double plain = smallest_nonzero_singular_value(a);
    sigma_min_sq_ = plain * plain;

    std::vector<double> scale(geo_.squared_norms.size());
    for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = 1.0 / std::sqrt(geo_.squared_norms[i]);
    const double normalized = smallest_nonzero_singular_value(scale_rows(a, scale));
    sigma_min_sq_normalized_ = normalized * normalized;

    for (std::size_t i = 0; i < scale.size(); ++i) scale[i] *= std::sqrt(w.probabilities()[i]);
    const double weighted = smallest_nonzero_singular_value(scale_rows(a, scale));
    sigma_min_sq_weighted_ = weighted * weighted;
}

double BoundsEngine::selectable_factor(const SelectableSet& s) const {
    return clamp_factor(1.0 - sigma_min_sq_weighted_ / selectable_mass(weights_, s), "selectable-set");
}

double BoundsEngine::uniform(index_t s_size) const {
    if (s_size < 1) throw std::invalid_argument("selectable set size must be at least one");
    return clamp_factor(1.0 - sigma_min_sq_normalized_ / static_cast<double>(s_size), "uniform");
}

double BoundsEngine::rownorm(const SelectableSet& s) const {
    return clamp_factor(1.0 - sigma_min_sq_ / selectable_norm_sq(geo_, s), "row-norm");
}

double BoundsEngine::rgrk(double theta) const {
    return clamp_factor(rgrk_formula(theta, geo_.frobenius_sq, gamma(), sigma_min_sq_), "rgrk");
}

BoundReport bound_report(const SparseMatrix& a, WeightMode mode) {
    const RowWeights w = build_weights(a, mode);
    const BoundsEngine engine(a, w);
    const index_t m = a.rows();

    BoundReport report;
    report.rows = m;
    report.cols = a.cols();
    report.weights = mode;
    report.sigma_min_sq = engine.sigma_min_sq();
    report.sigma_min_sq_normalized = engine.sigma_min_sq_normalized();
    report.sigma_min_sq_weighted = engine.sigma_min_sq_weighted();
    report.frobenius_sq = engine.frobenius_sq();
    report.gamma = engine.gamma();

    const SelectableSet full = init_full(m);
    report.factors.push_back({"ssrk_full_set", engine.selectable_factor(full)});
    if (m > 1) {
        // worst single exclusion: drop the row with the smallest probability
        const auto p = w.probabilities();
        const auto drop = static_cast<index_t>(std::min_element(p.begin(), p.end()) - p.begin());
        SelectableSet all_but_one = full;
        all_but_one.erase(drop);
        report.factors.push_back({"nssrk_worst_case", engine.selectable_factor(all_but_one)});
    }
    report.factors.push_back({"uniform_full_set", engine.uniform(m)});
    if (m > 1) report.factors.push_back({"uniform_nssrk", engine.uniform(m - 1)});
    report.factors.push_back({"rownorm_full_set", engine.rownorm(full)});
    if (m > 1) {
        const auto& sq = engine.geometry().squared_norms;
        const auto drop = static_cast<index_t>(std::min_element(sq.begin(), sq.end()) - sq.begin());
        SelectableSet all_but_min = full;
        all_but_min.erase(drop);
        report.factors.push_back({"rownorm_nssrk_worst_case", engine.rownorm(all_but_min)});
    }
    report.factors.push_back({"rgrk_theta_0", engine.rgrk(0.0)});
    report.factors.push_back({"rgrk_theta_0.5", engine.rgrk(0.5)});
    report.factors.push_back({"rgrk_theta_1", engine.rgrk(1.0)});
    return report;
}

namespace {

std::vector<std::pair<std::string, double>> report_rows(const BoundReport& r) {
    std::vector<std::pair<std::string, double>> rows{
        {"rows", static_cast<double>(r.rows)},
        {"cols", static_cast<double>(r.cols)},
        {"sigma_min_sq", r.sigma_min_sq},
        {"sigma_min_sq_row_normalized", r.sigma_min_sq_normalized},
        {"sigma_min_sq_weighted", r.sigma_min_sq_weighted},
        {"frobenius_sq", r.frobenius_sq},
        {"gamma", r.gamma},
    };
    for (const auto& f : r.factors) rows.emplace_back("factor_" + f.name, f.value);
    return rows;
}

}  // namespace

std::string format_report_text(const BoundReport& report) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << "weights: " << to_string(report.weights) << '\n';
    for (const auto& [name, value] : report_rows(report))
        out << std::left << std::setw(34) << name << std::setprecision(10) << value << '\n';
    return out.str();
}

std::string format_report_csv(const BoundReport& report) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << "quantity,value\n" << std::setprecision(17);
    out << "weights," << to_string(report.weights) << '\n';
    for (const auto& [name, value] : report_rows(report)) out << name << ',' << value << '\n';
    return out.str();
}

}  // namespace ssrk
