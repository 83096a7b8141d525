// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "ssrk/bounds.hpp"
#include "ssrk/harness.hpp"
#include "support.hpp"

using namespace ssrk;

namespace {

// Tolerances, fixed here so every run measures against the same thresholds.
constexpr double kOneStepSlack = 1e-10;           // relative slack on the one-step bound
constexpr double kChiSquareAlpha = 0.001;      // significance of each goodness-of-fit test
constexpr double kAttemptsTolerance = 0.05;    // relative, mean rejection attempts under NSSRK
constexpr double kNssrkVsRkTolerance = 0.10;   // relative, NSSRK vs RK mean curves
constexpr double kRateEnvelopeTolerance = 0.05;  // relative, RK on the 4 x 4 identity
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (passed) detail << "first failure: " << why << "; ";
        passed = false;
    }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.passed) ++failures;
    std::printf("%s %-44s %7.2fs  %s\n", out.passed ? "PASS" : "FAIL", name.c_str(), seconds, out.detail.str().c_str());
    std::fflush(stdout);
}

void absorb(Outcome& out, const CheckResult& r, std::size_t& evaluations) {
    evaluations += r.evaluations;
    if (!r.passed) out.fail(r.name + " " + r.detail);
}

struct Planted {
    PlantedSystem p;
    System sys;
    explicit Planted(PlantedSystem planted) : p(std::move(planted)), sys(p.a, p.b) {}
};

Planted random_planted(index_t m, index_t n, double density, Rng& rng, std::uint64_t seed) {
    return Planted(plant_solution(testing::random_sparse(m, n, density, rng), seed));
}

std::vector<StructuredPattern> structured_instances(index_t m) {
    std::vector<StructuredPattern> out{StructuredPattern::path(m), StructuredPattern::star(m),
                                       StructuredPattern::cycle(m)};
    for (index_t l1 = 0; l1 <= 2; ++l1)
        for (index_t l2 = 0; l2 <= 2; ++l2)
            if (l1 + l2 >= 1 && l1 + l2 < m) out.push_back(StructuredPattern::banded(m, l1, l2));
    for (index_t l = 2; l < m && l <= 6; l += 2) out.push_back(StructuredPattern::regular(m, l));
    return out;
}

// Closed forms evaluated independently of the library.
index_t table_bound(const StructuredPattern& p) {
    const index_t m = p.size;
    switch (p.kind) {
        case StructuredPattern::Kind::path: return m / 2;
        case StructuredPattern::Kind::star: return 1;
        case StructuredPattern::Kind::cycle: return (m + 1) / 2;
        case StructuredPattern::Kind::banded: {
            const index_t w = p.upper_bandwidth + p.lower_bandwidth;
            return m * w / (w + 1);
        }
        case StructuredPattern::Kind::regular: return std::max((m + 1) / 2, p.degree);
    }
    return 0;
}

void ac1_one_step_bound(Outcome& out) {
    Rng rng(kSeed);
    CheckOptions opts;
    opts.iterations = 60;
    opts.max_snapshots = 12;
    std::size_t states = 0;
    for (int trial = 0; trial < 6; ++trial) {
        const index_t m = 6 + static_cast<index_t>(rng() % 15);
        const Planted inst = random_planted(m, 4 + static_cast<index_t>(rng() % 12), 0.3, rng, kSeed + trial);
        opts.seed = kSeed + static_cast<std::uint64_t>(trial);
        for (Method method : {Method::rk, Method::nssrk, Method::gssrk})
            for (WeightMode w : {WeightMode::uniform, WeightMode::row_norm})
                absorb(out, check_one_step_bound(inst.sys, inst.p.x_star, method, w, opts), states);
    }
    // check_one_step_bound compares against 1e-10 relative slack internally
    static_assert(kOneStepSlack == 1e-10);
    out.require(states >= 200, "only " + std::to_string(states) + " snapshot states");
    out.detail << "states=" << states;
}

void ac2_pythagorean(Outcome& out) {
    Rng rng(kSeed + 2);
    CheckOptions opts;
    opts.iterations = 200;
    std::size_t steps = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const index_t m = 4 + static_cast<index_t>(rng() % 30);
        const Planted inst = random_planted(m, 3 + static_cast<index_t>(rng() % 30), 0.25, rng, kSeed + trial);
        opts.seed = kSeed + static_cast<std::uint64_t>(trial);
        const WeightMode w = trial % 2 ? WeightMode::row_norm : WeightMode::uniform;
        for (Method method : {Method::rk, Method::nssrk, Method::gssrk, Method::mdk, Method::rgrk})
            absorb(out, check_pythagorean(inst.sys, inst.p.x_star, method, w, opts), steps);
    }
    out.detail << "step checks=" << steps;
}

void ac3_orthogonal_rows(Outcome& out) {
    CheckOptions opts;
    opts.iterations = 300;
    std::size_t evaluations = 0;
    for (index_t m = 3; m <= 30; ++m) {
        for (const auto& p : {StructuredPattern::path(m), StructuredPattern::cycle(m), StructuredPattern::star(m)}) {
            const Planted inst(plant_solution(gen_structured(p, kSeed + m), kSeed + m));
            opts.seed = kSeed + static_cast<std::uint64_t>(m);
            absorb(out, check_orthogonal_rows_stay_solved(inst.sys, Method::gssrk, opts), evaluations);
            absorb(out, check_orthogonal_rows_stay_solved(inst.sys, Method::rk, opts), evaluations);
        }
    }
    out.detail << "row checks=" << evaluations;
}

void ac4_residual_contract(Outcome& out) {
    const Planted inst(plant_solution(load_matrix("circulant:100", kSeed), planted_seed(kSeed)));
    CheckOptions opts;
    opts.iterations = 10000;
    opts.seed = kSeed;
    const CheckResult r = check_residual_contract(inst.sys, Method::gssrk, opts);
    std::size_t evaluations = 0;
    absorb(out, r, evaluations);
    out.detail << "row checks=" << evaluations << " worst ratio=" << r.worst;
}

void ac5_complement_independence(Outcome& out) {
    Rng rng(kSeed + 5);
    CheckOptions opts;
    opts.iterations = 120;
    std::size_t states = 0;
    for (int history = 0; history < 500; ++history) {
        const index_t m = 2 + static_cast<index_t>(rng() % 29);
        const Planted inst = random_planted(m, 2 + static_cast<index_t>(rng() % 40), 0.05 + 0.25 * rng.uniform(), rng,
                                            kSeed + history);
        opts.seed = kSeed + static_cast<std::uint64_t>(history);
        absorb(out, check_complement_independence(inst.sys, opts), states);
    }
    std::size_t structured = 0;
    for (index_t m = 3; m <= 30; m += 3) {
        for (const auto& p : structured_instances(m)) {
            const Planted inst(plant_solution(gen_structured(p, kSeed + m), kSeed));
            opts.seed = kSeed + static_cast<std::uint64_t>(m);
            absorb(out, check_complement_independence(inst.sys, opts), structured);
        }
    }
    out.detail << "random-graph checks=" << states << " structured checks=" << structured;
}

void ac6_forced_tightness(Outcome& out) {
    struct Case {
        StructuredPattern p;
        index_t expected;
    };
    for (const Case& c : {Case{StructuredPattern::path(10), 5}, Case{StructuredPattern::star(10), 1},
                          Case{StructuredPattern::cycle(12), 6}}) {
        const Planted inst(plant_solution(gen_structured(c.p, kSeed), kSeed));
        const auto& g = inst.sys.graph();
        Vector x(static_cast<std::size_t>(inst.sys.cols()), 0.0);
        SelectableSet s = init_full(inst.sys.rows());
        for (index_t i : forced_mis_sequence(g)) {
            out.require(s.contains(i), c.p.name() + ": forced row not selectable");
            kaczmarz_step(inst.sys.a(), inst.sys.b(), x, i);
            update_gramian(s, i, g);
        }
        const index_t alpha = static_cast<index_t>(max_independent_set(g).members.size());
        out.require(s.size() == c.expected, c.p.name() + ": |S| = " + std::to_string(s.size()));
        out.require(s.size() == inst.sys.rows() - alpha, c.p.name() + ": |S| != m - |M|");
        out.require(s.size() == table_bound(c.p), c.p.name() + ": |S| differs from the closed form");
        for (index_t j : s.complement()) {
            const double r = inst.sys.a().row(j).dot(x) - inst.sys.b()[j];
            out.require(std::abs(r) <= 1e-10 * (1 + std::sqrt(squared_norm(x))), c.p.name() + ": row outside S unsolved");
        }
        out.detail << c.p.name() << " |S|=" << s.size() << " ";
    }
}

void ac7_structural_bounds(Outcome& out) {
    std::size_t patterns = 0;
    for (index_t m = 3; m <= 20; ++m) {
        std::vector<StructuredPattern> all = structured_instances(m);
        // formula checks also cover odd degrees, which have no circulant realisation
        for (index_t l = 1; l < m; ++l) {
            const auto p = StructuredPattern::regular(m, l);
            out.require(structural_lower_bound(p) == table_bound(p), p.name() + " formula");
        }
        for (const auto& p : all) {
            ++patterns;
            const index_t bound = structural_lower_bound(p);
            out.require(bound == table_bound(p), p.name() + " m=" + std::to_string(m) + " formula");
            const Planted inst(plant_solution(gen_structured(p, kSeed + m), kSeed));
            const index_t alpha = static_cast<index_t>(max_independent_set(inst.sys.graph()).members.size());
            const index_t exact = m - alpha;
            if (p.kind == StructuredPattern::Kind::regular)
                out.require(bound <= exact, p.name() + " bound above m - alpha");
            else
                out.require(bound == exact, p.name() + " m=" + std::to_string(m) + " bound != m - alpha");
            MethodSpec spec;
            spec.method = Method::gssrk;
            spec.max_iterations = 200;
            spec.tolerance = 1e-300;
            spec.seed = kSeed + static_cast<std::uint64_t>(m);
            const ConvergenceTrace t = run_method(inst.sys, spec);
            for (const auto& rec : t.records)
                out.require(rec.selectable_size >= exact, p.name() + " observed |S_k| below m - alpha");
        }
    }
    out.detail << "patterns=" << patterns;
}

void ac8_nssrk_sizes(Outcome& out) {
    Rng rng(kSeed + 8);
    std::size_t runs = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const index_t m = 2 + static_cast<index_t>(rng() % 40);
        const Planted inst = random_planted(m, 2 + static_cast<index_t>(rng() % 20), 0.3, rng, kSeed + trial);
        for (WeightMode w : {WeightMode::uniform, WeightMode::row_norm}) {
            MethodSpec spec;
            spec.method = Method::nssrk;
            spec.weights = w;
            spec.max_iterations = 300;
            spec.tolerance = 1e-300;
            spec.seed = kSeed + static_cast<std::uint64_t>(trial);
            const ConvergenceTrace t = run_method(inst.sys, spec);
            ++runs;
            out.require(t.records[0].selectable_size == m, "|S_0| != m");
            for (std::size_t k = 1; k < t.records.size(); ++k)
                out.require(t.records[k].selectable_size == m - 1, "|S_k| != m - 1");
        }
    }
    out.detail << "runs=" << runs;
}

void ac9_rgrk_mdk(Outcome& out) {
    Rng rng(kSeed + 9);
    std::size_t steps = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const index_t m = 5 + static_cast<index_t>(rng() % 30);
        const Planted inst = random_planted(m, 3 + static_cast<index_t>(rng() % 20), 0.3, rng, kSeed + trial);
        MethodSpec spec;
        spec.max_iterations = 150;
        spec.tolerance = 1e-300;
        spec.method = Method::mdk;
        const ConvergenceTrace mdk = run_method(inst.sys, spec);
        spec.method = Method::rgrk;
        spec.theta = 1.0;
        const ConvergenceTrace rgrk = run_method(inst.sys, spec);
        out.require(mdk.rows() == rgrk.rows(), "run sequences differ on trial " + std::to_string(trial));

        // selection-level comparison on freshly computed residuals
        Vector x(static_cast<std::size_t>(inst.sys.cols()), 0.0);
        Rng pick(kSeed);
        for (index_t k = 0; k < spec.max_iterations; ++k) {
            const index_t greedy = select_max_distance(inst.sys.a(), inst.sys.b(), x);
            if (inst.sys.a().row(greedy).dot(x) == inst.sys.b()[greedy]) break;
            out.require(select_rgrk(inst.sys.a(), inst.sys.b(), x, 1.0, pick) == greedy, "selection differs");
            kaczmarz_step(inst.sys.a(), inst.sys.b(), x, greedy);
            ++steps;
        }
    }
    out.detail << "compared steps=" << steps;
}

void ac10_sampling_law(Outcome& out) {
    Rng rng(kSeed + 10);
    const long draws = 100000;
    double min_p = 1.0;
    for (int pair = 0; pair < 30; ++pair) {
        const index_t m = 2 + static_cast<index_t>(rng() % 20);
        std::vector<double> p(static_cast<std::size_t>(m));
        double total = 0.0;
        for (double& v : p) total += (v = 0.05 + rng.uniform());
        for (double& v : p) v /= total;
        const RowWeights w(p, pair % 2 ? WeightMode::row_norm : WeightMode::uniform);
        SelectableSet s(m);
        for (index_t i = 0; i < m; ++i)
            if (rng.uniform() < 0.6) s.insert(i);
        if (s.empty()) s.insert(static_cast<index_t>(rng() % static_cast<std::uint64_t>(m)));
        std::vector<long> counts(static_cast<std::size_t>(m), 0);
        for (long k = 0; k < draws; ++k) ++counts[static_cast<std::size_t>(sample_selectable(w, s, rng).row)];
        const double pv = testing::chi_square_p_value(testing::chi_square_statistic(counts, conditional_pmf(w, s), draws),
                                                      static_cast<int>(s.size()) - 1);
        min_p = std::min(min_p, pv);
        out.require(pv > kChiSquareAlpha, "chi-square p = " + std::to_string(pv) + " on pair " + std::to_string(pair));
    }
    out.detail << "min p=" << min_p << " ";

    // mean attempts under NSSRK with uniform weights, pooled over independent streams
    for (index_t m : {2, 4, 10, 100}) {
        const Planted inst(plant_solution(load_matrix("block:" + std::to_string(m) + ":1", kSeed), kSeed));
        MethodSpec spec;
        spec.method = Method::nssrk;
        spec.max_iterations = 20000;
        spec.tolerance = 1e-300;
        spec.seed = kSeed;
        double attempts = 0.0;
        std::size_t steps = 0;
        for (std::uint64_t stream = 0; steps < 20000; ++stream) {
            RunOptions opts;
            opts.stream = stream;
            const ConvergenceTrace t = run_method(inst.sys, spec, opts);
            // the first step samples from the full set
            for (std::size_t k = 2; k < t.records.size(); ++k, ++steps)
                attempts += static_cast<double>(t.records[k].attempts);
        }
        const double mean = attempts / static_cast<double>(steps);
        const double expected = static_cast<double>(m) / static_cast<double>(m - 1);
        out.require(std::abs(mean - expected) <= kAttemptsTolerance * expected,
                    "m=" + std::to_string(m) + " mean attempts " + std::to_string(mean));
        out.detail << "m=" << m << " attempts=" << mean << "/" << expected << " ";
    }
}

void ac11_figure_ordering(Outcome& out) {
    for (const std::string matrix : {"circulant:100", "block:100:10"}) {
        ExperimentConfig cfg;
        cfg.matrix = matrix;
        cfg.methods = {Method::rk, Method::nssrk, Method::gssrk, Method::rgrk};
        cfg.trials = 200;
        cfg.iterations = 5000;
        cfg.theta = 0.5;
        cfg.seed = kSeed;
        const auto curves = run_experiment(cfg);
        const auto& rk = curves[0].mean_sq_error;
        const auto& ns = curves[1].mean_sq_error;
        const auto& gs = curves[2].mean_sq_error;
        const auto& gr = curves[3].mean_sq_error;
        const double rk_end = rk.back(), ns_end = ns.back(), gs_end = gs.back(), gr_end = gr.back();
        out.require(gr_end < rk_end && gr_end < ns_end && gr_end < gs_end, matrix + ": GRK not strictly best");
        if (matrix.starts_with("circulant")) out.require(gs_end < rk_end, matrix + ": GSSRK not below RK");
        double worst = 0.0;
        std::size_t worst_k = 0;
        for (std::size_t k = 0; k < rk.size(); ++k) {
            const double rel = std::abs(ns[k] - rk[k]) / rk[k];
            if (rel > worst) {
                worst = rel;
                worst_k = k;
            }
        }
        out.require(worst <= kNssrkVsRkTolerance, matrix + ": NSSRK/RK gap " + std::to_string(worst) + " at k=" +
                                                      std::to_string(worst_k));
        out.detail << matrix << " final rk=" << rk_end << " nssrk=" << ns_end << " gssrk=" << gs_end
                   << " grk=" << gr_end << " max|nssrk-rk|/rk=" << worst << "; ";
    }
}

void ac12_rate_envelope(Outcome& out) {
    ExperimentConfig cfg;
    cfg.matrix = "identity:4";
    cfg.methods = {Method::rk};
    cfg.trials = 10000;
    cfg.iterations = 10;
    cfg.seed = kSeed;
    const PlantedSystem planted = plant_solution(load_matrix(cfg.matrix, cfg.seed), planted_seed(cfg.seed));
    const auto curve = run_experiment(planted, cfg)[0].mean_sq_error;
    const double initial = squared_norm(planted.x_star);
    for (std::size_t k : {1U, 5U, 10U}) {
        const double expected = std::pow(0.75, static_cast<double>(k)) * initial;
        const double rel = std::abs(curve[k] - expected) / expected;
        out.require(rel <= kRateEnvelopeTolerance, "k=" + std::to_string(k) + " relative gap " + std::to_string(rel));
        out.detail << "k=" << k << " rel=" << rel << " ";
    }
}

}  // namespace

int main() {
    criterion("AC1  one-step bound certification", ac1_one_step_bound);
    criterion("AC2  pythagorean identity and monotonicity", ac2_pythagorean);
    criterion("AC3  orthogonal rows stay solved", ac3_orthogonal_rows);
    criterion("AC4  residual contract, circulant 100", ac4_residual_contract);
    criterion("AC5  complement independence", ac5_complement_independence);
    criterion("AC6  forced MIS tightness", ac6_forced_tightness);
    criterion("AC7  structural bound formulas", ac7_structural_bounds);
    criterion("AC8  NSSRK selectable sizes", ac8_nssrk_sizes);
    criterion("AC9  RGRK(theta=1) equals MDK", ac9_rgrk_mdk);
    criterion("AC10 sampling law", ac10_sampling_law);
    criterion("AC11 desk-scale method ordering", ac11_figure_ordering);
    criterion("AC12 RK rate on the 4x4 identity", ac12_rate_envelope);
    std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
    return failures ? 1 : 0;
}
