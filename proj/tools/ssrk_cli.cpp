// ssrk: generate instances, run solvers, benchmark, report bounds, verify invariants.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ssrk/bounds.hpp"
#include "ssrk/harness.hpp"

namespace {

struct CommonFlags {
    std::string matrix = "circulant:100";
    std::string method = "rk";
    std::string weights = "uniform";
    std::optional<double> theta;
    ssrk::index_t trials = 200;
    ssrk::index_t iterations = 5000;
    std::uint64_t seed = 0;
    std::string out;
};

/// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<ssrk::Method> parse_methods(const std::string& list) {
    std::vector<ssrk::Method> methods;
    std::string item;
    std::istringstream in(list);
    while (std::getline(in, item, ',')) methods.push_back(ssrk::parse_method(item));
    return methods;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Selectable-set randomized Kaczmarz solvers and experiment harness"};
    app.require_subcommand(1);
    CommonFlags flags;

    auto* gen = app.add_subcommand("gen", "Write a generated matrix as Matrix Market");
    gen->add_option("--matrix", flags.matrix, "Generator spec, e.g. circulant:100, block:100:10, path:12")
        ->required();
    gen->add_option("--seed", flags.seed, "Generator seed");
    gen->add_option("--out", flags.out, "Output .mtx path (stdout when omitted)");

    auto* solve = app.add_subcommand("solve", "Single run; writes the per-iteration trace as CSV");
    solve->add_option("--matrix", flags.matrix, "Generator spec or .mtx path")->required();
    solve->add_option("--method", flags.method, "rk | nssrk | gssrk | mdk | rgrk");
    solve->add_option("--weights", flags.weights, "uniform | rownorm");
    solve->add_option("--theta", flags.theta, "RGRK relaxation parameter in [0, 1] (default 0.5)");
    solve->add_option("--iters", flags.iterations, "Maximum iterations");
    solve->add_option("--seed", flags.seed, "Seed for the matrix, planted solution and sampling");
    solve->add_option("--out", flags.out, "Trace CSV path (stdout when omitted)");

    std::string config_path;
    unsigned threads = 0;
    auto* bench = app.add_subcommand("bench", "Multi-trial experiment; writes averaged curves as CSV");
    bench->add_option("--config", config_path, "key=value file; command-line flags override it");
    bench->add_option("--matrix", flags.matrix, "Generator spec or .mtx path");
    bench->add_option("--method", flags.method, "Comma-separated methods (default rk,nssrk,gssrk,rgrk)");
    bench->add_option("--weights", flags.weights, "uniform | rownorm");
    bench->add_option("--theta", flags.theta, "RGRK relaxation parameter (default 0.5)");
    bench->add_option("--trials", flags.trials, "Independent trials per method");
    bench->add_option("--iters", flags.iterations, "Iterations per trial");
    bench->add_option("--seed", flags.seed, "Base seed");
    bench->add_option("--threads", threads, "Worker threads (0: all cores)");
    bench->add_option("--out", flags.out, "Curve CSV path (stdout when omitted)");

    bool csv_only = false;
    auto* bounds = app.add_subcommand("bounds", "Contraction factors, graph and maximum independent set");
    bounds->add_option("--matrix", flags.matrix, "Generator spec or .mtx path")->required();
    bounds->add_option("--weights", flags.weights, "uniform | rownorm");
    bounds->add_option("--seed", flags.seed, "Generator seed");
    bounds->add_flag("--csv", csv_only, "Print only the CSV block");
    bounds->add_option("--out", flags.out, "Also write the graph edge list and MIS to this path");

    ssrk::index_t verify_iters = 400;
    auto* verify = app.add_subcommand("verify", "Run the invariant suite on one instance");
    verify->add_option("--matrix", flags.matrix, "Generator spec or .mtx path")->required();
    verify->add_option("--seed", flags.seed, "Seed for the matrix, planted solution and sampling");
    verify->add_option("--iters", verify_iters, "Iterations per checked run");
    verify->add_option("--out", flags.out, "Report path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const ssrk::SparseMatrix a = ssrk::load_matrix(flags.matrix, flags.seed);
            Sink sink(flags.out);
            ssrk::write_matrix_market(a, sink.stream());
            return 0;
        }

        if (*solve) {
            const ssrk::SparseMatrix a = ssrk::load_matrix(flags.matrix, flags.seed);
            const ssrk::PlantedSystem planted = ssrk::plant_solution(a, ssrk::planted_seed(flags.seed));
            const ssrk::System sys(planted.a, planted.b);
            ssrk::MethodSpec spec;
            spec.method = ssrk::parse_method(flags.method);
            spec.weights = ssrk::parse_weight_mode(flags.weights);
            if (spec.method == ssrk::Method::rgrk) spec.theta = flags.theta.value_or(0.5);
            spec.max_iterations = flags.iterations;
            spec.seed = flags.seed;
            ssrk::RunOptions options;
            options.x_star = planted.x_star;
            const ssrk::ConvergenceTrace trace = ssrk::run_method(sys, spec, options);
            Sink sink(flags.out);
            ssrk::emit_trace_csv(trace, sink.stream());
            return 0;
        }

        if (*bench) {
            ssrk::ExperimentConfig cfg;
            if (!config_path.empty()) ssrk::apply_config_file(cfg, config_path);
            if (bench->count("--matrix")) cfg.matrix = flags.matrix;
            if (bench->count("--method")) cfg.methods = parse_methods(flags.method);
            if (bench->count("--weights")) cfg.weights = ssrk::parse_weight_mode(flags.weights);
            if (flags.theta) cfg.theta = *flags.theta;
            if (bench->count("--trials")) cfg.trials = flags.trials;
            if (bench->count("--iters")) cfg.iterations = flags.iterations;
            if (bench->count("--seed")) cfg.seed = flags.seed;
            if (bench->count("--threads")) cfg.threads = threads;
            if (bench->count("--out")) cfg.output = flags.out;
            const auto curves = ssrk::run_experiment(cfg);
            Sink sink(cfg.output);
            ssrk::emit_csv(curves, sink.stream());
            return 0;
        }

        if (*bounds) {
            const ssrk::SparseMatrix a = ssrk::load_matrix(flags.matrix, flags.seed);
            const ssrk::BoundReport report = ssrk::bound_report(a, ssrk::parse_weight_mode(flags.weights));
            const ssrk::NonOrthogonalityGraph graph = ssrk::build_graph(ssrk::gramian(a));
            const ssrk::MisResult mis = ssrk::max_independent_set(graph, ssrk::MisMode::automatic);
            if (!csv_only) {
                std::cout << ssrk::format_report_text(report);
                std::cout << "graph edges                       " << graph.edge_count() << '\n';
                std::cout << "independent set size              " << mis.members.size()
                          << (mis.exact ? " (maximum)" : " (greedy, lower bound on maximum)") << '\n';
                std::cout << "selectable set lower bound m-|M|  " << a.rows() - static_cast<ssrk::index_t>(mis.members.size())
                          << (mis.exact ? "" : " (upper estimate)") << "\n\n";
            }
            std::cout << ssrk::format_report_csv(report);
            if (!flags.out.empty()) {
                Sink sink(flags.out);
                auto& os = sink.stream();
                os << "# nodes " << graph.nodes() << " edges " << graph.edge_count() << '\n';
                for (const auto& [i, j] : graph.edges()) os << i << ' ' << j << '\n';
                os << "# independent_set " << (mis.exact ? "maximum" : "greedy");
                for (ssrk::index_t v : mis.members) os << ' ' << v;
                os << '\n';
            }
            return 0;
        }

        if (*verify) {
            const ssrk::SparseMatrix a = ssrk::load_matrix(flags.matrix, flags.seed);
            ssrk::VerifyOptions options;
            options.check.iterations = verify_iters;
            const ssrk::VerifyReport report = ssrk::verify(a, flags.seed, options);
            Sink sink(flags.out);
            sink.stream() << report.format();
            return report.passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
