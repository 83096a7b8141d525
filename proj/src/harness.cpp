#include "ssrk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ssrk {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

index_t to_index(const std::string& text) {
    index_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("expected an integer, got '" + text + "'");
    return value;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text) {
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof()) throw std::invalid_argument("expected a number, got '" + text + "'");
    return v;
}

}  // namespace

SparseMatrix load_matrix(const std::string& source, std::uint64_t seed) {
    const auto parts = split(source, ':');
    const std::string kind = parts.empty() ? std::string{} : parts[0];
    auto arg = [&](std::size_t k) {
        if (k >= parts.size()) throw std::invalid_argument("matrix source '" + source + "' is missing arguments");
        return to_index(parts[k]);
    };
    auto expect_args = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo + 1 || parts.size() > hi + 1)
            throw std::invalid_argument("matrix source '" + source + "' has the wrong number of arguments");
    };

    if (kind == "circulant") {
        expect_args(1, 2);
        const index_t width = parts.size() > 2 ? arg(2) : 2;
        const std::vector<double> stencil(static_cast<std::size_t>(std::max<index_t>(width, 0)), 1.0);
        return gen_circulant(arg(1), stencil, seed);
    }
    if (kind == "block") {
        expect_args(2, 3);
        if (parts.size() == 3) return gen_block_random(arg(1), arg(1), arg(2), seed);
        return gen_block_random(arg(1), arg(2), arg(3), seed);
    }
    if (kind == "identity") {
        expect_args(1, 1);
        return SparseMatrix::identity(arg(1));
    }
    if (kind == "path") {
        expect_args(1, 1);
        return gen_structured(StructuredPattern::path(arg(1)), seed);
    }
    if (kind == "star") {
        expect_args(1, 1);
        return gen_structured(StructuredPattern::star(arg(1)), seed);
    }
    if (kind == "cycle") {
        expect_args(1, 1);
        return gen_structured(StructuredPattern::cycle(arg(1)), seed);
    }
    if (kind == "banded") {
        expect_args(3, 3);
        return gen_structured(StructuredPattern::banded(arg(1), arg(2), arg(3)), seed);
    }
    if (kind == "regular") {
        expect_args(2, 2);
        return gen_structured(StructuredPattern::regular(arg(1), arg(2)), seed);
    }
    return read_matrix_market_file(source);
}

std::uint64_t planted_seed(std::uint64_t seed) { return seed + 1; }

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "matrix") {
            cfg.matrix = value;
        } else if (key == "methods" || key == "method") {
            cfg.methods.clear();
            for (const auto& name : split(value, ',')) cfg.methods.push_back(parse_method(trim(name)));
        } else if (key == "weights") {
            cfg.weights = parse_weight_mode(value);
        } else if (key == "theta") {
            cfg.theta = parse_double(value);
        } else if (key == "trials") {
            cfg.trials = to_index(value);
        } else if (key == "iters" || key == "iterations") {
            cfg.iterations = to_index(value);
        } else if (key == "tolerance") {
            cfg.tolerance = parse_double(value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_index(value));
        } else if (key == "out" || key == "output") {
            cfg.output = value;
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(to_index(value));
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

std::vector<AveragedCurve> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const SparseMatrix a = load_matrix(cfg.matrix, cfg.seed);
    return run_experiment(plant_solution(a, planted_seed(cfg.seed)), cfg);
}

std::vector<AveragedCurve> run_experiment(const PlantedSystem& planted, const ExperimentConfig& cfg) {
    cfg.validate();
    const System sys(planted.a, planted.b);
    const auto length = static_cast<std::size_t>(cfg.iterations) + 1;
    const auto trials = static_cast<std::size_t>(cfg.trials);
    unsigned workers = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));

    std::vector<AveragedCurve> curves;
    for (Method method : cfg.methods) {
        MethodSpec spec;
        spec.method = method;
        spec.weights = cfg.weights;
        if (method == Method::rgrk) spec.theta = cfg.theta;
        spec.max_iterations = cfg.iterations;
        spec.tolerance = cfg.tolerance;
        spec.seed = cfg.seed;
        spec.validate();

        // per-trial rows, reduced in trial order afterwards
        std::vector<std::vector<double>> errors(trials), sizes(trials);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&] {
            for (std::size_t t; (t = next.fetch_add(1)) < trials;) {
                try {
                    RunOptions options;
                    options.x_star = planted.x_star;
                    options.stream = t;
                    const ConvergenceTrace trace = run_method(sys, spec, options);
                    auto& err = errors[t];
                    auto& size = sizes[t];
                    err.resize(length);
                    size.resize(length);
                    for (std::size_t k = 0; k < length; ++k) {
                        const auto& rec = trace.records[std::min(k, trace.records.size() - 1)];
                        err[k] = rec.sq_error.value_or(0.0);
                        size[k] = static_cast<double>(rec.selectable_size);
                    }
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        if (workers <= 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        if (failure) std::rethrow_exception(failure);

        AveragedCurve curve{to_string(method), std::vector<double>(length, 0.0), std::vector<double>(length, 0.0)};
        for (std::size_t t = 0; t < trials; ++t) {
            for (std::size_t k = 0; k < length; ++k) {
                curve.mean_sq_error[k] += errors[t][k];
                curve.mean_selectable_size[k] += sizes[t][k];
            }
        }
        for (std::size_t k = 0; k < length; ++k) {
            curve.mean_sq_error[k] /= static_cast<double>(trials);
            curve.mean_selectable_size[k] /= static_cast<double>(trials);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

void emit_csv(const std::vector<AveragedCurve>& curves, std::ostream& out) {
    if (curves.empty()) throw std::invalid_argument("emit_csv: no curves to write");
    const std::size_t length = curves.front().mean_sq_error.size();
    for (const auto& c : curves)
        if (c.mean_sq_error.size() != length || c.mean_selectable_size.size() != length)
            throw std::invalid_argument("emit_csv: curves have different lengths");

    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17);
    buf << "iteration,method,mean_sq_error,mean_selectable_size\n";
    for (std::size_t k = 0; k < length; ++k)
        for (const auto& c : curves)
            buf << k << ',' << c.method << ',' << c.mean_sq_error[k] << ',' << c.mean_selectable_size[k] << '\n';
    out << buf.str();
    if (!out) throw std::runtime_error("emit_csv: write failed");
}

std::vector<AveragedCurve> parse_curves_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "iteration,method,mean_sq_error,mean_selectable_size")
        throw std::invalid_argument("unexpected curve CSV header");
    std::vector<AveragedCurve> curves;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 4) throw std::invalid_argument("malformed curve CSV row: " + line);
        const auto k = static_cast<std::size_t>(to_index(fields[0]));
        auto it = std::find_if(curves.begin(), curves.end(), [&](const auto& c) { return c.method == fields[1]; });
        if (it == curves.end()) {
            curves.push_back({fields[1], {}, {}});
            it = curves.end() - 1;
        }
        if (it->mean_sq_error.size() != k) throw std::invalid_argument("curve CSV rows out of order");
        it->mean_sq_error.push_back(parse_double(fields[2]));
        it->mean_selectable_size.push_back(parse_double(fields[3]));
    }
    return curves;
}

void emit_trace_csv(const ConvergenceTrace& trace, std::ostream& out) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17);
    buf << "iteration,row,sq_error,sq_residual,selectable_size,attempts\n";
    for (const auto& rec : trace.records) {
        buf << rec.iteration << ',';
        if (rec.row) buf << *rec.row;
        buf << ',';
        if (rec.sq_error) buf << *rec.sq_error;
        buf << ',' << rec.sq_residual << ',' << rec.selectable_size << ',' << rec.attempts << '\n';
    }
    out << buf.str();
    if (!out) throw std::runtime_error("emit_trace_csv: write failed");
}

}  // namespace ssrk
