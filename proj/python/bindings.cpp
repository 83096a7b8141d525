#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssrk/bounds.hpp"
#include "ssrk/harness.hpp"

namespace py = pybind11;
using namespace ssrk;

namespace {

py::dict trace_to_dict(const ConvergenceTrace& trace) {
    std::vector<index_t> iteration, selectable, attempts, row;
    std::vector<double> sq_error, sq_residual;
    for (const auto& r : trace.records) {
        iteration.push_back(r.iteration);
        row.push_back(r.row.value_or(-1));
        sq_error.push_back(r.sq_error.value_or(std::numeric_limits<double>::quiet_NaN()));
        sq_residual.push_back(r.sq_residual);
        selectable.push_back(r.selectable_size);
        attempts.push_back(r.attempts);
    }
    py::dict out;
    out["iteration"] = iteration;
    out["row"] = row;
    out["sq_error"] = sq_error;
    out["sq_residual"] = sq_residual;
    out["selectable_size"] = selectable;
    out["attempts"] = attempts;
    out["x"] = trace.x;
    switch (trace.stop) {
        case StopReason::max_iterations: out["stop"] = "max_iterations"; break;
        case StopReason::tolerance: out["stop"] = "tolerance"; break;
        case StopReason::selectable_set_empty: out["stop"] = "selectable_set_empty"; break;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Selectable-set randomized Kaczmarz solvers";

    py::register_exception<InvalidMatrix>(m, "InvalidMatrix", PyExc_ValueError);
    py::register_exception<MatrixMarketError>(m, "MatrixMarketError", PyExc_ValueError);

    py::class_<SparseMatrix>(m, "SparseMatrix")
        .def_static("from_dense", &SparseMatrix::from_dense, py::arg("dense"))
        .def_static(
            "from_triplets",
            [](index_t rows, index_t cols, const std::vector<std::tuple<index_t, index_t, double>>& entries) {
                std::vector<Triplet> t;
                t.reserve(entries.size());
                for (const auto& [i, j, v] : entries) t.push_back({i, j, v});
                return SparseMatrix::from_triplets(rows, cols, std::move(t));
            },
            py::arg("rows"), py::arg("cols"), py::arg("entries"))
        .def_static("identity", &SparseMatrix::identity)
        .def_property_readonly("rows", &SparseMatrix::rows)
        .def_property_readonly("cols", &SparseMatrix::cols)
        .def_property_readonly("nnz", &SparseMatrix::nnz)
        .def("to_dense", &SparseMatrix::to_dense)
        .def("multiply", [](const SparseMatrix& a, const Vector& x) { return a.multiply(x); })
        .def("__eq__", [](const SparseMatrix& a, const SparseMatrix& b) { return a == b; })
        .def("__repr__", [](const SparseMatrix& a) {
            return "<SparseMatrix " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", nnz=" +
                   std::to_string(a.nnz()) + ">";
        });

    m.def("load_matrix", &load_matrix, py::arg("source"), py::arg("seed") = 0,
          "Generator spec such as 'circulant:100' or 'path:12', or a Matrix Market path.");
    m.def("read_matrix_market", &read_matrix_market_file, py::arg("path"));
    m.def("write_matrix_market", &write_matrix_market_file, py::arg("matrix"), py::arg("path"));
    m.def("gramian", &gramian, py::arg("matrix"), py::arg("orth_tol") = 0.0);
    m.def("smallest_nonzero_singular_value",
          py::overload_cast<const SparseMatrix&>(&smallest_nonzero_singular_value));

    py::class_<PlantedSystem>(m, "PlantedSystem")
        .def_readonly("a", &PlantedSystem::a)
        .def_readonly("x_star", &PlantedSystem::x_star)
        .def_readonly("b", &PlantedSystem::b);
    m.def("plant_solution", &plant_solution, py::arg("matrix"), py::arg("seed") = 0);

    m.def(
        "graph_edges", [](const SparseMatrix& a) { return build_graph(gramian(a)).edges(); },
        "Edges (i, j), i < j, of the non-orthogonality graph of the rows.");
    m.def(
        "max_independent_set",
        [](const SparseMatrix& a) { return max_independent_set(build_graph(gramian(a)), MisMode::automatic).members; },
        "Maximum independent set of the row graph (greedy above 64 rows).");
    m.def(
        "structural_lower_bound",
        [](const std::string& kind, index_t m, index_t p1, index_t p2) {
            StructuredPattern p;
            if (kind == "path") p = StructuredPattern::path(m);
            else if (kind == "star") p = StructuredPattern::star(m);
            else if (kind == "cycle") p = StructuredPattern::cycle(m);
            else if (kind == "banded") p = StructuredPattern::banded(m, p1, p2);
            else if (kind == "regular") p = StructuredPattern::regular(m, p1);
            else throw std::invalid_argument("unknown pattern '" + kind + "'");
            return structural_lower_bound(p);
        },
        py::arg("kind"), py::arg("m"), py::arg("p1") = 0, py::arg("p2") = 0);

    m.def(
        "solve",
        [](const PlantedSystem& planted, const std::string& method, const std::string& weights,
           std::optional<double> theta, index_t iterations, double tolerance, std::uint64_t seed) {
            MethodSpec spec;
            spec.method = parse_method(method);
            spec.weights = parse_weight_mode(weights);
            if (spec.method == Method::rgrk) spec.theta = theta.value_or(0.5);
            spec.max_iterations = iterations;
            spec.tolerance = tolerance;
            spec.seed = seed;
            RunOptions options;
            options.x_star = planted.x_star;
            ConvergenceTrace trace;
            {
                py::gil_scoped_release release;
                trace = run_method(System(planted.a, planted.b), spec, options);
            }
            return trace_to_dict(trace);
        },
        py::arg("system"), py::arg("method") = "rk", py::arg("weights") = "uniform", py::arg("theta") = py::none(),
        py::arg("iterations") = 1000, py::arg("tolerance") = 1e-10, py::arg("seed") = 0);

    m.def(
        "bench",
        [](const std::string& matrix, const std::vector<std::string>& methods, const std::string& weights,
           double theta, index_t trials, index_t iterations, std::uint64_t seed, unsigned threads) {
            ExperimentConfig cfg;
            cfg.matrix = matrix;
            cfg.methods.clear();
            for (const auto& name : methods) cfg.methods.push_back(parse_method(name));
            cfg.weights = parse_weight_mode(weights);
            cfg.theta = theta;
            cfg.trials = trials;
            cfg.iterations = iterations;
            cfg.seed = seed;
            cfg.threads = threads;
            std::vector<AveragedCurve> curves;
            {
                py::gil_scoped_release release;
                curves = run_experiment(cfg);
            }
            py::dict out;
            for (const auto& c : curves) {
                py::dict d;
                d["mean_sq_error"] = c.mean_sq_error;
                d["mean_selectable_size"] = c.mean_selectable_size;
                out[py::str(c.method)] = d;
            }
            return out;
        },
        py::arg("matrix"), py::arg("methods") = std::vector<std::string>{"rk", "nssrk", "gssrk", "rgrk"},
        py::arg("weights") = "uniform", py::arg("theta") = 0.5, py::arg("trials") = 200,
        py::arg("iterations") = 5000, py::arg("seed") = 0, py::arg("threads") = 0);

    m.def(
        "bounds",
        [](const SparseMatrix& a, const std::string& weights) {
            const BoundReport r = bound_report(a, parse_weight_mode(weights));
            py::dict out;
            out["sigma_min_sq"] = r.sigma_min_sq;
            out["sigma_min_sq_normalized"] = r.sigma_min_sq_normalized;
            out["sigma_min_sq_weighted"] = r.sigma_min_sq_weighted;
            out["frobenius_sq"] = r.frobenius_sq;
            out["gamma"] = r.gamma;
            for (const auto& f : r.factors) out[py::str("factor_" + f.name)] = f.value;
            return out;
        },
        py::arg("matrix"), py::arg("weights") = "uniform");

    m.def(
        "verify",
        [](const SparseMatrix& a, std::uint64_t seed, index_t iterations) {
            VerifyOptions opts;
            opts.check.iterations = iterations;
            VerifyReport report;
            {
                py::gil_scoped_release release;
                report = verify(a, seed, opts);
            }
            py::list checks;
            for (const auto& c : report.checks)
                checks.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                                       py::arg("evaluations") = c.evaluations, py::arg("worst") = c.worst,
                                       py::arg("detail") = c.detail));
            return py::make_tuple(report.passed(), checks);
        },
        py::arg("matrix"), py::arg("seed") = 0, py::arg("iterations") = 400);
}
