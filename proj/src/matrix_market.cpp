#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ssrk/linalg.hpp"

namespace ssrk {

namespace {

using Kind = MatrixMarketError::Kind;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') continue;
        return true;
    }
    return false;
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
    std::string banner;
    if (!std::getline(in, banner)) throw MatrixMarketError(Kind::malformed_header, "empty Matrix Market stream");

    std::istringstream hs(banner);
    std::string tag, object, format, field, symmetry;
    hs >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || lower(object) != "matrix")
        throw MatrixMarketError(Kind::malformed_header, "missing %%MatrixMarket matrix banner");
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array")
        throw MatrixMarketError(Kind::malformed_header, "unknown storage format '" + format + "'");
    if (field == "complex" || field == "pattern")
        throw MatrixMarketError(Kind::non_real_field, "field '" + field + "' is not real-valued");
    if (field != "real" && field != "integer" && field != "double")
        throw MatrixMarketError(Kind::malformed_header, "unknown field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw MatrixMarketError(Kind::malformed_header, "unsupported symmetry '" + symmetry + "'");
    const bool symmetric = symmetry == "symmetric";

    std::string line;
    if (!next_data_line(in, line)) throw MatrixMarketError(Kind::malformed_header, "missing size line");
    std::istringstream size_line(line);
    index_t m = 0, n = 0, entries = 0;
    if (format == "coordinate") {
        if (!(size_line >> m >> n >> entries))
            throw MatrixMarketError(Kind::malformed_header, "malformed coordinate size line");
    } else {
        if (!(size_line >> m >> n)) throw MatrixMarketError(Kind::malformed_header, "malformed array size line");
        entries = symmetric ? n * (n + 1) / 2 : m * n;
    }
    if (m < 1 || n < 1 || entries < 0) throw MatrixMarketError(Kind::malformed_header, "non-positive dimensions");
    if (symmetric && m != n) throw MatrixMarketError(Kind::malformed_header, "symmetric matrix must be square");

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
    auto add = [&](index_t i, index_t j, double v) {
        triplets.push_back({i, j, v});
        if (symmetric && i != j) triplets.push_back({j, i, v});
    };

    if (format == "coordinate") {
        for (index_t k = 0; k < entries; ++k) {
            if (!next_data_line(in, line))
                throw MatrixMarketError(Kind::malformed_entry, "expected " + std::to_string(entries) + " entries");
            std::istringstream es(line);
            index_t i = 0, j = 0;
            double v = 0.0;
            if (!(es >> i >> j >> v) || !std::isfinite(v))
                throw MatrixMarketError(Kind::malformed_entry, "malformed entry line '" + line + "'");
            if (i < 1 || i > m || j < 1 || j > n)
                throw MatrixMarketError(Kind::index_out_of_bounds, "entry (" + std::to_string(i) + ", " +
                                                                       std::to_string(j) + ") outside matrix");
            if (symmetric && j > i)
                throw MatrixMarketError(Kind::malformed_entry, "symmetric storage must be lower triangular");
            add(i - 1, j - 1, v);
        }
    } else {
        // column-major; symmetric stores the lower triangle only
        for (index_t j = 0; j < n; ++j) {
            for (index_t i = symmetric ? j : 0; i < m; ++i) {
                if (!next_data_line(in, line))
                    throw MatrixMarketError(Kind::malformed_entry, "array data ended early");
                std::istringstream es(line);
                double v = 0.0;
                if (!(es >> v) || !std::isfinite(v)) throw MatrixMarketError(Kind::malformed_entry, "malformed value '" + line + "'");
                if (v != 0.0) add(i, j, v);
            }
        }
    }

    try {
        return SparseMatrix::from_triplets(m, n, std::move(triplets));
    } catch (const InvalidMatrix& e) {
        throw MatrixMarketError(Kind::zero_row, e.what());
    }
}

SparseMatrix read_matrix_market_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MatrixMarketError(Kind::io, "cannot open '" + path + "'");
    return read_matrix_market(in);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf << std::setprecision(17);
    buf << "%%MatrixMarket matrix coordinate real general\n";
    buf << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    for (index_t i = 0; i < a.rows(); ++i) {
        const RowView r = a.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) buf << (i + 1) << ' ' << (r.cols[k] + 1) << ' ' << r.values[k] << '\n';
    }
    out << buf.str();
    if (!out) throw MatrixMarketError(Kind::io, "write failed");
}

void write_matrix_market_file(const SparseMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MatrixMarketError(Kind::io, "cannot open '" + path + "' for writing");
    write_matrix_market(a, out);
}

}  // namespace ssrk
