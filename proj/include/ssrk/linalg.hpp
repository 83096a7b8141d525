#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssrk {

using index_t = std::int64_t;
using Vector = std::vector<double>;

/// Thrown when a matrix or vector violates a structural invariant.
class InvalidMatrix : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Triplet {
    index_t row;
    index_t col;
    double value;
};

/// One row of a CSR matrix as parallel views.
struct RowView {
    std::span<const index_t> cols;
    std::span<const double> values;

    std::size_t size() const { return cols.size(); }
    double dot(std::span<const double> x) const;
    double squared_norm() const;
};

/**
 * Compressed sparse row matrix.
 *
 * Immutable after construction. Every row holds at least one nonzero value,
 * column indices are strictly increasing within a row, and all values are
 * finite; the constructor rejects anything else with InvalidMatrix.
 */
class SparseMatrix {
public:
    SparseMatrix(index_t rows, index_t cols, std::vector<index_t> row_ptr,
                 std::vector<index_t> col_idx, std::vector<double> values);

    /// Assemble from unordered coordinates. Duplicates are summed and
    /// entries that end up exactly zero are dropped.
    static SparseMatrix from_triplets(index_t rows, index_t cols, std::vector<Triplet> entries);
    static SparseMatrix from_dense(const Eigen::MatrixXd& dense);
    static SparseMatrix identity(index_t n);

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    RowView row(index_t i) const;

    std::span<const index_t> row_ptr() const { return row_ptr_; }
    std::span<const index_t> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Stored value at (i, j), zero when structurally absent.
    double coeff(index_t i, index_t j) const;

    Vector multiply(std::span<const double> x) const;
    Vector multiply_transpose(std::span<const double> y) const;
    Eigen::MatrixXd to_dense() const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<index_t> row_ptr_;
    std::vector<index_t> col_idx_;
    std::vector<double> values_;
};

struct RowGeometry {
    Vector squared_norms;
    double frobenius_sq = 0.0;
    double min_squared_norm = 0.0;
};

RowGeometry row_norms(const SparseMatrix& a);

/**
 * G = A A^T computed by sparse row-pair intersection.
 *
 * An off-diagonal inner product is stored only when
 * |<A_i, A_j>| > orth_tol * ||A_i|| ||A_j||; with the default tolerance of
 * zero only exact cancellation produces a structural zero. The diagonal is
 * always stored. G(i, j) and G(j, i) hold the same floating value.
 */
SparseMatrix gramian(const SparseMatrix& a, double orth_tol = 0.0);

/// Smallest singular value above max(m, n) * eps * sigma_max.
double smallest_nonzero_singular_value(const Eigen::MatrixXd& a);
double smallest_nonzero_singular_value(const SparseMatrix& a);

/// Rows scaled by row_scale[i]: diag(row_scale) * A, dense.
Eigen::MatrixXd scale_rows(const SparseMatrix& a, std::span<const double> row_scale);

double dot(std::span<const double> x, std::span<const double> y);
double squared_norm(std::span<const double> x);
double squared_distance(std::span<const double> x, std::span<const double> y);

// Matrix Market I/O

class MatrixMarketError : public std::runtime_error {
public:
    enum class Kind { malformed_header, malformed_entry, index_out_of_bounds, non_real_field, zero_row, io };

    MatrixMarketError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market_file(const std::string& path);

/// Writes coordinate/real/general with 17 significant digits.
void write_matrix_market(const SparseMatrix& a, std::ostream& out);
void write_matrix_market_file(const SparseMatrix& a, const std::string& path);

}  // namespace ssrk
