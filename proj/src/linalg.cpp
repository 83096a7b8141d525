#include "ssrk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ssrk {

double RowView::dot(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) sum += values[k] * x[static_cast<std::size_t>(cols[k])];
    return sum;
}

double RowView::squared_norm() const {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return sum;
}

SparseMatrix::SparseMatrix(index_t rows, index_t cols, std::vector<index_t> row_ptr,
                           std::vector<index_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (rows_ < 1 || cols_ < 1) throw InvalidMatrix("matrix dimensions must be positive");
    if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 || row_ptr_.front() != 0)
        throw InvalidMatrix("row offsets do not describe the declared row count");
    if (col_idx_.size() != values_.size() || row_ptr_.back() != static_cast<index_t>(values_.size()))
        throw InvalidMatrix("row offsets inconsistent with stored entries");
    for (index_t i = 0; i < rows_; ++i) {
        const index_t begin = row_ptr_[i], end = row_ptr_[i + 1];
        if (end < begin) throw InvalidMatrix("row offsets must be monotone");
        bool has_nonzero = false;
        for (index_t k = begin; k < end; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
                throw InvalidMatrix("column index out of range in row " + std::to_string(i));
            if (k > begin && col_idx_[k] <= col_idx_[k - 1])
                throw InvalidMatrix("column indices not strictly increasing in row " + std::to_string(i));
            if (!std::isfinite(values_[k])) throw InvalidMatrix("non-finite value in row " + std::to_string(i));
            has_nonzero = has_nonzero || values_[k] != 0.0;
        }
        if (!has_nonzero) throw InvalidMatrix("row " + std::to_string(i) + " is zero");
    }
}

SparseMatrix SparseMatrix::from_triplets(index_t rows, index_t cols, std::vector<Triplet> entries) {
    if (rows < 1 || cols < 1) throw InvalidMatrix("matrix dimensions must be positive");
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw InvalidMatrix("triplet index out of range");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    std::vector<index_t> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
    std::vector<index_t> col_idx;
    std::vector<double> values;
    col_idx.reserve(entries.size());
    values.reserve(entries.size());

    std::size_t k = 0;
    for (index_t i = 0; i < rows; ++i) {
        while (k < entries.size() && entries[k].row == i) {
            const index_t j = entries[k].col;
            double sum = 0.0;
            while (k < entries.size() && entries[k].row == i && entries[k].col == j) sum += entries[k++].value;
            if (sum != 0.0) {
                col_idx.push_back(j);
                values.push_back(sum);
            }
        }
        row_ptr[i + 1] = static_cast<index_t>(values.size());
    }
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense) {
    std::vector<Triplet> entries;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
    return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

SparseMatrix SparseMatrix::identity(index_t n) {
    std::vector<Triplet> entries;
    for (index_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return from_triplets(n, n, std::move(entries));
}

RowView SparseMatrix::row(index_t i) const {
    if (i < 0 || i >= rows_) throw std::out_of_range("row index " + std::to_string(i) + " out of range");
    const auto begin = static_cast<std::size_t>(row_ptr_[i]);
    const auto len = static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]);
    return {std::span<const index_t>(col_idx_).subspan(begin, len),
            std::span<const double>(values_).subspan(begin, len)};
}

double SparseMatrix::coeff(index_t i, index_t j) const {
    const RowView r = row(i);
    const auto it = std::lower_bound(r.cols.begin(), r.cols.end(), j);
    if (it == r.cols.end() || *it != j) return 0.0;
    return r.values[static_cast<std::size_t>(it - r.cols.begin())];
}

Vector SparseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(cols_)) throw std::invalid_argument("multiply: dimension mismatch");
    Vector y(static_cast<std::size_t>(rows_));
    for (index_t i = 0; i < rows_; ++i) y[i] = row(i).dot(x);
    return y;
}

Vector SparseMatrix::multiply_transpose(std::span<const double> y) const {
    if (y.size() != static_cast<std::size_t>(rows_))
        throw std::invalid_argument("multiply_transpose: dimension mismatch");
    Vector x(static_cast<std::size_t>(cols_), 0.0);
    for (index_t i = 0; i < rows_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) x[col_idx_[k]] += values_[k] * y[i];
    return x;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
    for (index_t i = 0; i < rows_; ++i)
        for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) dense(i, col_idx_[k]) = values_[k];
    return dense;
}

RowGeometry row_norms(const SparseMatrix& a) {
    RowGeometry geo;
    geo.squared_norms.resize(static_cast<std::size_t>(a.rows()));
    geo.min_squared_norm = std::numeric_limits<double>::infinity();
    for (index_t i = 0; i < a.rows(); ++i) {
        const double sq = a.row(i).squared_norm();
        if (!(sq > 0.0)) throw InvalidMatrix("row " + std::to_string(i) + " has zero norm");
        geo.squared_norms[i] = sq;
        geo.frobenius_sq += sq;
        geo.min_squared_norm = std::min(geo.min_squared_norm, sq);
    }
    return geo;
}

SparseMatrix gramian(const SparseMatrix& a, double orth_tol) {
    const index_t m = a.rows();
    const RowGeometry geo = row_norms(a);

    // column -> rows incidence, so each row only meets rows sharing a column
    std::vector<index_t> col_ptr(static_cast<std::size_t>(a.cols()) + 1, 0);
    for (index_t c : a.col_idx()) ++col_ptr[c + 1];
    std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
    std::vector<index_t> col_rows(a.nnz());
    std::vector<double> col_vals(a.nnz());
    {
        std::vector<index_t> next(col_ptr.begin(), col_ptr.end() - 1);
        for (index_t i = 0; i < m; ++i) {
            const RowView r = a.row(i);
            for (std::size_t k = 0; k < r.size(); ++k) {
                const index_t dst = next[r.cols[k]]++;
                col_rows[dst] = i;
                col_vals[dst] = r.values[k];
            }
        }
    }

    // upper triangle (j > i) via a dense accumulator with a touched list
    std::vector<double> acc(static_cast<std::size_t>(m), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    std::vector<index_t> touched;
    std::vector<std::vector<std::pair<index_t, double>>> upper(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i) {
        const RowView r = a.row(i);
        touched.clear();
        for (std::size_t k = 0; k < r.size(); ++k) {
            const index_t c = r.cols[k];
            for (index_t q = col_ptr[c]; q < col_ptr[c + 1]; ++q) {
                const index_t j = col_rows[q];
                if (j <= i) continue;
                if (!seen[j]) {
                    seen[j] = 1;
                    touched.push_back(j);
                }
                acc[j] += r.values[k] * col_vals[q];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (index_t j : touched) {
            const double g = acc[j];
            const double scale = std::sqrt(geo.squared_norms[i] * geo.squared_norms[j]);
            if (std::abs(g) > orth_tol * scale && g != 0.0) upper[i].emplace_back(j, g);
            acc[j] = 0.0;
            seen[j] = 0;
        }
    }

    std::vector<std::vector<std::pair<index_t, double>>> lower(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i)
        for (const auto& [j, g] : upper[i]) lower[j].emplace_back(i, g);

    std::vector<index_t> row_ptr{0};
    std::vector<index_t> cols;
    std::vector<double> vals;
    for (index_t i = 0; i < m; ++i) {
        for (const auto& [j, g] : lower[i]) {
            cols.push_back(j);
            vals.push_back(g);
        }
        cols.push_back(i);
        vals.push_back(geo.squared_norms[i]);
        for (const auto& [j, g] : upper[i]) {
            cols.push_back(j);
            vals.push_back(g);
        }
        row_ptr.push_back(static_cast<index_t>(vals.size()));
    }
    return SparseMatrix(m, m, std::move(row_ptr), std::move(cols), std::move(vals));
}

double smallest_nonzero_singular_value(const Eigen::MatrixXd& a) {
    if (a.size() == 0) throw InvalidMatrix("empty matrix has no singular values");
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double threshold = static_cast<double>(std::max(a.rows(), a.cols())) *
                             std::numeric_limits<double>::epsilon() * sigma_max;
    double smallest = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > threshold) smallest = sv(k);
    if (!(smallest > 0.0)) throw InvalidMatrix("all singular values are numerically zero");
    return smallest;
}

double smallest_nonzero_singular_value(const SparseMatrix& a) {
    return smallest_nonzero_singular_value(a.to_dense());
}

Eigen::MatrixXd scale_rows(const SparseMatrix& a, std::span<const double> row_scale) {
    if (row_scale.size() != static_cast<std::size_t>(a.rows()))
        throw std::invalid_argument("scale_rows: dimension mismatch");
    Eigen::MatrixXd dense = a.to_dense();
    for (index_t i = 0; i < a.rows(); ++i) dense.row(i) *= row_scale[i];
    return dense;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double squared_norm(std::span<const double> x) { return dot(x, x); }

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("squared_distance: length mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        sum += d * d;
    }
    return sum;
}

}  // namespace ssrk
