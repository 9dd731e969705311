#include "pcplace/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcplace {

SparseMatrixC::SparseMatrixC(std::size_t n, std::vector<std::int32_t> row_ptr, std::vector<std::int32_t> col_idx,
                             std::vector<Complex> values)
    : n_(n), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values))
{
    if (row_ptr_.size() != n_ + 1 || row_ptr_.front() != 0)
        throw std::invalid_argument("SparseMatrixC: row_ptr must have length n+1 and start at 0");
    if (col_idx_.size() != values_.size() || static_cast<std::size_t>(row_ptr_.back()) != values_.size())
        throw std::invalid_argument("SparseMatrixC: inconsistent array lengths");
    for (std::size_t r = 0; r < n_; ++r) {
        if (row_ptr_[r + 1] < row_ptr_[r])
            throw std::invalid_argument("SparseMatrixC: row_ptr must be nondecreasing");
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] < 0 || static_cast<std::size_t>(col_idx_[k]) >= n_)
                throw std::invalid_argument("SparseMatrixC: column index out of range");
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
                throw std::invalid_argument("SparseMatrixC: columns must be sorted and unique per row");
        }
    }
}

SparseMatrixC SparseMatrixC::from_triplets(std::size_t n, std::vector<TripletC> triplets)
{
    for (const auto& t : triplets) {
        if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n || static_cast<std::size_t>(t.col) >= n)
            throw std::invalid_argument("SparseMatrixC::from_triplets: index out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const TripletC& a, const TripletC& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

    std::vector<std::int32_t> row_ptr(n + 1, 0);
    std::vector<std::int32_t> cols;
    std::vector<Complex> vals;
    cols.reserve(triplets.size());
    vals.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto& t = triplets[k];
        if (!cols.empty() && k > 0 && triplets[k - 1].row == t.row && triplets[k - 1].col == t.col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(t.col);
        vals.push_back(t.value);
        ++row_ptr[static_cast<std::size_t>(t.row) + 1];
    }
    for (std::size_t r = 0; r < n; ++r)
        row_ptr[r + 1] += row_ptr[r];
    return SparseMatrixC(n, std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrixC SparseMatrixC::identity(std::size_t n)
{
    std::vector<std::int32_t> row_ptr(n + 1), cols(n);
    for (std::size_t i = 0; i <= n; ++i)
        row_ptr[i] = static_cast<std::int32_t>(i);
    for (std::size_t i = 0; i < n; ++i)
        cols[i] = static_cast<std::int32_t>(i);
    return SparseMatrixC(n, std::move(row_ptr), std::move(cols), std::vector<Complex>(n, Complex(1.0, 0.0)));
}

SparseMatrixC SparseMatrixC::from_dense(const MatrixC& dense, double drop_tol)
{
    if (dense.rows() != dense.cols())
        throw std::invalid_argument("SparseMatrixC::from_dense: matrix must be square");
    std::vector<TripletC> t;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (std::abs(dense(i, j)) > drop_tol)
                t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), dense(i, j)});
    return from_triplets(static_cast<std::size_t>(dense.rows()), std::move(t));
}

VectorC SparseMatrixC::multiply(const VectorC& x) const
{
    if (static_cast<std::size_t>(x.size()) != n_)
        throw std::invalid_argument("SparseMatrixC::multiply: dimension mismatch");
    VectorC y(x.size());
    for (std::size_t r = 0; r < n_; ++r) {
        Complex acc(0.0, 0.0);
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += values_[k] * x[col_idx_[k]];
        y[static_cast<Eigen::Index>(r)] = acc;
    }
    return y;
}

MatrixC SparseMatrixC::to_dense() const
{
    MatrixC d = MatrixC::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < n_; ++r)
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            d(static_cast<Eigen::Index>(r), col_idx_[k]) = values_[k];
    return d;
}

Eigen::SparseMatrix<Complex> SparseMatrixC::to_eigen() const
{
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(values_.size());
    for (std::size_t r = 0; r < n_; ++r)
        for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            t.emplace_back(static_cast<int>(r), col_idx_[k], values_[k]);
    Eigen::SparseMatrix<Complex> m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

double SparseMatrixC::frobenius_norm() const
{
    double s = 0.0;
    for (const auto& v : values_)
        s += std::norm(v);
    return std::sqrt(s);
}

double SparseMatrixC::distance(const SparseMatrixC& other) const
{
    if (other.n_ != n_)
        throw std::invalid_argument("SparseMatrixC::distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t r = 0; r < n_; ++r) {
        auto a = row_ptr_[r], ae = row_ptr_[r + 1];
        auto b = other.row_ptr_[r], be = other.row_ptr_[r + 1];
        while (a < ae || b < be) {
            if (b >= be || (a < ae && col_idx_[a] < other.col_idx_[b])) {
                s += std::norm(values_[a++]);
            } else if (a >= ae || other.col_idx_[b] < col_idx_[a]) {
                s += std::norm(other.values_[b++]);
            } else {
                s += std::norm(values_[a++] - other.values_[b++]);
            }
        }
    }
    return std::sqrt(s);
}

} // namespace pcplace
