#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace pcplace {

using Complex = std::complex<double>;
using VectorC = Eigen::VectorXcd;
using MatrixC = Eigen::MatrixXcd;

struct TripletC {
    std::int32_t row;
    std::int32_t col;
    Complex value;
};

/// Square complex matrix in compressed sparse row form. Column indices are
/// sorted and unique within each row.
class SparseMatrixC {
public:
    SparseMatrixC() = default;
    SparseMatrixC(std::size_t n, std::vector<std::int32_t> row_ptr, std::vector<std::int32_t> col_idx,
                  std::vector<Complex> values);

    /// Duplicate (row, col) entries are summed.
    static SparseMatrixC from_triplets(std::size_t n, std::vector<TripletC> triplets);
    static SparseMatrixC identity(std::size_t n);
    static SparseMatrixC from_dense(const MatrixC& dense, double drop_tol = 0.0);

    std::size_t n() const { return n_; }
    std::size_t nnz() const { return values_.size(); }
    std::span<const std::int32_t> row_ptr() const { return row_ptr_; }
    std::span<const std::int32_t> col_idx() const { return col_idx_; }
    std::span<const Complex> values() const { return values_; }

    VectorC multiply(const VectorC& x) const;
    MatrixC to_dense() const;
    Eigen::SparseMatrix<Complex> to_eigen() const;
    double frobenius_norm() const;

    /// Frobenius norm of (this - other); patterns may differ.
    double distance(const SparseMatrixC& other) const;

private:
    std::size_t n_ = 0;
    std::vector<std::int32_t> row_ptr_{0};
    std::vector<std::int32_t> col_idx_;
    std::vector<Complex> values_;
};

} // namespace pcplace
