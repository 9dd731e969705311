#pragma once

#include <memory>

#include "pcplace/param_space.hpp"
#include "pcplace/sparse.hpp"

namespace pcplace {

/// Sparse LU factors of A(y_hat) used as the left preconditioner P = A(y_hat)^{-1}.
/// Copies share the (immutable) factors.
class LuPreconditioner {
public:
    /// Throws SingularMatrixError if a pivot cannot be recovered.
    static LuPreconditioner factor(const SparseMatrixC& a, Vector source_param = {});

    VectorC apply(const VectorC& b) const;

    std::size_t n() const { return n_; }
    const Vector& source_param() const { return source_param_; }
    double build_time() const { return build_time_; }

private:
    struct Factors;
    std::shared_ptr<const Factors> factors_;
    std::size_t n_ = 0;
    Vector source_param_;
    double build_time_ = 0.0;
};

inline LuPreconditioner lu_factor(const SparseMatrixC& a, Vector source_param = {})
{
    return LuPreconditioner::factor(a, std::move(source_param));
}

} // namespace pcplace
