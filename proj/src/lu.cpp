#include "pcplace/lu.hpp"

#include <chrono>
#include <stdexcept>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "pcplace/errors.hpp"

namespace pcplace {

struct LuPreconditioner::Factors {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
};

LuPreconditioner LuPreconditioner::factor(const SparseMatrixC& a, Vector source_param)
{
    if (a.n() == 0)
        throw std::invalid_argument("lu_factor: empty matrix");

    const auto start = std::chrono::steady_clock::now();
    auto f = std::make_shared<Factors>();
    const auto m = a.to_eigen();
    f->lu.analyzePattern(m);
    f->lu.factorize(m);
    if (f->lu.info() != Eigen::Success)
        throw SingularMatrixError("lu_factor: " + f->lu.lastErrorMessage());
    const auto stop = std::chrono::steady_clock::now();

    LuPreconditioner p;
    p.factors_ = std::move(f);
    p.n_ = a.n();
    p.source_param_ = std::move(source_param);
    p.build_time_ = std::chrono::duration<double>(stop - start).count();
    return p;
}

VectorC LuPreconditioner::apply(const VectorC& b) const
{
    if (static_cast<std::size_t>(b.size()) != n_)
        throw std::invalid_argument("LuPreconditioner::apply: dimension mismatch");
    VectorC x = factors_->lu.solve(b);
    if (!x.allFinite())
        throw SingularMatrixError("LuPreconditioner::apply: non-finite result, factors are singular");
    return x;
}

} // namespace pcplace
