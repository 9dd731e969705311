#pragma once

#include <vector>

#include "pcplace/lu.hpp"
#include "pcplace/sparse.hpp"

namespace pcplace {

struct GmresOptions {
    double tol = 1e-5;
    int max_iter = 500;
};

struct SolveReport {
    VectorC solution;
    int iterations = 0;
    bool converged = false;
    /// ||P(b - A x_k)|| / ||P b|| for k = 0..iterations.
    std::vector<double> residual_history;
    /// ||b - A x|| / ||b|| of the returned solution.
    double true_relative_residual = 0.0;
    double krylov_time = 0.0;
};

/// Full (non-restarted) GMRES on P A x = P b with x0 = 0, stopping on the
/// preconditioned relative residual. Reaching max_iter is reported through
/// `converged`, not thrown; an Arnoldi breakdown above tolerance throws
/// BreakdownError.
SolveReport gmres_left(const LuPreconditioner& p, const SparseMatrixC& a, const VectorC& b,
                       const GmresOptions& opts = {});

/// Spectral norm of I - P A, computed densely. Only for n <= 2000.
double alpha_of(const LuPreconditioner& p, const SparseMatrixC& a);

} // namespace pcplace
