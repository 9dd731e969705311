#include "pcplace/gmres.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

#include "pcplace/errors.hpp"

namespace pcplace {

namespace {

constexpr double kBreakdownTol = 1e-14;
constexpr std::size_t kDenseGuard = 2000;

struct Givens {
    double c = 1.0;
    Complex s{0.0, 0.0};

    void apply(Complex& x, Complex& y) const
    {
        const Complex tx = c * x + s * y;
        y = -std::conj(s) * x + c * y;
        x = tx;
    }
};

// Rotation zeroing b against a; returns false when both vanish.
bool make_givens(Complex a, Complex b, Givens& g)
{
    const double abs_a = std::abs(a);
    const double abs_b = std::abs(b);
    if (abs_a == 0.0 && abs_b == 0.0)
        return false;
    if (abs_a == 0.0) {
        g.c = 0.0;
        g.s = std::conj(b) / abs_b;
        return true;
    }
    const double t = std::hypot(abs_a, abs_b);
    g.c = abs_a / t;
    g.s = (a / abs_a) * std::conj(b) / t;
    return true;
}

} // namespace

SolveReport gmres_left(const LuPreconditioner& p, const SparseMatrixC& a, const VectorC& b, const GmresOptions& opts)
{
    const auto n = a.n();
    if (p.n() != n || static_cast<std::size_t>(b.size()) != n)
        throw std::invalid_argument("gmres_left: dimension mismatch");
    if (!(opts.tol > 0.0 && opts.tol < 1.0))
        throw std::invalid_argument("gmres_left: tol must lie in (0, 1)");
    if (opts.max_iter < 0)
        throw std::invalid_argument("gmres_left: max_iter must be nonnegative");

    const auto start = std::chrono::steady_clock::now();
    SolveReport rep;
    rep.solution = VectorC::Zero(static_cast<Eigen::Index>(n));

    const VectorC r0 = p.apply(b);
    const double beta = r0.norm();
    if (beta == 0.0) {
        rep.converged = true;
        rep.residual_history = {0.0};
        rep.krylov_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rep;
    }

    const auto m = static_cast<std::size_t>(opts.max_iter);
    std::vector<VectorC> basis;
    basis.reserve(std::min<std::size_t>(m + 1, 64));
    basis.push_back(r0 / beta);

    // Column-major upper Hessenberg, rotated in place into R.
    std::vector<std::vector<Complex>> h;
    std::vector<Givens> rot;
    std::vector<Complex> g{Complex(beta, 0.0)};
    rep.residual_history.push_back(1.0);

    std::size_t k = 0;
    while (k < m) {
        VectorC w = p.apply(a.multiply(basis[k]));
        const double w_norm0 = w.norm();

        std::vector<Complex> col(k + 2, Complex(0.0, 0.0));
        for (std::size_t i = 0; i <= k; ++i) {
            col[i] = basis[i].dot(w);
            w -= col[i] * basis[i];
        }
        // One reorthogonalization pass when cancellation is severe.
        if (w.norm() < 0.7 * w_norm0) {
            for (std::size_t i = 0; i <= k; ++i) {
                const Complex corr = basis[i].dot(w);
                col[i] += corr;
                w -= corr * basis[i];
            }
        }
        const double h_next = w.norm();
        col[k + 1] = Complex(h_next, 0.0);

        for (std::size_t i = 0; i < k; ++i)
            rot[i].apply(col[i], col[i + 1]);
        Givens gv;
        if (!make_givens(col[k], col[k + 1], gv))
            throw BreakdownError("gmres_left: singular Hessenberg column at iteration " + std::to_string(k + 1));
        gv.apply(col[k], col[k + 1]);
        rot.push_back(gv);
        h.push_back(std::move(col));

        g.push_back(Complex(0.0, 0.0));
        gv.apply(g[k], g[k + 1]);

        ++k;
        const double rel = std::abs(g[k]) / beta;
        rep.residual_history.push_back(rel);
        if (rel <= opts.tol) {
            rep.converged = true;
            break;
        }
        if (h_next <= kBreakdownTol * w_norm0)
            throw BreakdownError("gmres_left: Arnoldi breakdown with residual " + std::to_string(rel));
        basis.push_back(w / h_next);
    }

    // Back substitution on the k x k triangle.
    std::vector<Complex> y(k);
    for (std::size_t i = k; i-- > 0;) {
        Complex acc = g[i];
        for (std::size_t j = i + 1; j < k; ++j)
            acc -= h[j][i] * y[j];
        y[i] = acc / h[i][i];
    }
    for (std::size_t i = 0; i < k; ++i)
        rep.solution += y[i] * basis[i];

    rep.iterations = static_cast<int>(k);
    rep.krylov_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double b_norm = b.norm();
    rep.true_relative_residual = (b - a.multiply(rep.solution)).norm() / b_norm;
    return rep;
}

double alpha_of(const LuPreconditioner& p, const SparseMatrixC& a)
{
    const auto n = a.n();
    if (n > kDenseGuard)
        throw std::invalid_argument("alpha_of: matrix too large to densify (n > 2000)");
    if (p.n() != n)
        throw std::invalid_argument("alpha_of: dimension mismatch");
    const MatrixC dense = a.to_dense();
    MatrixC e = MatrixC::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < dense.cols(); ++j)
        e.col(j) -= p.apply(dense.col(j));
    Eigen::JacobiSVD<MatrixC> svd(e);
    return svd.singularValues()(0);
}

} // namespace pcplace
