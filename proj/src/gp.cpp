#include "pcplace/gp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcplace/kernel.hpp"

namespace pcplace {

double prior_mean(const Vector& delta, const Hyperparams& c, const WeightMatrix& b, const WeightMatrix& d)
{
    if (c.c1 < 0.0 || c.c2 < 0.0)
        throw std::invalid_argument("prior_mean: hyperparameters must be nonnegative");
    const Vector a = delta.cwiseAbs();
    double mu = 0.0;
    if (c.c1 != 0.0)
        mu += c.c1 * weighted_norm(a, d);
    if (c.c2 != 0.0)
        mu += c.c2 * weighted_norm(a, b);
    return mu;
}

HyperparamFit fit_hyperparameters(const std::vector<Vector>& inputs, const std::vector<double>& targets,
                                  const WeightMatrix& b, const WeightMatrix& d)
{
    if (inputs.empty() || inputs.size() != targets.size())
        throw std::invalid_argument("fit_hyperparameters: need matching, nonempty inputs and targets");

    const auto n = static_cast<Eigen::Index>(inputs.size());
    Vector col_d(n), col_b(n), t(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector a = inputs[i].cwiseAbs();
        col_d[i] = weighted_norm(a, d);
        col_b[i] = weighted_norm(a, b);
        t[i] = targets[i];
    }

    HyperparamFit fit;
    const double dd = col_d.squaredNorm(), bb = col_b.squaredNorm();
    if (dd == 0.0 && bb == 0.0) {
        fit.degenerate = true;
        return fit;
    }
    const auto one_column = [&](const Vector& col) { return std::max(0.0, col.dot(t) / col.squaredNorm()); };
    if (dd == 0.0) {
        fit.c.c2 = one_column(col_b);
        return fit;
    }
    if (bb == 0.0) {
        fit.c.c1 = one_column(col_d);
        return fit;
    }

    // 2x2 normal equations; a (near) singular Gram means parallel columns, where
    // the minimum-norm solution splits the weight proportionally.
    const double db = col_d.dot(col_b);
    const double det = dd * bb - db * db;
    double c1 = 0.0, c2 = 0.0;
    if (det > 1e-12 * dd * bb) {
        c1 = (bb * col_d.dot(t) - db * col_b.dot(t)) / det;
        c2 = (dd * col_b.dot(t) - db * col_d.dot(t)) / det;
    } else {
        const Vector& ref = dd >= bb ? col_d : col_b;
        const double lambda_d = col_d.dot(ref) / ref.squaredNorm();
        const double lambda_b = col_b.dot(ref) / ref.squaredNorm();
        const double s = ref.dot(t) / ref.squaredNorm() / (lambda_d * lambda_d + lambda_b * lambda_b);
        c1 = s * lambda_d;
        c2 = s * lambda_b;
    }
    if (c1 >= 0.0 && c2 >= 0.0) {
        fit.c = {c1, c2};
        return fit;
    }
    const Hyperparams only_d{one_column(col_d), 0.0};
    const Hyperparams only_b{0.0, one_column(col_b)};
    const double sse_d = (only_d.c1 * col_d - t).squaredNorm();
    const double sse_b = (only_b.c2 * col_b - t).squaredNorm();
    fit.c = sse_d <= sse_b ? only_d : only_b;
    return fit;
}

double clamp_alpha(double alpha)
{
    if (std::isnan(alpha))
        return kAlphaCeil;
    return std::clamp(alpha, kAlphaFloor, kAlphaCeil);
}

GpState::GpState(WeightMatrix b, WeightMatrix d, double domain_diameter)
    : b_(std::move(b)), d_(std::move(d)), diameter_(domain_diameter)
{
    if (b_.dims() != d_.dims())
        throw std::invalid_argument("GpState: B and D dimensions differ");
    if (!(diameter_ > 0.0))
        throw std::invalid_argument("GpState: domain diameter must be positive");
    profile_ = anisotropy_profile(b_, d_, 1.0, 1.0, diameter_);
}

void GpState::add(const Vector& delta, double alpha)
{
    if (static_cast<std::size_t>(delta.size()) != dims())
        throw std::invalid_argument("GpState::add: dimension mismatch");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("GpState::add: alpha must lie in (0, 1)");
    inputs_.push_back(delta);
    targets_.push_back(alpha);
    const auto fit = fit_hyperparameters(inputs_, targets_, b_, d_);
    c_ = fit.c;
    degenerate_ = fit.degenerate;
    refactor();
}

void GpState::restore(std::vector<Vector> inputs, std::vector<double> targets, const Hyperparams& c)
{
    if (inputs.size() != targets.size())
        throw std::invalid_argument("GpState::restore: inputs and targets differ in length");
    for (const auto& x : inputs)
        if (static_cast<std::size_t>(x.size()) != dims())
            throw std::invalid_argument("GpState::restore: dimension mismatch");
    inputs_ = std::move(inputs);
    targets_ = std::move(targets);
    c_ = c;
    degenerate_ = inputs_.empty() || (c.c1 == 0.0 && c.c2 == 0.0);
    refactor();
}

void GpState::refactor()
{
    // Correlation lengths follow the fitted weights; fall back to C = (1, 1)
    // while the fit leaves some dimension without weight.
    try {
        profile_ = anisotropy_profile(b_, d_, c_.c1, c_.c2, diameter_);
    } catch (const std::invalid_argument&) {
        profile_ = anisotropy_profile(b_, d_, 1.0, 1.0, diameter_);
    }
    if (inputs_.empty()) {
        weights_.resize(0);
        jitter_ = 0.0;
        return;
    }

    const Matrix gram = gram_matrix(inputs_, profile_);
    const auto n = gram.rows();
    Vector resid(n);
    for (Eigen::Index i = 0; i < n; ++i)
        resid[i] = targets_[static_cast<std::size_t>(i)] - prior(inputs_[static_cast<std::size_t>(i)]);

    const double max_diag = gram.diagonal().maxCoeff();
    jitter_ = 1e-10 * (max_diag > 0.0 ? max_diag : 1.0);
    for (int attempt = 0; attempt <= 3; ++attempt, jitter_ *= 10.0) {
        Matrix k = gram;
        k.diagonal().array() += jitter_;
        llt_.compute(k);
        if (llt_.info() == Eigen::Success) {
            weights_ = llt_.solve(resid);
            return;
        }
    }
    throw std::runtime_error("GpState: Gram matrix not positive definite after jitter escalation");
}

double GpState::prior(const Vector& delta) const
{
    return prior_mean(delta, c_, b_, d_);
}

double GpState::mean(const Vector& delta) const
{
    if (static_cast<std::size_t>(delta.size()) != dims())
        throw std::invalid_argument("GpState::mean: dimension mismatch");
    double mu = prior(delta);
    for (std::size_t i = 0; i < inputs_.size(); ++i)
        mu += kernel(delta, inputs_[i], profile_) * weights_[static_cast<Eigen::Index>(i)];
    return mu;
}

Posterior GpState::posterior(const Vector& delta) const
{
    if (static_cast<std::size_t>(delta.size()) != dims())
        throw std::invalid_argument("GpState::posterior: dimension mismatch");
    Posterior p;
    p.mean = prior(delta);
    const double kss = kernel(delta, delta, profile_);
    if (inputs_.empty()) {
        p.variance = kss;
        return p;
    }
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    Vector ks(n);
    for (Eigen::Index i = 0; i < n; ++i)
        ks[i] = kernel(delta, inputs_[static_cast<std::size_t>(i)], profile_);
    p.mean += ks.dot(weights_);
    p.variance = std::max(0.0, kss - ks.dot(llt_.solve(ks)));
    return p;
}

} // namespace pcplace
