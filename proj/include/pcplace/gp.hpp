#pragma once

// Gaussian process on alpha over shifted parameters delta = y - ybar, with
// a norm-based prior mean and the symmetrized univariate kernel.

#include <vector>

#include <Eigen/Cholesky>

#include "pcplace/param_space.hpp"

namespace pcplace {

struct Hyperparams {
    double c1 = 0.0;
    double c2 = 0.0;
};

/// C1 ||delta||_D + C2 ||delta||_B, with the norms taken of |delta| componentwise.
/// For diagonal B and D this is the plain weighted norm.
double prior_mean(const Vector& delta, const Hyperparams& c, const WeightMatrix& b, const WeightMatrix& d);

struct HyperparamFit {
    Hyperparams c;
    /// Both design columns vanish; c is (0, 0).
    bool degenerate = false;
};

/// Nonnegative least squares fit of the prior mean to the targets, in closed form.
HyperparamFit fit_hyperparameters(const std::vector<Vector>& inputs, const std::vector<double>& targets,
                                  const WeightMatrix& b, const WeightMatrix& d);

struct Posterior {
    double mean = 0.0;
    double variance = 0.0;
};

inline constexpr double kAlphaFloor = 1e-14;
inline constexpr double kAlphaCeil = 1.0 - 1e-9;

double clamp_alpha(double alpha);

class GpState {
public:
    GpState(WeightMatrix b, WeightMatrix d, double domain_diameter);

    /// Appends a noise-free observation and refits hyperparameters, kernel and factorization.
    void add(const Vector& delta, double alpha);

    /// Rebuilds the state from stored data, keeping the given hyperparameters.
    void restore(std::vector<Vector> inputs, std::vector<double> targets, const Hyperparams& c);

    /// Raw posterior (mean not clamped). Without observations this is the prior.
    Posterior posterior(const Vector& delta) const;
    /// Posterior mean only.
    double mean(const Vector& delta) const;
    double prior(const Vector& delta) const;

    std::size_t dims() const { return b_.dims(); }
    std::size_t size() const { return inputs_.size(); }
    const std::vector<Vector>& inputs() const { return inputs_; }
    const std::vector<double>& targets() const { return targets_; }
    const Hyperparams& hyperparams() const { return c_; }
    const AnisotropyProfile& profile() const { return profile_; }
    const WeightMatrix& B() const { return b_; }
    const WeightMatrix& D() const { return d_; }
    double domain_diameter() const { return diameter_; }
    double jitter() const { return jitter_; }
    bool degenerate_fit() const { return degenerate_; }

private:
    void refactor();

    WeightMatrix b_;
    WeightMatrix d_;
    double diameter_;
    std::vector<Vector> inputs_;
    std::vector<double> targets_;
    Hyperparams c_;
    bool degenerate_ = true;
    AnisotropyProfile profile_;
    double jitter_ = 0.0;
    Eigen::LLT<Matrix> llt_;
    Vector weights_;
};

} // namespace pcplace
