#include "pcplace/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace pcplace {

namespace {

constexpr double kPsdFloor = 1e-10;

} // namespace

ParamBox::ParamBox(std::vector<Interval> bounds) : bounds_(std::move(bounds))
{
    if (bounds_.empty())
        throw std::invalid_argument("ParamBox: needs at least one dimension");
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
        if (!(bounds_[i].lo < bounds_[i].hi))
            throw std::invalid_argument("ParamBox: empty interval in dimension " + std::to_string(i));
    }
}

ParamBox ParamBox::symmetric_unit(std::size_t dims)
{
    return ParamBox(std::vector<Interval>(dims, Interval{-1.0, 1.0}));
}

bool ParamBox::contains(const Vector& y, double tol) const
{
    if (static_cast<std::size_t>(y.size()) != dims())
        return false;
    for (std::size_t i = 0; i < dims(); ++i) {
        const double v = y[static_cast<Eigen::Index>(i)];
        if (v < bounds_[i].lo - tol || v > bounds_[i].hi + tol)
            return false;
    }
    return true;
}

Vector ParamBox::center() const
{
    Vector c(static_cast<Eigen::Index>(dims()));
    for (std::size_t i = 0; i < dims(); ++i)
        c[static_cast<Eigen::Index>(i)] = 0.5 * (bounds_[i].lo + bounds_[i].hi);
    return c;
}

Vector ParamBox::project(const Vector& y) const
{
    Vector p = y;
    for (std::size_t i = 0; i < dims(); ++i) {
        auto k = static_cast<Eigen::Index>(i);
        p[k] = std::clamp(p[k], bounds_[i].lo, bounds_[i].hi);
    }
    return p;
}

ParamSet::ParamSet(ParamBox box, std::vector<Vector> points) : box_(std::move(box)), points_(std::move(points))
{
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!box_.contains(points_[i], 1e-12))
            throw std::invalid_argument("ParamSet: point " + std::to_string(i) + " outside the box");
    }
}

WeightMatrix::WeightMatrix(Matrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw std::invalid_argument("WeightMatrix: must be square and nonempty");
    const double scale = entries_.cwiseAbs().maxCoeff();
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("WeightMatrix: not symmetric");
    if (scale > 0.0) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
        const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
        if (eig.eigenvalues().minCoeff() < -kPsdFloor * norm)
            throw std::invalid_argument("WeightMatrix: not positive semidefinite");
    }
}

WeightMatrix WeightMatrix::zero(std::size_t dims)
{
    return WeightMatrix(Matrix::Zero(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(dims)));
}

WeightMatrix WeightMatrix::identity(std::size_t dims)
{
    return WeightMatrix(Matrix::Identity(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(dims)));
}

WeightMatrix WeightMatrix::normalized() const
{
    const double top = entries_.diagonal().maxCoeff();
    if (top <= 0.0)
        return *this;
    return WeightMatrix(entries_ / top);
}

double weighted_norm(const Vector& delta, const WeightMatrix& m)
{
    if (static_cast<std::size_t>(delta.size()) != m.dims())
        throw std::invalid_argument("weighted_norm: dimension mismatch");
    const double q = delta.dot(m.entries() * delta);
    if (q < 0.0) {
        const double scale = m.entries().norm() * delta.squaredNorm();
        if (q < -kPsdFloor * scale)
            throw std::invalid_argument("weighted_norm: negative quadratic form, weight matrix is not PSD");
        return 0.0;
    }
    return std::sqrt(q);
}

WeightMatrix affine_B(std::span<const double> eta)
{
    if (eta.empty())
        throw std::invalid_argument("affine_B: empty weight vector");
    Matrix b = Matrix::Zero(static_cast<Eigen::Index>(eta.size()), static_cast<Eigen::Index>(eta.size()));
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (!(eta[i] > 0.0))
            throw std::invalid_argument("affine_B: weights must be positive");
        b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = eta[i] * eta[i];
    }
    return WeightMatrix(std::move(b));
}

std::vector<double> shape_w1inf_norms(double amplitude, double decay, double grad_chi_inf, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("shape_w1inf_norms: n must be at least 1");
    std::vector<double> out(n);
    for (std::size_t j = 1; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        double v;
        if (j == 1)
            v = 2.0 * amplitude * grad_chi_inf;
        else if (j % 2 == 0)
            v = std::pow((jd + 2.0) / 2.0, -decay) * amplitude * (1.0 + grad_chi_inf + jd / 2.0);
        else
            v = std::pow((jd + 1.0) / 2.0, -decay) * amplitude * (1.0 + grad_chi_inf + (jd - 1.0) / 2.0);
        out[j - 1] = v;
    }
    return out;
}

WeightMatrix outer_product_weights(std::span<const double> w)
{
    Eigen::Map<const Vector> v(w.data(), static_cast<Eigen::Index>(w.size()));
    return WeightMatrix(v * v.transpose());
}

AnisotropyProfile anisotropy_profile(const WeightMatrix& b, const WeightMatrix& d, double c1, double c2,
                                     double domain_diameter)
{
    if (b.dims() != d.dims())
        throw std::invalid_argument("anisotropy_profile: B and D differ in dimension");
    if (c1 < 0.0 || c2 < 0.0 || c1 + c2 <= 0.0)
        throw std::invalid_argument("anisotropy_profile: need c1, c2 >= 0 with c1 + c2 > 0");
    if (!(domain_diameter > 0.0))
        throw std::invalid_argument("anisotropy_profile: domain diameter must be positive");

    AnisotropyProfile p;
    p.domain_diameter = domain_diameter;
    p.gamma.resize(b.dims());
    for (std::size_t j = 0; j < b.dims(); ++j) {
        p.gamma[j] = c1 * std::sqrt(std::max(d.diag(j), 0.0)) + c2 * std::sqrt(std::max(b.diag(j), 0.0));
        if (!(p.gamma[j] > 0.0))
            throw std::invalid_argument("anisotropy_profile: dimension " + std::to_string(j) + " has no influence");
    }
    const double top = *std::max_element(p.gamma.begin(), p.gamma.end());
    p.corr_lengths.resize(b.dims());
    for (std::size_t j = 0; j < b.dims(); ++j)
        p.corr_lengths[j] = (p.gamma[j] == top) ? domain_diameter : domain_diameter * top / p.gamma[j];
    return p;
}

} // namespace pcplace
