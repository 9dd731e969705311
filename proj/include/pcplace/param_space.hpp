#pragma once

// Parameter-space geometry: the box Y, the point set W, weighted norms and
// the anisotropy profile that drives the surrogate's prior and kernel.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace pcplace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
};

class ParamBox {
public:
    explicit ParamBox(std::vector<Interval> bounds);

    /// [-1, 1]^dims
    static ParamBox symmetric_unit(std::size_t dims);

    std::size_t dims() const { return bounds_.size(); }
    const Interval& bound(std::size_t i) const { return bounds_.at(i); }
    const std::vector<Interval>& bounds() const { return bounds_; }

    bool contains(const Vector& y, double tol = 0.0) const;
    Vector center() const;
    Vector project(const Vector& y) const;

private:
    std::vector<Interval> bounds_;
};

/// Ordered collection of parameter points; a point's index is its position.
class ParamSet {
public:
    ParamSet(ParamBox box, std::vector<Vector> points);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Vector& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Vector>& points() const { return points_; }
    const ParamBox& box() const { return box_; }

private:
    ParamBox box_;
    std::vector<Vector> points_;
};

/// Symmetric positive semidefinite N x N weight matrix.
class WeightMatrix {
public:
    explicit WeightMatrix(Matrix entries);

    static WeightMatrix zero(std::size_t dims);
    static WeightMatrix identity(std::size_t dims);

    const Matrix& entries() const { return entries_; }
    std::size_t dims() const { return static_cast<std::size_t>(entries_.rows()); }
    double diag(std::size_t i) const { return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)); }
    bool is_zero() const { return entries_.isZero(0.0); }

    /// Scaled so the largest diagonal entry is 1 (the zero matrix is returned unchanged).
    WeightMatrix normalized() const;

private:
    Matrix entries_;
};

/// sqrt(delta^T M delta). Throws on dimension mismatch or a quadratic form
/// that is negative beyond round-off.
double weighted_norm(const Vector& delta, const WeightMatrix& m);

/// diag(eta_1^2, ..., eta_N^2); all eta must be positive.
WeightMatrix affine_B(std::span<const double> eta);

/// W^{1,inf} bounds of the partial shape transformations, j = 1..n.
std::vector<double> shape_w1inf_norms(double amplitude, double decay, double grad_chi_inf, std::size_t n);

/// M_ij = w_i w_j.
WeightMatrix outer_product_weights(std::span<const double> w);

struct AnisotropyProfile {
    std::vector<double> gamma;
    std::vector<double> corr_lengths;
    double domain_diameter = 0.0;
};

/// gamma_j = c1 sqrt(D_jj) + c2 sqrt(B_jj), l_j = diam * max(gamma) / gamma_j.
/// Every gamma_j must be positive; inactive dimensions are the caller's to drop.
AnisotropyProfile anisotropy_profile(const WeightMatrix& b, const WeightMatrix& d, double c1, double c2,
                                     double domain_diameter);

} // namespace pcplace
