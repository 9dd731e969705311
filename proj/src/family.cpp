#include "pcplace/family.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

#include "pcplace/errors.hpp"

namespace pcplace {

std::string to_string(FamilyKind kind)
{
    return kind == FamilyKind::affine ? "affine" : "shape";
}

FamilyKind family_kind_from_string(const std::string& s)
{
    if (s == "affine")
        return FamilyKind::affine;
    if (s == "shape")
        return FamilyKind::shape;
    throw std::invalid_argument("unknown family kind '" + s + "'");
}

ProblemFamily::ProblemFamily(FamilyKind kind, std::size_t dims, const HelmholtzConfig& cfg, WeightMatrix b,
                             WeightMatrix d)
    : kind_(kind), dims_(dims), cfg_(cfg), b_(std::move(b)), d_(std::move(d))
{
}

ProblemFamily ProblemFamily::affine(std::vector<double> eta, const HelmholtzConfig& cfg)
{
    cfg.validate();
    if (eta.empty())
        throw std::invalid_argument("ProblemFamily::affine: need at least one dimension");
    for (double e : eta) {
        // n >= 1 - eta_i must stay positive on the whole box.
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("ProblemFamily::affine: eta_i must lie in (0, 1)");
    }
    const auto dims = eta.size();
    ProblemFamily f(FamilyKind::affine, dims, cfg, affine_B(eta).normalized(), WeightMatrix::zero(dims));
    f.eta_ = std::move(eta);
    return f;
}

ProblemFamily ProblemFamily::shape(std::size_t dims, double amplitude, double decay, const HelmholtzConfig& cfg)
{
    cfg.validate();
    if (dims == 0)
        throw std::invalid_argument("ProblemFamily::shape: need at least one dimension");
    if (!(decay > 1.0))
        throw std::invalid_argument("ProblemFamily::shape: decay must exceed 1");
    if (!(amplitude > 0.0 && amplitude < theta_max(decay, cfg.r_in)))
        throw std::invalid_argument("ProblemFamily::shape: amplitude must lie in (0, theta_max(decay))");
    const auto w = shape_w1inf_norms(amplitude, decay, cfg.mollifier_gradient(), dims);
    const auto bd = outer_product_weights(w).normalized();
    ProblemFamily f(FamilyKind::shape, dims, cfg, bd, bd);
    f.amplitude_ = amplitude;
    f.decay_ = decay;
    return f;
}

AnisotropyProfile ProblemFamily::profile(double c1, double c2) const
{
    return anisotropy_profile(b_, d_, c1, c2, cfg_.domain_diameter());
}

PointCoefficients ProblemFamily::coefficients(const Vector& y, const Point2& x) const
{
    if (static_cast<std::size_t>(y.size()) != dims_)
        throw std::invalid_argument("ProblemFamily::coefficients: parameter dimension mismatch");
    if (kind_ == FamilyKind::affine)
        return PointCoefficients{Eigen::Matrix2d::Identity(), affine_n(y, x, *this)};
    return pulled_back_coeffs(y, x, *this);
}

double mollifier(const Point2& x, const HelmholtzConfig& cfg)
{
    const double v = (x.norm() - cfg.r_mol) / (cfg.r_in - cfg.r_mol);
    return std::clamp(v, 0.0, 1.0);
}

double mollifier_radial_derivative(double r, const HelmholtzConfig& cfg)
{
    if (r <= cfg.r_in || r >= cfg.r_mol)
        return 0.0;
    return 1.0 / (cfg.r_in - cfg.r_mol);
}

namespace {

double polar_angle(const Point2& x)
{
    double th = std::atan2(x.y(), x.x());
    if (th < 0.0)
        th += 2.0 * std::numbers::pi;
    if (th >= 2.0 * std::numbers::pi)
        th = 0.0;
    return th;
}

double mode_weight(std::size_t j, double decay)
{
    const double jd = static_cast<double>(j);
    return (j % 2 == 0) ? std::pow((jd + 2.0) / 2.0, -decay) : std::pow((jd + 1.0) / 2.0, -decay);
}

} // namespace

std::size_t sector_of(const Point2& x, std::size_t n_sectors)
{
    const double th = polar_angle(x);
    const auto s = static_cast<std::size_t>(std::floor(th * static_cast<double>(n_sectors) / (2.0 * std::numbers::pi)));
    return std::min(s, n_sectors - 1);
}

double affine_n(const Vector& y, const Point2& x, const ProblemFamily& family)
{
    if (family.kind() != FamilyKind::affine)
        throw std::invalid_argument("affine_n: family is not affine");
    const double chi = mollifier(x, family.config());
    if (chi == 0.0)
        return 1.0;
    const std::size_t i = sector_of(x, family.dims());
    return 1.0 + chi * family.eta()[i] * (y[static_cast<Eigen::Index>(i)] - 1.0) / 2.0;
}

double shape_basis(double theta, std::size_t j, double amplitude, double decay)
{
    if (j == 0)
        throw std::invalid_argument("shape_basis: j is 1-based");
    if (j == 1)
        return amplitude;
    const double jd = static_cast<double>(j);
    if (j % 2 == 0)
        return amplitude * mode_weight(j, decay) * std::sin(jd * theta / 2.0);
    return amplitude * mode_weight(j, decay) * std::cos((jd - 1.0) * theta / 2.0);
}

double shape_basis_derivative(double theta, std::size_t j, double amplitude, double decay)
{
    if (j == 0)
        throw std::invalid_argument("shape_basis_derivative: j is 1-based");
    if (j == 1)
        return 0.0;
    const double jd = static_cast<double>(j);
    if (j % 2 == 0)
        return amplitude * mode_weight(j, decay) * (jd / 2.0) * std::cos(jd * theta / 2.0);
    return -amplitude * mode_weight(j, decay) * ((jd - 1.0) / 2.0) * std::sin((jd - 1.0) * theta / 2.0);
}

double theta_max(double decay, double r_in)
{
    if (!(decay > 1.0))
        throw std::invalid_argument("theta_max: decay must exceed 1");
    return r_in / (1.0 + std::numbers::sqrt2 * (std::riemann_zeta(decay) - 1.0));
}

double shape_radius(const Vector& y, double theta, const ProblemFamily& family)
{
    double r = family.config().r_in;
    for (std::size_t j = 1; j <= family.dims(); ++j)
        r += shape_basis(theta, j, family.amplitude(), family.decay()) * y[static_cast<Eigen::Index>(j - 1)];
    return r;
}

ShapeMap shape_map(const Vector& y, const Point2& x, const ProblemFamily& family)
{
    if (family.kind() != FamilyKind::shape)
        throw std::invalid_argument("shape_map: family is not a shape family");
    if (static_cast<std::size_t>(y.size()) != family.dims())
        throw std::invalid_argument("shape_map: parameter dimension mismatch");
    const auto& cfg = family.config();
    const double rho = x.norm();
    if (!(rho > 0.0))
        throw std::invalid_argument("shape_map: point at the origin");

    const double chi = mollifier(x, cfg);
    if (chi == 0.0)
        return ShapeMap{x, Eigen::Matrix2d::Identity()};

    const double th = polar_angle(x);
    double s = 0.0, ds = 0.0;
    for (std::size_t j = 1; j <= family.dims(); ++j) {
        const double yj = y[static_cast<Eigen::Index>(j - 1)];
        s += shape_basis(th, j, family.amplitude(), family.decay()) * yj;
        ds += shape_basis_derivative(th, j, family.amplitude(), family.decay()) * yj;
    }
    const Point2 radial = x / rho;
    const Point2 tangential(-radial.y(), radial.x());
    const double dchi = mollifier_radial_derivative(rho, cfg);

    ShapeMap out;
    out.phi = x + chi * s * radial;
    out.jacobian = Eigen::Matrix2d::Identity() + s * dchi * radial * radial.transpose() +
                   (chi * ds / rho) * radial * tangential.transpose() +
                   (chi * s / rho) * tangential * tangential.transpose();
    return out;
}

PointCoefficients pulled_back_coeffs(const Vector& y, const Point2& x, const ProblemFamily& family)
{
    const auto map = shape_map(y, x, family);
    const double det = map.jacobian.determinant();
    if (!(det > 0.0))
        throw DegenerateMapError("pulled_back_coeffs: nonpositive Jacobian determinant");
    const Eigen::Matrix2d inv = map.jacobian.inverse();
    PointCoefficients c;
    c.a = inv * inv.transpose() * det;
    c.n = det;
    return c;
}

} // namespace pcplace
