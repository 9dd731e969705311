#pragma once

// The two benchmark families: an affine refractive index on angular sectors,
// and a star-shaped scatterer pulled back to the reference annulus.

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pcplace/mesh.hpp"
#include "pcplace/param_space.hpp"

namespace pcplace {

enum class FamilyKind { affine, shape };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& s);

/// Pointwise coefficients of the weak form: diffusion tensor A and index n.
struct PointCoefficients {
    Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
    double n = 1.0;
};

struct ShapeMap {
    Point2 phi;
    Eigen::Matrix2d jacobian;
};

class ProblemFamily {
public:
    /// n(y, x) = 1 + sum_i 1_{sector i}(x) chi(x) eta_i (y_i - 1) / 2, eta_i in (0, 1).
    static ProblemFamily affine(std::vector<double> eta, const HelmholtzConfig& cfg);
    /// Scatterer radius r_in + sum_j psi_j(theta) y_j, amplitude < theta_max(decay).
    static ProblemFamily shape(std::size_t dims, double amplitude, double decay, const HelmholtzConfig& cfg);

    FamilyKind kind() const { return kind_; }
    std::size_t dims() const { return dims_; }
    const HelmholtzConfig& config() const { return cfg_; }
    const std::vector<double>& eta() const { return eta_; }
    double amplitude() const { return amplitude_; }
    double decay() const { return decay_; }

    /// Prior weight matrices, each normalized to unit max diagonal.
    const WeightMatrix& B() const { return b_; }
    const WeightMatrix& D() const { return d_; }

    AnisotropyProfile profile(double c1, double c2) const;
    ParamBox box() const { return ParamBox::symmetric_unit(dims_); }

    PointCoefficients coefficients(const Vector& y, const Point2& x) const;

private:
    ProblemFamily(FamilyKind kind, std::size_t dims, const HelmholtzConfig& cfg, WeightMatrix b, WeightMatrix d);

    FamilyKind kind_;
    std::size_t dims_;
    HelmholtzConfig cfg_;
    std::vector<double> eta_;
    double amplitude_ = 0.0;
    double decay_ = 0.0;
    WeightMatrix b_;
    WeightMatrix d_;
};

/// clamp((|x| - r_mol) / (r_in - r_mol), 0, 1)
double mollifier(const Point2& x, const HelmholtzConfig& cfg);
/// d chi / d|x| (zero where the clamp is active).
double mollifier_radial_derivative(double r, const HelmholtzConfig& cfg);

/// Sector index i with 2 pi i / N <= theta(x) < 2 pi (i + 1) / N, theta in [0, 2 pi).
std::size_t sector_of(const Point2& x, std::size_t n_sectors);
double affine_n(const Vector& y, const Point2& x, const ProblemFamily& family);

/// Fourier basis psi_j (j is 1-based).
double shape_basis(double theta, std::size_t j, double amplitude, double decay);
double shape_basis_derivative(double theta, std::size_t j, double amplitude, double decay);
/// inf r_in / (1 + sqrt(2) (zeta(decay) - 1))
double theta_max(double decay, double r_in);
/// r_in + sum_j psi_j(theta) y_j
double shape_radius(const Vector& y, double theta, const ProblemFamily& family);

/// x + sum_j chi(x) psi_j(theta(x)) y_j x/|x| and its analytic Jacobian.
ShapeMap shape_map(const Vector& y, const Point2& x, const ProblemFamily& family);
/// A = DPhi^{-1} DPhi^{-T} det DPhi, n = det DPhi. Throws DegenerateMapError if det <= 0.
PointCoefficients pulled_back_coeffs(const Vector& y, const Point2& x, const ProblemFamily& family);

} // namespace pcplace
