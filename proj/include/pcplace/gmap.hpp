#pragma once

namespace pcplace {

/// Elman-type iteration estimate m = g(alpha) = ln(eps) / ln(2 sqrt(alpha) / (alpha + 1)).
struct GMap {
    double tol = 1e-5;

    /// Throws std::domain_error unless 0 < alpha < 1.
    double operator()(double alpha) const;
    /// Unique alpha in (0, 1) with g(alpha) = m, for m > 0.
    double inverse(double m) const;
};

double g_eval(double alpha, const GMap& gmap);
double g_inv(double m, const GMap& gmap);

} // namespace pcplace
