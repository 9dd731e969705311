#include "pcplace/gmap.hpp"

#include <cmath>
#include <stdexcept>

namespace pcplace {

double GMap::operator()(double alpha) const
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("g: alpha must lie in (0, 1)");
    // 2 sqrt(a) / (a + 1) = 1 - (1 - sqrt(a))^2 / (1 + a); log1p keeps precision near a = 1.
    const double r = 2.0 * std::sqrt(alpha) / (1.0 + alpha);
    if (r < 0.5)
        return std::log(tol) / std::log(r);
    const double s = 1.0 - std::sqrt(alpha);
    return std::log(tol) / std::log1p(-s * s / (1.0 + alpha));
}

double GMap::inverse(double m) const
{
    if (!(m > 0.0))
        throw std::domain_error("g_inv: m must be positive");
    const double c = std::pow(tol, 1.0 / m);
    // sqrt(a) = (1 - sqrt(1 - c^2)) / c, rewritten as c / (1 + sqrt(1 - c^2)) to avoid cancellation.
    const double root = c / (1.0 + std::sqrt((1.0 - c) * (1.0 + c)));
    return root * root;
}

double g_eval(double alpha, const GMap& gmap)
{
    return gmap(alpha);
}

double g_inv(double m, const GMap& gmap)
{
    return gmap.inverse(m);
}

} // namespace pcplace
