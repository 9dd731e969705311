#include "pcplace/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace pcplace {

double kernel_1d(double d1, double d2, double corr_length)
{
    if (!(corr_length > 0.0))
        throw std::invalid_argument("kernel: correlation length must be positive");
    // The four orbit terms pair up: equal signs give d1 d2 e^{-|d1-d2|/l}, opposite signs -d1 d2 e^{-|d1+d2|/l}.
    const double p = d1 * d2;
    return 2.0 * p * (std::exp(-std::abs(d1 - d2) / corr_length) - std::exp(-std::abs(d1 + d2) / corr_length));
}

double kernel_eval(double d1, double d2, std::size_t dim, const AnisotropyProfile& profile)
{
    return kernel_1d(d1, d2, profile.corr_lengths.at(dim));
}

double kernel(const Vector& a, const Vector& b, const AnisotropyProfile& profile)
{
    const auto n = profile.corr_lengths.size();
    if (static_cast<std::size_t>(a.size()) != n || static_cast<std::size_t>(b.size()) != n)
        throw std::invalid_argument("kernel: dimension mismatch");
    double k = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        k += kernel_1d(a[j], b[j], profile.corr_lengths[i]);
    }
    return k;
}

Matrix gram_matrix(const std::vector<Vector>& inputs, const AnisotropyProfile& profile)
{
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            g(i, j) = g(j, i) = kernel(inputs[i], inputs[j], profile);
    return g;
}

} // namespace pcplace
