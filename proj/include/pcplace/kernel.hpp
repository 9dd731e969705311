#pragma once

#include "pcplace/param_space.hpp"

namespace pcplace {

/// Orbit-symmetrized product of a linear and an exponential (Matern 1/2) kernel:
/// sum over m1, m2 in {-1, 1} of (m1 d1)(m2 d2) exp(-|m1 d1 - m2 d2| / l).
double kernel_1d(double d1, double d2, double corr_length);

double kernel_eval(double d1, double d2, std::size_t dim, const AnisotropyProfile& profile);

/// Sum of the univariate kernels over all dimensions.
double kernel(const Vector& a, const Vector& b, const AnisotropyProfile& profile);

Matrix gram_matrix(const std::vector<Vector>& inputs, const AnisotropyProfile& profile);

} // namespace pcplace
