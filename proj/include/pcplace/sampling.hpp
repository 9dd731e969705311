#pragma once

#include "pcplace/config.hpp"
#include "pcplace/param_space.hpp"

namespace pcplace {

/// W in [-1, 1]^dims per the configured rule; deterministic for a fixed seed.
ParamSet sample_W(const ExperimentConfig& cfg);

ParamSet sample_uniform(std::size_t dims, std::size_t count, std::uint64_t seed);
/// Tensor grid with count^(1/dims) nodes per axis at cell midpoints; count must be a perfect power.
ParamSet sample_grid(std::size_t dims, std::size_t count);
/// Halton sequence (prime bases), skipping the leading `skip` points.
ParamSet sample_halton(std::size_t dims, std::size_t count, std::size_t skip = 1);

} // namespace pcplace
