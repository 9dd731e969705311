#include "pcplace/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace pcplace {

ParamSet sample_uniform(std::size_t dims, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Vector> pts(count, Vector(static_cast<Eigen::Index>(dims)));
    for (auto& p : pts)
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p[i] = dist(rng);
    return ParamSet(ParamBox::symmetric_unit(dims), std::move(pts));
}

ParamSet sample_grid(std::size_t dims, std::size_t count)
{
    const auto k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(count), 1.0 / static_cast<double>(dims))));
    std::size_t total = 1;
    for (std::size_t i = 0; i < dims; ++i)
        total *= k;
    if (total != count || k == 0)
        throw std::invalid_argument("sample_grid: count is not a perfect power of dims");
    std::vector<Vector> pts;
    pts.reserve(count);
    for (std::size_t flat = 0; flat < count; ++flat) {
        Vector p(static_cast<Eigen::Index>(dims));
        std::size_t rest = flat;
        for (std::size_t i = 0; i < dims; ++i) {
            const auto c = rest % k;
            rest /= k;
            p[static_cast<Eigen::Index>(i)] = -1.0 + (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(k);
        }
        pts.push_back(p);
    }
    return ParamSet(ParamBox::symmetric_unit(dims), std::move(pts));
}

namespace {

std::vector<unsigned> first_primes(std::size_t n)
{
    std::vector<unsigned> primes;
    for (unsigned c = 2; primes.size() < n; ++c) {
        bool prime = true;
        for (unsigned p : primes) {
            if (p * p > c)
                break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            primes.push_back(c);
    }
    return primes;
}

double radical_inverse(std::size_t index, unsigned base)
{
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

} // namespace

ParamSet sample_halton(std::size_t dims, std::size_t count, std::size_t skip)
{
    const auto primes = first_primes(dims);
    std::vector<Vector> pts(count, Vector(static_cast<Eigen::Index>(dims)));
    for (std::size_t n = 0; n < count; ++n)
        for (std::size_t i = 0; i < dims; ++i)
            pts[n][static_cast<Eigen::Index>(i)] = 2.0 * radical_inverse(n + skip, primes[i]) - 1.0;
    return ParamSet(ParamBox::symmetric_unit(dims), std::move(pts));
}

ParamSet sample_W(const ExperimentConfig& cfg)
{
    switch (cfg.sampling) {
    case SamplingRule::grid:
        return sample_grid(cfg.dims, cfg.w_size);
    case SamplingRule::halton:
        return sample_halton(cfg.dims, cfg.w_size);
    case SamplingRule::uniform:
        break;
    }
    return sample_uniform(cfg.dims, cfg.w_size, cfg.seed);
}

} // namespace pcplace
