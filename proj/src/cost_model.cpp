#include "pcplace/cost_model.hpp"

#include <stdexcept>

namespace pcplace {

std::string to_string(CostMode mode)
{
    return mode == CostMode::measured ? "measured" : "synthetic";
}

CostMode cost_mode_from_string(const std::string& s)
{
    if (s == "measured")
        return CostMode::measured;
    if (s == "synthetic")
        return CostMode::synthetic;
    throw std::invalid_argument("unknown cost mode '" + s + "'");
}

CostModel synthetic_cost_model(std::size_t nnz, const SyntheticCostConstants& c)
{
    if (!(c.pc_per_nnz > 0.0 && c.krylov_per_nnz > 0.0) || nnz == 0)
        throw std::invalid_argument("synthetic_cost_model: constants and nnz must be positive");
    const auto z = static_cast<double>(nnz);
    return CostModel{c.pc_per_nnz * z, c.krylov_per_nnz * z, CostMode::synthetic};
}

} // namespace pcplace
