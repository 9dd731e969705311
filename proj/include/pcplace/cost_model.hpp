#pragma once

#include <cstddef>
#include <string>

namespace pcplace {

enum class CostMode { measured, synthetic };

std::string to_string(CostMode mode);
CostMode cost_mode_from_string(const std::string& s);

/// Seconds per preconditioner build and per GMRES iteration.
struct CostModel {
    double tau_pc = 1.0;
    double tau_krylov = 1.0;
    CostMode mode = CostMode::synthetic;

    double n_ratio() const { return tau_pc / tau_krylov; }
};

/// Machine-independent costs: tau_pc = pc_per_nnz * nnz, tau_krylov = krylov_per_nnz * nnz.
struct SyntheticCostConstants {
    double pc_per_nnz = 1e-6;
    double krylov_per_nnz = 1e-8;
};

CostModel synthetic_cost_model(std::size_t nnz, const SyntheticCostConstants& c);

} // namespace pcplace
