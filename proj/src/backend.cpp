#include "pcplace/backend.hpp"

#include <chrono>
#include <stdexcept>

namespace pcplace {

HelmholtzBackend::HelmholtzBackend(ProblemFamily family, ParamSet w, CostMode mode, double n_ratio,
                                   GmresOptions gmres)
    : family_(std::move(family)), w_(std::move(w)), mesh_(build_annulus_mesh(family_.config())), mode_(mode),
      n_ratio_(n_ratio), gmres_(gmres)
{
    if (w_.box().dims() != family_.dims())
        throw std::invalid_argument("HelmholtzBackend: W and family dimensions differ");
    if (!(n_ratio_ > 0.0))
        throw std::invalid_argument("HelmholtzBackend: n_ratio must be positive");
    // The sparsity pattern does not depend on y, so the center system fixes nnz.
    const auto sys = assemble(family_.box().center(), family_, mesh_);
    SyntheticCostConstants c;
    c.pc_per_nnz = n_ratio_ * c.krylov_per_nnz;
    synthetic_ = synthetic_cost_model(sys.matrix.nnz(), c);
}

CostModel HelmholtzBackend::cost_model() const
{
    if (mode_ == CostMode::synthetic)
        return synthetic_;
    CostModel m{synthetic_.tau_pc, tau_krylov_hint(), CostMode::measured};
    if (builds_ > 0)
        m.tau_pc = build_time_ / static_cast<double>(builds_);
    return m;
}

LinearSystem HelmholtzBackend::assemble_at(const Vector& y)
{
    const auto start = std::chrono::steady_clock::now();
    auto sys = assemble(y, family_, mesh_);
    assembly_time_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sys;
}

BuiltPreconditioner HelmholtzBackend::build(const Vector& y)
{
    const auto sys = assemble_at(y);
    BuiltPreconditioner b{lu_factor(sys.matrix, y), 0.0};
    b.cost = mode_ == CostMode::synthetic ? synthetic_.tau_pc : b.lu.build_time();
    build_time_ += b.lu.build_time();
    ++builds_;
    return b;
}

SolveOutcome HelmholtzBackend::solve(const Vector& y, const LuPreconditioner& p, VectorC* solution)
{
    const auto sys = assemble_at(y);
    SolveReport rep = gmres_left(p, sys.matrix, sys.rhs, gmres_);
    SolveOutcome out;
    out.iterations = rep.iterations;
    out.converged = rep.converged;
    if (mode_ == CostMode::synthetic) {
        out.time = rep.iterations * synthetic_.tau_krylov;
    } else {
        out.time = rep.krylov_time;
        measured_time_ += rep.krylov_time;
        measured_iterations_ += rep.iterations;
    }
    if (solution)
        *solution = std::move(rep.solution);
    return out;
}

SolveOutcome HelmholtzBackend::solve_index(std::size_t index, const LuPreconditioner& p)
{
    if (index >= w_.size())
        throw std::out_of_range("HelmholtzBackend: point index out of range");
    VectorC x;
    const SolveOutcome out = solve(w_[index], p, sink_ ? &x : nullptr);
    if (sink_)
        sink_(index, x);
    return out;
}

double HelmholtzBackend::build_mean_preconditioner(const Vector& ybar)
{
    auto b = build(ybar);
    mean_ = std::move(b.lu);
    return b.cost;
}

SolveOutcome HelmholtzBackend::solve_with_mean(std::size_t index)
{
    return solve_index(index, mean_preconditioner());
}

double HelmholtzBackend::tau_krylov_hint() const
{
    if (mode_ == CostMode::measured && measured_iterations_ > 0.0 && measured_time_ > 0.0)
        return measured_time_ / measured_iterations_;
    if (mode_ == CostMode::measured && builds_ > 0)
        return build_time_ / static_cast<double>(builds_) / n_ratio_;
    return synthetic_.tau_krylov;
}

const LuPreconditioner& HelmholtzBackend::mean_preconditioner() const
{
    if (!mean_)
        throw std::logic_error("HelmholtzBackend: mean-based preconditioner not built");
    return *mean_;
}

} // namespace pcplace
