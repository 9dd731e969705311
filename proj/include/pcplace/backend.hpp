#pragma once

#include <functional>
#include <optional>

#include "pcplace/assemble.hpp"
#include "pcplace/cost_model.hpp"
#include "pcplace/gmres.hpp"
#include "pcplace/train.hpp"

namespace pcplace {

struct BuiltPreconditioner {
    LuPreconditioner lu;
    /// Modeled (synthetic) or measured build time.
    double cost = 0.0;
};

/// Assembles and solves Helmholtz systems on a fixed mesh. In synthetic mode
/// costs are nnz-proportional with tau_pc = n_ratio * tau_krylov; in measured
/// mode they are wall-clock seconds excluding assembly.
class HelmholtzBackend : public TrainingBackend {
public:
    HelmholtzBackend(ProblemFamily family, ParamSet w, CostMode mode, double n_ratio, GmresOptions gmres);

    const ProblemFamily& family() const { return family_; }
    const AnnulusMesh& mesh() const { return mesh_; }
    const ParamSet& points() const { return w_; }
    CostMode mode() const { return mode_; }
    /// Synthetic per-unit costs; in measured mode tau_krylov is the running average.
    CostModel cost_model() const;

    BuiltPreconditioner build(const Vector& y);
    SolveOutcome solve(const Vector& y, const LuPreconditioner& p, VectorC* solution = nullptr);
    SolveOutcome solve_index(std::size_t index, const LuPreconditioner& p);

    double build_mean_preconditioner(const Vector& ybar) override;
    SolveOutcome solve_with_mean(std::size_t index) override;
    double tau_krylov_hint() const override;

    const LuPreconditioner& mean_preconditioner() const;
    /// Wall-clock seconds spent assembling systems, for subtracting from phase timings.
    double assembly_time() const { return assembly_time_; }

    /// Receives every solution computed for a point of W.
    void set_solution_sink(std::function<void(std::size_t, const VectorC&)> sink) { sink_ = std::move(sink); }

private:
    ProblemFamily family_;
    ParamSet w_;
    AnnulusMesh mesh_;
    CostMode mode_;
    double n_ratio_;
    GmresOptions gmres_;
    CostModel synthetic_;
    std::optional<LuPreconditioner> mean_;
    LinearSystem assemble_at(const Vector& y);

    double assembly_time_ = 0.0;
    double build_time_ = 0.0;
    std::size_t builds_ = 0;
    double measured_time_ = 0.0;
    double measured_iterations_ = 0.0;
    std::function<void(std::size_t, const VectorC&)> sink_;
};

} // namespace pcplace
