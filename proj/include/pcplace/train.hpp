#pragma once

#include <cstddef>
#include <vector>

#include "pcplace/param_space.hpp"
#include "pcplace/surrogate.hpp"

namespace pcplace {

struct SolveOutcome {
    int iterations = 0;
    double time = 0.0;
    bool converged = true;
};

/// Source of training solves: one preconditioner at the box center, then
/// preconditioned solves at points of W. Implementations keep the solutions.
class TrainingBackend {
public:
    virtual ~TrainingBackend() = default;

    /// Builds the mean-based preconditioner at ybar and returns its cost tau_pc.
    virtual double build_mean_preconditioner(const Vector& ybar) = 0;
    /// Solves the system of W[index] with the mean-based preconditioner.
    virtual SolveOutcome solve_with_mean(std::size_t index) = 0;
    /// Cost of one Krylov iteration, used before any iteration has been timed.
    virtual double tau_krylov_hint() const = 0;
};

struct HoldoutPoint {
    Vector y;
    double iterations = 0.0;
};

struct TrainOptions {
    GMap gmap{};
    std::size_t sp_window = 5;
    /// Optional reference data for the RMSE trace.
    std::vector<HoldoutPoint> holdout;
};

/// Gray-box GPR training by cost-aware active learning with the
/// stabilizing-predictions stopping rule.
TrainedSurrogate train_surrogate(const ParamSet& w, const WeightMatrix& b, const WeightMatrix& d,
                                 double domain_diameter, TrainingBackend& backend, const TrainOptions& opts = {});

double surrogate_rmse(const TrainedSurrogate& s, const std::vector<HoldoutPoint>& holdout);

} // namespace pcplace
