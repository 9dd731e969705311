#pragma once

// Preconditioner placement: greedy initialization that also picks the number
// of preconditioners, followed by location-allocation under the surrogate metric.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pcplace/param_space.hpp"

namespace pcplace {

/// Estimated iterations m(y - y_hat) as a function of the shift.
using IterationModel = std::function<double(const Vector&)>;

struct PlacementPlan {
    std::vector<Vector> pc_locations;
    /// fixed_mask[k]: location k was supplied precomputed and is never moved or charged.
    std::vector<bool> fixed_mask;
    /// assignment[i]: preconditioner serving W[i].
    std::vector<std::size_t> assignment;
    /// m(W[i] - y_hat(assignment[i])).
    std::vector<double> point_m;
    double n_ratio = 0.0;
    double estimated_cost = 0.0;

    /// Estimated cost after each greedy addition (first entry is the infinite sentinel).
    std::vector<double> greedy_costs;
    /// Sum of m after every location-allocation iteration, starting with the greedy result.
    std::vector<double> objective_trace;
    int la_iterations = 0;

    std::size_t n_pc() const { return pc_locations.size(); }
    std::size_t n_new() const;
};

/// n_ratio * n_pc + sum_m.
double tau_est(std::size_t n_pc, double sum_m, double n_ratio);
/// n_ratio * (non-fixed preconditioners) + sum of point_m.
double tau_est(const PlacementPlan& plan, double n_ratio);

/// Greedy stop rule: the last two additions both raised the estimated cost.
bool rises_twice(const std::vector<double>& costs);

/// argmin_k m(W[i] - pcs[k]) for each i, ties to the lowest k.
std::vector<std::size_t> allocate(const std::vector<Vector>& w, const std::vector<Vector>& pcs,
                                  const IterationModel& m);

struct LocateOptions {
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
    int max_iterations = 60;
    double tolerance = 1e-9;
};

struct LocateResult {
    Vector location;
    double objective = 0.0;
    /// False when nothing beat the incumbent; location is then the incumbent.
    bool improved = false;
};

/// Weber problem: argmin over the box of sum_j m(cell_j - y_hat), started from the
/// incumbent, the cell centroid and median, and seeded random points.
LocateResult locate(const std::vector<Vector>& cell, const Vector& incumbent, const IterationModel& m,
                    const ParamBox& box, const LocateOptions& opts = {});

double cell_objective(const std::vector<Vector>& cell, const Vector& y_hat, const IterationModel& m);

struct PlacementOptions {
    /// Synthetic guard: stop after max_iterations or once the relative gain drops below min_rel_gain.
    bool synthetic_guard = true;
    int max_iterations = 50;
    double min_rel_gain = 1e-4;
    /// Measured guard: stop once gain < kappa * (iteration wall time / tau_krylov).
    double kappa = 1.0;
    double tau_krylov = 1.0;
    LocateOptions locate{};
};

/// Greedy initialization plus location-allocation. With no fixed locations the
/// first preconditioner is seeded at the 1-medoid of W.
PlacementPlan plan_placement(const ParamSet& w, const IterationModel& m, double n_ratio,
                             const std::vector<Vector>& pc_fixed, const PlacementOptions& opts = {});

std::string placement_to_json(const PlacementPlan& plan);
PlacementPlan placement_from_json(const std::string& text);

} // namespace pcplace
