#pragma once

#include "pcplace/config.hpp"
#include "pcplace/placement.hpp"
#include "pcplace/report.hpp"
#include "pcplace/surrogate.hpp"

namespace pcplace {

struct PipelineResult {
    RunReport report;
    TrainedSurrogate surrogate;
    PlacementPlan plan;
};

/// Train the surrogate, place preconditioners for the remaining points with the
/// mean-based one fixed, then solve every remaining point with its assignment.
PipelineResult run_pipeline_detailed(const ExperimentConfig& cfg);
RunReport run_pipeline(const ExperimentConfig& cfg);

/// One preconditioner at the box center for all of W.
RunReport baseline_mean_based(const ExperimentConfig& cfg);
/// One preconditioner per point.
RunReport baseline_per_point(const ExperimentConfig& cfg);

/// Pipeline report with both baseline costs filled in.
RunReport run_with_baselines(const ExperimentConfig& cfg);

/// Training phase only.
TrainedSurrogate train_from_config(const ExperimentConfig& cfg);

/// Placement over W minus the surrogate's evaluated points, mean-based location fixed.
PlacementPlan place_from_config(const ExperimentConfig& cfg, const TrainedSurrogate& surrogate);

PlacementOptions placement_options(const ExperimentConfig& cfg, const TrainedSurrogate& surrogate);

} // namespace pcplace
