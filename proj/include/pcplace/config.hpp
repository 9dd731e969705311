#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcplace/cost_model.hpp"
#include "pcplace/family.hpp"
#include "pcplace/mesh.hpp"

namespace pcplace {

enum class SamplingRule { uniform, grid, halton };

std::string to_string(SamplingRule rule);
SamplingRule sampling_rule_from_string(const std::string& s);

struct ExperimentConfig {
    FamilyKind family = FamilyKind::shape;
    std::size_t dims = 2;
    /// Affine sector weights; defaults to 0.5 in every dimension.
    std::vector<double> eta;
    /// Shape amplitude as a fraction of theta_max(decay), unless `theta` is set.
    double theta_fraction = 0.5;
    std::optional<double> theta;
    double decay = 2.0;

    HelmholtzConfig helmholtz{};
    int max_iter = 500;

    std::size_t w_size = 100;
    SamplingRule sampling = SamplingRule::uniform;
    std::uint64_t seed = 1;

    CostMode cost_mode = CostMode::synthetic;
    /// Synthetic preconditioner cost in units of one Krylov iteration.
    double n_ratio = 100.0;

    std::size_t sp_window = 5;
    /// Extra points, solved with the mean-based preconditioner, for the RMSE trace.
    std::size_t holdout = 0;

    std::size_t restarts = 5;
    int la_max_iterations = 50;
    double kappa = 1.0;

    bool compare_baselines = true;
    std::string output_dir = "out";
    bool save_solutions = false;

    /// Throws ConfigError on any violated constraint.
    void validate() const;
    double shape_amplitude() const;
    ProblemFamily make_family() const;
};

/// Parses and validates a configuration document; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

} // namespace pcplace
