#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcplace/cost_model.hpp"
#include "pcplace/param_space.hpp"

namespace pcplace {

struct PointRecord {
    std::size_t index = 0;
    Vector y;
    /// Index into RunReport::pc_locations.
    std::size_t pc = 0;
    int iterations = 0;
    bool converged = true;
    double time = 0.0;
    /// "train" or "exec".
    std::string phase;
};

struct RunReport {
    std::string strategy;
    std::string family;
    std::size_t dims = 0;
    std::size_t w_size = 0;
    double k0 = 0.0;
    std::uint64_t seed = 0;
    CostMode cost_mode = CostMode::synthetic;
    double n_ratio = 0.0;

    double t_train = 0.0;
    double t_l_al = 0.0;
    double t_exec = 0.0;
    std::size_t n_pc = 0;
    double it_av = 0.0;
    /// Preconditioner builds times n_ratio plus all GMRES iterations.
    double cost_total = 0.0;
    std::optional<double> cost_mean_based;
    std::optional<double> cost_per_point;
    bool degraded = false;

    double m_max = 0.0;
    std::size_t training_solves = 0;
    std::size_t executed_solves = 0;

    std::vector<PointRecord> points;
    std::vector<Vector> pc_locations;
    std::vector<bool> pc_fixed;
    std::vector<double> disagree_trace;
    std::vector<double> rmse_trace;
    std::vector<double> greedy_costs;
    std::vector<double> objective_trace;

    double t_tot() const { return t_train + t_l_al + t_exec; }
};

inline constexpr const char* kCsvHeader = "N,t_train,t_l_al,t_exec,N_pc,it_av,cost_total,cost_mean_based,cost_per_point";

std::string report_to_json(const RunReport& r);
RunReport report_from_json(const std::string& text);

/// Header line plus one row per report.
std::string reports_to_csv(const std::vector<RunReport>& reports);

enum class ReportFormat { csv, json };
ReportFormat report_format_from_string(const std::string& s);

/// Writes to `path`, or to stdout when path is "-".
void emit_report(const RunReport& r, ReportFormat format, const std::string& path);

} // namespace pcplace
