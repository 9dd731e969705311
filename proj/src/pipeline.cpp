#include "pcplace/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <map>
#include <optional>

#include "pcplace/backend.hpp"
#include "pcplace/matrix_market.hpp"
#include "pcplace/sampling.hpp"

namespace pcplace {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

GmresOptions gmres_options(const ExperimentConfig& cfg)
{
    return GmresOptions{cfg.helmholtz.tol, cfg.max_iter};
}

HelmholtzBackend make_backend(const ExperimentConfig& cfg, const ParamSet& w)
{
    HelmholtzBackend backend(cfg.make_family(), w, cfg.cost_mode, cfg.n_ratio, gmres_options(cfg));
    if (cfg.save_solutions) {
        const auto dir = std::filesystem::path(cfg.output_dir) / "solutions";
        std::filesystem::create_directories(dir);
        backend.set_solution_sink([dir](std::size_t i, const VectorC& x) {
            write_matrix_market((dir / ("point_" + std::to_string(i) + ".mtx")).string(), x);
        });
    }
    return backend;
}

RunReport report_header(const ExperimentConfig& cfg, const std::string& strategy)
{
    RunReport r;
    r.strategy = strategy;
    r.family = to_string(cfg.family);
    r.dims = cfg.dims;
    r.w_size = cfg.w_size;
    r.k0 = cfg.helmholtz.k0;
    r.seed = cfg.seed;
    r.cost_mode = cfg.cost_mode;
    return r;
}

PointRecord record(std::size_t i, const ParamSet& w, std::size_t pc, const SolveOutcome& out, const char* phase)
{
    return PointRecord{i, w[i], pc, out.iterations, out.converged, out.time, phase};
}

void finish(RunReport& r, std::size_t n_builds, double n_ratio)
{
    double iterations = 0.0, exec_iterations = 0.0;
    std::size_t exec = 0;
    for (const auto& p : r.points) {
        iterations += p.iterations;
        if (p.phase == "exec") {
            exec_iterations += p.iterations;
            ++exec;
        }
        r.degraded = r.degraded || !p.converged;
    }
    r.executed_solves = exec;
    r.it_av = exec > 0 ? exec_iterations / static_cast<double>(exec) : 0.0;
    r.n_ratio = n_ratio;
    r.cost_total = n_ratio * static_cast<double>(n_builds) + iterations;
}

std::vector<HoldoutPoint> solve_holdout(const ExperimentConfig& cfg, HelmholtzBackend& backend)
{
    std::vector<HoldoutPoint> out;
    if (cfg.holdout == 0)
        return out;
    const ParamSet h = sample_uniform(cfg.dims, cfg.holdout, cfg.seed ^ 0x5bd1e995ULL);
    const auto pc = backend.build(h.box().center());
    for (const auto& y : h.points())
        out.push_back({y, static_cast<double>(backend.solve(y, pc.lu).iterations)});
    return out;
}

TrainOptions train_options(const ExperimentConfig& cfg)
{
    TrainOptions opts;
    opts.gmap.tol = cfg.helmholtz.tol;
    opts.sp_window = cfg.sp_window;
    return opts;
}

} // namespace

PlacementOptions placement_options(const ExperimentConfig& cfg, const TrainedSurrogate& surrogate)
{
    PlacementOptions opts;
    opts.synthetic_guard = cfg.cost_mode == CostMode::synthetic;
    opts.max_iterations = cfg.la_max_iterations;
    opts.kappa = cfg.kappa;
    opts.tau_krylov = surrogate.tau_krylov > 0.0 ? surrogate.tau_krylov : 1.0;
    opts.locate.restarts = cfg.restarts;
    opts.locate.seed = cfg.seed;
    return opts;
}

TrainedSurrogate train_from_config(const ExperimentConfig& cfg)
{
    const ParamSet w = sample_W(cfg);
    HelmholtzBackend backend = make_backend(cfg, w);
    TrainOptions opts = train_options(cfg);
    opts.holdout = solve_holdout(cfg, backend);
    const auto& f = backend.family();
    return train_surrogate(w, f.B(), f.D(), f.config().domain_diameter(), backend, opts);
}

namespace {

struct Remaining {
    ParamSet points;
    std::vector<std::size_t> original;
};

Remaining remaining_points(const ParamSet& w, const TrainedSurrogate& s)
{
    std::vector<char> used(w.size(), 0);
    for (auto i : s.evaluated)
        used[i] = 1;
    std::vector<Vector> pts;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!used[i]) {
            pts.push_back(w[i]);
            idx.push_back(i);
        }
    }
    return {ParamSet(w.box(), std::move(pts)), std::move(idx)};
}

PlacementPlan place(const ExperimentConfig& cfg, const Remaining& rest, const TrainedSurrogate& s)
{
    if (rest.points.empty()) {
        PlacementPlan plan;
        plan.pc_locations = {s.ybar};
        plan.fixed_mask = {true};
        plan.n_ratio = s.m_max;
        return plan;
    }
    const IterationModel m = [&s](const Vector& d) { return s.m(d); };
    return plan_placement(rest.points, m, s.m_max, {s.ybar}, placement_options(cfg, s));
}

} // namespace

PlacementPlan place_from_config(const ExperimentConfig& cfg, const TrainedSurrogate& surrogate)
{
    const ParamSet w = sample_W(cfg);
    for (auto i : surrogate.evaluated)
        if (i >= w.size())
            throw std::invalid_argument("surrogate was trained on a different W");
    return place(cfg, remaining_points(w, surrogate), surrogate);
}

PipelineResult run_pipeline_detailed(const ExperimentConfig& cfg)
{
    const ParamSet w = sample_W(cfg);
    HelmholtzBackend backend = make_backend(cfg, w);
    TrainOptions opts = train_options(cfg);
    opts.holdout = solve_holdout(cfg, backend);
    const auto& f = backend.family();

    const double assembly_before = backend.assembly_time();
    const auto t0 = Clock::now();
    TrainedSurrogate s = train_surrogate(w, f.B(), f.D(), f.config().domain_diameter(), backend, opts);
    const double train_wall = seconds_since(t0) - (backend.assembly_time() - assembly_before);

    const Remaining rest = remaining_points(w, s);
    const auto t1 = Clock::now();
    PlacementPlan plan = place(cfg, rest, s);
    const double l_al_wall = seconds_since(t1);

    RunReport r = report_header(cfg, "pipeline");
    r.m_max = s.m_max;
    r.training_solves = s.records.size();
    r.pc_locations = plan.pc_locations;
    r.pc_fixed = plan.fixed_mask;
    r.disagree_trace = s.disagree_trace;
    r.rmse_trace = s.rmse_trace;
    r.greedy_costs = plan.greedy_costs;
    r.objective_trace = plan.objective_trace;
    r.n_pc = plan.n_pc();

    const std::size_t mean_pc = 0; // the fixed location is first in the plan
    double train_cost = s.tau_pc;
    for (const auto& rec : s.records) {
        r.points.push_back(record(rec.index, w, mean_pc, SolveOutcome{rec.iterations, rec.time, rec.converged}, "train"));
        train_cost += rec.time;
    }

    // Execute cell by cell so at most one extra factorization is alive.
    std::map<std::size_t, std::vector<std::size_t>> cells;
    for (std::size_t j = 0; j < plan.assignment.size(); ++j)
        cells[plan.assignment[j]].push_back(j);
    double exec_cost = 0.0;
    for (const auto& [k, members] : cells) {
        std::optional<BuiltPreconditioner> built;
        if (!plan.fixed_mask[k]) {
            built = backend.build(plan.pc_locations[k]);
            exec_cost += built->cost;
        }
        const LuPreconditioner& p = built ? built->lu : backend.mean_preconditioner();
        for (auto j : members) {
            const std::size_t i = rest.original[j];
            const SolveOutcome out = backend.solve_index(i, p);
            exec_cost += out.time;
            r.points.push_back(record(i, w, k, out, "exec"));
        }
    }
    // Preconditioners with empty cells are never built.
    std::size_t built_new = 0;
    for (const auto& [k, members] : cells)
        built_new += plan.fixed_mask[k] ? 0 : 1;

    if (cfg.cost_mode == CostMode::synthetic) {
        r.t_train = train_cost;
        r.t_l_al = 0.0;
        r.t_exec = exec_cost;
    } else {
        r.t_train = train_wall;
        r.t_l_al = l_al_wall;
        r.t_exec = exec_cost;
    }
    std::sort(r.points.begin(), r.points.end(), [](const PointRecord& a, const PointRecord& b) { return a.index < b.index; });
    finish(r, 1 + built_new, backend.cost_model().n_ratio());
    return PipelineResult{std::move(r), std::move(s), std::move(plan)};
}

RunReport run_pipeline(const ExperimentConfig& cfg)
{
    return run_pipeline_detailed(cfg).report;
}

RunReport baseline_mean_based(const ExperimentConfig& cfg)
{
    const ParamSet w = sample_W(cfg);
    HelmholtzBackend backend = make_backend(cfg, w);
    RunReport r = report_header(cfg, "mean_based");
    const Vector center = w.box().center();
    const double build_cost = backend.build_mean_preconditioner(center);
    double exec = build_cost;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const SolveOutcome out = backend.solve_with_mean(i);
        exec += out.time;
        r.points.push_back(record(i, w, 0, out, "exec"));
    }
    r.pc_locations = {center};
    r.pc_fixed = {false};
    r.n_pc = 1;
    r.t_exec = exec;
    finish(r, 1, backend.cost_model().n_ratio());
    r.cost_mean_based = r.cost_total;
    return r;
}

RunReport baseline_per_point(const ExperimentConfig& cfg)
{
    const ParamSet w = sample_W(cfg);
    HelmholtzBackend backend = make_backend(cfg, w);
    RunReport r = report_header(cfg, "per_point");
    double exec = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto built = backend.build(w[i]);
        const SolveOutcome out = backend.solve_index(i, built.lu);
        exec += built.cost + out.time;
        r.points.push_back(record(i, w, i, out, "exec"));
        r.pc_locations.push_back(w[i]);
        r.pc_fixed.push_back(false);
    }
    r.n_pc = w.size();
    r.t_exec = exec;
    finish(r, w.size(), backend.cost_model().n_ratio());
    r.cost_per_point = r.cost_total;
    return r;
}

RunReport run_with_baselines(const ExperimentConfig& cfg)
{
    RunReport r = run_pipeline(cfg);
    const RunReport mean = baseline_mean_based(cfg);
    const RunReport per = baseline_per_point(cfg);
    r.cost_mean_based = mean.cost_total;
    r.cost_per_point = per.cost_total;
    r.degraded = r.degraded || mean.degraded || per.degraded;
    return r;
}

} // namespace pcplace
