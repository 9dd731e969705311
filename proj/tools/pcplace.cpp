// Command-line front end: train, place, run, baseline, report, export.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcplace/assemble.hpp"
#include "pcplace/config.hpp"
#include "pcplace/errors.hpp"
#include "pcplace/matrix_market.hpp"
#include "pcplace/pipeline.hpp"

using namespace pcplace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegraded = 2;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string cost_mode;
    std::string out = "-";
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "Experiment configuration (JSON)");
    cmd->add_option("--seed", c.seed, "Override sampling.seed");
    cmd->add_option("--cost-mode", c.cost_mode, "Override cost.mode")->check(CLI::IsMember({"synthetic", "measured"}));
    cmd->add_option("--out", c.out, "Output path, '-' for stdout");
}

ExperimentConfig resolve(const Common& c)
{
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed)
        cfg.seed = *c.seed;
    if (!c.cost_mode.empty())
        cfg.cost_mode = cost_mode_from_string(c.cost_mode);
    cfg.validate();
    return cfg;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
    if (path == "-") {
        std::cout << text;
        if (text.empty() || text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
}

Vector parse_point(const std::string& s, std::size_t dims)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(std::stod(item));
    if (v.size() != dims)
        throw ConfigError("--y needs " + std::to_string(dims) + " comma-separated values");
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Preconditioner placement for parameterized Helmholtz systems"};
    app.require_subcommand(1);

    Common train_opts, place_opts, run_opts, base_opts, mesh_opts, sys_opts;
    std::string surrogate_path, run_format = "json", base_kind = "mean", base_format = "json", point;
    std::string rhs_path;
    std::vector<std::string> report_inputs;
    std::string report_out = "-", report_format = "csv";
    bool no_baselines = false;

    auto* train = app.add_subcommand("train", "Train the iteration surrogate and write it as JSON");
    add_common(train, train_opts);

    auto* place = app.add_subcommand("place", "Place preconditioners with a trained surrogate");
    add_common(place, place_opts);
    place->add_option("--surrogate", surrogate_path, "Surrogate JSON from 'train'")->required();

    auto* run = app.add_subcommand("run", "Train, place and execute all solves");
    add_common(run, run_opts);
    run->add_option("--format", run_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    run->add_flag("--no-baselines", no_baselines, "Skip the baseline comparisons");

    auto* base = app.add_subcommand("baseline", "Run a baseline strategy");
    add_common(base, base_opts);
    base->add_option("--kind", base_kind, "mean or per-point")->check(CLI::IsMember({"mean", "per-point"}));
    base->add_option("--format", base_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* report = app.add_subcommand("report", "Convert JSON run reports to a CSV table");
    report->add_option("inputs", report_inputs, "Report JSON files")->required();
    report->add_option("--format", report_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
    report->add_option("--out", report_out, "Output path, '-' for stdout");

    auto* mesh = app.add_subcommand("export-mesh", "Write the annulus mesh as text");
    add_common(mesh, mesh_opts);

    auto* sys = app.add_subcommand("export-system", "Write A(y) and b in Matrix Market format");
    add_common(sys, sys_opts);
    sys->add_option("--y", point, "Parameter point, comma separated")->required();
    sys->add_option("--rhs", rhs_path, "Path for the right-hand side");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            const auto cfg = resolve(train_opts);
            const auto s = train_from_config(cfg);
            write_text(train_opts.out, surrogate_to_json(s));
            const bool degraded = std::any_of(s.records.begin(), s.records.end(), [](const auto& r) { return !r.converged; });
            return degraded ? kExitDegraded : kExitOk;
        }
        if (*place) {
            const auto cfg = resolve(place_opts);
            const auto s = surrogate_from_json(slurp(surrogate_path));
            write_text(place_opts.out, placement_to_json(place_from_config(cfg, s)));
            return kExitOk;
        }
        if (*run) {
            const auto cfg = resolve(run_opts);
            const RunReport r = (no_baselines || !cfg.compare_baselines) ? run_pipeline(cfg) : run_with_baselines(cfg);
            emit_report(r, report_format_from_string(run_format), run_opts.out);
            return r.degraded ? kExitDegraded : kExitOk;
        }
        if (*base) {
            const auto cfg = resolve(base_opts);
            const RunReport r = base_kind == "mean" ? baseline_mean_based(cfg) : baseline_per_point(cfg);
            emit_report(r, report_format_from_string(base_format), base_opts.out);
            return r.degraded ? kExitDegraded : kExitOk;
        }
        if (*report) {
            std::vector<RunReport> reports;
            for (const auto& p : report_inputs)
                reports.push_back(report_from_json(slurp(p)));
            if (report_format == "json") {
                if (reports.size() != 1)
                    throw std::runtime_error("json output takes exactly one input report");
                write_text(report_out, report_to_json(reports.front()));
            } else {
                write_text(report_out, reports_to_csv(reports));
            }
            return kExitOk;
        }
        if (*mesh) {
            const auto cfg = resolve(mesh_opts);
            const auto m = build_annulus_mesh(cfg.helmholtz);
            if (mesh_opts.out == "-") {
                write_mesh(std::cout, m);
            } else {
                std::ofstream out(mesh_opts.out);
                if (!out)
                    throw std::runtime_error("cannot open '" + mesh_opts.out + "' for writing");
                write_mesh(out, m);
            }
            return kExitOk;
        }
        if (*sys) {
            const auto cfg = resolve(sys_opts);
            const auto family = cfg.make_family();
            const auto m = build_annulus_mesh(cfg.helmholtz);
            const auto s = assemble(parse_point(point, cfg.dims), family, m);
            if (sys_opts.out == "-")
                write_matrix_market(std::cout, s.matrix);
            else
                write_matrix_market(sys_opts.out, s.matrix);
            if (!rhs_path.empty())
                write_matrix_market(rhs_path, s.rhs);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "pcplace: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
