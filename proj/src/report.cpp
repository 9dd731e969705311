#include "pcplace/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pcplace {

namespace {

using nlohmann::json;

json vec_json(const Vector& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vec_from(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json number_list(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v)
        out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
}

std::vector<double> number_list_from(const json& j)
{
    std::vector<double> out;
    for (const auto& x : j)
        out.push_back(x.is_null() ? std::numeric_limits<double>::infinity() : x.get<double>());
    return out;
}

json optional_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from(const json& j)
{
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

std::string csv_number(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

} // namespace

std::string report_to_json(const RunReport& r)
{
    json j;
    j["format"] = "pcplace-report";
    j["version"] = 1;
    j["strategy"] = r.strategy;
    j["family"] = r.family;
    j["dims"] = r.dims;
    j["w_size"] = r.w_size;
    j["k0"] = r.k0;
    j["seed"] = r.seed;
    j["cost_mode"] = to_string(r.cost_mode);
    j["n_ratio"] = r.n_ratio;
    j["t_train"] = r.t_train;
    j["t_l_al"] = r.t_l_al;
    j["t_exec"] = r.t_exec;
    j["t_tot"] = r.t_tot();
    j["n_pc"] = r.n_pc;
    j["it_av"] = r.it_av;
    j["cost_total"] = r.cost_total;
    j["cost_mean_based"] = optional_json(r.cost_mean_based);
    j["cost_per_point"] = optional_json(r.cost_per_point);
    j["degraded"] = r.degraded;
    j["m_max"] = r.m_max;
    j["training_solves"] = r.training_solves;
    j["executed_solves"] = r.executed_solves;
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"index", p.index},
                       {"y", vec_json(p.y)},
                       {"pc", p.pc},
                       {"iterations", p.iterations},
                       {"converged", p.converged},
                       {"time", p.time},
                       {"phase", p.phase}});
    j["points"] = pts;
    json locs = json::array();
    for (const auto& l : r.pc_locations)
        locs.push_back(vec_json(l));
    j["pc_locations"] = locs;
    j["pc_fixed"] = r.pc_fixed;
    j["disagree_trace"] = number_list(r.disagree_trace);
    j["rmse_trace"] = number_list(r.rmse_trace);
    j["greedy_costs"] = number_list(r.greedy_costs);
    j["objective_trace"] = number_list(r.objective_trace);
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text)
{
    const json j = json::parse(text);
    if (j.value("format", "") != "pcplace-report")
        throw std::runtime_error("report JSON: unrecognized document");
    if (j.at("version").get<int>() != 1)
        throw std::runtime_error("report JSON: unsupported version");
    RunReport r;
    r.strategy = j.at("strategy").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.dims = j.at("dims").get<std::size_t>();
    r.w_size = j.at("w_size").get<std::size_t>();
    r.k0 = j.at("k0").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.cost_mode = cost_mode_from_string(j.at("cost_mode").get<std::string>());
    r.n_ratio = j.at("n_ratio").get<double>();
    r.t_train = j.at("t_train").get<double>();
    r.t_l_al = j.at("t_l_al").get<double>();
    r.t_exec = j.at("t_exec").get<double>();
    r.n_pc = j.at("n_pc").get<std::size_t>();
    r.it_av = j.at("it_av").get<double>();
    r.cost_total = j.at("cost_total").get<double>();
    r.cost_mean_based = optional_from(j.at("cost_mean_based"));
    r.cost_per_point = optional_from(j.at("cost_per_point"));
    r.degraded = j.at("degraded").get<bool>();
    r.m_max = j.at("m_max").get<double>();
    r.training_solves = j.at("training_solves").get<std::size_t>();
    r.executed_solves = j.at("executed_solves").get<std::size_t>();
    for (const auto& p : j.at("points"))
        r.points.push_back({p.at("index").get<std::size_t>(), vec_from(p.at("y")), p.at("pc").get<std::size_t>(),
                            p.at("iterations").get<int>(), p.at("converged").get<bool>(), p.at("time").get<double>(),
                            p.at("phase").get<std::string>()});
    for (const auto& l : j.at("pc_locations"))
        r.pc_locations.push_back(vec_from(l));
    r.pc_fixed = j.at("pc_fixed").get<std::vector<bool>>();
    r.disagree_trace = number_list_from(j.at("disagree_trace"));
    r.rmse_trace = number_list_from(j.at("rmse_trace"));
    r.greedy_costs = number_list_from(j.at("greedy_costs"));
    r.objective_trace = number_list_from(j.at("objective_trace"));
    return r;
}

std::string reports_to_csv(const std::vector<RunReport>& reports)
{
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : reports) {
        os << r.dims << ',' << csv_number(r.t_train) << ',' << csv_number(r.t_l_al) << ',' << csv_number(r.t_exec) << ','
           << r.n_pc << ',' << csv_number(r.it_av) << ',' << csv_number(r.cost_total) << ','
           << (r.cost_mean_based ? csv_number(*r.cost_mean_based) : "") << ','
           << (r.cost_per_point ? csv_number(*r.cost_per_point) : "") << '\n';
    }
    return os.str();
}

ReportFormat report_format_from_string(const std::string& s)
{
    if (s == "csv")
        return ReportFormat::csv;
    if (s == "json")
        return ReportFormat::json;
    throw std::invalid_argument("unknown report format '" + s + "'");
}

void emit_report(const RunReport& r, ReportFormat format, const std::string& path)
{
    const std::string text = format == ReportFormat::json ? report_to_json(r) : reports_to_csv({r});
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace pcplace
