#include "pcplace/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pcplace/errors.hpp"

namespace pcplace {

std::string to_string(SamplingRule rule)
{
    switch (rule) {
    case SamplingRule::uniform:
        return "uniform";
    case SamplingRule::grid:
        return "grid";
    case SamplingRule::halton:
        return "halton";
    }
    return "uniform";
}

SamplingRule sampling_rule_from_string(const std::string& s)
{
    if (s == "uniform")
        return SamplingRule::uniform;
    if (s == "grid")
        return SamplingRule::grid;
    if (s == "halton")
        return SamplingRule::halton;
    throw ConfigError("unknown sampling rule '" + s + "'");
}

void ExperimentConfig::validate() const
{
    if (dims == 0)
        throw ConfigError("family.dims must be at least 1");
    if (family == FamilyKind::affine) {
        if (!eta.empty() && eta.size() != dims)
            throw ConfigError("family.eta must have family.dims entries");
        for (double e : eta)
            if (!(e > 0.0 && e < 1.0))
                throw ConfigError("family.eta entries must lie in (0, 1)");
    } else {
        if (!(decay > 1.0))
            throw ConfigError("family.decay must exceed 1");
        const double amp = shape_amplitude();
        if (!(amp > 0.0 && amp < theta_max(decay, helmholtz.r_in)))
            throw ConfigError("shape amplitude must lie in (0, theta_max(decay))");
    }
    try {
        helmholtz.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (max_iter < 1)
        throw ConfigError("solver.max_iter must be positive");
    if (w_size < 1)
        throw ConfigError("sampling.size must be at least 1");
    if (sampling == SamplingRule::grid) {
        if (dims > 3)
            throw ConfigError("grid sampling supports at most 3 dimensions");
        const auto k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(w_size), 1.0 / static_cast<double>(dims))));
        std::size_t total = 1;
        for (std::size_t i = 0; i < dims; ++i)
            total *= k;
        if (total != w_size)
            throw ConfigError("grid sampling needs sampling.size to be a perfect dims-th power");
    }
    if (!(n_ratio > 0.0) || !std::isfinite(n_ratio))
        throw ConfigError("cost.n_ratio must be positive");
    if (sp_window < 1)
        throw ConfigError("training.sp_window must be positive");
    if (la_max_iterations < 1)
        throw ConfigError("placement.max_iterations must be positive");
    if (!(kappa >= 0.0))
        throw ConfigError("placement.kappa must be nonnegative");
}

double ExperimentConfig::shape_amplitude() const
{
    return theta ? *theta : theta_fraction * theta_max(decay, helmholtz.r_in);
}

ProblemFamily ExperimentConfig::make_family() const
{
    validate();
    if (family == FamilyKind::affine)
        return ProblemFamily::affine(eta.empty() ? std::vector<double>(dims, 0.5) : eta, helmholtz);
    return ProblemFamily::shape(dims, shape_amplitude(), decay, helmholtz);
}

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key))
        return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

void read_count(const json& obj, const char* key, std::size_t& out, const std::string& where)
{
    if (!obj.contains(key))
        return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(where + "." + key + " must be a nonnegative integer");
    out = v.get<std::size_t>();
}

} // namespace

ExperimentConfig config_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "config", {"family", "helmholtz", "solver", "sampling", "cost", "training", "placement", "output"});

    ExperimentConfig cfg;
    if (j.contains("family")) {
        const auto& f = j["family"];
        check_keys(f, "family", {"kind", "dims", "eta", "theta", "theta_fraction", "decay"});
        std::string kind = to_string(cfg.family);
        read(f, "kind", kind, "family");
        try {
            cfg.family = family_kind_from_string(kind);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        read_count(f, "dims", cfg.dims, "family");
        read(f, "eta", cfg.eta, "family");
        if (f.contains("theta")) {
            double t = 0.0;
            read(f, "theta", t, "family");
            cfg.theta = t;
        }
        read(f, "theta_fraction", cfg.theta_fraction, "family");
        read(f, "decay", cfg.decay, "family");
    }
    if (j.contains("helmholtz")) {
        const auto& h = j["helmholtz"];
        check_keys(h, "helmholtz", {"k0", "r_in", "r_out", "r_mol", "incident_direction", "mesh_constant"});
        read(h, "k0", cfg.helmholtz.k0, "helmholtz");
        read(h, "r_in", cfg.helmholtz.r_in, "helmholtz");
        read(h, "r_out", cfg.helmholtz.r_out, "helmholtz");
        read(h, "r_mol", cfg.helmholtz.r_mol, "helmholtz");
        read(h, "mesh_constant", cfg.helmholtz.mesh_constant, "helmholtz");
        if (h.contains("incident_direction")) {
            std::vector<double> d;
            read(h, "incident_direction", d, "helmholtz");
            if (d.size() != 2)
                throw ConfigError("helmholtz.incident_direction must have two entries");
            cfg.helmholtz.incident_direction = Point2(d[0], d[1]);
        }
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        check_keys(s, "solver", {"tol", "max_iter"});
        read(s, "tol", cfg.helmholtz.tol, "solver");
        read(s, "max_iter", cfg.max_iter, "solver");
    }
    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        check_keys(s, "sampling", {"size", "rule", "seed"});
        read_count(s, "size", cfg.w_size, "sampling");
        std::string rule = to_string(cfg.sampling);
        read(s, "rule", rule, "sampling");
        cfg.sampling = sampling_rule_from_string(rule);
        read(s, "seed", cfg.seed, "sampling");
    }
    if (j.contains("cost")) {
        const auto& c = j["cost"];
        check_keys(c, "cost", {"mode", "n_ratio"});
        std::string mode = to_string(cfg.cost_mode);
        read(c, "mode", mode, "cost");
        try {
            cfg.cost_mode = cost_mode_from_string(mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        read(c, "n_ratio", cfg.n_ratio, "cost");
    }
    if (j.contains("training")) {
        const auto& t = j["training"];
        check_keys(t, "training", {"sp_window", "holdout"});
        read_count(t, "sp_window", cfg.sp_window, "training");
        read_count(t, "holdout", cfg.holdout, "training");
    }
    if (j.contains("placement")) {
        const auto& p = j["placement"];
        check_keys(p, "placement", {"restarts", "max_iterations", "kappa"});
        read_count(p, "restarts", cfg.restarts, "placement");
        read(p, "max_iterations", cfg.la_max_iterations, "placement");
        read(p, "kappa", cfg.kappa, "placement");
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, "output", {"dir", "save_solutions", "compare_baselines"});
        read(o, "dir", cfg.output_dir, "output");
        read(o, "save_solutions", cfg.save_solutions, "output");
        read(o, "compare_baselines", cfg.compare_baselines, "output");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    json j;
    j["family"] = {{"kind", to_string(cfg.family)}, {"dims", cfg.dims}, {"decay", cfg.decay},
                   {"theta_fraction", cfg.theta_fraction}};
    if (!cfg.eta.empty())
        j["family"]["eta"] = cfg.eta;
    if (cfg.theta)
        j["family"]["theta"] = *cfg.theta;
    const auto& h = cfg.helmholtz;
    j["helmholtz"] = {{"k0", h.k0},
                      {"r_in", h.r_in},
                      {"r_out", h.r_out},
                      {"r_mol", h.r_mol},
                      {"incident_direction", {h.incident_direction.x(), h.incident_direction.y()}},
                      {"mesh_constant", h.mesh_constant}};
    j["solver"] = {{"tol", h.tol}, {"max_iter", cfg.max_iter}};
    j["sampling"] = {{"size", cfg.w_size}, {"rule", to_string(cfg.sampling)}, {"seed", cfg.seed}};
    j["cost"] = {{"mode", to_string(cfg.cost_mode)}, {"n_ratio", cfg.n_ratio}};
    j["training"] = {{"sp_window", cfg.sp_window}, {"holdout", cfg.holdout}};
    j["placement"] = {{"restarts", cfg.restarts}, {"max_iterations", cfg.la_max_iterations}, {"kappa", cfg.kappa}};
    j["output"] = {{"dir", cfg.output_dir}, {"save_solutions", cfg.save_solutions},
                   {"compare_baselines", cfg.compare_baselines}};
    return j.dump(2);
}

} // namespace pcplace
