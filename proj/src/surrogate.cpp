#include "pcplace/surrogate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace pcplace {

double TrainedSurrogate::m(const Vector& delta) const
{
    return eval_m(delta, gp, gmap);
}

double eval_m(const Vector& delta, const GpState& gp, const GMap& gmap)
{
    return std::max(1.0, gmap(clamp_alpha(gp.mean(delta))));
}

double eval_m(const Vector& delta, const TrainedSurrogate& s)
{
    return eval_m(delta, s.gp, s.gmap);
}

double acquisition_value(double mean_alpha, double var_alpha, const GMap& gmap, double m_max)
{
    const double e = clamp_alpha(mean_alpha);
    const double eg = std::max(1.0, gmap(e));
    if (eg > m_max)
        return kNoAcquisition;
    const double vg = 0.5 * (gmap(clamp_alpha(e + var_alpha)) - gmap(clamp_alpha(e - var_alpha)));
    return vg / eg;
}

double acquisition(const Vector& delta, const GpState& gp, const GMap& gmap, double m_max)
{
    const Posterior p = gp.posterior(delta);
    return acquisition_value(p.mean, p.variance, gmap, m_max);
}

double acquisition(const Vector& delta, const TrainedSurrogate& s, double m_max)
{
    return acquisition(delta, s.gp, s.gmap, m_max);
}

SpTracker::SpTracker(std::size_t window, double rel_tol, double abs_tol, double stop_below)
    : window_(window), rel_tol_(rel_tol), abs_tol_(abs_tol), stop_below_(stop_below)
{
    if (window_ == 0)
        throw std::invalid_argument("SpTracker: window must be positive");
}

double SpTracker::disagree_ratio(const std::vector<double>& m_old, const std::vector<double>& m_new) const
{
    if (m_old.size() != m_new.size())
        throw std::invalid_argument("SpTracker: prediction lists differ in length");
    if (m_old.empty())
        return 0.0;
    std::size_t disagree = 0;
    for (std::size_t i = 0; i < m_old.size(); ++i) {
        const double diff = std::abs(m_new[i] - m_old[i]);
        const double scale = std::max(std::abs(m_old[i]), std::abs(m_new[i]));
        if (diff >= abs_tol_ && diff >= rel_tol_ * scale)
            ++disagree;
    }
    return static_cast<double>(disagree) / static_cast<double>(m_old.size());
}

bool SpTracker::update(const std::vector<double>& m_old, const std::vector<double>& m_new)
{
    history_.push_back(disagree_ratio(m_old, m_new));
    return stop();
}

double SpTracker::trailing_mean() const
{
    if (history_.empty())
        return std::numeric_limits<double>::infinity();
    const std::size_t k = std::min(window_, history_.size());
    return std::accumulate(history_.end() - static_cast<std::ptrdiff_t>(k), history_.end(), 0.0) /
           static_cast<double>(k);
}

bool SpTracker::stop() const
{
    return history_.size() >= window_ && trailing_mean() < stop_below_;
}

namespace {

using nlohmann::json;

json to_json(const Vector& v)
{
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        rows.push_back(to_json(Vector(m.row(i).transpose())));
    return rows;
}

Matrix matrix_from(const json& j)
{
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vector row = vector_from(j.at(static_cast<std::size_t>(i)));
        if (row.size() != n)
            throw std::runtime_error("surrogate JSON: weight matrix is not square");
        m.row(i) = row.transpose();
    }
    return m;
}

} // namespace

std::string surrogate_to_json(const TrainedSurrogate& s)
{
    json j;
    j["format"] = "pcplace-surrogate";
    j["version"] = kSurrogateFormatVersion;
    j["tol"] = s.gmap.tol;
    j["ybar"] = to_json(s.ybar);
    j["m_max"] = s.m_max;
    j["tau_pc"] = s.tau_pc;
    j["tau_krylov"] = s.tau_krylov;
    j["hyperparams"] = {s.gp.hyperparams().c1, s.gp.hyperparams().c2};
    j["kernel"] = {
        {"type", "symmetrized linear x matern-1/2, summed over dimensions"},
        {"corr_lengths", s.gp.profile().corr_lengths},
        {"domain_diameter", s.gp.domain_diameter()},
        {"jitter", s.gp.jitter()},
    };
    j["B"] = to_json(s.gp.B().entries());
    j["D"] = to_json(s.gp.D().entries());
    json inputs = json::array();
    for (const auto& x : s.gp.inputs())
        inputs.push_back(to_json(x));
    j["inputs"] = inputs;
    j["targets"] = s.gp.targets();
    j["evaluated"] = s.evaluated;
    json records = json::array();
    for (const auto& r : s.records)
        records.push_back({{"index", r.index}, {"iterations", r.iterations}, {"time", r.time}, {"converged", r.converged}});
    j["records"] = records;
    j["disagree_trace"] = s.disagree_trace;
    j["rmse_trace"] = s.rmse_trace;
    j["flags"] = {
        {"budget_exhausted", s.budget_exhausted},
        {"no_candidate", s.no_candidate},
        {"sp_stopped", s.sp_stopped},
    };
    return j.dump(2);
}

TrainedSurrogate surrogate_from_json(const std::string& text)
{
    const json j = json::parse(text);
    if (j.value("format", "") != "pcplace-surrogate")
        throw std::runtime_error("surrogate JSON: unrecognized document");
    if (j.at("version").get<int>() != kSurrogateFormatVersion)
        throw std::runtime_error("surrogate JSON: unsupported version " + j.at("version").dump());

    GpState gp(WeightMatrix(matrix_from(j.at("B"))), WeightMatrix(matrix_from(j.at("D"))),
               j.at("kernel").at("domain_diameter").get<double>());
    std::vector<Vector> inputs;
    for (const auto& x : j.at("inputs"))
        inputs.push_back(vector_from(x));
    const auto c = j.at("hyperparams").get<std::vector<double>>();
    if (c.size() != 2)
        throw std::runtime_error("surrogate JSON: expected two hyperparameters");
    gp.restore(std::move(inputs), j.at("targets").get<std::vector<double>>(), Hyperparams{c[0], c[1]});

    TrainedSurrogate s(GMap{j.at("tol").get<double>()}, std::move(gp), vector_from(j.at("ybar")));
    s.m_max = j.at("m_max").get<double>();
    s.tau_pc = j.at("tau_pc").get<double>();
    s.tau_krylov = j.at("tau_krylov").get<double>();
    s.evaluated = j.at("evaluated").get<std::vector<std::size_t>>();
    for (const auto& r : j.at("records"))
        s.records.push_back({r.at("index").get<std::size_t>(), r.at("iterations").get<int>(), r.at("time").get<double>(),
                             r.at("converged").get<bool>()});
    s.disagree_trace = j.at("disagree_trace").get<std::vector<double>>();
    s.rmse_trace = j.at("rmse_trace").get<std::vector<double>>();
    const auto& flags = j.at("flags");
    s.budget_exhausted = flags.at("budget_exhausted").get<bool>();
    s.no_candidate = flags.at("no_candidate").get<bool>();
    s.sp_stopped = flags.at("sp_stopped").get<bool>();
    return s;
}

} // namespace pcplace
