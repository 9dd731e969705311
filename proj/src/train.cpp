#include "pcplace/train.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcplace {

namespace {

std::vector<double> predict_all(const ParamSet& w, const TrainedSurrogate& s)
{
    std::vector<double> m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        m[i] = s.m(w[i] - s.ybar);
    return m;
}

double observed_alpha(const SolveOutcome& out, const GMap& gmap)
{
    return gmap.inverse(std::max(1, out.iterations));
}

} // namespace

double surrogate_rmse(const TrainedSurrogate& s, const std::vector<HoldoutPoint>& holdout)
{
    if (holdout.empty())
        return 0.0;
    double sum = 0.0;
    for (const auto& h : holdout) {
        const double e = s.m(h.y - s.ybar) - h.iterations;
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(holdout.size()));
}

TrainedSurrogate train_surrogate(const ParamSet& w, const WeightMatrix& b, const WeightMatrix& d,
                                 double domain_diameter, TrainingBackend& backend, const TrainOptions& opts)
{
    if (w.empty())
        throw std::invalid_argument("train_surrogate: W is empty");
    if (b.dims() != w.box().dims() || d.dims() != w.box().dims())
        throw std::invalid_argument("train_surrogate: weight matrices do not match the parameter dimension");

    TrainedSurrogate s(opts.gmap, GpState(b, d, domain_diameter), w.box().center());
    const auto dims = static_cast<Eigen::Index>(w.box().dims());

    s.tau_pc = backend.build_mean_preconditioner(s.ybar);
    s.gp.add(Vector::Zero(dims), s.gmap.inverse(1.0));

    // First real evaluation: the point closest to the center under the unit-weight prior.
    std::size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double mu = prior_mean(w[i] - s.ybar, Hyperparams{1.0, 1.0}, b, d);
        if (mu < best) {
            best = mu;
            first = i;
        }
    }

    std::vector<char> used(w.size(), 0);
    double tau_tot = 0.0;
    double m_tot = 0.0;
    auto evaluate = [&](std::size_t i) {
        const SolveOutcome out = backend.solve_with_mean(i);
        used[i] = 1;
        s.evaluated.push_back(i);
        s.records.push_back({i, out.iterations, out.time, out.converged});
        s.gp.add(w[i] - s.ybar, observed_alpha(out, s.gmap));
        tau_tot += out.time;
        m_tot += out.iterations;
    };
    auto current_m_max = [&] {
        const double tau_k = (m_tot > 0.0 && tau_tot > 0.0) ? tau_tot / m_tot : backend.tau_krylov_hint();
        return s.tau_pc / tau_k;
    };
    auto record_rmse = [&] {
        if (!opts.holdout.empty())
            s.rmse_trace.push_back(surrogate_rmse(s, opts.holdout));
    };

    evaluate(first);
    record_rmse();

    SpTracker sp(opts.sp_window);
    std::vector<double> predictions = predict_all(w, s);
    for (;;) {
        if (s.evaluated.size() == w.size()) {
            s.budget_exhausted = true;
            break;
        }
        s.m_max = current_m_max();
        std::size_t pick = w.size();
        double best_acq = kNoAcquisition;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (used[i])
                continue;
            const double a = acquisition(w[i] - s.ybar, s, s.m_max);
            if (a > best_acq) {
                best_acq = a;
                pick = i;
            }
        }
        if (pick == w.size()) {
            s.no_candidate = true;
            break;
        }
        evaluate(pick);
        std::vector<double> updated = predict_all(w, s);
        const bool stop = sp.update(predictions, updated);
        predictions = std::move(updated);
        record_rmse();
        if (stop) {
            s.sp_stopped = true;
            break;
        }
    }

    s.m_max = current_m_max();
    s.tau_krylov = (m_tot > 0.0 && tau_tot > 0.0) ? tau_tot / m_tot : backend.tau_krylov_hint();
    s.disagree_trace = sp.history();
    return s;
}

} // namespace pcplace
