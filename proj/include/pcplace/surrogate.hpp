#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pcplace/gmap.hpp"
#include "pcplace/gp.hpp"

namespace pcplace {

/// Record of one training solve with the mean-based preconditioner.
struct TrainingRecord {
    std::size_t index = 0;
    int iterations = 0;
    double time = 0.0;
    bool converged = true;
};

struct TrainedSurrogate {
    TrainedSurrogate(GMap g, GpState state, Vector center) : gmap(g), gp(std::move(state)), ybar(std::move(center)) {}

    GMap gmap;
    GpState gp;
    Vector ybar;
    double m_max = 0.0;
    std::vector<std::size_t> evaluated;
    std::vector<TrainingRecord> records;
    double tau_pc = 0.0;
    double tau_krylov = 0.0;

    std::vector<double> disagree_trace;
    /// RMSE against the holdout set after the initial evaluation and after every acquisition.
    std::vector<double> rmse_trace;

    bool budget_exhausted = false;
    bool no_candidate = false;
    bool sp_stopped = false;

    /// Estimated iterations at delta = y - ybar.
    double m(const Vector& delta) const;
};

/// max(1, g(clamped posterior mean of alpha)).
double eval_m(const Vector& delta, const GpState& gp, const GMap& gmap);
double eval_m(const Vector& delta, const TrainedSurrogate& s);

/// Acquisition from the posterior moments of alpha (mean is clamped here).
double acquisition_value(double mean_alpha, double var_alpha, const GMap& gmap, double m_max);

/// Variance-to-cost ratio (g(E + V) - g(E - V)) / 2 / E[g], or -infinity once E[g] > m_max.
double acquisition(const Vector& delta, const GpState& gp, const GMap& gmap, double m_max);
double acquisition(const Vector& delta, const TrainedSurrogate& s, double m_max);

inline constexpr double kNoAcquisition = -std::numeric_limits<double>::infinity();

/// Stabilizing-predictions stopping rule over successive surrogates.
class SpTracker {
public:
    explicit SpTracker(std::size_t window = 5, double rel_tol = 0.01, double abs_tol = 1.0, double stop_below = 0.01);

    /// Fraction of points whose predictions differ by at least rel_tol relatively and abs_tol absolutely.
    double disagree_ratio(const std::vector<double>& m_old, const std::vector<double>& m_new) const;

    /// Appends the ratio of the two prediction lists; returns the stop flag.
    bool update(const std::vector<double>& m_old, const std::vector<double>& m_new);

    /// Mean over the last `window` ratios (over all of them while fewer are available).
    double trailing_mean() const;
    /// Set once the history holds a full window whose mean is below the threshold.
    bool stop() const;

    const std::vector<double>& history() const { return history_; }
    std::size_t window() const { return window_; }

private:
    std::size_t window_;
    double rel_tol_;
    double abs_tol_;
    double stop_below_;
    std::vector<double> history_;
};

inline constexpr int kSurrogateFormatVersion = 1;

std::string surrogate_to_json(const TrainedSurrogate& s);
TrainedSurrogate surrogate_from_json(const std::string& text);

} // namespace pcplace
