#include "pcplace/placement.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace pcplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

struct Minimizer {
    const std::vector<Vector>& cell;
    const IterationModel& m;
    const ParamBox& box;
    const LocateOptions& opts;

    double f(const Vector& x) const { return cell_objective(cell, x, m); }

    Vector gradient(const Vector& x, double fx) const
    {
        Vector g(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const auto& b = box.bound(static_cast<std::size_t>(i));
            const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
            Vector xp = x, xm = x;
            xp[i] = std::min(b.hi, x[i] + h);
            xm[i] = std::max(b.lo, x[i] - h);
            const double fp = xp[i] != x[i] ? f(xp) : fx;
            const double fm = xm[i] != x[i] ? f(xm) : fx;
            const double span = xp[i] - xm[i];
            g[i] = span > 0.0 ? (fp - fm) / span : 0.0;
        }
        return g;
    }

    // Projected BFGS with Armijo backtracking.
    Vector bfgs(Vector x, double& fx) const
    {
        const auto n = x.size();
        Matrix h = Matrix::Identity(n, n);
        Vector g = gradient(x, fx);
        for (int it = 0; it < opts.max_iterations; ++it) {
            bool moved = false;
            for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
                const Vector dir = attempt == 0 ? Vector(-(h * g)) : Vector(-g);
                double t = 1.0;
                for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
                    const Vector xn = box.project(x + t * dir);
                    const Vector s = xn - x;
                    if (s.norm() < opts.tolerance)
                        break;
                    const double fn = f(xn);
                    if (fn <= fx + 1e-4 * g.dot(s) && fn < fx) {
                        const Vector gn = gradient(xn, fn);
                        const Vector y = gn - g;
                        const double sy = s.dot(y);
                        if (sy > 1e-12) {
                            const double rho = 1.0 / sy;
                            const Matrix id = Matrix::Identity(n, n);
                            h = (id - rho * s * y.transpose()) * h * (id - rho * y * s.transpose()) +
                                rho * s * s.transpose();
                        } else {
                            h.setIdentity();
                        }
                        const bool small = fx - fn <= 1e-12 * std::max(1.0, std::abs(fx));
                        x = xn;
                        fx = fn;
                        g = gn;
                        moved = !small;
                        if (small)
                            return x;
                        break;
                    }
                }
                if (!moved)
                    h.setIdentity();
            }
            if (!moved)
                break;
        }
        return x;
    }

    // Compass search; handles the kinks of the iteration model that stall BFGS.
    Vector polish(Vector x, double& fx) const
    {
        double width = 0.0;
        for (const auto& b : box.bounds())
            width = std::max(width, b.hi - b.lo);
        double step = 0.05 * width;
        while (step > 1e-7 * width) {
            bool improved = false;
            for (Eigen::Index i = 0; i < x.size() && !improved; ++i) {
                for (double sign : {1.0, -1.0}) {
                    Vector xn = x;
                    xn[i] += sign * step;
                    xn = box.project(xn);
                    if (xn[i] == x[i])
                        continue;
                    const double fn = f(xn);
                    if (fn < fx) {
                        x = xn;
                        fx = fn;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved)
                step *= 0.5;
        }
        return x;
    }
};

} // namespace

std::size_t PlacementPlan::n_new() const
{
    return static_cast<std::size_t>(std::count(fixed_mask.begin(), fixed_mask.end(), false));
}

double tau_est(std::size_t n_pc, double sum_m, double n_ratio)
{
    return n_ratio * static_cast<double>(n_pc) + sum_m;
}

double tau_est(const PlacementPlan& plan, double n_ratio)
{
    return tau_est(plan.n_new(), sum_of(plan.point_m), n_ratio);
}

bool rises_twice(const std::vector<double>& costs)
{
    const auto k = costs.size();
    return k >= 3 && costs[k - 1] > costs[k - 2] && costs[k - 2] > costs[k - 3];
}

std::vector<std::size_t> allocate(const std::vector<Vector>& w, const std::vector<Vector>& pcs,
                                  const IterationModel& m)
{
    if (pcs.empty())
        throw std::invalid_argument("allocate: no preconditioner locations");
    std::vector<std::size_t> out(w.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        double best = kInf;
        for (std::size_t k = 0; k < pcs.size(); ++k) {
            const double v = m(w[i] - pcs[k]);
            if (v < best) {
                best = v;
                out[i] = k;
            }
        }
    }
    return out;
}

double cell_objective(const std::vector<Vector>& cell, const Vector& y_hat, const IterationModel& m)
{
    double s = 0.0;
    for (const auto& y : cell)
        s += m(y - y_hat);
    return s;
}

LocateResult locate(const std::vector<Vector>& cell, const Vector& incumbent, const IterationModel& m,
                    const ParamBox& box, const LocateOptions& opts)
{
    if (cell.empty())
        throw std::invalid_argument("locate: empty cell");
    const auto n = static_cast<Eigen::Index>(box.dims());
    if (incumbent.size() != n)
        throw std::invalid_argument("locate: incumbent dimension mismatch");

    const Minimizer solver{cell, m, box, opts};
    LocateResult best{incumbent, solver.f(incumbent), false};

    std::vector<Vector> starts{incumbent};
    Vector centroid = Vector::Zero(n);
    for (const auto& y : cell)
        centroid += y;
    starts.push_back(box.project(centroid / static_cast<double>(cell.size())));
    Vector median(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> c;
        c.reserve(cell.size());
        for (const auto& y : cell)
            c.push_back(y[i]);
        std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(c.size() / 2), c.end());
        median[i] = c[c.size() / 2];
    }
    starts.push_back(box.project(median));

    // Random starts inside the bounding box of the cell.
    Vector lo = cell.front(), hi = cell.front();
    for (const auto& y : cell) {
        lo = lo.cwiseMin(y);
        hi = hi.cwiseMax(y);
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        Vector x(n);
        for (Eigen::Index i = 0; i < n; ++i)
            x[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
        starts.push_back(box.project(x));
    }

    // Moves must beat the incumbent by more than rounding, so the total objective never creeps up.
    const double accept_below = best.objective - 1e-10 * std::max(1.0, std::abs(best.objective));
    for (const auto& s : starts) {
        Vector x = box.project(s);
        double fx = solver.f(x);
        x = solver.bfgs(x, fx);
        x = solver.polish(x, fx);
        if (fx < best.objective && fx < accept_below) {
            best.objective = fx;
            best.location = x;
            best.improved = true;
        }
    }
    return best;
}

PlacementPlan plan_placement(const ParamSet& w, const IterationModel& m, double n_ratio,
                             const std::vector<Vector>& pc_fixed, const PlacementOptions& opts)
{
    if (w.empty())
        throw std::invalid_argument("plan_placement: W is empty");
    if (!(n_ratio >= 0.0) || std::isinf(n_ratio))
        throw std::invalid_argument("plan_placement: N_ratio must be finite and nonnegative");
    const auto& pts = w.points();
    const ParamBox& box = w.box();

    PlacementPlan plan;
    plan.n_ratio = n_ratio;
    for (const auto& p : pc_fixed) {
        if (static_cast<std::size_t>(p.size()) != box.dims())
            throw std::invalid_argument("plan_placement: fixed location dimension mismatch");
        plan.pc_locations.push_back(p);
        plan.fixed_mask.push_back(true);
    }
    std::size_t n_new = 0;
    if (plan.pc_locations.empty()) {
        // Seed at the 1-medoid of W.
        std::size_t seed = 0;
        double seed_cost = kInf;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            double c = 0.0;
            for (const auto& y : pts)
                c += m(y - pts[j]);
            if (c < seed_cost) {
                seed_cost = c;
                seed = j;
            }
        }
        plan.pc_locations.push_back(pts[seed]);
        plan.fixed_mask.push_back(false);
        n_new = 1;
    }

    // Greedy phase: nearest[i] tracks m to the closest placed preconditioner.
    std::vector<double> nearest(pts.size(), kInf);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (const auto& pc : plan.pc_locations)
            nearest[i] = std::min(nearest[i], m(pts[i] - pc));
    plan.greedy_costs = {kInf, tau_est(n_new, sum_of(nearest), n_ratio)};
    const std::size_t cap = pts.size() + 2;
    bool rose_twice = false;
    for (std::size_t added = 0; added < cap && !rose_twice; ++added) {
        const auto far = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
        const Vector loc = pts[far];
        plan.pc_locations.push_back(loc);
        plan.fixed_mask.push_back(false);
        ++n_new;
        for (std::size_t i = 0; i < pts.size(); ++i)
            nearest[i] = std::min(nearest[i], m(pts[i] - loc));
        plan.greedy_costs.push_back(tau_est(n_new, sum_of(nearest), n_ratio));
        rose_twice = rises_twice(plan.greedy_costs);
    }
    const std::size_t drop = rose_twice ? 2 : 0;
    plan.pc_locations.resize(plan.pc_locations.size() - drop);
    plan.fixed_mask.resize(plan.fixed_mask.size() - drop);

    // Location-allocation phase.
    auto evaluate = [&](const std::vector<std::size_t>& assign) {
        std::vector<double> v(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            v[i] = m(pts[i] - plan.pc_locations[assign[i]]);
        return v;
    };
    std::vector<std::size_t> assign = allocate(pts, plan.pc_locations, m);
    std::vector<double> point_m = evaluate(assign);
    double objective = sum_of(point_m);
    plan.objective_trace.push_back(objective);

    for (int it = 0; it < opts.max_iterations; ++it) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n_pc = plan.pc_locations.size();
        std::vector<std::vector<Vector>> cells(n_pc);
        for (std::size_t i = 0; i < pts.size(); ++i)
            cells[assign[i]].push_back(pts[i]);

        // Orphans move to the worst-served point, once per iteration.
        bool relocated = false;
        for (std::size_t k = 0; k < n_pc; ++k) {
            if (!cells[k].empty() || plan.fixed_mask[k])
                continue;
            const auto worst = static_cast<std::size_t>(std::max_element(point_m.begin(), point_m.end()) - point_m.begin());
            plan.pc_locations[k] = pts[worst];
            point_m[worst] = m(Vector::Zero(static_cast<Eigen::Index>(box.dims())));
            relocated = true;
        }
        if (relocated) {
            assign = allocate(pts, plan.pc_locations, m);
            cells.assign(n_pc, {});
            for (std::size_t i = 0; i < pts.size(); ++i)
                cells[assign[i]].push_back(pts[i]);
        }

        bool moved = relocated;
        for (std::size_t k = 0; k < n_pc; ++k) {
            if (plan.fixed_mask[k] || cells[k].empty())
                continue;
            LocateOptions lo = opts.locate;
            std::seed_seq seq{static_cast<std::uint32_t>(opts.locate.seed), static_cast<std::uint32_t>(opts.locate.seed >> 32),
                              static_cast<std::uint32_t>(it), static_cast<std::uint32_t>(k)};
            std::uint32_t words[2];
            seq.generate(words, words + 2);
            lo.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
            const LocateResult r = locate(cells[k], plan.pc_locations[k], m, box, lo);
            if (r.improved) {
                plan.pc_locations[k] = r.location;
                moved = true;
            }
        }

        std::vector<std::size_t> next = allocate(pts, plan.pc_locations, m);
        std::vector<double> next_m = evaluate(next);
        const double next_obj = sum_of(next_m);
        const bool changed = moved || next != assign;
        const double gain = objective - next_obj;
        assign = std::move(next);
        point_m = std::move(next_m);
        objective = next_obj;
        plan.objective_trace.push_back(objective);
        plan.la_iterations = it + 1;
        if (!changed)
            break;
        if (opts.synthetic_guard) {
            if (gain < opts.min_rel_gain * std::max(std::abs(objective), 1e-300))
                break;
        } else {
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (gain < opts.kappa * wall / opts.tau_krylov)
                break;
        }
    }

    // Drop non-fixed preconditioners that serve nobody.
    std::vector<char> used(plan.pc_locations.size(), 0);
    for (auto k : assign)
        used[k] = 1;
    std::vector<Vector> kept;
    std::vector<bool> kept_fixed;
    for (std::size_t k = 0; k < plan.pc_locations.size(); ++k) {
        if (used[k] || plan.fixed_mask[k]) {
            kept.push_back(plan.pc_locations[k]);
            kept_fixed.push_back(plan.fixed_mask[k]);
        }
    }
    plan.pc_locations = std::move(kept);
    plan.fixed_mask = std::move(kept_fixed);
    plan.assignment = allocate(pts, plan.pc_locations, m);
    plan.point_m = evaluate(plan.assignment);
    plan.estimated_cost = tau_est(plan, n_ratio);
    return plan;
}

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

// JSON has no infinity; the greedy sentinel is written as null.
json cost_list(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v)
        out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
}

std::vector<double> cost_list_from(const json& j)
{
    std::vector<double> out;
    for (const auto& x : j)
        out.push_back(x.is_null() ? kInf : x.get<double>());
    return out;
}

} // namespace

std::string placement_to_json(const PlacementPlan& plan)
{
    json j;
    j["format"] = "pcplace-placement";
    j["version"] = 1;
    json locs = json::array();
    for (const auto& p : plan.pc_locations)
        locs.push_back(vec_json(p));
    j["pc_locations"] = locs;
    j["fixed_mask"] = plan.fixed_mask;
    j["assignment"] = plan.assignment;
    j["point_m"] = plan.point_m;
    j["n_ratio"] = plan.n_ratio;
    j["estimated_cost"] = plan.estimated_cost;
    j["greedy_costs"] = cost_list(plan.greedy_costs);
    j["objective_trace"] = plan.objective_trace;
    j["la_iterations"] = plan.la_iterations;
    return j.dump(2);
}

PlacementPlan placement_from_json(const std::string& text)
{
    const json j = json::parse(text);
    if (j.value("format", "") != "pcplace-placement")
        throw std::runtime_error("placement JSON: unrecognized document");
    if (j.at("version").get<int>() != 1)
        throw std::runtime_error("placement JSON: unsupported version");
    PlacementPlan plan;
    for (const auto& p : j.at("pc_locations"))
        plan.pc_locations.push_back(vec_from(p));
    plan.fixed_mask = j.at("fixed_mask").get<std::vector<bool>>();
    plan.assignment = j.at("assignment").get<std::vector<std::size_t>>();
    plan.point_m = j.at("point_m").get<std::vector<double>>();
    plan.n_ratio = j.at("n_ratio").get<double>();
    plan.estimated_cost = j.at("estimated_cost").get<double>();
    plan.greedy_costs = cost_list_from(j.at("greedy_costs"));
    plan.objective_trace = j.at("objective_trace").get<std::vector<double>>();
    plan.la_iterations = j.at("la_iterations").get<int>();
    if (plan.fixed_mask.size() != plan.pc_locations.size())
        throw std::runtime_error("placement JSON: fixed_mask length mismatch");
    for (auto k : plan.assignment)
        if (k >= plan.pc_locations.size())
            throw std::runtime_error("placement JSON: assignment out of range");
    return plan;
}

} // namespace pcplace
