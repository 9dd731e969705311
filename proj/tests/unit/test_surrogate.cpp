#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "pcplace/gmap.hpp"
#include "pcplace/gp.hpp"
#include "pcplace/kernel.hpp"
#include "pcplace/surrogate.hpp"

using namespace pcplace;

namespace {

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
        out[i++] = x;
    return out;
}

std::vector<Vector> random_points(std::size_t count, std::size_t dims, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vector> out(count, Vector(static_cast<Eigen::Index>(dims)));
    for (auto& p : out)
        for (auto& x : p)
            x = u(rng);
    return out;
}

} // namespace

TEST_CASE("g and its inverse")
{
    const GMap g{1e-5};
    CHECK(g(0.5) == doctest::Approx(195.49378059091123).epsilon(1e-12));
    CHECK(g(0.1) == doctest::Approx(20.80189737650501).epsilon(1e-12));
    CHECK(g(1e-8) == doctest::Approx(1.3517276399290628).epsilon(1e-12));
    CHECK(g(1e-12) == doctest::Approx(0.8773515207476801).epsilon(1e-12));
    CHECK(g.inverse(1.0) == doctest::Approx(2.500000413701872e-11).epsilon(1e-9));
    CHECK(g.inverse(20.80) == doctest::Approx(0.09998765983725855).epsilon(1e-12));
    CHECK(g.inverse(195.49) == doctest::Approx(0.4999965833091919).epsilon(1e-12));

    CHECK_THROWS_AS(g(0.0), std::domain_error);
    CHECK_THROWS_AS(g(1.0), std::domain_error);
    CHECK_THROWS_AS(g.inverse(0.0), std::domain_error);

    double prev = 0.0;
    for (double a = 1e-10; a < 0.999; a *= 1.5) {
        const double m = g(a);
        CHECK(m > prev);
        prev = m;
        CHECK(g.inverse(m) == doctest::Approx(a).epsilon(1e-9));
    }
    for (double m = 0.5; m < 5000.0; m *= 1.7)
        CHECK(g(g.inverse(m)) == doctest::Approx(m).epsilon(1e-9));

    // Close to 1 the log1p form keeps full precision.
    CHECK(std::isfinite(g(1.0 - 1e-9)));
    CHECK(g(1.0 - 1e-9) > 1e9);
}

TEST_CASE("kernel")
{
    CHECK(kernel_1d(1.0, 1.0, 1.0) == doctest::Approx(1.7293294335267746).epsilon(1e-14));
    CHECK(kernel_1d(0.0, 0.7, 2.0) == 0.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double a = u(rng), b = u(rng);
        CHECK(kernel_1d(a, b, 1.3) == doctest::Approx(kernel_1d(b, a, 1.3)));
        CHECK(kernel_1d(a, b, 1.3) == doctest::Approx(kernel_1d(-a, -b, 1.3)));
        CHECK(kernel_1d(a, b, 1.3) == doctest::Approx(kernel_1d(-a, b, 1.3)));
    }

    const AnisotropyProfile p = anisotropy_profile(WeightMatrix::identity(3), WeightMatrix::zero(3), 0.0, 1.0, 2.0);
    for (std::size_t n : {5, 20, 60}) {
        const auto pts = random_points(n, 3, 100 + n);
        const Matrix k = gram_matrix(pts, p);
        CHECK((k - k.transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(k);
        CHECK(es.eigenvalues().minCoeff() > -1e-10 * es.eigenvalues().maxCoeff());
    }
    CHECK(kernel(Vector::Zero(3), vec({0.3, 0.1, -0.2}), p) == 0.0);
}

TEST_CASE("prior mean")
{
    Matrix bm = Matrix::Zero(2, 2);
    bm.diagonal() << 1.0, 4.0;
    const WeightMatrix b(bm), d = WeightMatrix::identity(2);
    CHECK(prior_mean(vec({1.0, 1.0}), {0.0, 1.0}, b, d) == doctest::Approx(std::sqrt(5.0)));
    CHECK(prior_mean(vec({1.0, 1.0}), {2.0, 0.0}, b, d) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(prior_mean(Vector::Zero(2), {3.0, 3.0}, b, d) == 0.0);

    Matrix corr(2, 2);
    corr << 1.0, -0.5, -0.5, 1.0;
    const WeightMatrix c(corr);
    CHECK(prior_mean(vec({0.3, -0.6}), {0.0, 1.0}, c, d) == doctest::Approx(prior_mean(vec({0.3, 0.6}), {0.0, 1.0}, c, d)));
    CHECK_THROWS_AS(prior_mean(vec({1.0}), {1.0, 1.0}, b, d), std::invalid_argument);
}

TEST_CASE("hyperparameter fit")
{
    Matrix bm = Matrix::Zero(2, 2);
    bm.diagonal() << 1.0, 0.1;
    Matrix dm = Matrix::Zero(2, 2);
    dm.diagonal() << 0.2, 1.0;
    const WeightMatrix b(bm), d(dm);
    const auto pts = random_points(15, 2, 9);
    std::vector<double> t;
    for (const auto& p : pts)
        t.push_back(prior_mean(p, {2.0, 3.0}, b, d));
    const auto fit = fit_hyperparameters(pts, t, b, d);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.c.c1 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(fit.c.c2 == doctest::Approx(3.0).epsilon(1e-8));

    // Nonnegativity is enforced.
    for (auto& x : t)
        x = -x;
    const auto neg = fit_hyperparameters(pts, t, b, d);
    CHECK(neg.c.c1 >= 0.0);
    CHECK(neg.c.c2 >= 0.0);

    const auto zero = fit_hyperparameters({Vector::Zero(2)}, {0.0}, b, d);
    CHECK(zero.degenerate);
    CHECK(zero.c.c1 == 0.0);
    CHECK(zero.c.c2 == 0.0);

    // D = 0: only C2 is identifiable.
    const auto only_b = fit_hyperparameters(pts, std::vector<double>(pts.size(), 0.5), b, WeightMatrix::zero(2));
    CHECK(only_b.c.c1 == 0.0);
    CHECK(only_b.c.c2 > 0.0);

    // Identical columns: minimum-norm split.
    std::vector<double> tb;
    for (const auto& p : pts)
        tb.push_back(2.0 * weighted_norm(p, b));
    const auto same = fit_hyperparameters(pts, tb, b, b);
    CHECK(same.c.c1 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(same.c.c2 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("GP posterior interpolates and vanishes at the center")
{
    GpState gp(WeightMatrix::identity(2), WeightMatrix::zero(2), 2.0);
    CHECK(gp.posterior(vec({0.3, 0.1})).mean == 0.0);

    gp.add(Vector::Zero(2), GMap{}.inverse(1.0));
    const auto pts = random_points(12, 2, 21);
    for (const auto& p : pts)
        gp.add(p, 0.1 * p.norm() + 0.02 * std::sin(3.0 * p[0]) * std::abs(p[1]));
    for (std::size_t i = 0; i < gp.size(); ++i) {
        const auto post = gp.posterior(gp.inputs()[i]);
        CHECK(post.mean == doctest::Approx(gp.targets()[i]).epsilon(1e-6).scale(1.0));
        CHECK(post.variance <= 1e-6);
    }
    const auto at0 = gp.posterior(Vector::Zero(2));
    CHECK(std::abs(at0.mean) < 1e-10);
    CHECK(at0.variance <= 1e-10);
    CHECK(gp.posterior(vec({0.9, -0.9})).variance >= 0.0);
}

TEST_CASE("eval_m")
{
    const GMap g{1e-5};
    GpState gp(WeightMatrix::identity(2), WeightMatrix::zero(2), 2.0);
    gp.restore({}, {}, {0.0, 0.3});
    CHECK(eval_m(Vector::Zero(2), gp, g) == 1.0);

    // Pure prior: nondecreasing along rays.
    for (const auto& dir : random_points(10, 2, 5)) {
        double prev = 0.0;
        for (double t = 0.0; t <= 1.0; t += 0.05) {
            const double m = eval_m(t * dir, gp, g);
            CHECK(m >= prev - 1e-12);
            prev = m;
        }
    }

    // A single observation with target g^-1(12) reproduces 12 iterations.
    GpState one(WeightMatrix::identity(2), WeightMatrix::zero(2), 2.0);
    one.add(vec({0.5, 0.2}), g.inverse(12.0));
    CHECK(eval_m(vec({0.5, 0.2}), one, g) == doctest::Approx(12.0).epsilon(0.04));
}

TEST_CASE("acquisition")
{
    const GMap g{1e-5};
    CHECK(acquisition_value(0.2, 0.0, g, 1000.0) == 0.0);
    CHECK(acquisition_value(0.5, 0.01, g, 100.0) == kNoAcquisition);
    double prev = 0.0;
    for (double v : {1e-4, 1e-3, 1e-2, 5e-2}) {
        const double a = acquisition_value(0.2, v, g, 1000.0);
        CHECK(a > prev);
        prev = a;
    }
    // Lower cost at equal variance means a higher score.
    CHECK(acquisition_value(0.05, 0.01, g, 1000.0) > acquisition_value(0.3, 0.01, g, 1000.0));

    GpState gp(WeightMatrix::identity(2), WeightMatrix::zero(2), 2.0);
    gp.add(Vector::Zero(2), GMap{}.inverse(1.0));
    gp.add(vec({0.5, 0.5}), 0.1);
    CHECK(std::abs(acquisition(vec({0.5, 0.5}), gp, g, 1000.0)) < 1e-6);
    CHECK(acquisition(vec({-0.7, 0.4}), gp, g, 1000.0) > 0.0);
}

TEST_CASE("stabilizing predictions")
{
    SpTracker sp;
    CHECK(sp.disagree_ratio({10, 20, 30, 40}, {10, 20.1, 35, 40.5}) == doctest::Approx(0.25));
    // One iteration apart but under one percent.
    CHECK(sp.disagree_ratio({200.0}, {201.0}) == 0.0);
    CHECK(sp.disagree_ratio({2.0}, {3.0}) == 1.0);
    CHECK(sp.disagree_ratio({2.0}, {2.99}) == 0.0);
    CHECK_THROWS(sp.disagree_ratio({1.0}, {1.0, 2.0}));

    const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> b = a;
    b[0] = 50.0;
    CHECK_FALSE(sp.update(a, b));
    for (int k = 0; k < 4; ++k)
        CHECK_FALSE(sp.update(a, a));
    CHECK(sp.trailing_mean() == doctest::Approx(0.02));
    CHECK(sp.update(a, a));
    CHECK(sp.stop());
    CHECK(sp.history().size() == 6);

    SpTracker quick(5);
    for (int k = 0; k < 4; ++k)
        CHECK_FALSE(quick.update(a, a));
    CHECK(quick.update(a, a));
}

TEST_CASE("surrogate JSON round trip")
{
    const GMap g{1e-5};
    GpState gp(WeightMatrix::identity(3), WeightMatrix::identity(3), 2.0);
    gp.add(Vector::Zero(3), g.inverse(1.0));
    for (const auto& p : random_points(6, 3, 77))
        gp.add(p, 0.05 + 0.1 * p.norm());
    TrainedSurrogate s(g, gp, Vector::Zero(3));
    s.m_max = 123.5;
    s.evaluated = {0, 4, 2};
    s.records = {{0, 3, 0.5, true}, {4, 9, 1.25, false}};
    s.tau_pc = 2.0;
    s.tau_krylov = 0.01;
    s.disagree_trace = {0.5, 0.0};
    s.rmse_trace = {1.5, 0.25};
    s.sp_stopped = true;

    const std::string text = surrogate_to_json(s);
    const auto r = surrogate_from_json(text);
    CHECK(surrogate_to_json(r) == text);
    CHECK(r.evaluated == s.evaluated);
    CHECK(r.records.size() == 2);
    CHECK(r.records[1].converged == false);
    CHECK(r.sp_stopped);
    CHECK(r.m_max == s.m_max);
    for (const auto& p : random_points(20, 3, 8))
        CHECK(r.m(p) == s.m(p));

    CHECK_THROWS(surrogate_from_json("{\"format\": \"other\"}"));
}
