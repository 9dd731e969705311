#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "pcplace/assemble.hpp"
#include "pcplace/errors.hpp"
#include "pcplace/family.hpp"
#include "pcplace/lu.hpp"
#include "pcplace/mesh.hpp"

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

Point2 polar(double r, double th)
{
    return {r * std::cos(th), r * std::sin(th)};
}

} // namespace

TEST_CASE("annulus mesh")
{
    HelmholtzConfig cfg;
    const double exact = std::numbers::pi * (1.0 - 0.0625);
    CHECK(exact == doctest::Approx(2.945243112740431).epsilon(1e-14));

    double prev_err = 1.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const auto m = build_annulus_mesh(cfg, h);
        CHECK(m.nodes.size() == (m.n_radial + 1) * m.n_angular);
        CHECK(m.triangles.size() == 2 * m.n_radial * m.n_angular);
        CHECK(m.inner_boundary.size() == m.n_angular);
        CHECK(m.outer_edges.size() == m.n_angular);
        double area = 0.0;
        bool positive = true;
        for (std::size_t t = 0; t < m.triangles.size(); ++t) {
            const double a = triangle_area(m, t);
            positive = positive && a > 0.0;
            area += a;
        }
        CHECK(positive);
        const double err = std::abs(area - exact);
        CHECK(err < prev_err);
        prev_err = err;
        CHECK(max_edge_length(m) <= std::sqrt(2.0) * h + 1e-12);
    }
    CHECK(prev_err < 1e-2);

    cfg.k0 = 20.0;
    CHECK(cfg.mesh_size() == doctest::Approx(std::pow(20.0, -1.5)));
    CHECK_THROWS_AS(build_annulus_mesh(cfg, 1.0), std::invalid_argument);
    cfg.r_mol = 0.2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("mollifier and sectors")
{
    HelmholtzConfig cfg;
    CHECK(mollifier(polar(0.5, 1.0), cfg) == doctest::Approx(0.6153846153846154).epsilon(1e-14));
    CHECK(mollifier(polar(0.25, 0.0), cfg) == 1.0);
    CHECK(mollifier(polar(0.9, 0.0), cfg) == 0.0);
    CHECK(mollifier(polar(0.95, 0.0), cfg) == 0.0);
    CHECK(cfg.mollifier_gradient() == doctest::Approx(1.0 / 0.65));

    CHECK(sector_of(polar(0.5, 0.0), 4) == 0);
    CHECK(sector_of(polar(0.5, std::numbers::pi / 2.0 + 1e-12), 4) == 1);
    CHECK(sector_of(polar(0.5, std::numbers::pi / 2.0 - 1e-12), 4) == 0);
    CHECK(sector_of(polar(0.5, -0.1), 4) == 3);
    CHECK(sector_of(Point2(-0.5, 0.0), 2) == 1);
    CHECK(sector_of(Point2(0.5, -1e-300), 2) == 0);
}

TEST_CASE("affine refractive index")
{
    const auto fam = ProblemFamily::affine({0.5, 0.5}, HelmholtzConfig{});
    const Point2 x = polar(0.5, 0.3);
    CHECK(affine_n(vec({0.0, 0.7}), x, fam) == doctest::Approx(0.8461538461538461).epsilon(1e-14));
    CHECK(affine_n(vec({1.0, -1.0}), x, fam) == 1.0);
    CHECK(affine_n(vec({-1.0, -1.0}), polar(0.95, 0.3), fam) == 1.0);
    CHECK(affine_n(vec({-1.0, -1.0}), polar(0.25, 4.0), fam) == doctest::Approx(0.5));
    CHECK(fam.B().diag(0) == doctest::Approx(1.0));
    CHECK(fam.D().is_zero());
    CHECK_THROWS_AS(ProblemFamily::affine({1.0}, HelmholtzConfig{}), std::invalid_argument);
}

TEST_CASE("shape basis and admissible amplitude")
{
    CHECK(theta_max(2.0, 0.25) == doctest::Approx(0.13074804326628617).epsilon(1e-14));
    CHECK(theta_max(3.0, 0.25) == doctest::Approx(0.19443879945971695).epsilon(1e-14));
    CHECK(shape_basis(1.3, 1, 0.1, 2.0) == 0.1);
    CHECK(shape_basis(0.0, 2, 0.1, 2.0) == 0.0);
    CHECK(shape_basis(0.0, 3, 0.1, 2.0) == doctest::Approx(0.1 / 4.0));
    CHECK(shape_basis(std::numbers::pi / 2.0, 2, 0.1, 2.0) == doctest::Approx(0.1 / 4.0));

    // Derivative against central differences.
    const double eps = 1e-6;
    for (std::size_t j = 1; j <= 6; ++j)
        for (double th : {0.1, 1.7, 4.0}) {
            const double fd = (shape_basis(th + eps, j, 0.1, 2.0) - shape_basis(th - eps, j, 0.1, 2.0)) / (2 * eps);
            CHECK(shape_basis_derivative(th, j, 0.1, 2.0) == doctest::Approx(fd).epsilon(1e-6));
        }

    // The scatterer stays strictly inside the mollifier zone for all y in the box.
    const auto fam = ProblemFamily::shape(6, 0.99 * theta_max(2.0, 0.25), 2.0, HelmholtzConfig{});
    for (double th = 0.0; th < 2.0 * std::numbers::pi; th += 0.01) {
        double worst = 0.25;
        for (std::size_t j = 1; j <= 6; ++j)
            worst -= std::abs(shape_basis(th, j, fam.amplitude(), fam.decay()));
        CHECK(worst > 0.0);
    }
    CHECK_THROWS_AS(ProblemFamily::shape(2, 0.2, 2.0, HelmholtzConfig{}), std::invalid_argument);
}

TEST_CASE("shape map Jacobian matches finite differences")
{
    const HelmholtzConfig cfg;
    const auto fam = ProblemFamily::shape(4, 0.5 * theta_max(2.0, cfg.r_in), 2.0, cfg);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0), rr(0.3, 0.85), tt(0.05, 6.2);
    const double eps = 1e-6;
    for (int k = 0; k < 30; ++k) {
        const Vector y = vec({u(rng), u(rng), u(rng), u(rng)});
        const Point2 x = polar(rr(rng), tt(rng));
        const auto m = shape_map(y, x, fam);
        Eigen::Matrix2d fd;
        for (int c = 0; c < 2; ++c) {
            Point2 e = Point2::Zero();
            e[c] = eps;
            fd.col(c) = (shape_map(y, x + e, fam).phi - shape_map(y, x - e, fam).phi) / (2 * eps);
        }
        CHECK((m.jacobian - fd).norm() < 1e-6);
        CHECK(m.jacobian.determinant() > 0.0);
    }

    const auto outside = shape_map(vec({1, 1, 1, 1}), polar(0.95, 1.0), fam);
    CHECK((outside.phi - polar(0.95, 1.0)).norm() == 0.0);
    CHECK(outside.jacobian.isIdentity());

    // Inner circle maps onto the perturbed scatterer boundary.
    const Vector y = vec({0.3, -1.0, 0.5, 1.0});
    const double th = 2.2;
    CHECK(shape_map(y, polar(cfg.r_in, th), fam).phi.norm() == doctest::Approx(shape_radius(y, th, fam)));

    const auto c0 = pulled_back_coeffs(Vector::Zero(4), polar(0.5, 1.0), fam);
    CHECK(c0.a.isIdentity(1e-14));
    CHECK(c0.n == doctest::Approx(1.0));
}

TEST_CASE("assembled systems")
{
    HelmholtzConfig cfg;
    cfg.k0 = 5.0;
    const auto mesh = build_annulus_mesh(cfg, 0.1);
    const auto aff = ProblemFamily::affine({0.5, 0.5}, cfg);
    const auto shp = ProblemFamily::shape(2, 0.5 * theta_max(2.0, cfg.r_in), 2.0, cfg);

    // Both families reduce to the reference problem at these parameters.
    const auto ref_a = assemble(vec({1.0, 1.0}), aff, mesh);
    const auto ref_s = assemble(vec({0.0, 0.0}), shp, mesh);
    CHECK(ref_a.matrix.distance(ref_s.matrix) < 1e-12 * ref_a.matrix.frobenius_norm());
    CHECK((ref_a.rhs - ref_s.rhs).norm() < 1e-12);

    // Complex symmetric, not Hermitian.
    const auto sys = assemble(vec({0.4, -0.8}), shp, mesh);
    const MatrixC d = sys.matrix.to_dense();
    CHECK((d - d.transpose()).norm() < 1e-12 * d.norm());
    CHECK((d - d.adjoint()).norm() > 1e-3);

    for (auto v : mesh.inner_boundary) {
        CHECK(d(v, v) == Complex(1.0, 0.0));
        CHECK(sys.rhs[v] == Complex(0.0, 0.0));
    }
    CHECK(assemble(vec({0.4, -0.8}), shp, mesh).matrix.distance(sys.matrix) == 0.0);
    CHECK(assemble(vec({0.4, 0.8}), shp, mesh).matrix.distance(sys.matrix) > 0.0);

    CHECK_THROWS_AS(assemble(vec({0.4}), shp, mesh), std::invalid_argument);
    CHECK_THROWS_AS(assemble(vec({1.4, 0.0}), shp, mesh), std::invalid_argument);

    const MatrixC mass = mass_matrix(mesh).to_dense();
    double area = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        area += triangle_area(mesh, t);
    CHECK(mass.sum().real() == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("manufactured solution converges at second order")
{
    HelmholtzConfig cfg;
    cfg.k0 = 5.0;
    const double k0 = cfg.k0;
    const Complex i1(0.0, 1.0);
    const auto exact = [k0, i1](const Point2& x) { return std::exp(i1 * k0 * x.x()) + x.x() * x.x() * x.y(); };
    BoundaryData data;
    data.dirichlet = exact;
    data.source = [k0](const Point2& x) { return Complex(-2.0 * x.y() - k0 * k0 * x.x() * x.x() * x.y(), 0.0); };
    data.robin = [k0, i1, exact](const Point2& x, const Point2&) {
        const Point2 n = x / x.norm();
        const Complex ux = i1 * k0 * std::exp(i1 * k0 * x.x()) + 2.0 * x.x() * x.y();
        const Complex uy = x.x() * x.x();
        return ux * n.x() + uy * n.y() - i1 * k0 * exact(x);
    };
    const auto unit = [](const Point2&) { return PointCoefficients{}; };

    std::vector<double> errs;
    for (double h : {0.1, 0.05, 0.025}) {
        const auto mesh = build_annulus_mesh(cfg, h);
        const auto sys = assemble_system(mesh, k0, unit, data);
        const VectorC u = lu_factor(sys.matrix).apply(sys.rhs);
        errs.push_back(l2_error(mesh, u, exact));
    }
    for (std::size_t k = 1; k < errs.size(); ++k)
        CHECK(std::log2(errs[k - 1] / errs[k]) >= 1.8);
}
