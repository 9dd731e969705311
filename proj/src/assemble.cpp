#include "pcplace/assemble.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pcplace/errors.hpp"

namespace pcplace {

namespace {

constexpr Complex kI{0.0, 1.0};

// Order-2 interior rule: barycentric (2/3, 1/6, 1/6) and permutations, equal weights.
constexpr std::array<std::array<double, 3>, 3> kTriPoints{{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
}};
constexpr double kTriWeight = 1.0 / 3.0;

struct Element {
    std::array<Point2, 3> p;
    double area;
    std::array<Point2, 3> grad; // gradients of the barycentric coordinates
};

Element make_element(const AnnulusMesh& mesh, std::size_t t)
{
    const auto& tri = mesh.triangles[t];
    Element e;
    for (int i = 0; i < 3; ++i)
        e.p[i] = mesh.nodes[tri[i]];
    const double det = (e.p[1] - e.p[0]).x() * (e.p[2] - e.p[0]).y() - (e.p[1] - e.p[0]).y() * (e.p[2] - e.p[0]).x();
    if (!(det > 0.0))
        throw std::runtime_error("assemble: degenerate or inverted element " + std::to_string(t));
    e.area = 0.5 * det;
    for (int i = 0; i < 3; ++i) {
        const Point2& a = e.p[(i + 1) % 3];
        const Point2& b = e.p[(i + 2) % 3];
        e.grad[i] = Point2(a.y() - b.y(), b.x() - a.x()) / det;
    }
    return e;
}

Point2 at(const Element& e, const std::array<double, 3>& lam)
{
    return lam[0] * e.p[0] + lam[1] * e.p[1] + lam[2] * e.p[2];
}

} // namespace

BoundaryData plane_wave_data(const HelmholtzConfig& cfg)
{
    const double k0 = cfg.k0;
    const Point2 d = cfg.incident_direction;
    BoundaryData data;
    data.dirichlet = [](const Point2&) { return Complex(0.0, 0.0); };
    data.robin = [k0, d](const Point2& x, const Point2& n) {
        const Complex u = std::exp(kI * k0 * d.dot(x));
        return kI * k0 * d.dot(n) * u - kI * k0 * u;
    };
    return data;
}

LinearSystem assemble_system(const AnnulusMesh& mesh, double k0, const CoefficientField& coefficients,
                             const BoundaryData& data)
{
    if (!data.dirichlet || !data.robin)
        throw std::invalid_argument("assemble_system: Dirichlet and Robin data are required");

    const std::size_t n = mesh.nodes.size();
    std::vector<char> is_dirichlet(n, 0);
    VectorC g = VectorC::Zero(static_cast<Eigen::Index>(n));
    for (auto v : mesh.inner_boundary) {
        is_dirichlet[v] = 1;
        g[v] = data.dirichlet(mesh.nodes[v]);
    }

    LinearSystem sys;
    sys.rhs = VectorC::Zero(static_cast<Eigen::Index>(n));
    std::vector<TripletC> trip;
    trip.reserve(9 * mesh.triangles.size() + 4 * mesh.outer_edges.size() + mesh.inner_boundary.size());

    auto add = [&](std::int32_t r, std::int32_t c, Complex v) {
        if (is_dirichlet[r])
            return;
        if (is_dirichlet[c]) {
            sys.rhs[r] -= v * g[c];
            return;
        }
        trip.push_back({r, c, v});
    };

    const double k2 = k0 * k0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = make_element(mesh, t);
        const auto& tri = mesh.triangles[t];
        std::array<std::array<Complex, 3>, 3> local{};
        std::array<Complex, 3> load{};
        for (const auto& lam : kTriPoints) {
            const Point2 x = at(e, lam);
            const PointCoefficients c = coefficients(x);
            const double w = kTriWeight * e.area;
            for (int i = 0; i < 3; ++i) {
                const Point2 ag = c.a * e.grad[i];
                for (int j = 0; j < 3; ++j)
                    local[i][j] += w * (e.grad[j].dot(ag) - k2 * c.n * lam[i] * lam[j]);
            }
            if (data.source) {
                const Complex f = data.source(x);
                for (int i = 0; i < 3; ++i)
                    load[i] += w * f * lam[i];
            }
        }
        for (int i = 0; i < 3; ++i) {
            if (!is_dirichlet[tri[i]])
                sys.rhs[tri[i]] += load[i];
            for (int j = 0; j < 3; ++j)
                add(tri[i], tri[j], local[i][j]);
        }
    }

    // Two-point Gauss on each outer edge.
    const double q = 0.5 / std::sqrt(3.0);
    const std::array<double, 2> ts{0.5 - q, 0.5 + q};
    for (const auto& edge : mesh.outer_edges) {
        const Point2& a = mesh.nodes[edge[0]];
        const Point2& b = mesh.nodes[edge[1]];
        const Point2 dir = b - a;
        const double len = dir.norm();
        const Point2 normal(dir.y() / len, -dir.x() / len);
        std::array<std::array<Complex, 2>, 2> local{};
        std::array<Complex, 2> load{};
        for (double t : ts) {
            const std::array<double, 2> lam{1.0 - t, t};
            const Point2 x = a + t * dir;
            const double w = 0.5 * len;
            const Complex gx = data.robin(x, normal);
            for (int i = 0; i < 2; ++i) {
                load[i] += w * gx * lam[i];
                for (int j = 0; j < 2; ++j)
                    local[i][j] += -kI * k0 * w * lam[i] * lam[j];
            }
        }
        for (int i = 0; i < 2; ++i) {
            if (!is_dirichlet[edge[i]])
                sys.rhs[edge[i]] += load[i];
            for (int j = 0; j < 2; ++j)
                add(edge[i], edge[j], local[i][j]);
        }
    }

    for (auto v : mesh.inner_boundary) {
        trip.push_back({v, v, Complex(1.0, 0.0)});
        sys.rhs[v] = g[v];
    }
    sys.matrix = SparseMatrixC::from_triplets(n, std::move(trip));
    return sys;
}

LinearSystem assemble(const Vector& y, const ProblemFamily& family, const AnnulusMesh& mesh)
{
    if (static_cast<std::size_t>(y.size()) != family.dims())
        throw std::invalid_argument("assemble: parameter dimension mismatch");
    if (!family.box().contains(y, 1e-12))
        throw std::invalid_argument("assemble: parameter outside the box");
    const auto coeff = [&](const Point2& x) { return family.coefficients(y, x); };
    return assemble_system(mesh, family.config().k0, coeff, plane_wave_data(family.config()));
}

SparseMatrixC mass_matrix(const AnnulusMesh& mesh)
{
    std::vector<TripletC> trip;
    trip.reserve(9 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = make_element(mesh, t);
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trip.push_back({tri[i], tri[j], Complex(e.area * (i == j ? 2.0 : 1.0) / 12.0, 0.0)});
    }
    return SparseMatrixC::from_triplets(mesh.nodes.size(), std::move(trip));
}

double l2_error(const AnnulusMesh& mesh, const VectorC& u_h, const std::function<Complex(const Point2&)>& exact)
{
    if (static_cast<std::size_t>(u_h.size()) != mesh.nodes.size())
        throw std::invalid_argument("l2_error: solution size does not match the mesh");
    // Degree-4 six-point rule.
    constexpr double a1 = 0.445948490915965, w1 = 0.223381589678011;
    constexpr double a2 = 0.091576213509771, w2 = 0.109951743655322;
    const std::array<std::array<double, 3>, 6> pts{{
        {1 - 2 * a1, a1, a1}, {a1, 1 - 2 * a1, a1}, {a1, a1, 1 - 2 * a1},
        {1 - 2 * a2, a2, a2}, {a2, 1 - 2 * a2, a2}, {a2, a2, 1 - 2 * a2},
    }};
    const std::array<double, 6> wts{w1, w1, w1, w2, w2, w2};

    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Element e = make_element(mesh, t);
        const auto& tri = mesh.triangles[t];
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const auto& lam = pts[q];
            const Complex uh = lam[0] * u_h[tri[0]] + lam[1] * u_h[tri[1]] + lam[2] * u_h[tri[2]];
            sum += wts[q] * e.area * std::norm(uh - exact(at(e, lam)));
        }
    }
    return std::sqrt(sum);
}

} // namespace pcplace
