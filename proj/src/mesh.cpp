#include "pcplace/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace pcplace {

double HelmholtzConfig::mesh_size() const
{
    return mesh_constant * std::pow(k0, -1.5);
}

void HelmholtzConfig::validate() const
{
    if (!(k0 > 0.0))
        throw std::invalid_argument("HelmholtzConfig: k0 must be positive");
    if (!(0.0 < r_in && r_in < r_mol && r_mol < r_out))
        throw std::invalid_argument("HelmholtzConfig: need 0 < r_in < r_mol < r_out");
    if (std::abs(incident_direction.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("HelmholtzConfig: incident direction must be a unit vector");
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("HelmholtzConfig: tol must lie in (0, 1)");
    if (!(mesh_constant > 0.0))
        throw std::invalid_argument("HelmholtzConfig: mesh_constant must be positive");
}

AnnulusMesh build_annulus_mesh(const HelmholtzConfig& cfg)
{
    return build_annulus_mesh(cfg, cfg.mesh_size());
}

AnnulusMesh build_annulus_mesh(const HelmholtzConfig& cfg, double h)
{
    cfg.validate();
    if (!(h > 0.0))
        throw std::invalid_argument("build_annulus_mesh: mesh size must be positive");

    const double width = cfg.r_out - cfg.r_in;
    const auto n_r = static_cast<std::size_t>(std::ceil(width / h - 1e-9));
    const auto n_t = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * cfg.r_out / h - 1e-9)));
    if (n_r < 2)
        throw std::invalid_argument("build_annulus_mesh: mesh size too coarse to resolve the annulus");

    AnnulusMesh m;
    m.h = h;
    m.n_radial = n_r;
    m.n_angular = n_t;
    m.nodes.reserve((n_r + 1) * n_t);

    // Node (i, j): ring i (0 = inner), angle j.
    for (std::size_t i = 0; i <= n_r; ++i) {
        const double r = (i == n_r) ? cfg.r_out : cfg.r_in + width * static_cast<double>(i) / static_cast<double>(n_r);
        for (std::size_t j = 0; j < n_t; ++j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_t);
            m.nodes.emplace_back(r * std::cos(th), r * std::sin(th));
        }
    }
    auto id = [n_t](std::size_t i, std::size_t j) { return static_cast<std::int32_t>(i * n_t + (j % n_t)); };

    m.triangles.reserve(2 * n_r * n_t);
    for (std::size_t i = 0; i < n_r; ++i) {
        for (std::size_t j = 0; j < n_t; ++j) {
            const auto a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    }
    for (std::size_t j = 0; j < n_t; ++j) {
        m.inner_boundary.push_back(id(0, j));
        m.outer_boundary.push_back(id(n_r, j));
        m.outer_edges.push_back({id(n_r, j), id(n_r, j + 1)});
    }
    return m;
}

double triangle_area(const AnnulusMesh& mesh, std::size_t t)
{
    const auto& tri = mesh.triangles[t];
    const Point2& a = mesh.nodes[tri[0]];
    const Point2& b = mesh.nodes[tri[1]];
    const Point2& c = mesh.nodes[tri[2]];
    return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double max_edge_length(const AnnulusMesh& mesh)
{
    double best = 0.0;
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            best = std::max(best, (mesh.nodes[tri[e]] - mesh.nodes[tri[(e + 1) % 3]]).norm());
    return best;
}

void write_mesh(std::ostream& os, const AnnulusMesh& mesh)
{
    os.precision(17);
    os << "nodes " << mesh.nodes.size() << '\n';
    for (const auto& p : mesh.nodes)
        os << p.x() << ' ' << p.y() << '\n';
    os << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles)
        os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    os << "inner " << mesh.inner_boundary.size() << '\n';
    for (auto v : mesh.inner_boundary)
        os << v << '\n';
    os << "outer " << mesh.outer_boundary.size() << '\n';
    for (auto v : mesh.outer_boundary)
        os << v << '\n';
}

} // namespace pcplace
