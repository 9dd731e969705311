#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace pcplace {

using Point2 = Eigen::Vector2d;

struct HelmholtzConfig {
    double k0 = 10.0;
    double r_in = 0.25;
    double r_out = 1.0;
    double r_mol = 0.9;
    Point2 incident_direction{1.0, 0.0};
    double tol = 1e-5;
    /// h = mesh_constant * k0^{-3/2}
    double mesh_constant = 1.0;

    double mesh_size() const;
    double domain_diameter() const { return 2.0 * r_out; }
    /// ||grad chi||_inf of the linear mollifier.
    double mollifier_gradient() const { return 1.0 / (r_mol - r_in); }
    void validate() const;
};

/// P1 triangulation of the annulus r_in <= |x| <= r_out on a polar grid.
struct AnnulusMesh {
    std::vector<Point2> nodes;
    std::vector<std::array<std::int32_t, 3>> triangles;
    std::vector<std::int32_t> inner_boundary;
    std::vector<std::int32_t> outer_boundary;
    /// Outer boundary edges, counterclockwise.
    std::vector<std::array<std::int32_t, 2>> outer_edges;
    double h = 0.0;
    std::size_t n_radial = 0;
    std::size_t n_angular = 0;
};

AnnulusMesh build_annulus_mesh(const HelmholtzConfig& cfg);
AnnulusMesh build_annulus_mesh(const HelmholtzConfig& cfg, double h);

/// Signed area of triangle t (positive for counterclockwise orientation).
double triangle_area(const AnnulusMesh& mesh, std::size_t t);
double max_edge_length(const AnnulusMesh& mesh);

/// Plain-text export:
///   nodes <count>        then one "x y" line per node
///   triangles <count>    then one "a b c" line per triangle (0-based)
///   inner <count>        then the inner boundary node ids, one per line
///   outer <count>        then the outer boundary node ids, one per line
void write_mesh(std::ostream& os, const AnnulusMesh& mesh);

} // namespace pcplace
