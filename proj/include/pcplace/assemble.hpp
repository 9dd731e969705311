#pragma once

#include <functional>

#include "pcplace/family.hpp"
#include "pcplace/mesh.hpp"
#include "pcplace/sparse.hpp"

namespace pcplace {

struct LinearSystem {
    SparseMatrixC matrix;
    VectorC rhs;
};

using CoefficientField = std::function<PointCoefficients(const Point2&)>;

/// Boundary and volume data for the P1 Helmholtz assembler.
struct BoundaryData {
    /// Dirichlet values on the inner boundary.
    std::function<Complex(const Point2&)> dirichlet;
    /// Robin data g(x, n) on the outer boundary, n the outward unit normal.
    std::function<Complex(const Point2&, const Point2&)> robin;
    /// Volume source; may be empty.
    std::function<Complex(const Point2&)> source;
};

/// Sound-soft scattering of u_in = exp(i k0 d.x): u = 0 on the inner boundary,
/// Robin data (d/dn - i k0) u_in on the outer one.
BoundaryData plane_wave_data(const HelmholtzConfig& cfg);

/// Stiffness[A] - k0^2 Mass[n] - i k0 BoundaryMass[outer], with Dirichlet rows
/// and columns eliminated symmetrically.
LinearSystem assemble_system(const AnnulusMesh& mesh, double k0, const CoefficientField& coefficients,
                             const BoundaryData& data);

/// System of `family` at parameter y with plane-wave incidence.
LinearSystem assemble(const Vector& y, const ProblemFamily& family, const AnnulusMesh& mesh);

/// P1 mass matrix with unit coefficient and no boundary treatment.
SparseMatrixC mass_matrix(const AnnulusMesh& mesh);

/// ||u_h - exact||_{L^2} over the triangulated domain (degree-4 quadrature).
double l2_error(const AnnulusMesh& mesh, const VectorC& u_h, const std::function<Complex(const Point2&)>& exact);

} // namespace pcplace
