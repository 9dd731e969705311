#pragma once

#include <iosfwd>
#include <string>

#include "pcplace/sparse.hpp"

namespace pcplace {

// Matrix Market (coordinate complex general / array complex general).

void write_matrix_market(std::ostream& os, const SparseMatrixC& a);
void write_matrix_market(const std::string& path, const SparseMatrixC& a);
SparseMatrixC read_matrix_market(std::istream& is);
SparseMatrixC read_matrix_market(const std::string& path);

void write_matrix_market(std::ostream& os, const VectorC& v);
void write_matrix_market(const std::string& path, const VectorC& v);
VectorC read_matrix_market_vector(std::istream& is);
VectorC read_matrix_market_vector(const std::string& path);

} // namespace pcplace
