#include "pcplace/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pcplace {

namespace {

struct Header {
    std::string format;   // coordinate | array
    std::string field;    // real | complex | integer
    std::string symmetry; // general | symmetric
};

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Header read_header(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("matrix market: empty stream");
    std::istringstream ss(line);
    std::string banner, object;
    Header h;
    ss >> banner >> object >> h.format >> h.field >> h.symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw std::runtime_error("matrix market: bad banner line");
    h.format = lower(h.format);
    h.field = lower(h.field);
    h.symmetry = lower(h.symmetry);
    if (h.field != "real" && h.field != "complex" && h.field != "integer")
        throw std::runtime_error("matrix market: unsupported field '" + h.field + "'");
    if (h.symmetry != "general" && h.symmetry != "symmetric")
        throw std::runtime_error("matrix market: unsupported symmetry '" + h.symmetry + "'");
    return h;
}

std::istringstream next_data_line(std::istream& is)
{
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '%')
            continue;
        return std::istringstream(line);
    }
    throw std::runtime_error("matrix market: unexpected end of data");
}

Complex read_value(std::istringstream& ss, const std::string& field)
{
    double re = 0.0, im = 0.0;
    ss >> re;
    if (field == "complex")
        ss >> im;
    if (ss.fail())
        throw std::runtime_error("matrix market: malformed value");
    return {re, im};
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "' for reading");
    return is;
}

} // namespace

void write_matrix_market(std::ostream& os, const SparseMatrixC& a)
{
    os << "%%MatrixMarket matrix coordinate complex general\n";
    os << a.n() << ' ' << a.n() << ' ' << a.nnz() << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto v = a.values();
    for (std::size_t r = 0; r < a.n(); ++r)
        for (auto k = rp[r]; k < rp[r + 1]; ++k)
            os << r + 1 << ' ' << ci[k] + 1 << ' ' << v[k].real() << ' ' << v[k].imag() << '\n';
}

void write_matrix_market(const std::string& path, const SparseMatrixC& a)
{
    auto os = open_out(path);
    write_matrix_market(os, a);
}

SparseMatrixC read_matrix_market(std::istream& is)
{
    const Header h = read_header(is);
    if (h.format != "coordinate")
        throw std::runtime_error("matrix market: expected coordinate format for a sparse matrix");
    auto dims = next_data_line(is);
    std::size_t rows = 0, cols = 0, entries = 0;
    dims >> rows >> cols >> entries;
    if (dims.fail() || rows != cols)
        throw std::runtime_error("matrix market: expected a square matrix");
    std::vector<TripletC> t;
    t.reserve(h.symmetry == "symmetric" ? 2 * entries : entries);
    for (std::size_t k = 0; k < entries; ++k) {
        auto ss = next_data_line(is);
        long r = 0, c = 0;
        ss >> r >> c;
        const Complex v = read_value(ss, h.field);
        if (r < 1 || c < 1 || static_cast<std::size_t>(r) > rows || static_cast<std::size_t>(c) > cols)
            throw std::runtime_error("matrix market: index out of range");
        t.push_back({static_cast<std::int32_t>(r - 1), static_cast<std::int32_t>(c - 1), v});
        if (h.symmetry == "symmetric" && r != c)
            t.push_back({static_cast<std::int32_t>(c - 1), static_cast<std::int32_t>(r - 1), v});
    }
    return SparseMatrixC::from_triplets(rows, std::move(t));
}

SparseMatrixC read_matrix_market(const std::string& path)
{
    auto is = open_in(path);
    return read_matrix_market(is);
}

void write_matrix_market(std::ostream& os, const VectorC& v)
{
    os << "%%MatrixMarket matrix array complex general\n";
    os << v.size() << " 1\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << v[i].real() << ' ' << v[i].imag() << '\n';
}

void write_matrix_market(const std::string& path, const VectorC& v)
{
    auto os = open_out(path);
    write_matrix_market(os, v);
}

VectorC read_matrix_market_vector(std::istream& is)
{
    const Header h = read_header(is);
    if (h.format != "array")
        throw std::runtime_error("matrix market: expected array format for a vector");
    auto dims = next_data_line(is);
    std::size_t rows = 0, cols = 0;
    dims >> rows >> cols;
    if (dims.fail() || cols != 1)
        throw std::runtime_error("matrix market: expected a single column");
    VectorC v(static_cast<Eigen::Index>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
        auto ss = next_data_line(is);
        v[static_cast<Eigen::Index>(i)] = read_value(ss, h.field);
    }
    return v;
}

VectorC read_matrix_market_vector(const std::string& path)
{
    auto is = open_in(path);
    return read_matrix_market_vector(is);
}

} // namespace pcplace
