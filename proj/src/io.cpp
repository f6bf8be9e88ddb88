#include "ncreg/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "ncreg/bench.hpp"
#include "ncreg/errors.hpp"

namespace ncreg {

namespace {

constexpr char kMagic[5] = {'N', 'C', 'R', 'R', '1'};

std::uint64_t read_u64le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void write_u64le(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

Eigen::MatrixXd read_ncrr1(std::ifstream& in, const std::string& path) {
  const std::uint64_t rows = read_u64le(in);
  const std::uint64_t cols = read_u64le(in);
  if (!in || rows == 0 || cols == 0 || rows > (1u << 30) || cols > (1u << 30))
    throw ParameterError("bad NCRR1 header: " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::vector<double> row(cols);
  for (std::uint64_t r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(cols * sizeof(double)));
    if (!in) throw ParameterError("truncated NCRR1 payload: " + path);
    for (std::uint64_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used == 0) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {  // header row is allowed once
        first = false;
        continue;
      }
      throw ParameterError("non-numeric CSV cell in " + path + ": " + line);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParameterError("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParameterError("empty matrix file: " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path) {
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open: " + path);
    char magic[5] = {};
    in.read(magic, 5);
    if (in && std::memcmp(magic, kMagic, 5) == 0) return read_ncrr1(in, path);
  }
  return read_csv_matrix(path);
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << format_g17(m(r, c));
    out << "\n";
  }
}

void write_matrix_ncrr1(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  out.write(kMagic, 5);
  write_u64le(out, static_cast<std::uint64_t>(m.rows()));
  write_u64le(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      write_u64le(out, bits);
    }
}

Eigen::VectorXd read_vector(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw ParameterError("expected a vector (one row or column): " + path);
}

void write_vector(const Eigen::VectorXd& v, const std::string& path) {
  write_matrix_csv(v, path);
}

}  // namespace ncreg
