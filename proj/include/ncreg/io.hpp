#pragma once

#include <Eigen/Core>
#include <string>

namespace ncreg {

// Matrix files: CSV (optional header row; one sample per row) or the NCRR1
// binary format (magic "NCRR1", u64-LE rows, u64-LE cols, row-major f64-LE
// payload). The reader dispatches on the magic bytes.
Eigen::MatrixXd read_matrix(const std::string& path);
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
void write_matrix_ncrr1(const Eigen::MatrixXd& m, const std::string& path);

// Vectors are single-column (or single-row) matrix files.
Eigen::VectorXd read_vector(const std::string& path);
void write_vector(const Eigen::VectorXd& v, const std::string& path);

}  // namespace ncreg
