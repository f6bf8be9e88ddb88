#pragma once

#include <Eigen/Core>
#include <string>

#include "ncreg/solver.hpp"

namespace ncreg {

// Orthonormal separable 2-D DCT-II and inverse.
Eigen::MatrixXd dct2(const Eigen::MatrixXd& image);
Eigen::MatrixXd idct2(const Eigen::MatrixXd& coeffs);

struct MaskedImageProblem {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // true = pixel known
  Eigen::MatrixXd pixels;  // full image; only masked entries are used

  Eigen::Index height() const { return mask.rows(); }
  Eigen::Index width() const { return mask.cols(); }
};

// Uniform without-replacement mask at the given fraction of pixels.
MaskedImageProblem make_masked_problem(const Eigen::MatrixXd& image, double fraction,
                                       std::uint64_t seed);

// CD over DCT coefficients of the masked least-squares objective; psi is
// fixed to 0.001 * xi. Returns the recovered image.
Eigen::MatrixXd recover(const MaskedImageProblem& prob, const Regularizer& reg,
                        const SolverConfig& cfg);

// 10 log10(peak^2 / MSE), capped at 999 dB for identical images.
double psnr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double peak);

// Binary 8-bit grayscale PGM (P5); values map to [0,1].
Eigen::MatrixXd read_pgm(const std::string& path);
void write_pgm(const Eigen::MatrixXd& image, const std::string& path);

}  // namespace ncreg
