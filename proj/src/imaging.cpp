#include "ncreg/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <vector>

#include "ncreg/prox.hpp"
#include "ncreg/rng.hpp"

namespace ncreg {

namespace {

constexpr std::uint64_t kPurposeMask = 301;

// Orthonormal DCT-II matrix: row k is the k-th basis vector.
Eigen::MatrixXd dct_matrix(Eigen::Index n) {
  Eigen::MatrixXd C(n, n);
  const double dn = static_cast<double>(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / dn);
    for (Eigen::Index j = 0; j < n; ++j)
      C(k, j) = scale * std::cos(M_PI * (2.0 * static_cast<double>(j) + 1.0) *
                                 static_cast<double>(k) / (2.0 * dn));
  }
  return C;
}

}  // namespace

Eigen::MatrixXd dct2(const Eigen::MatrixXd& image) {
  return dct_matrix(image.rows()) * image * dct_matrix(image.cols()).transpose();
}

Eigen::MatrixXd idct2(const Eigen::MatrixXd& coeffs) {
  return dct_matrix(coeffs.rows()).transpose() * coeffs * dct_matrix(coeffs.cols());
}

MaskedImageProblem make_masked_problem(const Eigen::MatrixXd& image, double fraction,
                                       std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ParameterError("mask fraction must be in (0,1]");
  const Eigen::Index h = image.rows(), w = image.cols();
  const Eigen::Index total = h * w;
  const Eigen::Index keep = std::max<Eigen::Index>(
      1, static_cast<Eigen::Index>(std::llround(fraction * static_cast<double>(total))));

  std::vector<Eigen::Index> pool(static_cast<std::size_t>(total));
  for (Eigen::Index i = 0; i < total; ++i) pool[static_cast<std::size_t>(i)] = i;
  Rng rng(seed, 0, kPurposeMask);
  MaskedImageProblem prob;
  prob.mask.setConstant(h, w, false);
  prob.pixels = image;
  for (Eigen::Index k = 0; k < keep; ++k) {
    const std::size_t pick = static_cast<std::size_t>(k) +
        static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(total - k)));
    std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
    const Eigen::Index flat = pool[static_cast<std::size_t>(k)];
    prob.mask(flat / w, flat % w) = true;
  }
  return prob;
}

Eigen::MatrixXd recover(const MaskedImageProblem& prob, const Regularizer& reg,
                        const SolverConfig& cfg) {
  const Eigen::Index h = prob.height(), w = prob.width();
  Eigen::MatrixXd Md = prob.mask.cast<double>();
  const double n = Md.sum();
  if (n == 0.0) throw DomainError("recover: empty mask");

  const Eigen::MatrixXd Ch = dct_matrix(h), Cw = dct_matrix(w);
  // ||x_(k,l)||^2 = sum over mask of (Ch(k,r) Cw(l,c))^2, for all (k,l) at once
  const Eigen::MatrixXd col_sq =
      ((Ch.array() * Ch.array()).matrix() * Md * (Cw.array() * Cw.array()).matrix().transpose()) /
      n;
  const double xi = col_sq.maxCoeff();
  const double psi = 0.001 * xi;

  const Eigen::Index p = h * w;
  double tau = cfg.tau;
  if (tau <= 0.0) {
    if (!(cfg.nu_target > 0.0)) throw ParameterError("recover: need tau or nu_target");
    tau = cfg.nu_target /
          (std::sqrt(static_cast<double>(p)) * (psi + static_cast<double>(p) * xi));
  }

  const Eigen::MatrixXd Y = Md.array() * prob.pixels.array();
  Eigen::MatrixXd Theta = Eigen::MatrixXd::Zero(h, w);
  Eigen::MatrixXd R = Y;  // masked residual image

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double delta_sq = 0.0;
    for (Eigen::Index k = 0; k < h; ++k) {
      // x_(k,l)' omega = Ch.row(k) R Cw.row(l)'; keep the row correlation live
      Eigen::RowVectorXd tk = Ch.row(k) * R;
      for (Eigen::Index l = 0; l < w; ++l) {
        const double a = col_sq(k, l) + psi;
        const double v = Theta(k, l) + tk.dot(Cw.row(l)) / (n * a);
        const double u = prox({a, v, reg});
        const double d = u - Theta(k, l);
        if (d != 0.0) {
          Theta(k, l) = u;
          const Eigen::MatrixXd atom =
              Md.array() * (Ch.row(k).transpose() * Cw.row(l)).array();
          R.noalias() -= d * atom;
          tk.noalias() -= d * (Ch.row(k) * atom);
          delta_sq += d * d;
        }
      }
    }
    if (!std::isfinite(delta_sq)) throw NumericalError("recover: non-finite update", sweep);
    // cheap full recompute bounds incremental drift
    R = Md.array() * (Y - idct2(Theta)).array();
    if (std::sqrt(delta_sq) <= tau) break;
  }
  return idct2(Theta);
}

double psnr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double peak) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ParameterError("psnr: dimension mismatch");
  if (!(peak > 0.0)) throw ParameterError("psnr: peak must be positive");
  const double mse = (a - b).squaredNorm() / static_cast<double>(a.size());
  if (mse == 0.0) return 999.0;
  return std::min(999.0, 10.0 * std::log10(peak * peak / mse));
}

Eigen::MatrixXd read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open image: " + path);
  auto next_token = [&in, &path]() {
    std::string tok;
    while (true) {
      int c = in.get();
      if (c == EOF) throw ParameterError("truncated PGM: " + path);
      if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
  };
  if (next_token() != "P5") throw ParameterError("not a binary PGM (P5): " + path);
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w < 1 || h < 1) throw ParameterError("bad PGM dimensions: " + path);
  if (maxval < 1 || maxval > 255) throw ParameterError("only 8-bit PGM supported: " + path);

  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size()))
    throw ParameterError("truncated PGM payload: " + path);

  Eigen::MatrixXd img(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      img(r, c) = static_cast<double>(buf[static_cast<std::size_t>(r) * w + c]) / maxval;
  return img;
}

void write_pgm(const Eigen::MatrixXd& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  out << "P5\n" << image.cols() << " " << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
}

}  // namespace ncreg
