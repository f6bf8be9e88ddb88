#include "ncreg/baselines.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace ncreg {

OmpResult omp(const Problem& prob, int max_support, double residual_target) {
  const Eigen::Index n = prob.n(), p = prob.p();
  if (max_support < 1 || max_support > std::min(n, p))
    throw ParameterError("omp: max_support out of range");

  OmpResult res;
  res.theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd w = prob.y;
  res.residual_norm = w.norm();
  const double sqrt2n = std::sqrt(2.0 * static_cast<double>(n));
  const Eigen::VectorXd col_norm = prob.X.colwise().norm();
  std::vector<char> active(static_cast<std::size_t>(p), 0);
  Eigen::MatrixXd Xa(n, max_support);

  while (static_cast<int>(res.support.size()) < max_support &&
         res.residual_norm / sqrt2n > residual_target) {
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (active[static_cast<std::size_t>(i)] || col_norm[i] == 0.0) continue;
      const double score = std::abs(prob.X.col(i).dot(w)) / col_norm[i];
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best < 0 || best_score == 0.0) break;
    active[static_cast<std::size_t>(best)] = 1;
    Xa.col(static_cast<Eigen::Index>(res.support.size())) = prob.X.col(best);
    res.support.push_back(best);

    const Eigen::Index k = static_cast<Eigen::Index>(res.support.size());
    const auto A = Xa.leftCols(k);
    Eigen::MatrixXd G = A.transpose() * A;
    Eigen::VectorXd b = A.transpose() * prob.y;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    Eigen::VectorXd coef;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      coef = ldlt.solve(b);
    } else {
      res.rank_deficient = true;
      G.diagonal().array() += 1e-12;
      coef = G.ldlt().solve(b);
    }
    // guard against silent near-singular solves
    if (!coef.allFinite()) {
      res.rank_deficient = true;
      G.diagonal().array() += 1e-12;
      coef = G.ldlt().solve(b);
    }
    w = prob.y - A * coef;
    res.residual_norm = w.norm();
    for (Eigen::Index j = 0; j < k; ++j) res.theta[res.support[static_cast<std::size_t>(j)]] = coef[j];
  }
  return res;
}

FistaResult fista_l1(const Problem& prob, double lambda, double tol, int max_iter) {
  if (!(lambda > 0.0)) throw ParameterError("fista_l1: lambda must be positive");
  const Eigen::Index n = prob.n(), p = prob.p();
  const double dn = static_cast<double>(n);

  // L = lambda_max(X'X/n) via power iterations
  Eigen::VectorXd v = Eigen::VectorXd::Ones(p).normalized();
  double L = 1.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd u = prob.X.transpose() * (prob.X * v) / dn;
    const double norm = u.norm();
    if (norm == 0.0) break;
    L = norm;
    v = u / norm;
  }
  L = std::max(L, 1e-12);

  auto F = [&](const Eigen::VectorXd& th) {
    return (prob.y - prob.X * th).squaredNorm() / (2.0 * dn) + lambda * th.lpNorm<1>();
  };
  auto shrink = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd out(p);
    const double thr = lambda / L;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double a = std::abs(z[i]) - thr;
      out[i] = a > 0.0 ? (z[i] > 0.0 ? a : -a) : 0.0;
    }
    return out;
  };

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd z = theta;
  double t = 1.0;
  double f_prev = F(theta);
  FistaResult res;
  res.step_L = L;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd grad = prob.X.transpose() * (prob.X * z - prob.y) / dn;
    const Eigen::VectorXd theta_next = shrink(z - grad / L);
    const double f_next = F(theta_next);
    res.iterations = it;
    if (f_next > f_prev) {  // restart momentum
      t = 1.0;
      z = theta;
      continue;
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    z = theta_next + ((t - 1.0) / t_next) * (theta_next - theta);
    theta = theta_next;
    t = t_next;
    if (std::abs(f_prev - f_next) <= tol * std::max(1.0, std::abs(f_prev))) {
      f_prev = f_next;
      break;
    }
    f_prev = f_next;
  }
  res.theta = theta;
  res.objective = f_prev;
  return res;
}

AgCertificate ag_certificate(const Problem& prob, const Regularizer& reg,
                             const Eigen::VectorXd& theta0, double eta, double kappa_minus,
                             int s) {
  if (!(kappa_minus > 0.0))
    throw DomainError("ag_certificate: kappa_minus estimate must be positive");
  (void)eta;
  const double dn = static_cast<double>(prob.n());
  int s0 = 0;
  for (Eigen::Index i = 0; i < theta0.size(); ++i)
    if (theta0[i] != 0.0) ++s0;
  const double st = static_cast<double>(s + s0);

  AgCertificate cert;
  const double mu0_sq = (prob.X * theta0 - prob.y).squaredNorm() / (2.0 * dn);
  cert.mu0 = std::sqrt(mu0_sq);
  const double arg =
      (std::sqrt(2.0) * cert.mu0 + prob.epsilon / std::sqrt(dn)) / std::sqrt(st * kappa_minus);
  cert.mu = mu0_sq + st * value(reg, arg);
  if (prob.theta_star)
    cert.direct_gap = objective(prob, reg, theta0) - objective(prob, reg, *prob.theta_star);
  return cert;
}

double c6_constant(const Regularizer& shape, double zeta, int s_total, double kappa_minus,
                   double eta, double xi) {
  if (!(kappa_minus > 0.0)) throw DomainError("c6_constant: kappa_minus must be positive");
  const double b0 = b0_constant(shape, xi);
  const Regularizer unit = shape.with_lambda(1.0);
  const double arg = (1.0 + std::sqrt(2.0) * zeta) * eta /
                     (b0 * std::sqrt(static_cast<double>(s_total) * kappa_minus));
  return zeta * zeta +
         static_cast<double>(s_total) * b0 * b0 / (eta * eta) * value(unit, arg);
}

}  // namespace ncreg
