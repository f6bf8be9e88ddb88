#pragma once

#include <vector>

#include "ncreg/solver.hpp"

namespace ncreg {

struct OmpResult {
  Eigen::VectorXd theta;
  std::vector<Eigen::Index> support;  // in greedy selection order
  double residual_norm = 0.0;         // ||y - X theta||_2
  bool rank_deficient = false;        // ridge fallback was used
};

// Orthogonal matching pursuit: greedily add argmax |x_i' w|/||x_i||, refit
// least squares on the active set, stop at max_support columns or when
// ||w||_2/sqrt(2n) <= residual_target.
OmpResult omp(const Problem& prob, int max_support, double residual_target);

struct FistaResult {
  Eigen::VectorXd theta;
  int iterations = 0;
  double objective = 0.0;
  double step_L = 0.0;  // Lipschitz estimate lambda_max(X'X/n)
};

// Accelerated proximal gradient for the L1 objective, objective-increase
// restart, step 1/L with L from 100 power iterations.
FistaResult fista_l1(const Problem& prob, double lambda, double tol, int max_iter);

struct AgCertificate {
  double mu0 = 0.0;         // ||X theta0 - y||_2 / sqrt(2n)
  double mu = 0.0;          // certified approximate-global level
  double direct_gap = std::numeric_limits<double>::quiet_NaN();  // F(theta0)-F(theta*)
  bool optimistic = true;   // kappa_minus came from sampling (over-estimate)
};

// mu = mu0^2 + (s+s0) r((sqrt(2) mu0 + epsilon/sqrt(n)) / sqrt((s+s0) kappa_minus)),
// where s0 = ||theta0||_0 and kappa_minus estimates kappa_-(s+s0).
AgCertificate ag_certificate(const Problem& prob, const Regularizer& reg,
                             const Eigen::VectorXd& theta0, double eta, double kappa_minus,
                             int s);

// C6 = zeta^2 + (s+s0) b0^2/eta^2 * r0((1+sqrt(2) zeta) eta / (b0 sqrt((s+s0) kappa_minus)));
// with mu0 = zeta epsilon/sqrt(n) and lambda from the noise rule, mu = C6 epsilon^2/n.
double c6_constant(const Regularizer& shape, double zeta, int s_total, double kappa_minus,
                   double eta, double xi);

}  // namespace ncreg
