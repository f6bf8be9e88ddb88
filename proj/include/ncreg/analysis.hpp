#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ncreg/regularizer.hpp"

namespace ncreg {

struct SEEstimate {
  std::vector<int> t_grid;
  std::vector<double> kappa_plus;   // sampled kappa+(t), monotone-regularized
  std::vector<double> kappa_minus;  // sampled kappa-(t), monotone-regularized
  int num_submatrices = 0;
  std::uint64_t seed = 0;
  bool exhaustive = false;  // all subsets enumerated (exact values)

  double kp(int t) const;  // kappa+ at the smallest grid t' >= t
  double km(int t) const;
};

// For each t: sample `num_submatrices` uniform t-column subsets of X, record
// the extreme eigenvalues of the Grams X_I' X_I / n. Enumerates all subsets
// when num_submatrices covers them, giving exact kappa+-(t). Deterministic
// under seed.
SEEstimate estimate_se(const Eigen::MatrixXd& X, const std::vector<int>& t_grid,
                       int num_submatrices, std::uint64_t seed);

// delta_t = (kappa+ - kappa-)/(kappa+ + kappa-); 1 when kappa- <= 0.
double ric_from_se(double kp, double km);

// H_r(rho0, alpha, s, t) = sqrt(s/t) rinv(r(rho0)/s) / rinv(alpha r(rho0)/t).
// rho0 = 0 is evaluated in the small-rho0 limit.
double h_r(const Regularizer& reg, double rho0, double alpha, int s, int t);

// G_r(rho0~, alpha, s, t) = sqrt(s t)/(t-1) rinv(r/s) / rinv(alpha r/(t-1)).
double g_r(const Regularizer& reg, double rho0_tilde, double alpha, int s, int t);

// Closed forms used as cross-checks against the generic definitions.
double h_r_lsp_closed(double gamma, double xi, double alpha, int s, int t);
double h_r_amcp_closed(double phi, double alpha, int s, int t);  // at the matched gamma*xi
double lq_se_threshold(double q, double alpha, int s, int t);    // 4(sqrt2-1)H+1

struct ConditionReport {
  double alpha = 0.0;
  double H_r = 0.0, G_r = 0.0;
  double se_lhs = 0.0;             // kappa+(2t)/kappa-(2t)
  double se_rhs_global = 0.0;      // 4(sqrt2-1)H + 1
  double se_rhs_agas = 0.0;        // 4(sqrt2-1)G + 1
  bool passes_global = false;
  bool passes_agas = false;
  double varrho = 0.0;             // (1+sqrt2)(kappa+/kappa- - 1)/4
  double C1 = 0.0, C2 = 0.0, C4 = 0.0, C5 = 0.0;
  double c4_small = 0.0, c5_small = 0.0;
  double lambda = 0.0;        // noise-calibrated selection
  double lambda_star = 0.0;   // a_gamma * lambda
  double eps_tilde = 0.0;     // rdot(0+) + eta lambda* + nu
  double global_error_bound = std::numeric_limits<double>::quiet_NaN();  // C1 lambda*
  double agas_error_bound = std::numeric_limits<double>::quiet_NaN();
  std::string failure_reason;  // empty when all constants are defined
};

// Evaluates the SE conditions and the error-bound constants for a
// regularizer shape; lambda is selected from (eta, epsilon, n) and the
// regularizer is rescaled to it internally. rho0 < 0 requests the analytic
// zero gap.
ConditionReport check_conditions(const Regularizer& shape, const SEEstimate& se, int s, int t,
                                 double eta, double rho0, double nu, double mu, double epsilon,
                                 int n);

struct SparsenessBound {
  bool ok = false;           // premise held
  double bound = std::numeric_limits<double>::infinity();
  double premise_lhs = 0.0;  // must be < premise_rhs
  double premise_rhs = 0.0;
  std::string detail;
};

// Global-solution sparseness bound: premise
// sqrt(2 t kappa+(m0) r(C2(1+eta)lambda*)/m0) + eta lambda* < rdot(l0-),
// bound m0 + t r(C2(1+eta)lambda*)/r(l0).
SparsenessBound sparseness_bound_global(const Regularizer& reg, const SEEstimate& se,
                                        const ConditionReport& rep, int t, double eta,
                                        double m0, double l0);

// Same bound with t=(alpha+1)s, m0=beta0*s, l0=beta1*lambda.
SparsenessBound sparseness_bound_ratio(const Regularizer& reg, const SEEstimate& se,
                                       const ConditionReport& rep, int s, double eta,
                                       double beta0, double beta1);

// AGAS variant: b = (t-1) r(c4 eps~ + c5 rinv(mu/(1-eta))), premise
// sqrt(2 kappa+(m0)(mu/(1-eta)+b)/m0) + eta lambda* <= rdot(l0-),
// bound m0 + b/r(l0).
SparsenessBound sparseness_bound_agas(const Regularizer& reg, const SEEstimate& se,
                                      const ConditionReport& rep, int t, double eta, double mu,
                                      double m0, double l0);

// Monte-Carlo upper bound on the restricted eigenvalue over the cone
// R(beta d restricted off S) <= alpha R(beta d restricted to S) for some
// beta in a log grid; returns min ||X d||^2/(n ||d||^2) over feasible d.
double re_upper_bound(const Eigen::MatrixXd& X, const Regularizer& reg, double alpha,
                      const std::vector<int>& S, int num_samples, std::uint64_t seed);

}  // namespace ncreg
