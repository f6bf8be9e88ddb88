#pragma once

#include <Eigen/Core>

#include "ncreg/errors.hpp"

namespace ncreg {

enum class Kind { L1, Lq, SCAD, LSP, MCP, GP, AMCP };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

// A separable penalty R(theta) = sum_i r(|theta_i|) is generated by a scalar
// basis function r(u) = lambda^2 r0(u/lambda; gamma). r is non-decreasing,
// concave on [0, inf) and r(0) = 0 for every kind below.
struct Regularizer {
  Kind kind = Kind::L1;
  double lambda = 1.0;  // scale
  double gamma = 1.0;   // concavity parameter (unused for L1)
  double q = 0.5;       // Lq exponent in (0,1)
  double phi = 0.5;     // AMCP junction parameter in (0,1)

  static Regularizer l1(double lambda);
  static Regularizer lq(double lambda, double q);
  static Regularizer scad(double lambda, double gamma);
  static Regularizer lsp(double lambda, double gamma);
  static Regularizer mcp(double lambda, double gamma);
  static Regularizer gp(double lambda, double gamma);
  static Regularizer amcp(double lambda, double gamma, double phi);
  static Regularizer make(Kind kind, double lambda, double gamma, double q = 0.5,
                          double phi = 0.5);

  Regularizer with_lambda(double new_lambda) const;
};

enum class Side { Left, Right };

// r(u), u >= 0.
double value(const Regularizer& reg, double u);

// One-sided derivative of r at u; side Left requires u > 0. Returns +inf
// for the Lq right derivative at 0.
double deriv(const Regularizer& reg, double u, Side side);
double slope_at_zero(const Regularizer& reg);  // rdot(0+)

// Whether r is strictly increasing on [0, inf), so that r^{-1} exists.
bool invertible(const Regularizer& reg);

// r^{-1}(v). Throws UnsupportedKindError for MCP/SCAD and DomainError when
// v is out of range (GP is bounded by lambda^2).
double inverse(const Regularizer& reg, double v);

// Supremum of r over [0, inf): +inf except for the plateaued kinds.
double sup_value(const Regularizer& reg);

struct RegularizerConstants {
  double lambda_star = 0.0;        // inf_u { xi u/2 + r(u)/u }
  double a_gamma = 0.0;            // lambda_star / lambda, lambda-free
  double zero_gap = 0.0;           // u0 of the xi-sharp-concavity interval
  double sharp_concavity_C = 0.0;  // largest C with C-sharp concavity on (0, u0)
  bool finite_slope_at_zero = true;
};

// Analytic constants for the given design constant xi = max_i ||x_i||^2/n.
RegularizerConstants constants(const Regularizer& reg, double xi);

// lambda_star by 1-D minimization of xi*u/2 + r(u)/u over u > 0.
double lambda_star_numeric(const Regularizer& reg, double xi);

// b0 = 1/sqrt(2 r0(u0/lambda; gamma)), the constant of the lambda selection
// rule; u0 falls back to lambda when the analytic zero gap is 0.
double b0_constant(const Regularizer& reg, double xi);

// lambda = eta^{-1} b0 epsilon / sqrt(n). `shape` provides kind and shape
// parameters; its lambda value is ignored.
double lambda_from_noise(const Regularizer& shape, double eta, double epsilon, int n, double xi);

// R(theta) = sum_i r(|theta_i|).
double penalty_sum(const Regularizer& reg, const Eigen::VectorXd& theta);

}  // namespace ncreg
