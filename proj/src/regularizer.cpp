#include "ncreg/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_common(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
}

void check_gamma(double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
}

// AMCP junction point between the quadratic and the power branch.
double amcp_junction(const Regularizer& r) { return r.lambda * r.gamma * (1.0 - r.phi); }
double amcp_exponent(const Regularizer& r) { return 2.0 * r.phi / (1.0 + r.phi); }
// r at the junction, also the coefficient of the power branch.
double amcp_junction_value(const Regularizer& r) {
  return 0.5 * r.lambda * r.lambda * r.gamma * (1.0 - r.phi * r.phi);
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::L1: return "l1";
    case Kind::Lq: return "lq";
    case Kind::SCAD: return "scad";
    case Kind::LSP: return "lsp";
    case Kind::MCP: return "mcp";
    case Kind::GP: return "gp";
    case Kind::AMCP: return "amcp";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "l1") return Kind::L1;
  if (name == "lq") return Kind::Lq;
  if (name == "scad") return Kind::SCAD;
  if (name == "lsp") return Kind::LSP;
  if (name == "mcp") return Kind::MCP;
  if (name == "gp") return Kind::GP;
  if (name == "amcp") return Kind::AMCP;
  throw ParameterError("unknown regularizer kind: " + name);
}

Regularizer Regularizer::l1(double lambda) {
  check_common(lambda);
  return {Kind::L1, lambda, 1.0, 0.5, 0.5};
}

Regularizer Regularizer::lq(double lambda, double q) {
  check_common(lambda);
  if (!(q > 0.0 && q < 1.0)) throw ParameterError("q must be in (0,1)");
  // Table-1 convention: gamma = log(1/(1-q)) tracks the degree of concavity.
  return {Kind::Lq, lambda, std::log(1.0 / (1.0 - q)), q, 0.5};
}

Regularizer Regularizer::scad(double lambda, double gamma) {
  check_common(lambda);
  check_gamma(gamma);
  return {Kind::SCAD, lambda, gamma, 0.5, 0.5};
}

Regularizer Regularizer::lsp(double lambda, double gamma) {
  check_common(lambda);
  check_gamma(gamma);
  return {Kind::LSP, lambda, gamma, 0.5, 0.5};
}

Regularizer Regularizer::mcp(double lambda, double gamma) {
  check_common(lambda);
  check_gamma(gamma);
  return {Kind::MCP, lambda, gamma, 0.5, 0.5};
}

Regularizer Regularizer::gp(double lambda, double gamma) {
  check_common(lambda);
  check_gamma(gamma);
  return {Kind::GP, lambda, gamma, 0.5, 0.5};
}

Regularizer Regularizer::amcp(double lambda, double gamma, double phi) {
  check_common(lambda);
  check_gamma(gamma);
  if (!(phi > 0.0 && phi < 1.0)) throw ParameterError("phi must be in (0,1)");
  return {Kind::AMCP, lambda, gamma, 0.5, phi};
}

Regularizer Regularizer::make(Kind kind, double lambda, double gamma, double q, double phi) {
  switch (kind) {
    case Kind::L1: return l1(lambda);
    case Kind::Lq: return lq(lambda, q);
    case Kind::SCAD: return scad(lambda, gamma);
    case Kind::LSP: return lsp(lambda, gamma);
    case Kind::MCP: return mcp(lambda, gamma);
    case Kind::GP: return gp(lambda, gamma);
    case Kind::AMCP: return amcp(lambda, gamma, phi);
  }
  throw ParameterError("bad kind");
}

Regularizer Regularizer::with_lambda(double new_lambda) const {
  check_common(new_lambda);
  Regularizer out = *this;
  out.lambda = new_lambda;
  return out;
}

double value(const Regularizer& reg, double u) {
  if (!(u >= 0.0)) throw DomainError("value: u must be >= 0");
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
      return l * u;
    case Kind::Lq:
      return l * l * std::pow(u / l, reg.q);
    case Kind::SCAD: {
      if (u <= l) return l * u;
      if (u <= l * (1.0 + g)) return l * u - (u - l) * (u - l) / (2.0 * g);
      return l * l * (2.0 + g) / 2.0;
    }
    case Kind::LSP:
      return l * l * std::log1p(u / (l * g));
    case Kind::MCP: {
      if (u <= l * g) return l * u - u * u / (2.0 * g);
      return l * l * g / 2.0;
    }
    case Kind::GP:
      return l * l * u / (l * g + u);
    case Kind::AMCP: {
      const double u1 = amcp_junction(reg);
      if (u <= u1) return l * u - u * u / (2.0 * g);
      return amcp_junction_value(reg) * std::pow(u / u1, amcp_exponent(reg));
    }
  }
  return 0.0;
}

double deriv(const Regularizer& reg, double u, Side side) {
  if (!(u >= 0.0)) throw DomainError("deriv: u must be >= 0");
  if (u == 0.0 && side == Side::Left) throw DomainError("deriv: left derivative at u=0");
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
      return l;
    case Kind::Lq:
      if (u == 0.0) return kInf;
      return reg.q * std::pow(l, 2.0 - reg.q) * std::pow(u, reg.q - 1.0);
    case Kind::SCAD: {
      const bool lo = (side == Side::Left) ? (u <= l) : (u < l);
      if (lo) return l;
      const bool mid = (side == Side::Left) ? (u <= l * (1.0 + g)) : (u < l * (1.0 + g));
      if (mid) return l - (u - l) / g;
      return 0.0;
    }
    case Kind::LSP:
      return l * l / (l * g + u);
    case Kind::MCP: {
      const bool lo = (side == Side::Left) ? (u <= l * g) : (u < l * g);
      if (lo) return l - u / g;
      return 0.0;
    }
    case Kind::GP: {
      const double d = l * g + u;
      return l * l * l * g / (d * d);
    }
    case Kind::AMCP: {
      const double u1 = amcp_junction(reg);
      const bool lo = (side == Side::Left) ? (u <= u1) : (u < u1);
      if (lo) return l - u / g;
      return amcp_exponent(reg) * value(reg, u) / u;
    }
  }
  return 0.0;
}

double slope_at_zero(const Regularizer& reg) { return deriv(reg, 0.0, Side::Right); }

bool invertible(const Regularizer& reg) {
  return reg.kind != Kind::MCP && reg.kind != Kind::SCAD;
}

double sup_value(const Regularizer& reg) {
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::MCP: return l * l * g / 2.0;
    case Kind::SCAD: return l * l * (2.0 + g) / 2.0;
    case Kind::GP: return l * l;
    default: return kInf;
  }
}

double inverse(const Regularizer& reg, double v) {
  if (!(v >= 0.0)) throw DomainError("inverse: v must be >= 0");
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
      return v / l;
    case Kind::Lq:
      return l * std::pow(v / (l * l), 1.0 / reg.q);
    case Kind::LSP:
      return l * g * std::expm1(v / (l * l));
    case Kind::GP: {
      if (!(v < l * l)) throw DomainError("inverse: GP value must be below lambda^2");
      return l * g * v / (l * l - v);
    }
    case Kind::AMCP: {
      const double vj = amcp_junction_value(reg);
      if (v <= vj) {
        const double disc = std::max(0.0, g * g * l * l - 2.0 * g * v);
        return g * l - std::sqrt(disc);
      }
      return amcp_junction(reg) * std::pow(v / vj, 1.0 / amcp_exponent(reg));
    }
    case Kind::MCP:
    case Kind::SCAD:
      throw UnsupportedKindError(
          "inverse: basis function is not invertible (use the AMCP surrogate)");
  }
  return 0.0;
}

double lambda_star_numeric(const Regularizer& reg, double xi) {
  if (!(xi > 0.0)) throw ParameterError("xi must be positive");
  const double l = reg.lambda;
  auto f = [&](double u) { return 0.5 * xi * u + value(reg, u) / u; };

  // Coarse log scan, then golden-section on the bracketing cell. The
  // objective is unimodal for all kinds here but may attain its infimum at
  // the left edge (L1, SCAD), which the scan handles.
  const double lo = 1e-10 * l, hi = 1e9 * l;
  const int n_scan = 400;
  double best_u = lo, best_f = f(lo);
  for (int i = 1; i <= n_scan; ++i) {
    const double u = lo * std::pow(hi / lo, static_cast<double>(i) / n_scan);
    const double fu = f(u);
    if (fu < best_f) {
      best_f = fu;
      best_u = u;
    }
  }
  double a = best_u * std::pow(hi / lo, -1.0 / n_scan);
  double b = best_u * std::pow(hi / lo, 1.0 / n_scan);
  a = std::max(a, lo);
  b = std::min(b, hi);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double la = std::log(a), lb = std::log(b);
  double x1 = lb - gr * (lb - la), x2 = la + gr * (lb - la);
  double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
  for (int it = 0; it < 200 && lb - la > 1e-15; ++it) {
    if (f1 <= f2) {
      lb = x2;
      x2 = x1;
      f2 = f1;
      x1 = lb - gr * (lb - la);
      f1 = f(std::exp(x1));
    } else {
      la = x1;
      x1 = x2;
      f1 = f2;
      x2 = la + gr * (lb - la);
      f2 = f(std::exp(x2));
    }
  }
  return std::min({best_f, f1, f2});
}

namespace {

// Table-1 closed forms; NaN when no closed form is listed.
double lambda_star_closed(const Regularizer& reg, double xi) {
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
      return l;
    case Kind::Lq: {
      const double q = reg.q;
      return l * (2.0 - q) * std::pow(2.0 * (1.0 - q) / xi, (q - 1.0) / (2.0 - q));
    }
    case Kind::MCP:
      return l * std::min(std::sqrt(g * xi), 1.0);
    case Kind::GP:
      if (xi * g * g <= 2.0) return l * (std::sqrt(2.0 * xi) - xi * g / 2.0);
      return l / g;
    case Kind::SCAD:
      if (xi == 1.0) return l;
      return std::numeric_limits<double>::quiet_NaN();
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double zero_gap_closed(const Regularizer& reg, double xi) {
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
    case Kind::SCAD:
      return 0.0;
    case Kind::Lq: {
      const double q = reg.q;
      return l * std::pow(q * (1.0 - q) / xi, 1.0 / (2.0 - q));
    }
    case Kind::LSP:
      return std::max(l * (1.0 / std::sqrt(xi) - g), 0.0);
    case Kind::MCP:
      return l * std::sqrt(g / xi);
    case Kind::GP:
      return std::max(l * (std::cbrt(2.0 * g / xi) - g), 0.0);
    case Kind::AMCP: {
      const double phi = reg.phi;
      return l * g * (1.0 - phi) *
             std::pow(phi / (xi * g * (1.0 + phi)), (1.0 + phi) / 2.0);
    }
  }
  return 0.0;
}

double sharp_concavity_closed(const Regularizer& reg, double u0) {
  if (!(u0 > 0.0)) return 0.0;
  const double l = reg.lambda, g = reg.gamma;
  switch (reg.kind) {
    case Kind::L1:
    case Kind::SCAD:
      return 0.0;
    case Kind::Lq:
      return reg.q * (1.0 - reg.q) * std::pow(u0 / l, reg.q - 2.0);
    case Kind::LSP: {
      const double d = l * g + u0;
      return l * l / (d * d);
    }
    case Kind::MCP:
      return std::min(1.0 / g, l * l * g / (u0 * u0));
    case Kind::GP: {
      const double d = l * g + u0;
      return 2.0 * l * l * l * g / (d * d * d);
    }
    case Kind::AMCP: {
      const double u1 = amcp_junction(reg);
      double c = 1.0 / g;
      if (u0 > u1) {
        const double qe = amcp_exponent(reg);
        c = std::min(c, 2.0 * (1.0 - qe) * value(reg, u0) / (u0 * u0));
      }
      return c;
    }
  }
  return 0.0;
}

}  // namespace

RegularizerConstants constants(const Regularizer& reg, double xi) {
  if (!(xi > 0.0)) throw ParameterError("xi must be positive");
  RegularizerConstants c;
  const double closed = lambda_star_closed(reg, xi);
  c.lambda_star = std::isnan(closed) ? lambda_star_numeric(reg, xi) : closed;
  const Regularizer unit = reg.with_lambda(1.0);
  const double closed1 = lambda_star_closed(unit, xi);
  c.a_gamma = std::isnan(closed1) ? lambda_star_numeric(unit, xi) : closed1;
  c.zero_gap = zero_gap_closed(reg, xi);
  c.sharp_concavity_C = sharp_concavity_closed(reg, c.zero_gap);
  c.finite_slope_at_zero = reg.kind != Kind::Lq;
  return c;
}

double b0_constant(const Regularizer& reg, double xi) {
  const Regularizer unit = reg.with_lambda(1.0);
  double u0 = constants(unit, xi).zero_gap;
  if (!(u0 > 0.0)) u0 = 1.0;  // u0 = O(lambda) fallback for the linear-near-0 kinds
  return 1.0 / std::sqrt(2.0 * value(unit, u0));
}

double lambda_from_noise(const Regularizer& shape, double eta, double epsilon, int n, double xi) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must be in (0,1)");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be >= 0");
  if (n <= 0) throw ParameterError("n must be positive");
  return b0_constant(shape, xi) * epsilon / (eta * std::sqrt(static_cast<double>(n)));
}

double penalty_sum(const Regularizer& reg, const Eigen::VectorXd& theta) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) s += value(reg, std::abs(theta[i]));
  return s;
}

}  // namespace ncreg
