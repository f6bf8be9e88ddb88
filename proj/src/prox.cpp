#include "ncreg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ncreg {

namespace {

// h(u) = 0.5*a*(u-w)^2 + r(u) on u >= 0, with w = |v|.
double obj(const Regularizer& reg, double a, double w, double u) {
  const double d = u - w;
  return 0.5 * a * d * d + value(reg, u);
}

void push_if_interior(std::vector<double>& cand, double u, double lo, double hi) {
  if (std::isfinite(u) && u > lo && u < hi) cand.push_back(u);
}

// Real roots of u^3 + b u^2 + c u + d = 0.
void cubic_roots(double b, double c, double d, std::vector<double>& out) {
  // depressed cubic t^3 + p t + q with u = t - b/3
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double shift = -b / 3.0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double t = std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq);
    out.push_back(t + shift);
  } else if (p == 0.0 && q == 0.0) {
    out.push_back(shift);
  } else {
    const double r = std::sqrt(-p * p * p / 27.0);
    const double phi = std::acos(std::clamp(-q / (2.0 * r), -1.0, 1.0));
    const double m = 2.0 * std::sqrt(-p / 3.0);
    for (int k = 0; k < 3; ++k)
      out.push_back(m * std::cos((phi + 2.0 * M_PI * k) / 3.0) + shift);
  }
}

// Larger root of a*(u-w) + K*u^(q-1) = 0 on (lo, w); the residual is convex
// in u past its minimum at ustar, so Newton from the right is safe with a
// bisection safeguard.
void power_piece_root(std::vector<double>& cand, double a, double w, double K, double q,
                      double lo, double hi) {
  if (!(hi > lo)) return;
  auto f = [&](double u) { return a * (u - w) + K * std::pow(u, q - 1.0); };
  // f decreases then increases; its minimum is at ustar
  double ustar = std::pow((1.0 - q) * K / a, 1.0 / (2.0 - q));
  double left = std::max(lo, std::min(ustar, hi));
  if (f(left) > 0.0) return;  // no sign change: no interior stationary point
  double right = hi;
  if (f(right) < 0.0) {
    // minimum of h is at the boundary; endpoint candidates handle it
    return;
  }
  double u = right;
  for (int it = 0; it < 200; ++it) {
    const double fu = f(u);
    if (fu > 0.0)
      right = u;
    else
      left = u;
    const double fp = a + K * (q - 1.0) * std::pow(u, q - 2.0);
    double un = u - fu / fp;
    if (!(un > left && un < right)) un = 0.5 * (left + right);
    if (std::abs(un - u) <= 1e-14 * std::max(1.0, std::abs(u))) {
      u = un;
      break;
    }
    u = un;
  }
  cand.push_back(u);
}

}  // namespace

double prox_objective(const ProxQuery& q, double u) {
  return 0.5 * q.a * (u - q.v) * (u - q.v) + value(q.reg, std::abs(u));
}

double prox(const ProxQuery& q) {
  if (!(q.a > 0.0)) throw ParameterError("prox: a must be positive");
  const Regularizer& reg = q.reg;
  const double a = q.a;
  const double w = std::abs(q.v);
  const double sgn = q.v < 0.0 ? -1.0 : 1.0;
  if (w == 0.0) return 0.0;
  const double l = reg.lambda, g = reg.gamma;

  std::vector<double> cand;
  cand.reserve(8);
  cand.push_back(w);

  switch (reg.kind) {
    case Kind::L1:
      push_if_interior(cand, w - l / a, 0.0, w);
      break;
    case Kind::SCAD: {
      push_if_interior(cand, l, 0.0, w);
      push_if_interior(cand, l * (1.0 + g), 0.0, w);
      push_if_interior(cand, w - l / a, 0.0, std::min(w, l));
      const double denom = a - 1.0 / g;
      if (denom != 0.0)
        push_if_interior(cand, (a * w - l * (1.0 + 1.0 / g)) / denom,
                         std::min(w, l), std::min(w, l * (1.0 + g)));
      break;
    }
    case Kind::MCP: {
      push_if_interior(cand, l * g, 0.0, w);
      const double denom = a - 1.0 / g;
      if (denom != 0.0) {
        push_if_interior(cand, (a * w - l) / denom, 0.0, std::min(w, l * g));
      } else if (std::abs(l - a * w) <= 1e-12 * std::max(1.0, l)) {
        // a*gamma = 1 and lambda = a*w: h is flat on [0, w]; return the
        // largest minimizer
        return sgn * w;
      }
      break;
    }
    case Kind::LSP: {
      // (u-w)(l*g+u) + l^2/a = 0
      const double b = l * g - w;
      const double c = l * l / a - l * g * w;
      const double disc = b * b - 4.0 * c;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        push_if_interior(cand, (-b + sq) / 2.0, 0.0, w);
        push_if_interior(cand, (-b - sq) / 2.0, 0.0, w);
      }
      break;
    }
    case Kind::GP: {
      // (u-w)(l*g+u)^2 + l^3*g/a = 0
      const double cgl = l * g;
      std::vector<double> roots;
      cubic_roots(2.0 * cgl - w, cgl * cgl - 2.0 * cgl * w,
                  l * l * l * g / a - cgl * cgl * w, roots);
      for (double u : roots) push_if_interior(cand, u, 0.0, w);
      break;
    }
    case Kind::Lq:
      power_piece_root(cand, a, w, reg.q * std::pow(l, 2.0 - reg.q), reg.q, 0.0, w);
      break;
    case Kind::AMCP: {
      const double u1 = l * g * (1.0 - reg.phi);
      push_if_interior(cand, u1, 0.0, w);
      const double denom = a - 1.0 / g;
      if (denom != 0.0)
        push_if_interior(cand, (a * w - l) / denom, 0.0, std::min(w, u1));
      if (w > u1) {
        const double qe = 2.0 * reg.phi / (1.0 + reg.phi);
        const double vj = 0.5 * l * l * g * (1.0 - reg.phi * reg.phi);
        const double K = qe * vj / std::pow(u1, qe);  // rdot = K u^(qe-1)
        power_piece_root(cand, a, w, K, qe, u1, w);
      }
      break;
    }
  }

  double best_u = w, best_f = obj(reg, a, w, w);
  for (double u : cand) {
    const double f = obj(reg, a, w, u);
    if (f < best_f) {
      best_f = f;
      best_u = u;
    }
  }
  if (obj(reg, a, w, 0.0) <= best_f + 1e-12) return 0.0;
  return sgn * best_u;
}

double prox_oracle(const ProxQuery& q, int grid_points) {
  if (grid_points < 1000) throw ParameterError("prox_oracle: grid_points >= 1000 required");
  const Regularizer& reg = q.reg;
  const double a = q.a;
  const double w = std::abs(q.v);
  const double sgn = q.v < 0.0 ? -1.0 : 1.0;
  if (w == 0.0) return 0.0;

  int best_i = 0;
  double best_f = obj(reg, a, w, 0.0);
  for (int i = 1; i <= grid_points; ++i) {
    const double u = w * static_cast<double>(i) / grid_points;
    const double f = obj(reg, a, w, u);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  double lo = w * static_cast<double>(std::max(0, best_i - 1)) / grid_points;
  double hi = w * static_cast<double>(std::min(grid_points, best_i + 1)) / grid_points;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = obj(reg, a, w, x1), f2 = obj(reg, a, w, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, w); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = obj(reg, a, w, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = obj(reg, a, w, x2);
    }
  }
  double u = 0.5 * (lo + hi);
  if (best_f < obj(reg, a, w, u)) u = w * static_cast<double>(best_i) / grid_points;
  return sgn * u;
}

}  // namespace ncreg
