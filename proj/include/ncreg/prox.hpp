#pragma once

#include "ncreg/regularizer.hpp"

namespace ncreg {

// Scalar subproblem of one CD step: min_u 0.5*a*(u - v)^2 + r(|u|).
struct ProxQuery {
  double a = 1.0;  // effective curvature ||x_i||^2/n + psi
  double v = 0.0;  // shifted target
  Regularizer reg;
};

// Exact global minimizer via closed-form candidate enumeration. The output
// shares the sign of v (or is 0) and satisfies |u*| <= |v|. Ties between 0
// and a positive candidate within 1e-12 in objective break toward 0.
double prox(const ProxQuery& q);

// Brute-force reference: dense grid over [0,|v|] plus golden-section
// refinement around the best cell. Testing oracle only.
double prox_oracle(const ProxQuery& q, int grid_points);

// 0.5*a*(u - v)^2 + r(|u|).
double prox_objective(const ProxQuery& q, double u);

}  // namespace ncreg
