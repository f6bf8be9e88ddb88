#include "ncreg/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "ncreg/rng.hpp"

namespace ncreg {

namespace {

constexpr std::uint64_t kPurposeSe = 101;
constexpr std::uint64_t kPurposeRe = 202;

// C(n,k) saturating at `cap`.
double binomial_capped(int n, int k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double v = 1.0;
  for (int i = 1; i <= k; ++i) {
    v *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (v > cap) return cap + 1.0;
  }
  return v;
}

double lookup(const std::vector<int>& grid, const std::vector<double>& vals, int t) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] >= t) return vals[i];
  return vals.back();
}

}  // namespace

double SEEstimate::kp(int t) const { return lookup(t_grid, kappa_plus, t); }
double SEEstimate::km(int t) const { return lookup(t_grid, kappa_minus, t); }

SEEstimate estimate_se(const Eigen::MatrixXd& X, const std::vector<int>& t_grid,
                       int num_submatrices, std::uint64_t seed) {
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (num_submatrices < 1) throw ParameterError("estimate_se: num_submatrices >= 1 required");

  SEEstimate est;
  est.t_grid = t_grid;
  std::sort(est.t_grid.begin(), est.t_grid.end());
  est.num_submatrices = num_submatrices;
  est.seed = seed;
  est.exhaustive = true;

  const double dn = static_cast<double>(n);
  for (int t : est.t_grid) {
    if (t < 1 || t > n) throw DomainError("estimate_se: t must be in [1, n]");
    double kp = -std::numeric_limits<double>::infinity();
    double km = std::numeric_limits<double>::infinity();
    auto eval_subset = [&](const std::vector<int>& idx) {
      Eigen::MatrixXd sub(n, t);
      for (int j = 0; j < t; ++j) sub.col(j) = X.col(idx[static_cast<std::size_t>(j)]);
      Eigen::MatrixXd gram = sub.transpose() * sub / dn;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
      kp = std::max(kp, es.eigenvalues().maxCoeff());
      km = std::min(km, es.eigenvalues().minCoeff());
    };

    const double total = binomial_capped(p, t, static_cast<double>(num_submatrices));
    if (total <= static_cast<double>(num_submatrices)) {
      // enumerate every subset: exact kappa+-(t)
      std::vector<int> idx(static_cast<std::size_t>(t));
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        eval_subset(idx);
        int i = t - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == p - t + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < t; ++j)
          idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    } else {
      est.exhaustive = false;
      Rng rng(seed, static_cast<std::uint64_t>(t), kPurposeSe);
      std::vector<int> pool(static_cast<std::size_t>(p));
      std::vector<int> idx(static_cast<std::size_t>(t));
      for (int smp = 0; smp < num_submatrices; ++smp) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int j = 0; j < t; ++j) {
          const std::size_t pick =
              static_cast<std::size_t>(j) +
              static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(p - j)));
          std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
          idx[static_cast<std::size_t>(j)] = pool[static_cast<std::size_t>(j)];
        }
        eval_subset(idx);
      }
    }
    est.kappa_plus.push_back(kp);
    est.kappa_minus.push_back(km);
  }

  // sampling noise can break the exact monotonicity of kappa+-(t); restore it
  for (std::size_t i = 1; i < est.kappa_plus.size(); ++i) {
    est.kappa_plus[i] = std::max(est.kappa_plus[i], est.kappa_plus[i - 1]);
    est.kappa_minus[i] = std::min(est.kappa_minus[i], est.kappa_minus[i - 1]);
  }
  return est;
}

double ric_from_se(double kp, double km) {
  if (!(km > 0.0)) return 1.0;
  if (kp < km) throw ParameterError("ric_from_se: kp >= km required");
  return (kp - km) / (kp + km);
}

double h_r(const Regularizer& reg, double rho0, double alpha, int s, int t) {
  if (s < 1 || t < 1) throw ParameterError("h_r: s,t >= 1 required");
  if (!invertible(reg))
    throw UnsupportedKindError("h_r: basis function not invertible; use the AMCP surrogate");
  if (rho0 <= 0.0) rho0 = 1e-9 * reg.lambda;  // the rho0 -> 0+ limit
  const double rv = value(reg, rho0);
  const double num = inverse(reg, rv / static_cast<double>(s));
  const double den = inverse(reg, alpha * rv / static_cast<double>(t));
  return std::sqrt(static_cast<double>(s) / static_cast<double>(t)) * num / den;
}

double g_r(const Regularizer& reg, double rho0_tilde, double alpha, int s, int t) {
  if (s < 1 || t < 2) throw ParameterError("g_r: s >= 1 and t >= 2 required");
  if (!invertible(reg))
    throw UnsupportedKindError("g_r: basis function not invertible; use the AMCP surrogate");
  if (rho0_tilde <= 0.0) rho0_tilde = 1e-9 * reg.lambda;
  const double rv = value(reg, rho0_tilde);
  const double num = inverse(reg, rv / static_cast<double>(s));
  const double den = inverse(reg, alpha * rv / static_cast<double>(t - 1));
  return std::sqrt(static_cast<double>(s) * static_cast<double>(t)) /
         static_cast<double>(t - 1) * num / den;
}

double h_r_lsp_closed(double gamma, double xi, double alpha, int s, int t) {
  const double base = gamma * std::sqrt(xi);  // (1 + rho0/(lambda gamma))^{-1}
  const double num = std::pow(base, -1.0 / static_cast<double>(s)) - 1.0;
  const double den = std::pow(base, -alpha / static_cast<double>(t)) - 1.0;
  return std::sqrt(static_cast<double>(s) / static_cast<double>(t)) * num / den;
}

double h_r_amcp_closed(double phi, double alpha, int s, int t) {
  return std::pow(alpha, -0.5) *
         std::pow(static_cast<double>(t) / (alpha * static_cast<double>(s)),
                  1.0 / (2.0 * phi));
}

double lq_se_threshold(double q, double alpha, int s, int t) {
  return 1.0 + 4.0 * (std::sqrt(2.0) - 1.0) / std::sqrt(alpha) *
                   std::pow(static_cast<double>(t) / (alpha * static_cast<double>(s)),
                            1.0 / q - 0.5);
}

ConditionReport check_conditions(const Regularizer& shape, const SEEstimate& se, int s, int t,
                                 double eta, double rho0, double nu, double mu, double epsilon,
                                 int n) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("check_conditions: eta in (0,1)");
  ConditionReport rep;
  rep.alpha = (1.0 + eta) / (1.0 - eta);

  const double xi = se.kp(1);
  rep.lambda = lambda_from_noise(shape, eta, epsilon, n, xi);
  const Regularizer reg = shape.with_lambda(rep.lambda);
  const RegularizerConstants rc = constants(reg, xi);
  rep.lambda_star = rc.a_gamma * rep.lambda;

  if (rho0 < 0.0) rho0 = rc.zero_gap;
  rep.H_r = h_r(reg, rho0, rep.alpha, s, t);
  rep.G_r = g_r(reg, rho0, rep.alpha, s, t);

  const double kp = se.kp(2 * t), km = se.km(2 * t);
  if (!(km > 0.0)) {
    rep.failure_reason = "kappa-(2t) <= 0";
    return rep;
  }
  rep.se_lhs = kp / km;
  const double c = 4.0 * (std::sqrt(2.0) - 1.0);
  rep.se_rhs_global = c * rep.H_r + 1.0;
  rep.se_rhs_agas = c * rep.G_r + 1.0;
  rep.passes_global = rep.se_lhs < rep.se_rhs_global;
  rep.passes_agas = rep.se_lhs < rep.se_rhs_agas;
  rep.varrho = (1.0 + std::sqrt(2.0)) * (rep.se_lhs - 1.0) / 4.0;

  rep.eps_tilde = slope_at_zero(reg) + eta * rep.lambda_star + nu;

  const double one_sqrt2 = 1.0 + std::sqrt(2.0);
  const double st = static_cast<double>(t);
  if (rep.H_r > rep.varrho) {
    rep.C1 = one_sqrt2 * (1.0 + eta) * std::sqrt(st) / km * (rep.H_r + 0.5) /
             (rep.H_r - rep.varrho);
    rep.C2 = one_sqrt2 / (2.0 * (rep.H_r - rep.varrho) * km);
    rep.global_error_bound = rep.C1 * rep.lambda_star;
  } else {
    rep.failure_reason = "H_r <= varrho: global constants undefined";
  }
  if (rep.G_r > rep.varrho && t >= 2) {
    rep.c4_small = st / (st - 1.0) * one_sqrt2 / (2.0 * (rep.G_r - rep.varrho) * km);
    rep.c5_small = rep.varrho / (rep.G_r - rep.varrho);
    rep.C4 = std::sqrt(st) * one_sqrt2 / km *
             (rep.G_r + rep.varrho / (st - 1.0) + 0.5 * st / (st - 1.0)) /
             (rep.G_r - rep.varrho);
    rep.C5 = (2.0 * rep.varrho + 1.0) * rep.G_r / (std::sqrt(st) * (rep.G_r - rep.varrho));
    const double arg = mu / (1.0 - eta);
    if (invertible(reg) && arg < sup_value(reg))
      rep.agas_error_bound = rep.C4 * rep.eps_tilde + rep.C5 * inverse(reg, arg);
    else if (rep.failure_reason.empty())
      rep.failure_reason = "mu/(1-eta) outside the range of r";
  } else if (rep.failure_reason.empty()) {
    rep.failure_reason = "G_r <= varrho: AGAS constants undefined";
  }
  return rep;
}

SparsenessBound sparseness_bound_global(const Regularizer& reg, const SEEstimate& se,
                                        const ConditionReport& rep, int t, double eta,
                                        double m0, double l0) {
  SparsenessBound b;
  if (!(m0 > 0.0 && l0 > 0.0)) throw ParameterError("sparseness bound: m0, l0 > 0 required");
  if (!(rep.C2 > 0.0)) {
    b.detail = "C2 unavailable (SE condition failed)";
    return b;
  }
  const double reg_level = value(reg, rep.C2 * (1.0 + eta) * rep.lambda_star);
  const double kpm0 = se.kp(static_cast<int>(std::ceil(m0)));
  b.premise_lhs =
      std::sqrt(2.0 * static_cast<double>(t) * kpm0 * reg_level / m0) + eta * rep.lambda_star;
  b.premise_rhs = deriv(reg, l0, Side::Left);
  if (b.premise_lhs < b.premise_rhs) {
    b.ok = true;
    b.bound = m0 + static_cast<double>(t) * reg_level / value(reg, l0);
  } else {
    b.detail = "premise violated: sqrt(2 t kappa+(m0) r(C2(1+eta)lambda*)/m0) + eta lambda* >= "
               "rdot(l0-)";
  }
  return b;
}

SparsenessBound sparseness_bound_ratio(const Regularizer& reg, const SEEstimate& se,
                                       const ConditionReport& rep, int s, double eta,
                                       double beta0, double beta1) {
  const int t = static_cast<int>(std::ceil((rep.alpha + 1.0) * static_cast<double>(s)));
  SparsenessBound b = sparseness_bound_global(reg, se, rep, t, eta,
                                              beta0 * static_cast<double>(s),
                                              beta1 * reg.lambda);
  if (b.ok) b.detail = "t=(alpha+1)s parameterization";
  return b;
}

SparsenessBound sparseness_bound_agas(const Regularizer& reg, const SEEstimate& se,
                                      const ConditionReport& rep, int t, double eta, double mu,
                                      double m0, double l0) {
  SparsenessBound b;
  if (!(m0 > 0.0 && l0 > 0.0)) throw ParameterError("sparseness bound: m0, l0 > 0 required");
  if (!(rep.c4_small > 0.0)) {
    b.detail = "c4/c5 unavailable (SE condition failed)";
    return b;
  }
  const double arg = mu / (1.0 - eta);
  if (!invertible(reg) || !(arg < sup_value(reg))) {
    b.detail = "mu/(1-eta) outside the range of r";
    return b;
  }
  const double big =
      static_cast<double>(t - 1) *
      value(reg, rep.c4_small * rep.eps_tilde + rep.c5_small * inverse(reg, arg));
  const double kpm0 = se.kp(static_cast<int>(std::ceil(m0)));
  b.premise_lhs = std::sqrt(2.0 * kpm0 * (arg + big) / m0) + eta * rep.lambda_star;
  b.premise_rhs = deriv(reg, l0, Side::Left);
  if (b.premise_lhs <= b.premise_rhs) {
    b.ok = true;
    b.bound = m0 + big / value(reg, l0);
  } else {
    b.detail = "premise violated";
  }
  return b;
}

double re_upper_bound(const Eigen::MatrixXd& X, const Regularizer& reg, double alpha,
                      const std::vector<int>& S, int num_samples, std::uint64_t seed) {
  const int p = static_cast<int>(X.cols());
  const double dn = static_cast<double>(X.rows());
  std::vector<char> in_S(static_cast<std::size_t>(p), 0);
  for (int i : S) {
    if (i < 0 || i >= p) throw DomainError("re_upper_bound: support index out of range");
    in_S[static_cast<std::size_t>(i)] = 1;
  }

  double best = std::numeric_limits<double>::infinity();
  for (int smp = 0; smp < num_samples; ++smp) {
    Rng rng(seed, static_cast<std::uint64_t>(smp), kPurposeRe);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(p);
    if (smp % 2 == 0) {
      for (int i = 0; i < p; ++i) d[i] = rng.gaussian();
    } else {
      // support-concentrated direction: S plus a few off-support coordinates
      for (int i : S) d[i] = rng.gaussian();
      const std::uint64_t extras = rng.uniform_index(static_cast<std::uint64_t>(S.size()) + 1);
      for (std::uint64_t k = 0; k < extras; ++k)
        d[static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(p)))] =
            rng.gaussian();
    }
    const double norm = d.norm();
    if (norm == 0.0) continue;
    d /= norm;

    // the cone constraint is scale-dependent for non-convex R: scan beta
    bool feasible = false;
    for (int k = 0; k <= 16 && !feasible; ++k) {
      const double beta = std::pow(10.0, -6.0 + 0.5 * k);
      double r_on = 0.0, r_off = 0.0;
      for (int i = 0; i < p; ++i) {
        if (d[i] == 0.0) continue;
        const double v = value(reg, std::abs(beta * d[i]));
        if (in_S[static_cast<std::size_t>(i)])
          r_on += v;
        else
          r_off += v;
      }
      feasible = r_off <= alpha * r_on + 1e-15;
    }
    if (feasible) best = std::min(best, (X * d).squaredNorm() / dn);
  }
  return best;
}

}  // namespace ncreg
