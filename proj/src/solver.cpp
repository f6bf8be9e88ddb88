#include "ncreg/solver.hpp"

#include <cmath>

#include "ncreg/baselines.hpp"
#include "ncreg/prox.hpp"

namespace ncreg {

double objective(const Problem& prob, const Regularizer& reg, const Eigen::VectorXd& theta) {
  const double n = static_cast<double>(prob.n());
  const double rss = (prob.y - prob.X * theta).squaredNorm();
  return rss / (2.0 * n) + penalty_sum(reg, theta);
}

double zero_gap(const Eigen::VectorXd& theta) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (theta[i] != 0.0) g = std::min(g, std::abs(theta[i]));
  return g;
}

double certify_stationarity(const Problem& prob, const Regularizer& reg,
                            const Eigen::VectorXd& theta) {
  if (!constants(reg, 1.0).finite_slope_at_zero)
    throw UnsupportedKindError("certify_stationarity: infinite slope at zero (Lq)");
  const double n = static_cast<double>(prob.n());
  const Eigen::VectorXd g = prob.X.transpose() * (prob.X * theta - prob.y) / n;
  const double r0p = slope_at_zero(reg);
  double sq = 0.0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    double rate;
    if (theta[i] == 0.0) {
      rate = std::min(-std::abs(g[i]) + r0p, 0.0);
    } else {
      const double s = theta[i] > 0.0 ? 1.0 : -1.0;
      const double m = std::abs(theta[i]);
      const double inc = g[i] * s + deriv(reg, m, Side::Right);
      const double dec = -g[i] * s - deriv(reg, m, Side::Left);
      rate = std::min({inc, dec, 0.0});
    }
    sq += rate * rate;
  }
  return std::sqrt(sq);
}

SolveTrace solve_cd(const Problem& prob, const Regularizer& reg, const SolverConfig& cfg,
                    const Eigen::VectorXd& init) {
  const Eigen::Index n = prob.n(), p = prob.p();
  if (init.size() != p) throw ParameterError("solve_cd: init has wrong length");
  if (!(cfg.psi >= 0.0)) throw ParameterError("solve_cd: psi must be non-negative");
  const double dn = static_cast<double>(n);

  const Eigen::VectorXd col_sq = prob.X.colwise().squaredNorm() / dn;  // ||x_i||^2/n
  const double xi = col_sq.maxCoeff();
  const double nu_factor =
      std::sqrt(static_cast<double>(p)) * (cfg.psi + static_cast<double>(p) * xi);

  double tau = cfg.tau;
  if (tau <= 0.0) {
    if (!(cfg.nu_target > 0.0))
      throw ParameterError("solve_cd: need tau or nu_target");
    tau = cfg.nu_target / nu_factor;
  }

  SolveTrace trace;
  trace.tau_used = tau;
  Eigen::VectorXd theta = init;
  Eigen::VectorXd omega = prob.y - prob.X * theta;  // current residual

  const bool certifiable = constants(reg, 1.0).finite_slope_at_zero;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double delta_sq = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double a = col_sq[i] + cfg.psi;
      const double v = theta[i] + prob.X.col(i).dot(omega) / (dn * a);
      const double u = prox({a, v, reg});
      const double d = u - theta[i];
      if (d != 0.0) {
        omega.noalias() -= prob.X.col(i) * d;
        theta[i] = u;
        delta_sq += d * d;
      }
    }
    if (sweep % 100 == 0) omega = prob.y - prob.X * theta;  // drift control

    SweepRecord rec;
    rec.delta_norm = std::sqrt(delta_sq);
    rec.objective = omega.squaredNorm() / (2.0 * dn) + penalty_sum(reg, theta);
    if (!std::isfinite(rec.objective))
      throw NumericalError("solve_cd: non-finite objective", sweep);
    if (prob.theta_star)
      rec.mu = rec.objective - objective(prob, reg, *prob.theta_star);
    rec.nu_bound = nu_factor * rec.delta_norm;
    if (cfg.certify_each_sweep && certifiable)
      rec.nu_certified = certify_stationarity(prob, reg, theta);
    rec.zero_gap = zero_gap(theta);
    trace.sweeps.push_back(rec);
    if (cfg.record_iterates) trace.iterates.push_back(theta);
    trace.num_sweeps = sweep;

    if (rec.delta_norm <= tau) {
      trace.converged = true;
      break;
    }
  }

  if (!trace.sweeps.empty() && !cfg.certify_each_sweep && certifiable)
    trace.sweeps.back().nu_certified = certify_stationarity(prob, reg, theta);
  trace.theta = std::move(theta);
  return trace;
}

NullConsistencyReport check_null_consistency(const Problem& prob, const Regularizer& reg,
                                             double eta, const SolverConfig& cfg) {
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must be in (0,1)");
  if (!prob.theta_star)
    throw InsufficientDataError("null consistency check requires ground truth (for e)");
  const double dn = static_cast<double>(prob.n());
  const Eigen::VectorXd e = prob.y - prob.X * (*prob.theta_star);

  Problem noise;
  noise.X = prob.X;
  noise.y = e / eta;
  noise.epsilon = e.norm() / eta;

  NullConsistencyReport rep;
  rep.reference = noise.y.squaredNorm() / (2.0 * dn);

  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(prob.p());
  double best = std::min(rep.reference, solve_cd(noise, reg, cfg, zero).sweeps.back().objective);
  const int support = static_cast<int>(std::min(prob.n() / 2, prob.p()));
  if (support >= 1) {
    const OmpResult warm = omp(noise, support, 0.0);
    best = std::min(best, solve_cd(noise, reg, cfg, warm.theta).sweeps.back().objective);
  }
  rep.best_objective = best;
  rep.empirical = rep.reference - best <= 1e-8 * std::max(1.0, rep.reference);

  double u0 = constants(reg, prob.xi()).zero_gap;
  if (!(u0 > 0.0)) u0 = reg.lambda;
  rep.r_u0 = value(reg, u0);
  rep.noise_level = e.squaredNorm() / (2.0 * dn * eta * eta);
  rep.analytic = rep.r_u0 >= rep.noise_level - 1e-12 * std::max(1.0, rep.noise_level);
  return rep;
}

}  // namespace ncreg
