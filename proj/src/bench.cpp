#include "ncreg/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ncreg/baselines.hpp"
#include "ncreg/rng.hpp"

namespace ncreg {

namespace {

constexpr std::uint64_t kPurposeX = 1;
constexpr std::uint64_t kPurposeSupport = 2;
constexpr std::uint64_t kPurposeValues = 3;
constexpr std::uint64_t kPurposeNoise = 4;
constexpr std::uint64_t kPurposeFig4 = 5;

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - std::floor(pos);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

}  // namespace

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const CsvRow& row : table.rows) {
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      out << (i ? "," : "") << row.cells[i];
    out << "\n";
  }
}

Problem gen_instance(const TrialSpec& spec, int trial) {
  const int n = spec.n, p = spec.p, s = spec.s;
  if (s > p || n < 1) throw ParameterError("gen_instance: invalid dimensions");
  const std::uint64_t tr = static_cast<std::uint64_t>(trial);

  Problem prob;
  prob.X.resize(n, p);
  {
    Rng rng(spec.seed, tr, kPurposeX);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) prob.X(i, j) = rng.gaussian();
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  {
    Rng rng(spec.seed, tr, kPurposeSupport);
    std::vector<int> pool(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) pool[static_cast<std::size_t>(j)] = j;
    Rng val_rng(spec.seed, tr, kPurposeValues);
    for (int k = 0; k < s; ++k) {
      const std::size_t pick = static_cast<std::size_t>(k) +
          static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(p - k)));
      std::swap(pool[static_cast<std::size_t>(k)], pool[pick]);
      double v = val_rng.gaussian();
      if (std::abs(v) < 0.1) v = v < 0.0 ? -0.1 : 0.1;  // promote small magnitudes
      theta[pool[static_cast<std::size_t>(k)]] = v;
    }
  }

  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  if (spec.epsilon > 0.0) {
    Rng rng(spec.seed, tr, kPurposeNoise);
    for (int i = 0; i < n; ++i) e[i] = rng.gaussian();
    e *= spec.epsilon / e.norm();
  }
  prob.y = prob.X * theta + e;
  prob.epsilon = spec.epsilon;
  prob.theta_star = std::move(theta);
  return prob;
}

RecoveryMetrics recovery_metrics(const Eigen::VectorXd& theta, const Eigen::VectorXd& truth) {
  RecoveryMetrics m;
  int inter = 0, uni = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const bool a = std::abs(theta[i]) > 1e-8;
    const bool b = std::abs(truth[i]) > 1e-8;
    if (a) m.sparseness += 1.0;
    if (a && b) ++inter;
    if (a || b) ++uni;
  }
  m.rre = (theta - truth).norm() / truth.norm();
  m.srr = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
  return m;
}

CsvTable run_fig1(const TrialSpec& spec) {
  std::vector<std::vector<double>> gaps, mus, nus;  // [trial][sweep]
  std::size_t max_sweeps = 0;
  for (int trial = 0; trial < spec.num_trials; ++trial) {
    Problem prob = gen_instance(spec, trial);
    const double xi = prob.xi();
    const double lambda = lambda_from_noise(spec.reg, spec.eta, spec.epsilon, spec.n, xi);
    const Regularizer reg = spec.reg.with_lambda(lambda);
    SolverConfig cfg;
    cfg.psi = spec.psi;
    cfg.nu_target = spec.nu_target;
    cfg.max_sweeps = spec.max_sweeps;
    const SolveTrace trace = solve_cd(prob, reg, cfg, Eigen::VectorXd::Zero(spec.p));
    std::vector<double> g, m, nu;
    for (const SweepRecord& rec : trace.sweeps) {
      g.push_back(rec.zero_gap);
      m.push_back(rec.mu);
      nu.push_back(rec.nu_bound);
    }
    max_sweeps = std::max(max_sweeps, g.size());
    gaps.push_back(std::move(g));
    mus.push_back(std::move(m));
    nus.push_back(std::move(nu));
  }

  CsvTable table;
  table.header = {"sweep", "quantile", "metric", "value"};
  const int qs[] = {5, 25, 50, 75, 95};
  const char* names[] = {"zero_gap", "mu", "nu_bound"};
  const std::vector<std::vector<double>>* series[] = {&gaps, &mus, &nus};
  for (std::size_t k = 0; k < max_sweeps; ++k) {
    for (int mi = 0; mi < 3; ++mi) {
      std::vector<double> vals;
      for (const std::vector<double>& tr : *series[mi])
        vals.push_back(k < tr.size() ? tr[k] : tr.back());  // hold after termination
      for (int q : qs) {
        CsvRow row;
        row.cells = {std::to_string(k + 1), std::to_string(q), names[mi],
                     format_g17(quantile(vals, q / 100.0))};
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

CsvTable run_fig4(const TrialSpec& spec, const std::vector<int>& n_list,
                  const std::vector<int>& t_grid, int num_submatrices) {
  CsvTable table;
  table.header = {"n", "t", "stat", "kplus", "kminus", "ratio"};
  for (int n : n_list) {
    std::vector<std::vector<double>> kp(t_grid.size()), km(t_grid.size()), ratio(t_grid.size());
    for (int trial = 0; trial < spec.num_trials; ++trial) {
      Eigen::MatrixXd X(n, spec.p);
      Rng rng(spec.seed, static_cast<std::uint64_t>(n) * 100000u + static_cast<std::uint64_t>(trial),
              kPurposeFig4);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < spec.p; ++j) X(i, j) = rng.gaussian();
      const SEEstimate est = estimate_se(
          X, t_grid, num_submatrices,
          spec.seed + static_cast<std::uint64_t>(trial) * 7919u + static_cast<std::uint64_t>(n));
      for (std::size_t ti = 0; ti < est.t_grid.size(); ++ti) {
        kp[ti].push_back(est.kappa_plus[ti]);
        km[ti].push_back(est.kappa_minus[ti]);
        ratio[ti].push_back(est.kappa_plus[ti] / est.kappa_minus[ti]);
      }
    }
    std::vector<int> sorted_grid = t_grid;
    std::sort(sorted_grid.begin(), sorted_grid.end());
    for (std::size_t ti = 0; ti < sorted_grid.size(); ++ti) {
      struct Stat {
        const char* name;
        double (*f)(const std::vector<double>&);
      };
      const Stat stats[] = {
          {"mean", [](const std::vector<double>& v) {
             double s = 0.0;
             for (double x : v) s += x;
             return s / static_cast<double>(v.size());
           }},
          {"min", [](const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }},
          {"max", [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }},
      };
      for (const Stat& st : stats) {
        CsvRow row;
        row.cells = {std::to_string(n), std::to_string(sorted_grid[ti]), st.name,
                     format_g17(st.f(kp[ti])), format_g17(st.f(km[ti])),
                     format_g17(st.f(ratio[ti]))};
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

Fig8Result run_fig8(const TrialSpec& spec, const std::vector<int>& n_list,
                    const std::vector<Regularizer>& regs) {
  std::vector<double> grid = spec.lambda_grid;
  if (grid.empty())
    for (int k = -6; k <= 1; ++k) grid.push_back(std::pow(10.0, k));

  Fig8Result res;
  res.table.header = {"reg", "n", "lambda", "mean_sparseness", "mean_rre", "mean_srr", "trials"};

  for (int n : n_list) {
    TrialSpec local = spec;
    local.n = n;
    // instance and warm start are shared across regularizers and lambdas
    std::vector<Problem> probs;
    std::vector<Eigen::VectorXd> warms;
    for (int trial = 0; trial < spec.num_trials; ++trial) {
      probs.push_back(gen_instance(local, trial));
      const int support =
          std::max(1, std::min(n - spec.s, static_cast<int>(std::min(probs.back().n(),
                                                                     probs.back().p()))));
      warms.push_back(omp(probs.back(), support, 0.0).theta);
    }

    for (const Regularizer& shape : regs) {
      double best_rre = std::numeric_limits<double>::infinity();
      Fig8Best best;
      for (double lambda : grid) {
        std::vector<double> rre, srr, sp;
        for (int trial = 0; trial < spec.num_trials; ++trial) {
          const Problem& prob = probs[static_cast<std::size_t>(trial)];
          Eigen::VectorXd theta;
          if (shape.kind == Kind::L1) {
            theta = fista_l1(prob, lambda, 1e-12, 5000).theta;
          } else {
            SolverConfig cfg;
            cfg.psi = spec.psi;
            cfg.nu_target = spec.nu_target;
            cfg.max_sweeps = spec.max_sweeps;
            theta = solve_cd(prob, shape.with_lambda(lambda), cfg,
                             warms[static_cast<std::size_t>(trial)])
                        .theta;
          }
          const RecoveryMetrics m = recovery_metrics(theta, *prob.theta_star);
          rre.push_back(m.rre);
          srr.push_back(m.srr);
          sp.push_back(m.sparseness);
        }
        auto mean = [](const std::vector<double>& v) {
          double s = 0.0;
          for (double x : v) s += x;
          return s / static_cast<double>(v.size());
        };
        const double m_rre = mean(rre), m_srr = mean(srr), m_sp = mean(sp);
        CsvRow row;
        row.cells = {kind_name(shape.kind), std::to_string(n),          format_g17(lambda),
                     format_g17(m_sp),      format_g17(m_rre),          format_g17(m_srr),
                     std::to_string(spec.num_trials)};
        res.table.rows.push_back(std::move(row));
        if (m_rre < best_rre) {
          best_rre = m_rre;
          best.reg = kind_name(shape.kind);
          best.n = n;
          best.lambda = lambda;
          best.mean_sparseness = m_sp;
          best.mean_rre = m_rre;
          best.mean_srr = m_srr;
          best.rre = rre;
          best.srr = srr;
          best.sparseness = sp;
        }
      }
      res.best.push_back(std::move(best));
    }
  }
  return res;
}

}  // namespace ncreg
