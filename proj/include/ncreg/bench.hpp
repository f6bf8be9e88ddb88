#pragma once

#include <string>
#include <vector>

#include "ncreg/analysis.hpp"
#include "ncreg/solver.hpp"

namespace ncreg {

struct TrialSpec {
  int p = 500;
  int n = 100;
  int s = 5;
  Regularizer reg;           // shape; lambda selected per trial unless fixed
  double eta = 0.01;
  double psi = 0.1;
  double epsilon = 0.01;
  double nu_target = 1e-3;
  int max_sweeps = 10000;
  std::vector<double> lambda_grid;  // empty = {1e-6 ... 10}
  std::uint64_t seed = 1;
  int num_trials = 20;
};

// X iid N(0,1); theta* on a random s-support with N(0,1) magnitudes promoted
// to at least 0.1; e Gaussian rescaled to ||e|| = epsilon exactly.
Problem gen_instance(const TrialSpec& spec, int trial);

struct CsvRow {
  std::vector<std::string> cells;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

void write_csv(const CsvTable& table, const std::string& path);
std::string format_g17(double v);

// Per-sweep 5/25/50/75/95 quantiles of (zero gap, mu, nu bound) across trials
// of CD from zero. Columns: sweep, quantile, metric, value.
CsvTable run_fig1(const TrialSpec& spec);

// Sparse-eigenvalue curves over fresh Gaussian matrices. Columns:
// n, t, stat, kplus, kminus, ratio; stat in {mean, min, max}.
CsvTable run_fig4(const TrialSpec& spec, const std::vector<int>& n_list,
                  const std::vector<int>& t_grid, int num_submatrices);

struct Fig8Best {
  std::string reg;
  int n = 0;
  double lambda = 0.0;
  double mean_sparseness = 0.0;
  double mean_rre = 0.0;
  double mean_srr = 0.0;
  std::vector<double> rre;  // per trial at the selected lambda
  std::vector<double> srr;
  std::vector<double> sparseness;
};

struct Fig8Result {
  CsvTable table;  // reg, n, lambda, mean_sparseness, mean_rre, mean_srr, trials
  std::vector<Fig8Best> best;  // oracle lambda (min mean RRE) per (reg, n)
};

// Recovery-metric sweep over n and regularizers {LSP, MCP, GP, L1}; OMP warm
// start for the non-convex solvers, FISTA for L1; lambda oracle-selected.
Fig8Result run_fig8(const TrialSpec& spec, const std::vector<int>& n_list,
                    const std::vector<Regularizer>& regs);

// Recovery metrics against the truth with |theta_i| > 1e-8 support counting.
struct RecoveryMetrics {
  double sparseness = 0.0;
  double rre = 0.0;
  double srr = 0.0;
};
RecoveryMetrics recovery_metrics(const Eigen::VectorXd& theta, const Eigen::VectorXd& truth);

}  // namespace ncreg
