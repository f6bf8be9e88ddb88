// Command-line front end: solve / se / check / bench-* / camera.
#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "ncreg/analysis.hpp"
#include "ncreg/baselines.hpp"
#include "ncreg/bench.hpp"
#include "ncreg/imaging.hpp"
#include "ncreg/io.hpp"
#include "ncreg/prox.hpp"
#include "ncreg/solver.hpp"

namespace {

struct RegOpts {
  std::string kind = "mcp";
  double lambda = 1.0;
  double gamma = 0.1;
  double q = 0.5;
  double phi = 0.5;
};

void add_reg_options(CLI::App* cmd, RegOpts& opts) {
  cmd->add_option("--reg", opts.kind, "regularizer kind (l1|lq|scad|lsp|mcp|gp|amcp)")
      ->capture_default_str();
  cmd->add_option("--lambda", opts.lambda, "regularizer scale")->capture_default_str();
  cmd->add_option("--gamma", opts.gamma, "concavity parameter")->capture_default_str();
  cmd->add_option("--q", opts.q, "lq exponent in (0,1)")->capture_default_str();
  cmd->add_option("--phi", opts.phi, "amcp junction parameter in (0,1)")->capture_default_str();
}

ncreg::Regularizer make_reg(const RegOpts& opts) {
  return ncreg::Regularizer::make(ncreg::kind_from_name(opts.kind), opts.lambda, opts.gamma,
                                  opts.q, opts.phi);
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw ncreg::ParameterError("empty integer list");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw ncreg::ParameterError("empty list");
  return out;
}

ncreg::SEEstimate read_se_csv(const std::string& path) {
  const Eigen::MatrixXd m = ncreg::read_matrix(path);
  if (m.cols() < 3) throw ncreg::ParameterError("se CSV needs columns t,kplus,kminus");
  ncreg::SEEstimate se;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    se.t_grid.push_back(static_cast<int>(m(r, 0)));
    se.kappa_plus.push_back(m(r, 1));
    se.kappa_minus.push_back(m(r, 2));
  }
  return se;
}

void write_se_csv(const ncreg::SEEstimate& se, const std::string& path) {
  ncreg::CsvTable t;
  t.header = {"t", "kplus", "kminus", "ratio"};
  for (std::size_t i = 0; i < se.t_grid.size(); ++i) {
    ncreg::CsvRow row;
    row.cells = {std::to_string(se.t_grid[i]), ncreg::format_g17(se.kappa_plus[i]),
                 ncreg::format_g17(se.kappa_minus[i]),
                 ncreg::format_g17(se.kappa_plus[i] / se.kappa_minus[i])};
    t.rows.push_back(std::move(row));
  }
  ncreg::write_csv(t, path);
}

int run(int argc, char** argv) {
  CLI::App app{"sparse estimation via non-convex regularized regression"};
  app.require_subcommand(1);
  app.set_config("--config");
  int threads = 1;
  app.add_option("--threads", threads, "worker cap (informational; solves are sequential)");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "proximal coordinate descent on a data set");
  RegOpts solve_reg;
  std::string matrix_path, response_path, out_path, init_mode = "zero";
  double psi = 0.1, nu = 1e-3, eta = 0.0, epsilon = 0.0;
  int max_sweeps = 10000;
  solve->add_option("--matrix", matrix_path, "design matrix (CSV or NCRR1)")->required();
  solve->add_option("--response", response_path, "response vector")->required();
  add_reg_options(solve, solve_reg);
  solve->add_option("--eta", eta, "select lambda from the noise rule (needs --epsilon)");
  solve->add_option("--epsilon", epsilon, "noise budget ||e||_2");
  solve->add_option("--psi", psi, "proximal weight")->capture_default_str();
  solve->add_option("--nu", nu, "stationarity target")->capture_default_str();
  solve->add_option("--max-sweeps", max_sweeps)->capture_default_str();
  solve->add_option("--init", init_mode, "zero|omp")->capture_default_str();
  solve->add_option("--out", out_path, "solution vector output");

  // ---- se ----
  auto* se_cmd = app.add_subcommand("se", "sampled sparse-eigenvalue curves");
  std::string se_tgrid = "1,2,4,8";
  int se_samples = 100;
  std::uint64_t seed = 1;
  se_cmd->add_option("--matrix", matrix_path)->required();
  se_cmd->add_option("--t-grid", se_tgrid, "comma-separated t values")->capture_default_str();
  se_cmd->add_option("--samples", se_samples)->capture_default_str();
  se_cmd->add_option("--seed", seed)->capture_default_str();
  se_cmd->add_option("--out", out_path, "CSV output")->required();

  // ---- check ----
  auto* check = app.add_subcommand("check", "SE conditions and bound constants");
  RegOpts check_reg;
  std::string se_csv;
  int cond_s = 10, cond_t = 0;
  double rho0 = -1.0, mu = 0.0, m0 = 0.0, l0 = 0.0;
  int cond_n = 100;
  double check_eta = 0.01, check_nu = 1e-3, check_eps = 0.01;
  check->add_option("--matrix", matrix_path, "design matrix (SE estimated on the fly)");
  check->add_option("--se-csv", se_csv, "precomputed SE curve (t,kplus,kminus)");
  add_reg_options(check, check_reg);
  check->add_option("--s", cond_s, "true sparsity")->capture_default_str();
  check->add_option("--t", cond_t, "SE condition t (0 = ceil(alpha s)+1)")->capture_default_str();
  check->add_option("--eta", check_eta)->capture_default_str();
  check->add_option("--rho0", rho0, "zero gap (-1 = analytic)")->capture_default_str();
  check->add_option("--nu", check_nu)->capture_default_str();
  check->add_option("--mu", mu)->capture_default_str();
  check->add_option("--epsilon", check_eps)->capture_default_str();
  check->add_option("--n", cond_n, "sample count for the lambda rule")->capture_default_str();
  check->add_option("--m0", m0, "sparseness-bound m0 (with --l0)");
  check->add_option("--l0", l0, "sparseness-bound l0");
  check->add_option("--samples", se_samples)->capture_default_str();
  check->add_option("--seed", seed)->capture_default_str();
  check->add_option("--out", out_path, "machine-readable CSV");

  // ---- bench ----
  auto* fig1 = app.add_subcommand("bench-fig1", "per-sweep AGAS quantiles");
  RegOpts fig1_reg;
  int p = 500, nn = 0, s = 0, trials = 20;
  double bench_eta = 0.01, bench_eps = 0.01, bench_psi = 0.1, bench_nu = 1e-3;
  fig1->add_option("--p", p)->capture_default_str();
  fig1->add_option("--n", nn, "0 = 10 s log p");
  fig1->add_option("--s", s, "0 = ceil(log p)");
  add_reg_options(fig1, fig1_reg);
  fig1->add_option("--eta", bench_eta)->capture_default_str();
  fig1->add_option("--epsilon", bench_eps)->capture_default_str();
  fig1->add_option("--psi", bench_psi)->capture_default_str();
  fig1->add_option("--nu", bench_nu)->capture_default_str();
  fig1->add_option("--trials", trials)->capture_default_str();
  fig1->add_option("--seed", seed)->capture_default_str();
  fig1->add_option("--out", out_path)->required();

  auto* fig4 = app.add_subcommand("bench-fig4", "SE curves over random matrices");
  std::string n_list_str = "100,200", t_grid_str = "1,2,4,8,16,32,64";
  fig4->add_option("--p", p)->capture_default_str();
  fig4->add_option("--n-list", n_list_str)->capture_default_str();
  fig4->add_option("--t-grid", t_grid_str)->capture_default_str();
  fig4->add_option("--samples", se_samples)->capture_default_str();
  fig4->add_option("--trials", trials)->capture_default_str();
  fig4->add_option("--seed", seed)->capture_default_str();
  fig4->add_option("--out", out_path)->required();

  auto* fig8 = app.add_subcommand("bench-fig8", "recovery metrics vs n");
  std::string regs_str = "lsp,mcp,gp,l1", lambda_grid_str;
  double fig8_gamma = 1e-7;
  fig8->add_option("--p", p)->capture_default_str();
  fig8->add_option("--s", s, "0 = 20");
  fig8->add_option("--n-list", n_list_str, "0 entries = {4s,6s,8s,10s}");
  fig8->add_option("--regs", regs_str)->capture_default_str();
  fig8->add_option("--gamma", fig8_gamma)->capture_default_str();
  fig8->add_option("--lambda-grid", lambda_grid_str, "default 1e-6..10");
  fig8->add_option("--epsilon", bench_eps)->capture_default_str();
  fig8->add_option("--psi", bench_psi)->capture_default_str();
  fig8->add_option("--nu", bench_nu)->capture_default_str();
  fig8->add_option("--trials", trials)->capture_default_str();
  fig8->add_option("--seed", seed)->capture_default_str();
  fig8->add_option("--out", out_path)->required();

  auto* camera = app.add_subcommand("camera", "masked-image recovery demo");
  RegOpts cam_reg;
  std::string image_path, out_prefix = "camera";
  double fraction = 0.25;
  camera->add_option("--image", image_path, "input PGM (P5)")->required();
  camera->add_option("--fraction", fraction, "known-pixel fraction")->capture_default_str();
  add_reg_options(camera, cam_reg);
  camera->add_option("--lambda-grid", lambda_grid_str, "default 1e-5..1");
  camera->add_option("--nu", bench_nu)->capture_default_str();
  camera->add_option("--seed", seed)->capture_default_str();
  camera->add_option("--out-prefix", out_prefix, "writes <prefix>.pgm and <prefix>_psnr.csv")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed()) {
    ncreg::Problem prob;
    prob.X = ncreg::read_matrix(matrix_path);
    prob.y = ncreg::read_vector(response_path);
    if (prob.y.size() != prob.X.rows())
      throw ncreg::ParameterError("response length does not match matrix rows");
    prob.epsilon = epsilon;
    ncreg::Regularizer reg = make_reg(solve_reg);
    const bool eta_mode = solve->count("--eta") > 0;
    if (eta_mode) {
      if (solve->count("--lambda") > 0)
        throw ncreg::ParameterError("--lambda and --eta are mutually exclusive");
      if (epsilon <= 0.0) throw ncreg::ParameterError("--eta requires --epsilon > 0");
      reg = reg.with_lambda(ncreg::lambda_from_noise(reg, eta, epsilon,
                                                     static_cast<int>(prob.n()), prob.xi()));
    }
    ncreg::SolverConfig cfg;
    cfg.psi = psi;
    cfg.nu_target = nu;
    cfg.max_sweeps = max_sweeps;
    Eigen::VectorXd init = Eigen::VectorXd::Zero(prob.p());
    if (init_mode == "omp") {
      const int support = static_cast<int>(std::min(prob.n(), prob.p()) / 2);
      if (support >= 1) init = ncreg::omp(prob, support, 0.0).theta;
    } else if (init_mode != "zero") {
      throw ncreg::ParameterError("--init must be zero or omp");
    }
    const ncreg::SolveTrace trace = ncreg::solve_cd(prob, reg, cfg, init);
    if (!out_path.empty()) ncreg::write_vector(trace.theta, out_path);
    const ncreg::SweepRecord& last = trace.sweeps.back();
    std::cout << "{\n"
              << "  \"lambda\": " << ncreg::format_g17(reg.lambda) << ",\n"
              << "  \"objective\": " << ncreg::format_g17(last.objective) << ",\n"
              << "  \"nu_certified\": " << ncreg::format_g17(last.nu_certified) << ",\n"
              << "  \"nu_bound\": " << ncreg::format_g17(last.nu_bound) << ",\n"
              << "  \"zero_gap\": " << ncreg::format_g17(last.zero_gap) << ",\n"
              << "  \"sweeps\": " << trace.num_sweeps << ",\n"
              << "  \"converged\": " << (trace.converged ? "true" : "false") << "\n"
              << "}\n";
    return 0;
  }

  if (se_cmd->parsed()) {
    const Eigen::MatrixXd X = ncreg::read_matrix(matrix_path);
    write_se_csv(ncreg::estimate_se(X, parse_int_list(se_tgrid), se_samples, seed), out_path);
    return 0;
  }

  if (check->parsed()) {
    ncreg::SEEstimate se;
    const double alpha = (1.0 + check_eta) / (1.0 - check_eta);
    if (cond_t == 0)
      cond_t = static_cast<int>(std::ceil(alpha * cond_s)) + 1;
    if (!se_csv.empty()) {
      se = read_se_csv(se_csv);
    } else if (!matrix_path.empty()) {
      const Eigen::MatrixXd X = ncreg::read_matrix(matrix_path);
      std::vector<int> grid = {1, cond_t, 2 * cond_t};
      se = ncreg::estimate_se(X, grid, se_samples, seed);
      cond_n = static_cast<int>(X.rows());
    } else {
      throw ncreg::ParameterError("check: need --matrix or --se-csv");
    }
    const ncreg::Regularizer shape = make_reg(check_reg);
    const ncreg::ConditionReport rep = ncreg::check_conditions(
        shape, se, cond_s, cond_t, check_eta, rho0, check_nu, mu, check_eps, cond_n);
    std::cout << "alpha = " << rep.alpha << "\n"
              << "lambda = " << rep.lambda << ", lambda* = " << rep.lambda_star << "\n"
              << "H_r = " << rep.H_r << ", G_r = " << rep.G_r << "\n"
              << "SE ratio kappa+(2t)/kappa-(2t) = " << rep.se_lhs << "\n"
              << "global condition: " << rep.se_lhs << " < " << rep.se_rhs_global << " -> "
              << (rep.passes_global ? "PASS" : "FAIL") << "\n"
              << "AGAS condition:   " << rep.se_lhs << " < " << rep.se_rhs_agas << " -> "
              << (rep.passes_agas ? "PASS" : "FAIL") << "\n"
              << "C1 = " << rep.C1 << ", C2 = " << rep.C2 << ", C4 = " << rep.C4
              << ", C5 = " << rep.C5 << "\n"
              << "global error bound C1 lambda* = " << rep.global_error_bound << "\n"
              << "AGAS error bound = " << rep.agas_error_bound << "\n";
    if (!rep.failure_reason.empty()) std::cout << "note: " << rep.failure_reason << "\n";
    if (m0 > 0.0 && l0 > 0.0) {
      const ncreg::Regularizer reg = shape.with_lambda(rep.lambda);
      const ncreg::SparsenessBound sb =
          ncreg::sparseness_bound_global(reg, se, rep, cond_t, check_eta, m0, l0);
      if (sb.ok)
        std::cout << "sparseness bound: " << sb.bound << "\n";
      else
        std::cout << "sparseness bound unavailable: " << sb.detail << "\n";
    }
    if (!out_path.empty()) {
      ncreg::CsvTable t;
      t.header = {"field", "value"};
      auto add = [&t](const std::string& k, double v) {
        t.rows.push_back({{k, ncreg::format_g17(v)}});
      };
      add("alpha", rep.alpha);
      add("lambda", rep.lambda);
      add("lambda_star", rep.lambda_star);
      add("H_r", rep.H_r);
      add("G_r", rep.G_r);
      add("se_lhs", rep.se_lhs);
      add("se_rhs_global", rep.se_rhs_global);
      add("se_rhs_agas", rep.se_rhs_agas);
      add("passes_global", rep.passes_global ? 1.0 : 0.0);
      add("passes_agas", rep.passes_agas ? 1.0 : 0.0);
      add("C1", rep.C1);
      add("C2", rep.C2);
      add("C4", rep.C4);
      add("C5", rep.C5);
      add("global_error_bound", rep.global_error_bound);
      add("agas_error_bound", rep.agas_error_bound);
      ncreg::write_csv(t, out_path);
    }
    return 0;
  }

  if (fig1->parsed()) {
    ncreg::TrialSpec spec;
    spec.p = p;
    spec.s = s > 0 ? s : static_cast<int>(std::ceil(std::log(static_cast<double>(p))));
    spec.n = nn > 0 ? nn : static_cast<int>(10.0 * spec.s * std::log(static_cast<double>(p)));
    spec.reg = make_reg(fig1_reg);
    spec.eta = bench_eta;
    spec.epsilon = bench_eps;
    spec.psi = bench_psi;
    spec.nu_target = bench_nu;
    spec.num_trials = trials;
    spec.seed = seed;
    ncreg::write_csv(ncreg::run_fig1(spec), out_path);
    return 0;
  }

  if (fig4->parsed()) {
    ncreg::TrialSpec spec;
    spec.p = p;
    spec.num_trials = trials;
    spec.seed = seed;
    ncreg::write_csv(
        ncreg::run_fig4(spec, parse_int_list(n_list_str), parse_int_list(t_grid_str), se_samples),
        out_path);
    return 0;
  }

  if (fig8->parsed()) {
    ncreg::TrialSpec spec;
    spec.p = p;
    spec.s = s > 0 ? s : 20;
    spec.epsilon = bench_eps;
    spec.psi = bench_psi;
    spec.nu_target = bench_nu;
    spec.num_trials = trials;
    spec.seed = seed;
    if (!lambda_grid_str.empty()) spec.lambda_grid = parse_double_list(lambda_grid_str);
    std::vector<int> n_list;
    if (fig8->count("--n-list") > 0) {
      n_list = parse_int_list(n_list_str);
    } else {
      for (int f : {4, 6, 8, 10}) n_list.push_back(f * spec.s);
    }
    std::vector<ncreg::Regularizer> regs;
    for (const std::string& name : [&] {
           std::vector<std::string> out;
           std::stringstream ss(regs_str);
           std::string tok;
           while (std::getline(ss, tok, ',')) out.push_back(tok);
           return out;
         }())
      regs.push_back(ncreg::Regularizer::make(ncreg::kind_from_name(name), 1.0, fig8_gamma));
    ncreg::write_csv(ncreg::run_fig8(spec, n_list, regs).table, out_path);
    return 0;
  }

  if (camera->parsed()) {
    const Eigen::MatrixXd image = ncreg::read_pgm(image_path);
    const ncreg::MaskedImageProblem prob = ncreg::make_masked_problem(image, fraction, seed);
    std::vector<double> grid;
    if (!lambda_grid_str.empty())
      grid = parse_double_list(lambda_grid_str);
    else
      for (int k = -5; k <= 0; ++k) grid.push_back(std::pow(10.0, k));
    ncreg::SolverConfig cfg;
    cfg.nu_target = bench_nu;
    cfg.max_sweeps = 200;
    ncreg::CsvTable t;
    t.header = {"lambda", "psnr"};
    double best_psnr = -1.0;
    Eigen::MatrixXd best_image;
    for (double lambda : grid) {
      ncreg::Regularizer reg = make_reg(cam_reg).with_lambda(lambda);
      const Eigen::MatrixXd rec = ncreg::recover(prob, reg, cfg);
      const double score = ncreg::psnr(rec, image, 1.0);
      t.rows.push_back({{ncreg::format_g17(lambda), ncreg::format_g17(score)}});
      if (score > best_psnr) {
        best_psnr = score;
        best_image = rec;
      }
    }
    ncreg::write_csv(t, out_prefix + "_psnr.csv");
    ncreg::write_pgm(best_image, out_prefix + ".pgm");
    std::cout << "best PSNR " << best_psnr << " dB\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ncreg::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
