#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncreg/rng.hpp"
#include "ncreg/solver.hpp"

using namespace ncreg;

namespace {

Problem random_problem(int n, int p, int s, double epsilon, std::uint64_t seed) {
  Rng rng(seed);
  Problem prob;
  prob.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) prob.X(i, j) = rng.gaussian();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  for (int k = 0; k < s; ++k) {
    double v = rng.gaussian();
    if (std::abs(v) < 0.1) v = v < 0 ? -0.1 : 0.1;
    theta[static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(p)))] = v;
  }
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) e[i] = rng.gaussian();
  if (epsilon > 0.0)
    e *= epsilon / e.norm();
  else
    e.setZero();
  prob.y = prob.X * theta + e;
  prob.epsilon = epsilon;
  prob.theta_star = theta;
  return prob;
}

}  // namespace

TEST_CASE("objective: basic identities") {
  Problem prob = random_problem(20, 30, 3, 0.0, 5);
  const Regularizer reg = Regularizer::mcp(0.5, 1.0);
  CHECK(objective(prob, reg, Eigen::VectorXd::Zero(30)) ==
        doctest::Approx(prob.y.squaredNorm() / 40.0).epsilon(1e-12));
  // zero residual at the truth when e = 0
  CHECK(objective(prob, reg, *prob.theta_star) ==
        doctest::Approx(penalty_sum(reg, *prob.theta_star)).epsilon(1e-12));
  // manual recomputation
  Eigen::VectorXd th = Eigen::VectorXd::Random(30);
  const double manual = (prob.y - prob.X * th).squaredNorm() / 40.0 + penalty_sum(reg, th);
  CHECK(objective(prob, reg, th) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("solve_cd: zero data stops immediately at zero") {
  Problem prob;
  prob.X = Eigen::MatrixXd::Random(10, 15);
  prob.y = Eigen::VectorXd::Zero(10);
  SolverConfig cfg;
  const SolveTrace trace = solve_cd(prob, Regularizer::l1(0.1), cfg, Eigen::VectorXd::Zero(15));
  CHECK(trace.num_sweeps == 1);
  CHECK(trace.converged);
  CHECK(trace.theta.isZero(0.0));
  CHECK(trace.sweeps.back().objective == 0.0);
}

TEST_CASE("solve_cd: univariate soft threshold") {
  Problem prob;
  prob.X = Eigen::MatrixXd::Constant(1, 1, 1.0);
  prob.y = Eigen::VectorXd::Constant(1, 1.0);
  SolverConfig cfg;
  cfg.psi = 0.0;
  cfg.tau = 1e-12;
  const SolveTrace trace = solve_cd(prob, Regularizer::l1(0.3), cfg, Eigen::VectorXd::Zero(1));
  CHECK(trace.theta[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(certify_stationarity(prob, Regularizer::l1(0.3), trace.theta) <= 1e-10);
}

TEST_CASE("solve_cd: descent, sweep bound, nu bound vs certificate") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Problem prob = random_problem(50, 100, 5, 0.01, seed);
    const Regularizer reg = Regularizer::mcp(0.1, 0.5);
    SolverConfig cfg;
    cfg.psi = 0.1;
    cfg.nu_target = 1e-3;
    const SolveTrace trace = solve_cd(prob, reg, cfg, Eigen::VectorXd::Zero(100));
    REQUIRE(trace.converged);
    for (std::size_t k = 1; k < trace.sweeps.size(); ++k)
      CHECK(trace.sweeps[k].objective <= trace.sweeps[k - 1].objective + 1e-10);
    const double p = 100.0, xi = prob.xi();
    const double f0 = objective(prob, reg, Eigen::VectorXd::Zero(100));
    const double bound =
        1.0 + 2.0 * p * std::pow(cfg.psi + p * xi, 2) * f0 / (cfg.psi * 1e-6);
    CHECK(static_cast<double>(trace.num_sweeps) <= bound);
    const SweepRecord& last = trace.sweeps.back();
    CHECK(last.nu_bound <=
          std::sqrt(p) * (cfg.psi + p * xi) * trace.tau_used * (1.0 + 1e-12));
    CHECK(last.nu_certified <= last.nu_bound + 1e-9);
    // mu decreases with the objective (truth fixed)
    for (std::size_t k = 1; k < trace.sweeps.size(); ++k)
      CHECK(trace.sweeps[k].mu <= trace.sweeps[k - 1].mu + 1e-10);
  }
}

TEST_CASE("solve_cd: zero-gap invariant for sharp-concave MCP") {
  Problem prob = random_problem(50, 80, 5, 0.01, 9);
  const Regularizer reg = Regularizer::mcp(0.1, 0.5);
  SolverConfig cfg;
  cfg.psi = 0.1;
  cfg.record_iterates = true;
  const double u0 = 0.1 * std::sqrt(0.5 / (prob.xi() + cfg.psi));
  const SolveTrace trace = solve_cd(prob, reg, cfg, Eigen::VectorXd::Zero(80));
  for (const Eigen::VectorXd& th : trace.iterates)
    for (Eigen::Index i = 0; i < th.size(); ++i)
      CHECK((th[i] == 0.0 || std::abs(th[i]) >= u0 - 1e-9));
  for (const SweepRecord& rec : trace.sweeps) CHECK(rec.zero_gap >= u0 - 1e-9);
}

TEST_CASE("solve_cd: input validation and error paths") {
  Problem prob = random_problem(10, 12, 2, 0.0, 13);
  SolverConfig cfg;
  CHECK_THROWS_AS(solve_cd(prob, Regularizer::l1(1.0), cfg, Eigen::VectorXd::Zero(5)),
                  ParameterError);
  cfg.psi = -1.0;
  CHECK_THROWS_AS(solve_cd(prob, Regularizer::l1(1.0), cfg, Eigen::VectorXd::Zero(12)),
                  ParameterError);
  cfg.psi = 0.1;
  cfg.tau = 0.0;
  cfg.nu_target = 0.0;
  CHECK_THROWS_AS(solve_cd(prob, Regularizer::l1(1.0), cfg, Eigen::VectorXd::Zero(12)),
                  ParameterError);
}

TEST_CASE("certify_stationarity: origin optimality and Lq rejection") {
  Problem prob = random_problem(30, 40, 0, 0.0, 21);
  prob.y.setZero();
  // ||X'y/n||_inf = 0 <= rdot(0+)
  CHECK(certify_stationarity(prob, Regularizer::l1(0.5), Eigen::VectorXd::Zero(40)) == 0.0);
  CHECK_THROWS_AS(certify_stationarity(prob, Regularizer::lq(1.0, 0.5), Eigen::VectorXd::Zero(40)),
                  UnsupportedKindError);
}

TEST_CASE("certify_stationarity: dominated by the Eq.-style sweep bound") {
  Problem prob = random_problem(40, 60, 4, 0.01, 33);
  for (const Regularizer& reg :
       {Regularizer::l1(0.1), Regularizer::mcp(0.1, 0.5), Regularizer::lsp(0.1, 0.5)}) {
    SolverConfig cfg;
    const SolveTrace trace = solve_cd(prob, reg, cfg, Eigen::VectorXd::Zero(60));
    CHECK(trace.sweeps.back().nu_certified <= trace.sweeps.back().nu_bound + 1e-9);
  }
}

TEST_CASE("zero_gap of a vector") {
  Eigen::VectorXd v(3);
  v << 0.0, 0.5, -2.0;
  CHECK(zero_gap(v) == 0.5);
  CHECK(std::isinf(zero_gap(Eigen::VectorXd::Zero(4))));
}

TEST_CASE("check_null_consistency: zero noise is trivially consistent") {
  Problem prob = random_problem(30, 50, 3, 0.0, 41);
  SolverConfig cfg;
  const NullConsistencyReport rep =
      check_null_consistency(prob, Regularizer::mcp(0.3, 0.1), 0.01, cfg);
  CHECK(rep.empirical);
  CHECK(rep.best_objective == doctest::Approx(0.0));
  CHECK(rep.analytic);  // r(u0) >= 0
  Problem no_truth = prob;
  no_truth.theta_star.reset();
  CHECK_THROWS_AS(check_null_consistency(no_truth, Regularizer::mcp(0.3, 0.1), 0.01, cfg),
                  InsufficientDataError);
}

TEST_CASE("check_null_consistency: calibrated lambda passes on Gaussian data") {
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Problem prob = random_problem(100, 200, 4, 0.01, 100 + seed);
    const double eta = 0.01;
    const double lambda = lambda_from_noise(Regularizer::mcp(1.0, 0.1), eta, prob.epsilon,
                                            static_cast<int>(prob.n()), prob.xi());
    SolverConfig cfg;
    const NullConsistencyReport rep =
        check_null_consistency(prob, Regularizer::mcp(lambda, 0.1), eta, cfg);
    if (rep.empirical) ++pass;
    // analytic condition holds with equality at ||e|| = epsilon by construction
    CHECK(rep.r_u0 == doctest::Approx(rep.noise_level).epsilon(1e-12));
  }
  CHECK(pass >= 9);
}
