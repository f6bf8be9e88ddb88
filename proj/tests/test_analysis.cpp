#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>

#include "ncreg/analysis.hpp"
#include "ncreg/rng.hpp"

using namespace ncreg;

namespace {

Eigen::MatrixXd gaussian_matrix(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.gaussian();
  return X;
}

// independent brute-force sparse-eigenvalue oracle
void exact_se(const Eigen::MatrixXd& X, int t, double& kp, double& km) {
  const int p = static_cast<int>(X.cols());
  const double n = static_cast<double>(X.rows());
  kp = -1e300;
  km = 1e300;
  std::vector<int> idx(static_cast<std::size_t>(t));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == t) {
      Eigen::MatrixXd sub(X.rows(), t);
      for (int j = 0; j < t; ++j) sub.col(j) = X.col(idx[static_cast<std::size_t>(j)]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub.transpose() * sub / n,
                                                        Eigen::EigenvaluesOnly);
      kp = std::max(kp, es.eigenvalues().maxCoeff());
      km = std::min(km, es.eigenvalues().minCoeff());
      return;
    }
    for (int j = start; j < p; ++j) {
      idx[static_cast<std::size_t>(depth)] = j;
      rec(j + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

TEST_CASE("estimate_se: orthonormal design is an exact isometry") {
  const int n = 10;
  const Eigen::MatrixXd X = std::sqrt(static_cast<double>(n)) *
                            Eigen::MatrixXd::Identity(n, n);
  const SEEstimate se = estimate_se(X, {1, 2, 5, 10}, 50, 3);
  for (std::size_t i = 0; i < se.t_grid.size(); ++i) {
    CHECK(se.kappa_plus[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(se.kappa_minus[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("estimate_se: t=1 exhaustively gives xi") {
  const Eigen::MatrixXd X = gaussian_matrix(12, 16, 5);
  const SEEstimate se = estimate_se(X, {1}, 100, 7);  // 16 subsets -> exhaustive
  CHECK(se.exhaustive);
  const double xi = X.colwise().squaredNorm().maxCoeff() / 12.0;
  CHECK(se.kappa_plus[0] == doctest::Approx(xi).epsilon(1e-12));
}

TEST_CASE("estimate_se: sampled within exhaustive oracle, equality when covered") {
  const Eigen::MatrixXd X = gaussian_matrix(12, 16, 9);
  for (int t : {1, 2, 3}) {
    double kp = 0.0, km = 0.0;
    exact_se(X, t, kp, km);
    const SEEstimate sampled = estimate_se(X, {t}, 40, 11);
    CHECK(sampled.kappa_plus[0] <= kp + 1e-12);
    CHECK(sampled.kappa_minus[0] >= km - 1e-12);
    const SEEstimate full = estimate_se(X, {t}, 1000000, 11);
    CHECK(full.exhaustive);
    CHECK(full.kappa_plus[0] == doctest::Approx(kp).epsilon(1e-12));
    CHECK(full.kappa_minus[0] == doctest::Approx(km).epsilon(1e-12));
  }
}

TEST_CASE("estimate_se: determinism and monotone regularization") {
  const Eigen::MatrixXd X = gaussian_matrix(30, 60, 13);
  const SEEstimate a = estimate_se(X, {1, 2, 4, 8, 16}, 30, 17);
  const SEEstimate b = estimate_se(X, {1, 2, 4, 8, 16}, 30, 17);
  CHECK(a.kappa_plus == b.kappa_plus);
  CHECK(a.kappa_minus == b.kappa_minus);
  for (std::size_t i = 1; i < a.t_grid.size(); ++i) {
    CHECK(a.kappa_plus[i] >= a.kappa_plus[i - 1]);
    CHECK(a.kappa_minus[i] <= a.kappa_minus[i - 1]);
  }
  CHECK_THROWS_AS(estimate_se(X, {31}, 10, 1), DomainError);
}

TEST_CASE("ric_from_se") {
  CHECK(ric_from_se(1.0, 1.0) == 0.0);
  CHECK(ric_from_se(2.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  const double km = 0.37;
  CHECK(ric_from_se((3.0 + 2.0 * std::sqrt(2.0)) * km, km) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ric_from_se(1.0, 0.0) == 1.0);  // degenerate flag
}

TEST_CASE("h_r: L1 closed form for any rho0") {
  const Regularizer l1 = Regularizer::l1(0.7);
  for (double rho0 : {0.0, 0.3, 2.0}) {
    CHECK(h_r(l1, rho0, 1.5, 4, 9) ==
          doctest::Approx(std::sqrt(9.0 / 4.0) / 1.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(h_r(Regularizer::mcp(1.0, 1.0), 0.1, 1.0, 2, 4), UnsupportedKindError);
}

TEST_CASE("h_r: LSP closed form") {
  const double gamma = 0.01, xi = 1.0, alpha = 1.0;
  const int s = 2, t = 4;
  const double expect = std::sqrt(0.5) * (std::pow(0.01, -0.5) - 1.0) /
                        (std::pow(0.01, -0.25) - 1.0);
  CHECK(expect == doctest::Approx(2.943).epsilon(1e-3));
  CHECK(h_r_lsp_closed(gamma, xi, alpha, s, t) == doctest::Approx(expect).epsilon(1e-12));
  const Regularizer lsp = Regularizer::lsp(1.0, gamma);
  const double rho0 = constants(lsp, xi).zero_gap;
  CHECK(h_r(lsp, rho0, alpha, s, t) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("h_r: AMCP closed form at the matched gamma") {
  const double alpha = 1.1, xi = 1.0, phi = 0.4;
  const int s = 3, t = 7;
  const double gamma = phi / (1.0 + phi) * std::pow(alpha / t, 1.0 / phi) / xi;
  const Regularizer amcp = Regularizer::amcp(1.0, gamma, phi);
  const double rho0 = constants(amcp, xi).zero_gap;
  CHECK(h_r(amcp, rho0, alpha, s, t) ==
        doctest::Approx(h_r_amcp_closed(phi, alpha, s, t)).epsilon(1e-9));
}

TEST_CASE("h_r: Lq matches the SE threshold closed form") {
  for (double q : {0.3, 0.5, 0.8}) {
    const Regularizer lq = Regularizer::lq(1.0, q);
    const double alpha = 1.2;
    const int s = 5, t = 11;
    const double H = h_r(lq, 0.7, alpha, s, t);
    CHECK(4.0 * (std::sqrt(2.0) - 1.0) * H + 1.0 ==
          doctest::Approx(lq_se_threshold(q, alpha, s, t)).epsilon(1e-9));
  }
}

TEST_CASE("g_r: L1 closed form and large-t limit") {
  const Regularizer l1 = Regularizer::l1(1.0);
  const double alpha = 1.3;
  const int s = 4, t = 9;
  const double direct = std::sqrt(4.0 * 9.0) / 8.0 * ((8.0 / (alpha * 4.0)));
  CHECK(g_r(l1, 0.5, alpha, s, t) == doctest::Approx(direct).epsilon(1e-12));
  const int big = 10000;
  CHECK(g_r(l1, 0.5, alpha, s, big) / h_r(l1, 0.5, alpha, s, big) ==
        doctest::Approx(1.0).epsilon(1e-3));
  // LSP generic evaluation stays finite and positive
  CHECK(g_r(Regularizer::lsp(1.0, 0.01), 0.9, 1.0, 2, 5) > 0.0);
}

TEST_CASE("check_conditions: orthonormal design always passes") {
  SEEstimate se;
  se.t_grid = {1, 8, 16};
  se.kappa_plus = {1.0, 1.0, 1.0};
  se.kappa_minus = {1.0, 1.0, 1.0};
  const ConditionReport rep = check_conditions(Regularizer::lsp(1.0, 0.1), se, 4, 8, 0.01, -1.0,
                                               1e-3, 1e-4, 0.01, 100);
  CHECK(rep.varrho == 0.0);
  CHECK(rep.se_lhs == 1.0);
  CHECK(rep.passes_global);
  CHECK(rep.passes_agas);
  CHECK(rep.C1 > 0.0);
  CHECK(std::isfinite(rep.global_error_bound));
  CHECK(std::isfinite(rep.agas_error_bound));
  CHECK(rep.lambda_star == doctest::Approx(rep.lambda * constants(Regularizer::lsp(1.0, 0.1), 1.0)
                                                            .a_gamma)
                               .epsilon(1e-12));
}

TEST_CASE("check_conditions: LSP gamma sweep grows the SE headroom") {
  SEEstimate se;
  se.t_grid = {1, 8, 16};
  se.kappa_plus = {1.2, 1.8, 2.2};
  se.kappa_minus = {0.9, 0.6, 0.4};
  double prev_rhs = 0.0, prev_c1 = std::numeric_limits<double>::infinity();
  for (double gamma = 1e-1; gamma >= 0.9e-8; gamma *= 0.1) {
    const ConditionReport rep = check_conditions(Regularizer::lsp(1.0, gamma), se, 4, 8, 0.01,
                                                 -1.0, 1e-3, 1e-4, 0.01, 100);
    CHECK(rep.se_rhs_global > prev_rhs);  // H_r monotone growth as gamma -> 0
    if (rep.H_r > rep.varrho) {
      CHECK(rep.C1 < prev_c1);  // C1 monotone decreasing in H_r
      prev_c1 = rep.C1;
    }
    prev_rhs = rep.se_rhs_global;
  }
}

TEST_CASE("sparseness bound: LSP ratio parameterization, small gamma") {
  SEEstimate se;
  se.t_grid = {1, 10, 25, 50};
  se.kappa_plus = {1.1, 1.2, 1.25, 1.3};
  se.kappa_minus = {0.9, 0.8, 0.75, 0.7};
  const int s = 10;
  const double eta = 0.01, eps = 0.01;
  const int n = 200;
  const double gamma = 1e-4;
  const Regularizer shape = Regularizer::lsp(1.0, gamma);
  const double alpha = (1.0 + eta) / (1.0 - eta);
  const int t = static_cast<int>(std::ceil((alpha + 1.0) * s));
  const ConditionReport rep = check_conditions(shape, se, s, t, eta, -1.0, 1e-3, 1e-4, eps, n);
  REQUIRE(rep.C2 > 0.0);
  const Regularizer reg = shape.with_lambda(rep.lambda);
  const double beta0 = 1.0 / s, beta1 = std::sqrt(gamma);
  const SparsenessBound sb = sparseness_bound_ratio(reg, se, rep, s, eta, beta0, beta1);
  REQUIRE(sb.ok);
  // closed-form value of the bound with r0 = log(1 + u/gamma)
  const double c3 = rep.C2 * (1.0 + eta) * rep.lambda_star / rep.lambda;
  const double closed =
      1.0 + t * std::log1p(c3 / gamma) / std::log1p(1.0 / std::sqrt(gamma));
  CHECK(sb.bound == doctest::Approx(closed).epsilon(1e-6));
  CHECK(sb.bound / s <= 10.0);  // order-s sanity

  // large lambda* breaks the premise
  ConditionReport bad = rep;
  bad.lambda_star *= 1e9;
  bad.C2 *= 1e9;
  const SparsenessBound nb = sparseness_bound_ratio(reg, se, bad, s, eta, beta0, beta1);
  CHECK_FALSE(nb.ok);
  CHECK(nb.detail.find("premise") != std::string::npos);
}

TEST_CASE("sparseness bound: AGAS variant runs on a benign setup") {
  SEEstimate se;
  se.t_grid = {1, 10, 25, 50};
  se.kappa_plus = {1.0, 1.0, 1.0, 1.0};
  se.kappa_minus = {1.0, 1.0, 1.0, 1.0};
  const int s = 5;
  const double eta = 0.01, eps = 0.01;
  const Regularizer shape = Regularizer::lsp(1.0, 1e-4);
  const ConditionReport rep =
      check_conditions(shape, se, s, 12, eta, -1.0, 1e-6, 1e-8, eps, 200);
  REQUIRE(rep.c4_small > 0.0);
  const Regularizer reg = shape.with_lambda(rep.lambda);
  const SparsenessBound sb =
      sparseness_bound_agas(reg, se, rep, 12, eta, 1e-8, 1.0, std::sqrt(1e-4) * reg.lambda);
  CHECK(sb.ok);
  CHECK(std::isfinite(sb.bound));
}

TEST_CASE("re_upper_bound: orthonormal design") {
  const int n = 12;
  const Eigen::MatrixXd X = std::sqrt(static_cast<double>(n)) *
                            Eigen::MatrixXd::Identity(n, n);
  const double bound = re_upper_bound(X, Regularizer::l1(1.0), 3.0, {0, 1, 2}, 400, 5);
  CHECK(bound == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("re_upper_bound: S-supported directions keep it below the S-restricted Rayleigh") {
  const Eigen::MatrixXd X = gaussian_matrix(20, 30, 23);
  const std::vector<int> S = {1, 4, 7};
  const double bound = re_upper_bound(X, Regularizer::lsp(1.0, 0.1), 2.0, S, 2000, 9);
  Eigen::MatrixXd sub(20, 3);
  for (int j = 0; j < 3; ++j) sub.col(j) = X.col(S[static_cast<std::size_t>(j)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub.transpose() * sub / 20.0,
                                                    Eigen::EigenvaluesOnly);
  CHECK(bound <= es.eigenvalues().maxCoeff() + 1e-9);
  CHECK(bound >= 0.0);
  // empty feasible set -> +inf sentinel
  CHECK(std::isinf(re_upper_bound(X, Regularizer::l1(1.0), 0.0, {}, 1, 1)));
}
