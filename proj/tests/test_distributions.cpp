#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "kpz/distributions.hpp"
#include "oracles.hpp"

TEST_CASE("edge distribution at T = 1, X = 0, s = 0") {
  // frozen at the defaults; n_per_segment 20 moves it by 1.2e-7, the real-line K~ form agrees to 1.3e-7
  const auto p = kpz::edge_point(1.0, 0.0, 0.0);
  CHECK(std::abs(p.F - 0.7835088870) < 1e-6);
  CHECK(std::abs(p.imag) < 1e-8);
}

TEST_CASE("rescaled kernel gives the same distribution") {
  const double T = 1.0, X = 0.5, s = 0.0;
  const auto e = kpz::csc_gamma_from_edge(T, s, X);
  CHECK(std::abs(kpz::f_edge_rescaled(T, e.X, e.s) - kpz::f_edge(T, X, s)) < 1e-8);
}

TEST_CASE("tail argument and the sandwich bounds") {
  CHECK(std::abs(kpz::tail_argument(1.0, 0.0) + std::cbrt(2.0) * std::log(2.0)) < 1e-15);
  CHECK(std::abs(kpz::tail_argument(8.0, 1.0) - std::cbrt(2.0) * (1.0 - 0.5 * std::log(2.0))) < 1e-15);
  const auto b = kpz::eq_sandwich(0.9, 0.2);
  CHECK(b.lower_lo <= b.lower_hi);
  CHECK(b.upper_lo <= b.upper_hi);
  CHECK(std::abs(b.lower_lo - 0.01) < 1e-15);
  CHECK(std::abs(b.lower_hi - 0.2) < 1e-15);
  CHECK(std::abs(b.upper_lo - 0.04) < 1e-15);
  CHECK(std::abs(b.upper_hi - 0.4) < 1e-15);
}

TEST_CASE("small T kernel Psi") {
  const double pts[][4] = {{1.0, 0.5, 0.2, 0.1}, {0.0, 0.0, 0.3, 0.3}, {-0.4, 1.1, 0.0, 0.9}, {2.0, 2.0, 0.0, 0.0}};
  for (const auto& q : pts) {
    const double v = kpz::small_t_psi({q[0], q[1], q[2], q[3]});
    CHECK(std::abs(v - oracle::psi_bruteforce(q[0], q[1], q[2], q[3])) < 1e-7);
    // symmetric in (x, y) and in (x0, x0')
    CHECK(v == doctest::Approx(kpz::small_t_psi({q[1], q[0], q[2], q[3]})).epsilon(1e-14));
    CHECK(v == doctest::Approx(kpz::small_t_psi({q[0], q[1], q[3], q[2]})).epsilon(1e-14));
  }
  CHECK(std::abs(oracle::psi_bruteforce(1.0, 0.5, 0.2, 0.1) - 0.0660667717305638) < 1e-12);
}

TEST_CASE("small T covariance: closed-form quadrant agrees with the path form at B = 0 and is PSD") {
  kpz::BrownianPath zero;
  zero.dx = 0.01;
  zero.values.assign(6001, 0.0);
  for (double x : {-1.0, 0.0, 0.7})
    for (double y : {0.0, 1.5}) {
      const double ref = oracle::psi_quadrant(x, y);
      CHECK(std::abs(kpz::small_t_cov(x, y) - ref) < 1e-7);
      CHECK(std::abs(kpz::small_t_cov(x, y, &zero) - ref) < 1e-7);
    }

  const int n = 8;
  Eigen::MatrixXd C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) C(i, j) = kpz::small_t_cov(-2.0 + 0.6 * i, -2.0 + 0.6 * j);
  CHECK((C - C.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("heat baseline with a flat path is a normal CDF") {
  kpz::BrownianPath zero;
  zero.dx = 0.01;
  zero.values.assign(4001, 0.0);
  for (double T : {0.5, 2.0})
    for (double X : {-1.0, 0.0, 1.3}) CHECK(std::abs(kpz::heat_baseline(T, X, zero) - 0.5 * std::erfc(-X / std::sqrt(2.0 * T))) < 1e-10);
  CHECK_THROWS_AS(kpz::heat_kernel(0.0, 1.0), kpz::Error);
}

TEST_CASE("finite eps formula: a CDF in x") {
  kpz::NumericConfig cfg;
  cfg.eps_eta_nodes = 48;
  cfg.eps_zeta_nodes = 48;
  cfg.eps_mu_nodes = 64;
  cfg.eps_tol = 1e-6;
  double prev = -1.0;
  for (long x : {-4L, 1L, 3L, 9L}) {
    const auto p = kpz::finite_eps_point(0.16, 0.5, 1.0, 1, x, cfg);
    CHECK(p.F > prev);
    CHECK(p.F > -1e-6);
    CHECK(p.F < 1.0 + 1e-6);
    CHECK(std::abs(p.imag) < 1e-8);
    prev = p.F;
  }
  CHECK(prev > 0.998);
  cfg.eps_max_nodes = 60;
  CHECK_THROWS_AS(kpz::finite_eps_cdf(0.16, 0.5, 1.0, 1, 9, cfg), kpz::Error);
}

TEST_CASE("tables: checks, CSV and spline") {
  kpz::DistTable t;
  t.kind = kpz::DistKind::GUE;
  t.s = {-2.0, -1.0, 0.0, 1.0};
  t.F = {0.4, 0.8, 0.79, 1.2};
  t.imag_residual = {0.0, 0.0, 0.0, 0.0};
  CHECK_FALSE(kpz::check_table(t));
  CHECK(t.warnings.size() == 2);

  const auto g = kpz::dist_table(kpz::DistKind::GUE, 0.0, 0.0, {-4.0, -3.5, -3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0});
  CHECK(g.warnings.empty());
  const std::string csv = kpz::table_to_csv(g);
  CHECK(csv.rfind("s,F,imag_residual\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  const auto j = nlohmann::json::parse(kpz::table_to_json(g, {}));
  CHECK(j["kind"].get<std::string>() == "gue");

  kpz::TableInterpolant f(g);
  CHECK(std::abs(f(-1.0) - g.F[6]) < 1e-15);
  CHECK(std::abs(f(-1.25) - oracle::painleve(-1.25).F2) < 2e-3);
  CHECK(f(-10.0) == g.F.front());
  CHECK(f(10.0) == g.F.back());
}
