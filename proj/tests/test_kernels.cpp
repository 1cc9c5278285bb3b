#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kpz/kernels.hpp"
#include "oracles.hpp"

using kpz::cplx;

TEST_CASE("csc closed form against a direct t-quadrature") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const cplx mu = std::polar(0.2 + 4.8 * U(rng), oracle::kPi * (0.5 + U(rng)));
    const cplx z(-1.6 + 1.2 * U(rng), -3.0 + 6.0 * U(rng));
    const cplx ref = oracle::csc_t_integral(mu, z);
    CHECK(std::abs(kpz::csc_integral_closed(mu, z) - ref) < 1e-8);
    CHECK(std::abs(kpz::csc_integral_quadrature(mu, z) - ref) < 1e-8);
  }
  CHECK_THROWS_AS(kpz::csc_integral_quadrature(cplx(-1.0), cplx(0.5)), kpz::Error);
}

TEST_CASE("exponential Airy moment identity") {
  for (auto [b, c] : std::vector<std::pair<double, double>>{{0.5, 0.0}, {1.0, -1.0}, {0.3, 2.0}, {1.5, 0.5}}) {
    const double ref = oracle::airy_moment(b, c);
    CHECK(std::abs(kpz::airy_moment_closed_side(b, c) - ref) < 1e-10);
    CHECK(std::abs(kpz::airy_moment_contour_side(b, c) - ref) < 1e-8);
  }
}

TEST_CASE("Airy kernel closed form") {
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.0})
    for (double y : {-2.0, 0.0, 0.7, 3.0}) {
      CHECK(std::abs(kpz::airy_kernel(x, y) - oracle::airy_kernel_bruteforce(x, y)) < 1e-10);
      CHECK(std::abs(kpz::kernel_airy2(0.3, x, 0.3, y) - kpz::airy_kernel(x, y)) < 1e-9);
    }
  CHECK(std::abs(kpz::airy_kernel(1.0, 1.0) - oracle::airy_kernel_bruteforce(1.0, 1.0)) < 1e-12);
}

TEST_CASE("A2BM bracket on both branches") {
  // for X' < 0 the bracket equals int_{-inf}^0 Ai(y + t) e^{-X' t} dt
  for (double Xp : {-1.5, -0.3})
    for (double y : {-2.0, 0.0, 1.0}) {
      std::vector<double> t, w;
      oracle::gl10(-160.0 / std::abs(Xp), 0.0, 4000, t, w);
      double ref = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) ref += w[i] * boost::math::airy_ai(y + t[i]) * std::exp(-Xp * t[i]);
      CHECK(std::abs(kpz::a2bm_bracket(Xp, y) - ref) < 1e-8);
    }
  // for X' > 0 compare with the defining form directly
  for (double y : {-1.0, 0.5}) {
    const double Xp = 0.8;
    std::vector<double> t, w;
    oracle::gl10(0.0, 40.0, 400, t, w);
    double tail = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) tail += w[i] * boost::math::airy_ai(y + t[i]) * std::exp(-Xp * t[i]);
    CHECK(std::abs(kpz::a2bm_bracket(Xp, y) - (std::exp(-Xp * Xp * Xp / 3.0 + Xp * y) - tail)) < 1e-10);
  }
  CHECK(std::abs(kpz::a2bm_perturbation(0.4, 0.8, -1.0) - boost::math::airy_ai(0.4) * kpz::a2bm_bracket(0.8, -1.0)) < 1e-14);
}

TEST_CASE("edge and fan kernels: csc form equals the t-integral form pointwise") {
  const auto c = kpz::build_edge_contours(1.0, 0.0, 10.0, 12, false);
  kpz::KernelParams kp;
  kp.T = 1.0;
  kp.X = 0.0;
  kp.s = -0.5;
  kp.mu_tilde = cplx(-0.7, 0.4);
  kp.zeta_grid = c.zeta;
  int compared = 0;
  for (std::size_t i = 0; i < c.eta.size(); i += 19)
    for (std::size_t j = 3; j < c.eta.size(); j += 31) {
      const cplx a = c.eta.nodes[i], b = c.eta.nodes[j];
      const cplx v = kpz::kernel_fan(1.0, -0.5, kp.mu_tilde, a, b, c.zeta);
      const cplx w = kpz::kernel_fan_tintegral(1.0, -0.5, kp.mu_tilde, a, b, c.zeta);
      CHECK(std::abs(v - w) <= 1e-8 * std::max(1.0, std::abs(v)));
      const cplx e = kpz::kernel_edge(kp, a, b);
      const cplx et = kpz::kernel_edge_tintegral(kp, a, b);
      CHECK(std::abs(e - et) <= 1e-8 * std::max(1.0, std::abs(e)));
      ++compared;
    }
  CHECK(compared >= 8);
}

TEST_CASE("Nystrom matrix entries match the pointwise kernel") {
  const auto c = kpz::build_edge_contours(1.0, 0.5, 10.0, 10, true);
  const auto M = kpz::EdgeKernelMatrix::edge(1.0, 0.5, 0.3, c);
  const cplx mu(-1.3, 0.2);
  const auto N = M.nystrom(mu);
  kpz::KernelParams kp{1.0, 0.5, 0.3, mu, c.zeta};
  for (std::size_t i : {0UL, 17UL, 40UL})
    for (std::size_t j : {5UL, 33UL}) {
      const cplx ref = kpz::kernel_edge(kp, c.eta.nodes[i], c.eta.nodes[j]) * c.eta.weights[j];
      CHECK(std::abs(N(i, j) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
      CHECK(std::abs(M.entry(mu, i, j) - N(i, j)) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("rescaled coordinates round trip") {
  for (double T : {0.5, 1.0, 20.0}) {
    const auto e = kpz::csc_gamma_from_edge(T, -1.2, 0.7);
    const auto b = kpz::edge_from_csc_gamma(T, e.s, e.X);
    CHECK(std::abs(b.s + 1.2) < 1e-13);
    CHECK(std::abs(b.X - 0.7) < 1e-13);
  }
}

TEST_CASE("scaling constants") {
  for (double eps : {0.3, 0.01, 1e-6}) {
    const double g = std::sqrt(eps), p = 0.5 * (1 - g), q = 0.5 * (1 + g);
    CHECK(std::abs(kpz::lambda_eps(eps) - 0.5 * std::log(q / p)) < 1e-14);
    CHECK(std::abs(kpz::nu_eps(eps) - (p + q - 2 * std::sqrt(p * q))) < 1e-15);
    CHECK(std::abs(kpz::diffusivity_eps(eps) - 2 * std::sqrt(p * q)) < 1e-15);
  }
  const auto sp = kpz::make_scaling(0.01, 2.0, 0.5, -1.0);
  CHECK(std::abs(sp.t - 2.0 * std::pow(0.01, -1.5)) < 1e-9);
  CHECK(std::abs(sp.gamma - 0.1) < 1e-15);
  CHECK(std::abs(sp.tau - 0.45 / 0.55) < 1e-15);
  CHECK_THROWS_AS(kpz::make_scaling(0.01, -1.0, 0.0, 0.0), kpz::Error);
}

TEST_CASE("products of the finite eps formula") {
  for (double tau : {0.3, 0.8})
    for (cplx m : {cplx(0.4, 0.2), cplx(-2.0, 1.0)}) {
      CHECK(std::abs(kpz::prefactor_product(m, tau) - oracle::q_product(m, tau)) < 1e-12 * std::max(1.0, std::abs(oracle::q_product(m, tau))));
      CHECK(std::abs(kpz::g_product(m, tau, 1.5) - oracle::q_product(-1.5 * m, tau)) < 1e-11 * std::max(1.0, std::abs(oracle::q_product(-1.5 * m, tau))));
    }
}

TEST_CASE("doubly infinite sum mu f and its continuation") {
  const double tau = 0.5;
  const cplx mu(-0.6, 0.3);
  auto direct = [&](cplx z) {
    cplx s = 0.0;
    for (int k = -200; k <= 200; ++k) {
      const double tk = std::pow(tau, k);
      s += tk * mu / (1.0 - tk * mu) * std::pow(z, k);
    }
    return s;
  };
  for (cplx z : {cplx(1.3, 0.2), cplx(-1.5, 0.1), cplx(0.2, 1.6)}) {
    CHECK(std::abs(kpz::mu_f_doubly_infinite(mu, z, tau) - direct(z)) < 1e-11);
    // S(z) = mu S(tau z) after continuation
    CHECK(std::abs(kpz::mu_f_doubly_infinite(mu, z, tau) - mu * kpz::mu_f_doubly_infinite(mu, tau * z, tau)) < 1e-10);
    CHECK(std::abs(kpz::f_doubly_infinite(mu, z, tau) * mu - direct(z)) < 1e-11);
  }
}
