#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kpz/distributions.hpp"
#include "kpz/fredholm.hpp"
#include "oracles.hpp"

using kpz::cplx;

TEST_CASE("rank-one kernel: det(I + u v^T) = 1 + <v, u>") {
  const auto g = kpz::real_line_grid(0.0, 1.0, 2, 10);
  auto u = [](cplx x) { return std::exp(x) * cplx(0.3, 0.1); };
  auto v = [](cplx y) { return std::cos(y); };
  const auto op = kpz::make_nystrom([&](cplx x, cplx y) { return u(x) * v(y); }, g);
  // int_0^1 e^x cos x dx = (e (cos 1 + sin 1) - 1) / 2
  const cplx exact = 1.0 + cplx(0.3, 0.1) * (std::exp(1.0) * (std::cos(1.0) + std::sin(1.0)) - 1.0) / 2.0;
  CHECK(std::abs(kpz::det_identity_plus(op.matrix) - exact) < 1e-12);
}

TEST_CASE("det_identity_plus against explicit small determinants") {
  Eigen::MatrixXcd m(2, 2);
  m << cplx(1, 2), cplx(0.5, 0), cplx(-1, 1), cplx(3, -1);
  const cplx a = 1.0 + m(0, 0), d = 1.0 + m(1, 1);
  CHECK(std::abs(kpz::det_identity_plus(m) - (a * d - m(0, 1) * m(1, 0))) < 1e-14);
  CHECK(std::abs(kpz::det_identity_plus(Eigen::MatrixXcd::Zero(5, 5)) - 1.0) < 1e-15);
  // a matrix with -1 eigenvalue gives zero
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(3, 3);
  s(1, 1) = -1.0;
  s(0, 2) = 4.0;
  CHECK(std::abs(kpz::det_identity_plus(s)) < 1e-15);
}

TEST_CASE("separable kernel of rank two on a contour") {
  // K(x, y) = a(x) b(y) + c(x) d(y) gives det(I + K) = det(I_2 + G) with G the 2x2 Gram matrix
  const auto g = kpz::real_line_grid(-1.0, 2.0, 4, 12);
  auto a = [](cplx x) { return x; };
  auto b = [](cplx y) { return 0.5 * y * y; };
  auto c = [](cplx x) { return cplx(1.0); };
  auto d = [](cplx y) { return 0.2 * std::exp(-y); };
  const auto op = kpz::make_nystrom([&](cplx x, cplx y) { return a(x) * b(y) + c(x) * d(y); }, g);
  auto inner = [&](auto f, auto h) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f(g.nodes[i]) * h(g.nodes[i]);
    return s;
  };
  Eigen::Matrix2cd G;
  G << inner(b, a), inner(b, c), inner(d, a), inner(d, c);
  CHECK(std::abs(kpz::det_identity_plus(op.matrix) - (Eigen::Matrix2cd::Identity() + G).determinant()) < 1e-12);
}

TEST_CASE("nystrom_det converges for a smooth kernel") {
  auto grid = [](int n) { return kpz::real_line_grid(0.0, 1.0, 1, n); };
  const auto r = kpz::nystrom_det([](cplx x, cplx y) { return 0.5 * std::exp(-x * y); }, grid, 4, 1e-12);
  CHECK(r.est_error < 1e-12);
  CHECK(r.n_used >= 4);
}

TEST_CASE("mu integral of a constant determinant returns the constant") {
  const auto g = kpz::build_mu_contour(40.0, 16);
  CHECK(std::abs(kpz::mu_integral([](cplx) { return cplx(0.7); }, g) - 0.7) < 1e-13);
}

TEST_CASE("GUE Tracy-Widom against Painleve II") {
  const double frozen[][2] = {{-3.0, 0.08031955324076517}, {-2.0, 0.41322414273800506}, {-1.0, 0.8072142420775279},
                              {0.0, 0.9693728283677125},   {1.0, 0.9975054381504034},  {2.0, 0.9998875536983549}};
  for (const auto& row : frozen) {
    const double s = row[0];
    const double ode = oracle::painleve(s).F2;
    CHECK(std::abs(ode - row[1]) < 1e-9);
    CHECK(std::abs(kpz::f_gue(s) - ode) < 1e-6);
  }
  CHECK(kpz::f_gue(8.0) > 0.9999);
}

TEST_CASE("one-point A2BM at X = 0 is GOE squared") {
  for (double s : {-3.0, -1.0, 0.0, 1.5}) {
    const double F1 = oracle::painleve(s).F1;
    CHECK(std::abs(kpz::f_a2bm(0.0, s) - F1 * F1) < 1e-6);
  }
}
