#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "kpz/kpz.h"

TEST_CASE("status names and version") {
  CHECK(std::string(kpz_status_name(KPZ_OK)) == "ok");
  CHECK(std::strlen(kpz_status_name(KPZ_ERR_BUDGET)) > 0);
  CHECK(std::strlen(kpz_version()) > 0);
}

TEST_CASE("config keys are validated") {
  kpz_config* c = nullptr;
  REQUIRE(kpz_config_create(&c) == KPZ_OK);
  CHECK(kpz_config_set(c, "mu_nodes", "12") == KPZ_OK);
  CHECK(kpz_config_set(c, "nodes", "3") == KPZ_ERR_ARG);
  CHECK(std::string(kpz_last_error()).find("nodes") != std::string::npos);
  CHECK(kpz_config_set(c, "mu_nodes", "abc") == KPZ_ERR_ARG);
  CHECK(kpz_config_set(c, "imag_tol", "-1") == KPZ_ERR_ARG);
  CHECK(kpz_config_set(nullptr, "mu_nodes", "12") == KPZ_ERR_ARG);
  char* js = nullptr;
  REQUIRE(kpz_config_json(c, &js) == KPZ_OK);
  CHECK(std::string(js).find("\"mu_nodes\":12") != std::string::npos);
  kpz_string_free(js);
  kpz_config_destroy(c);
}

TEST_CASE("GUE point and bad arguments") {
  double F = 0, im = 0;
  REQUIRE(kpz_dist_point(nullptr, KPZ_DIST_GUE, 0.0, 0.0, 0.0, &F, &im) == KPZ_OK);
  CHECK(std::abs(F - 0.9693728283677125) < 1e-6);
  CHECK(kpz_dist_point(nullptr, KPZ_DIST_EDGE, -1.0, 0.0, 0.0, &F, &im) == KPZ_ERR_ARG);
  CHECK(kpz_dist_point(nullptr, KPZ_DIST_GUE, 0.0, 0.0, 0.0, nullptr, &im) == KPZ_ERR_ARG);
  CHECK(kpz_finite_eps_cdf(nullptr, 0.3, 0.5, 1.0, 1, 0, &F) == KPZ_ERR_ARG);
  CHECK(std::strlen(kpz_last_error()) > 0);
  CHECK(kpz_dist_point(nullptr, KPZ_DIST_GUE, 0.0, 0.0, NAN, &F, &im) != KPZ_OK);
}

TEST_CASE("table round trip") {
  const double s[] = {-3.0, -2.0, -1.0, 0.0, 1.0};
  kpz_table* t = nullptr;
  REQUIRE(kpz_dist_table(nullptr, KPZ_DIST_GUE, 0.0, 0.0, s, 5, &t) == KPZ_OK);
  CHECK(kpz_table_size(t) == 5);
  double sv, F, im;
  REQUIRE(kpz_table_row(t, 3, &sv, &F, &im) == KPZ_OK);
  CHECK(sv == 0.0);
  CHECK(std::abs(F - 0.9693728283677125) < 1e-6);
  CHECK(kpz_table_row(t, 5, &sv, &F, &im) == KPZ_ERR_ARG);
  CHECK(kpz_table_check(t, 1e-6, 1e-6) == 0);
  CHECK(kpz_table_warning_count(t) == 0);
  double e = 0;
  REQUIRE(kpz_table_eval(t, 0.0, &e) == KPZ_OK);
  CHECK(std::abs(e - F) < 1e-15);
  char* csv = nullptr;
  REQUIRE(kpz_table_csv(t, &csv) == KPZ_OK);
  CHECK(std::string(csv).rfind("s,F,imag_residual\r\n", 0) == 0);
  kpz_string_free(csv);
  char* js = nullptr;
  REQUIRE(kpz_table_json(t, nullptr, &js) == KPZ_OK);
  CHECK(std::string(js).find("\"gue\"") != std::string::npos);
  kpz_string_free(js);

  const double unsorted[] = {1.0, 0.0};
  kpz_table* u = nullptr;
  CHECK(kpz_dist_table(nullptr, KPZ_DIST_GUE, 0.0, 0.0, unsorted, 2, &u) == KPZ_ERR_ARG);
  CHECK(u == nullptr);
  kpz_table_destroy(t);
}

TEST_CASE("samples and KS distance") {
  kpz_samples* smp = nullptr;
  REQUIRE(kpz_sample_edge(0.25, 1.0, 0.0, 50, 1, 1, &smp) == KPZ_OK);
  CHECK(kpz_samples_size(smp) == 50);
  CHECK(std::isfinite(kpz_samples_data(smp)[0]));
  const double s[] = {-6.0, -4.0, -2.0, 0.0, 2.0, 4.0};
  kpz_table* t = nullptr;
  REQUIRE(kpz_dist_table(nullptr, KPZ_DIST_GUE, 0.0, 0.0, s, 6, &t) == KPZ_OK);
  double d = -1;
  REQUIRE(kpz_ks_distance(smp, t, &d) == KPZ_OK);
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);
  kpz_table_destroy(t);
  kpz_samples_destroy(smp);
  CHECK(kpz_sample_edge(1.5, 1.0, 0.0, 10, 1, 1, &smp) == KPZ_ERR_ARG);
  CHECK(kpz_sample_edge(0.25, 1.0, 0.0, 0, 1, 1, &smp) == KPZ_ERR_ARG);
}

TEST_CASE("coupled experiments") {
  size_t viol = 99;
  double excess = -1;
  REQUIRE(kpz_sandwich(0.25, 1.0, 0.0, 100, 2, 1, &viol, &excess) == KPZ_OK);
  CHECK(viol == 0);
  double j, m1, m2, se;
  REQUIRE(kpz_fkg(0.25, 1.0, 0.0, 200, 3, 1, NAN, NAN, &j, &m1, &m2, &se) == KPZ_OK);
  // P(Z <= median) >= 1/2, more with ties
  CHECK(m1 >= 0.5);
  CHECK(m2 >= 0.5);
  CHECK(j <= std::min(m1, m2));
}
