#include "kpz/kpz.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <initializer_list>
#include <json.hpp>
#include <limits>
#include <string>

#include "kpz/asep.hpp"
#include "kpz/contours.hpp"
#include "kpz/distributions.hpp"
#include "kpz/parallel.hpp"
#include "kpz/validation.hpp"

struct kpz_config {
  kpz::NumericConfig cfg;
};

struct kpz_table {
  kpz::DistTable table;
  std::unique_ptr<kpz::TableInterpolant> spline;
};

struct kpz_samples {
  std::vector<double> v;
};

namespace {

thread_local std::string g_last_error;

kpz_status status_of(kpz::ErrorKind k) {
  using kpz::ErrorKind;
  switch (k) {
    case ErrorKind::Arg: return KPZ_ERR_ARG;
    case ErrorKind::Pole: return KPZ_ERR_POLE;
    case ErrorKind::Convergence: return KPZ_ERR_CONVERGENCE;
    case ErrorKind::ContourPole: return KPZ_ERR_CONTOUR_POLE;
    case ErrorKind::Geometry: return KPZ_ERR_GEOMETRY;
    case ErrorKind::Constraint: return KPZ_ERR_CONSTRAINT;
    case ErrorKind::Branch: return KPZ_ERR_BRANCH;
    case ErrorKind::Singularity: return KPZ_ERR_SINGULARITY;
    case ErrorKind::Numerical: return KPZ_ERR_NUMERICAL;
    case ErrorKind::Domain: return KPZ_ERR_DOMAIN;
    case ErrorKind::Budget: return KPZ_ERR_BUDGET;
    case ErrorKind::Window: return KPZ_ERR_WINDOW;
  }
  return KPZ_ERR_INTERNAL;
}

template <class F>
kpz_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return KPZ_OK;
  } catch (const kpz::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KPZ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return KPZ_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) kpz::fail(kpz::ErrorKind::Arg, std::string("null ") + what);
}

void finite(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) kpz::fail(kpz::ErrorKind::Arg, "arguments must be finite");
}

void trials(size_t n) {
  if (n == 0) kpz::fail(kpz::ErrorKind::Arg, "number of trials must be positive");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const kpz::NumericConfig& cfg_of(const kpz_config* c) {
  static const kpz::NumericConfig defaults;
  return c ? c->cfg : defaults;
}

kpz::DistKind kind_of(kpz_dist_kind k) {
  switch (k) {
    case KPZ_DIST_EDGE: return kpz::DistKind::Edge;
    case KPZ_DIST_FAN: return kpz::DistKind::Fan;
    case KPZ_DIST_A2BM: return kpz::DistKind::A2BM;
    case KPZ_DIST_GUE: return kpz::DistKind::GUE;
  }
  kpz::fail(kpz::ErrorKind::Arg, "unknown distribution kind");
}

double parse_double(const char* v) {
  std::size_t pos = 0;
  const std::string s(v);
  double d = 0.0;
  try {
    d = std::stod(s, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) kpz::fail(kpz::ErrorKind::Arg, "not a number: " + s);
  return d;
}

int parse_int(const char* v) {
  const double d = parse_double(v);
  if (d != std::floor(d) || std::abs(d) > 1e9) kpz::fail(kpz::ErrorKind::Arg, std::string("not an integer: ") + v);
  return static_cast<int>(d);
}

}  // namespace

extern "C" {

const char* kpz_version(void) { return KPZ_VERSION_STRING; }

const char* kpz_status_name(kpz_status s) {
  switch (s) {
    case KPZ_OK: return "ok";
    case KPZ_ERR_ARG: return "ArgError";
    case KPZ_ERR_POLE: return "PoleError";
    case KPZ_ERR_CONVERGENCE: return "ConvergenceError";
    case KPZ_ERR_CONTOUR_POLE: return "ContourPoleError";
    case KPZ_ERR_GEOMETRY: return "GeometryError";
    case KPZ_ERR_CONSTRAINT: return "ConstraintError";
    case KPZ_ERR_BRANCH: return "BranchError";
    case KPZ_ERR_SINGULARITY: return "SingularityError";
    case KPZ_ERR_NUMERICAL: return "NumericalError";
    case KPZ_ERR_DOMAIN: return "DomainError";
    case KPZ_ERR_BUDGET: return "BudgetError";
    case KPZ_ERR_WINDOW: return "WindowBreachError";
    case KPZ_ERR_INTERNAL: return "InternalError";
  }
  return "unknown";
}

const char* kpz_last_error(void) { return g_last_error.c_str(); }
void kpz_string_free(char* s) { std::free(s); }

int kpz_default_threads(void) { return kpz::default_threads(); }
void kpz_set_threads(int n) { kpz::set_default_threads(n); }

kpz_status kpz_config_create(kpz_config** out) {
  return guarded([&] {
    need(out, "output");
    *out = new kpz_config();
  });
}

void kpz_config_destroy(kpz_config* c) { delete c; }

kpz_status kpz_config_set(kpz_config* c, const char* key, const char* value) {
  return guarded([&] {
    need(c, "config");
    need(key, "key");
    need(value, "value");
    auto& g = c->cfg;
    const std::string k(key);
    if (k == "n_per_segment") g.n_per_segment = parse_int(value);
    else if (k == "mu_nodes") g.mu_nodes = parse_int(value);
    else if (k == "mu_x_max") g.mu_x_max = parse_double(value);
    else if (k == "tail_height") g.tail_height = parse_double(value);
    else if (k == "imag_tol") g.imag_tol = parse_double(value);
    else if (k == "range_tol") g.range_tol = parse_double(value);
    else if (k == "threads") g.threads = parse_int(value);
    else if (k == "line_nodes") g.line_nodes = parse_int(value);
    else if (k == "ktilde_x_nodes") g.ktilde_x_nodes = parse_int(value);
    else if (k == "ktilde_t_nodes") g.ktilde_t_nodes = parse_int(value);
    else if (k == "eps_eta_nodes") g.eps_eta_nodes = parse_int(value);
    else if (k == "eps_zeta_nodes") g.eps_zeta_nodes = parse_int(value);
    else if (k == "eps_mu_nodes") g.eps_mu_nodes = parse_int(value);
    else if (k == "eps_tol") g.eps_tol = parse_double(value);
    else if (k == "eps_max_nodes") g.eps_max_nodes = parse_int(value);
    else kpz::fail(kpz::ErrorKind::Arg, "unknown config key: " + k);
    if (g.n_per_segment < 2 || g.mu_nodes < 2 || g.line_nodes < 2 || g.ktilde_x_nodes < 2 || g.ktilde_t_nodes < 2 ||
        g.eps_eta_nodes < 4 || g.eps_zeta_nodes < 4 || g.eps_mu_nodes < 4)
      kpz::fail(kpz::ErrorKind::Arg, "node counts are too small");
    if (!(g.mu_x_max > 0 && g.tail_height > 0 && g.imag_tol > 0 && g.range_tol >= 0 && g.eps_tol > 0))
      kpz::fail(kpz::ErrorKind::Arg, "lengths and tolerances must be positive");
  });
}

kpz_status kpz_config_json(const kpz_config* c, char** out) {
  return guarded([&] {
    need(out, "output");
    *out = dup(kpz::config_to_json(cfg_of(c)));
  });
}

kpz_status kpz_dist_point(const kpz_config* c, kpz_dist_kind kind, double T, double X, double s, double* F,
                          double* imag) {
  return guarded([&] {
    need(F, "output");
    finite({T, X, s});
    const auto& g = cfg_of(c);
    kpz::DistPoint p;
    switch (kind) {
      case KPZ_DIST_EDGE: p = kpz::edge_point(T, X, s, g); break;
      case KPZ_DIST_FAN: p = kpz::fan_point(T, s, g); break;
      case KPZ_DIST_A2BM: p.F = kpz::f_a2bm(X, s, g); break;
      case KPZ_DIST_GUE: p.F = kpz::f_gue(s, g); break;
      default: kpz::fail(kpz::ErrorKind::Arg, "unknown distribution kind");
    }
    *F = p.F;
    if (imag) *imag = p.imag;
  });
}

kpz_status kpz_ktilde_point(const kpz_config* c, double T, double s, double* F) {
  return guarded([&] {
    need(F, "output");
    finite({T, s});
    *F = kpz::ktilde_point(T, s, cfg_of(c)).F;
  });
}

kpz_status kpz_finite_eps_cdf(const kpz_config* c, double eps, double rho_plus, double t, long m, long x, double* F) {
  return guarded([&] {
    need(F, "output");
    finite({eps, rho_plus, t});
    *F = kpz::finite_eps_cdf(eps, rho_plus, t, m, x, cfg_of(c));
  });
}

kpz_status kpz_dist_table(const kpz_config* c, kpz_dist_kind kind, double T, double X, const double* s, size_t n,
                          kpz_table** out) {
  return guarded([&] {
    need(out, "output");
    if (n > 0) need(s, "s grid");
    auto t = std::make_unique<kpz_table>();
    t->table = kpz::dist_table(kind_of(kind), T, X, std::vector<double>(s, s + n), cfg_of(c));
    *out = t.release();
  });
}

void kpz_table_destroy(kpz_table* t) { delete t; }
size_t kpz_table_size(const kpz_table* t) { return t ? t->table.s.size() : 0; }

kpz_status kpz_table_row(const kpz_table* t, size_t i, double* s, double* F, double* imag) {
  return guarded([&] {
    need(t, "table");
    if (i >= t->table.s.size()) kpz::fail(kpz::ErrorKind::Arg, "row index out of range");
    if (s) *s = t->table.s[i];
    if (F) *F = t->table.F[i];
    if (imag) *imag = t->table.imag_residual[i];
  });
}

size_t kpz_table_check(kpz_table* t, double monotone_slack, double range_tol) {
  if (!t) return 0;
  const size_t before = t->table.warnings.size();
  kpz::check_table(t->table, monotone_slack, range_tol);
  return t->table.warnings.size() - before;
}

size_t kpz_table_warning_count(const kpz_table* t) { return t ? t->table.warnings.size() : 0; }

const char* kpz_table_warning(const kpz_table* t, size_t i) {
  if (!t || i >= t->table.warnings.size()) return nullptr;
  return t->table.warnings[i].c_str();
}

kpz_status kpz_table_csv(const kpz_table* t, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "output");
    *out = dup(kpz::table_to_csv(t->table));
  });
}

kpz_status kpz_table_json(const kpz_table* t, const kpz_config* c, char** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "output");
    *out = dup(kpz::table_to_json(t->table, cfg_of(c)));
  });
}

kpz_status kpz_table_eval(const kpz_table* t, double s, double* F) {
  return guarded([&] {
    need(t, "table");
    need(F, "output");
    auto* mt = const_cast<kpz_table*>(t);
    if (!mt->spline) mt->spline = std::make_unique<kpz::TableInterpolant>(t->table);
    *F = (*mt->spline)(s);
  });
}

kpz_status kpz_contours_json(const kpz_config* c, double T, double X, char** out) {
  return guarded([&] {
    need(out, "output");
    const auto& g = cfg_of(c);
    const auto ec = kpz::build_edge_contours(T, X, g.tail_height, g.n_per_segment, true);
    const auto mu = kpz::build_mu_contour(g.mu_x_max, g.mu_nodes);
    nlohmann::json j;
    j["T"] = T;
    j["X"] = X;
    j["eta"] = nlohmann::json::parse(kpz::grid_to_json(ec.eta));
    j["zeta"] = nlohmann::json::parse(kpz::grid_to_json(ec.zeta));
    j["mu"] = nlohmann::json::parse(kpz::grid_to_json(mu));
    *out = dup(j.dump());
  });
}

void kpz_samples_destroy(kpz_samples* s) { delete s; }
size_t kpz_samples_size(const kpz_samples* s) { return s ? s->v.size() : 0; }
const double* kpz_samples_data(const kpz_samples* s) { return s ? s->v.data() : nullptr; }

kpz_status kpz_ks_distance(const kpz_samples* s, const kpz_table* t, double* out) {
  return guarded([&] {
    need(s, "samples");
    need(t, "table");
    need(out, "output");
    const kpz::TableInterpolant F(t->table);
    *out = kpz::ks_distance(kpz::EmpiricalCDF(s->v), [&](double x) { return F(x); });
  });
}

kpz_status kpz_sample_edge(double eps, double T, double X, size_t n, uint64_t seed, int threads, kpz_samples** out) {
  return guarded([&] {
    need(out, "output");
    finite({eps, T, X});
    trials(n);
    auto s = std::make_unique<kpz_samples>();
    s->v = kpz::sample_edge_statistic(eps, T, X, n, seed, threads);
    *out = s.release();
  });
}

kpz_status kpz_sample_fluctuation(double eps, double T, double X, double rho_minus, double rho_plus, size_t n,
                                  uint64_t seed, int threads, kpz_samples** out) {
  return guarded([&] {
    need(out, "output");
    finite({eps, T, X, rho_minus, rho_plus});
    trials(n);
    auto s = std::make_unique<kpz_samples>();
    s->v.resize(n);
    kpz::parallel_for(
        n,
        [&](std::size_t k) {
          kpz::Rng rng = kpz::make_rng(seed, k);
          s->v[k] = kpz::fluctuation_sample(eps, T, X, rho_minus, rho_plus, rng);
        },
        threads);
    *out = s.release();
  });
}

kpz_status kpz_particle_mc(double eps, double rho_plus, double t, long m, long x, size_t n, uint64_t seed,
                           int threads, double* p, double* se) {
  return guarded([&] {
    need(p, "output");
    finite({eps, rho_plus, t});
    trials(n);
    const auto e = kpz::particle_position_mc(eps, rho_plus, t, m, x, n, seed, threads);
    *p = e.p;
    if (se) *se = e.se;
  });
}

kpz_status kpz_hydrodynamics(double eps, double rho_minus, double rho_plus, const double* v, size_t nv, int runs,
                             uint64_t seed, int threads, double* mean, double* profile, double* se) {
  return guarded([&] {
    need(v, "velocities");
    need(mean, "output");
    const auto r = kpz::hydrodynamics_experiment(eps, rho_minus, rho_plus, std::vector<double>(v, v + nv), runs, seed,
                                                 threads);
    for (size_t i = 0; i < nv; ++i) {
      mean[i] = r.mean[i];
      if (profile) profile[i] = r.profile[i];
      if (se) se[i] = r.stderr_mean[i];
    }
  });
}

kpz_status kpz_sandwich(double eps, double T, double X, size_t n, uint64_t seed, int threads, size_t* violations,
                        double* max_excess) {
  return guarded([&] {
    need(violations, "output");
    finite({eps, T, X});
    trials(n);
    const auto r = kpz::sandwich_experiment(eps, T, X, n, seed, threads);
    *violations = r.violations;
    if (max_excess) *max_excess = r.max_excess;
  });
}

kpz_status kpz_fkg(double eps, double T, double X, size_t n, uint64_t seed, int threads, double s1, double s2,
                   double* joint, double* marg1, double* marg2, double* se) {
  return guarded([&] {
    need(joint, "output");
    finite({eps, T, X});
    trials(n);
    const auto z = kpz::fkg_samples(eps, T, X, n, seed, threads);
    auto median = [&](bool first) {
      std::vector<double> v;
      for (const auto& p : z) v.push_back(first ? p.first : p.second);
      std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
      return v[v.size() / 2];
    };
    if (z.empty()) kpz::fail(kpz::ErrorKind::Arg, "need at least one trial");
    if (std::isnan(s1)) s1 = median(true);
    if (std::isnan(s2)) s2 = median(false);
    const auto r = kpz::fkg_experiment(z, s1, s2);
    *joint = r.joint;
    if (marg1) *marg1 = r.marg1;
    if (marg2) *marg2 = r.marg2;
    if (se) *se = r.se;
  });
}

kpz_status kpz_validate(const kpz_config* c, int full, char** json, int* all_pass) {
  return guarded([&] {
    need(json, "output");
    const auto checks = kpz::run_validation(cfg_of(c), full != 0);
    bool ok = true;
    for (const auto& ch : checks) ok = ok && ch.pass;
    *json = dup(kpz::checks_to_json(checks));
    if (all_pass) *all_pass = ok ? 1 : 0;
  });
}

kpz_status kpz_tails(const kpz_config* c, const double* T, size_t nT, const double* y, size_t ny, char** json,
                     int* all_hold) {
  return guarded([&] {
    need(T, "T values");
    need(y, "y values");
    need(json, "output");
    const std::vector<double> Tv(T, T + nT), yv(y, y + ny);
    const auto tt = kpz::tail_table(Tv, yv, cfg_of(c));
    const auto st = kpz::sandwich_table(Tv, yv, cfg_of(c));
    bool ok = true;
    for (const auto& r : tt.rows) ok = ok && r.holds();
    for (const auto& r : st) ok = ok && r.ordered();
    *json = dup(kpz::tails_to_json(tt, st));
    if (all_hold) *all_hold = ok ? 1 : 0;
  });
}

}  // extern "C"
