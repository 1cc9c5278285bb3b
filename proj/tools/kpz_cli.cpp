#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kpz/kpz.h"

namespace {

using nlohmann::json;

// usage problems: exit 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// numerical failure: exit 1 with a diagnostic
struct NumericFailure : std::runtime_error {
  NumericFailure(kpz_status s, std::string where)
      : std::runtime_error(std::string(kpz_status_name(s)) + " in " + where + ": " + kpz_last_error()),
        status(s),
        where(std::move(where)) {}
  kpz_status status;
  std::string where;
};

void check(kpz_status s, const char* where) {
  if (s != KPZ_OK) throw NumericFailure(s, where);
}

struct CStr {
  char* p = nullptr;
  ~CStr() { kpz_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Config {
  kpz_config* c = nullptr;
  Config() { check(kpz_config_create(&c), "config"); }
  ~Config() { kpz_config_destroy(c); }
  void set(const std::string& k, const std::string& v) {
    if (kpz_config_set(c, k.c_str(), v.c_str()) != KPZ_OK) throw UsageError(kpz_last_error());
  }
  json to_json() const {
    CStr s;
    check(kpz_config_json(c, &s.p), "config");
    return json::parse(s.str());
  }
};

std::vector<double> parse_grid(const std::string& spec) {
  // a:b:n, n points from a to b inclusive
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("grid must look like a:b:n, got " + spec);
  double a, b;
  long n;
  try {
    std::size_t i1, i2, i3;
    a = std::stod(parts[0], &i1);
    b = std::stod(parts[1], &i2);
    n = std::stol(parts[2], &i3);
    if (i1 != parts[0].size() || i2 != parts[1].size() || i3 != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw UsageError("grid must look like a:b:n, got " + spec);
  }
  if (n < 1 || n > 100000) throw UsageError("grid size must lie in [1, 100000]");
  if (n == 1 && a != b) throw UsageError("a one-point grid needs a == b");
  if (n > 1 && !(b > a)) throw UsageError("grid needs a < b");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
  return g;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, ',')) {
    try {
      std::size_t i;
      out.push_back(std::stod(p, &i));
      if (i != p.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw UsageError("bad number list: " + s);
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path);
  f << text;
}

json meta(const Config& cfg, const std::string& command) {
  return {{"command", command}, {"version", kpz_version()}, {"numeric", cfg.to_json()}};
}

std::string csv_with_meta(const json& m, const std::string& csv) {
  return "# " + m.dump() + "\r\n" + csv;
}

kpz_dist_kind parse_kind(const std::string& k) {
  if (k == "edge") return KPZ_DIST_EDGE;
  if (k == "fan") return KPZ_DIST_FAN;
  if (k == "a2bm") return KPZ_DIST_A2BM;
  if (k == "gue") return KPZ_DIST_GUE;
  throw UsageError("unknown kind " + k);
}

struct TableHandle {
  kpz_table* t = nullptr;
  ~TableHandle() { kpz_table_destroy(t); }
};

struct SamplesHandle {
  kpz_samples* s = nullptr;
  ~SamplesHandle() { kpz_samples_destroy(s); }
};

// key = value lines, '#' comments
void load_config_file(const std::string& path, Config& cfg, std::uint64_t& seed, bool& seed_set) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  std::string line;
  int no = 0;
  while (std::getline(f, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
    const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "seed") {
      try {
        seed = std::stoull(v);
      } catch (const std::exception&) {
        throw UsageError("bad seed in " + path);
      }
      seed_set = true;
    } else {
      cfg.set(k, v);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KPZ edge crossover distributions and WASEP simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kpz_version()));

  int threads = 0;
  std::string config_file;
  std::vector<std::string> overrides;
  std::uint64_t seed = 1;
  app.add_option("--threads", threads, "worker threads (default: KPZ_THREADS or all cores)");
  app.add_option("--config", config_file, "key = value file with numeric settings and seed");
  app.add_option("--set", overrides, "numeric override key=value");
  app.add_option("--seed", seed, "base seed (KPZ_SEED overrides)");

  // dist
  auto* dist = app.add_subcommand("dist", "distribution table");
  std::string kind = "edge", s_grid, out, format = "csv", dump_contours;
  double T = std::numeric_limits<double>::quiet_NaN(), X = 0.0;
  bool strict = false;
  dist->add_option("--kind", kind, "edge | fan | a2bm | gue");
  dist->add_option("--T", T, "time parameter");
  dist->add_option("--X", X, "space parameter");
  dist->add_option("--s", s_grid, "a:b:n")->required();
  dist->add_option("--out", out, "output file (default stdout)");
  dist->add_option("--format", format, "csv | json");
  dist->add_option("--dump-contours", dump_contours, "write the quadrature grids as JSON");
  dist->add_flag("--strict", strict, "exit 1 on range or monotonicity warnings");

  // simulate
  auto* sim = app.add_subcommand("simulate", "raw WASEP samples");
  double eps = 0.25, rho_minus = 0.0, rho_plus = 0.5;
  std::size_t n_trials = 1000;
  std::string stat = "edge";
  double sim_T = 1.0, sim_X = 0.0;
  sim->add_option("--eps", eps);
  sim->add_option("--T", sim_T);
  sim->add_option("--X", sim_X);
  sim->add_option("--rho-minus", rho_minus);
  sim->add_option("--rho-plus", rho_plus);
  sim->add_option("--n-trials", n_trials);
  sim->add_option("--stat", stat, "edge (X^2 - 2^{1/3} h) | fluc (h^fluc)");
  sim->add_option("--out", out);

  // compare
  auto* cmp = app.add_subcommand("compare", "simulation against the exact laws");
  std::string eps_list = "0.25,0.04", cmp_grid = "-10:6:33";
  double cmp_T = 1.0, cmp_X = 0.0;
  std::size_t cmp_trials = 10000, mc_trials = 100000;
  double fe_eps = 0.09, fe_t = 5.0;
  long fe_m = 2, fe_x = 1;
  cmp->add_option("--eps", eps_list, "comma separated, decreasing");
  cmp->add_option("--T", cmp_T);
  cmp->add_option("--X", cmp_X);
  cmp->add_option("--s", cmp_grid, "a:b:n grid of the reference table");
  cmp->add_option("--n-trials", cmp_trials);
  cmp->add_option("--mc-trials", mc_trials);
  cmp->add_option("--fe-eps", fe_eps);
  cmp->add_option("--fe-t", fe_t);
  cmp->add_option("--fe-m", fe_m);
  cmp->add_option("--fe-x", fe_x);
  cmp->add_option("--out", out);

  // validate
  auto* val = app.add_subcommand("validate", "identity and invariant suite");
  bool full = false;
  val->add_flag("--full", full, "include the representation triangle");
  val->add_option("--out", out);

  // tails
  auto* tails = app.add_subcommand("tails", "upper tail bound and equilibrium sandwich tables");
  std::string tails_T = "1,10", tails_y = "1,2,3";
  tails->add_option("--T", tails_T);
  tails->add_option("--y", tails_y);
  tails->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Config cfg;
    bool seed_set = false;
    if (!config_file.empty()) load_config_file(config_file, cfg, seed, seed_set);
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value");
      cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (const char* env = std::getenv("KPZ_SEED")) {
      try {
        seed = std::stoull(env);
      } catch (const std::exception&) {
        throw UsageError("KPZ_SEED is not an unsigned integer");
      }
    }
    if (threads < 0) throw UsageError("--threads must be non-negative");
    if (threads > 0) kpz_set_threads(threads);

    if (*dist) {
      const kpz_dist_kind k = parse_kind(kind);
      if ((k == KPZ_DIST_EDGE || k == KPZ_DIST_FAN) && std::isnan(T)) throw UsageError("--T is required for " + kind);
      if (!std::isnan(T) && !(T > 0)) throw UsageError("--T must be positive");
      if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");
      const auto s = parse_grid(s_grid);
      if (!dump_contours.empty()) {
        if (k != KPZ_DIST_EDGE) throw UsageError("--dump-contours applies to the edge kind");
        CStr j;
        check(kpz_contours_json(cfg.c, T, X, &j.p), "contours");
        write_out(dump_contours, j.str());
      }
      TableHandle t;
      check(kpz_dist_table(cfg.c, k, std::isnan(T) ? 0.0 : T, X, s.data(), s.size(), &t.t), "dist");
      const double slack = 1e-6;
      kpz_table_check(t.t, slack, 1e-6);
      json m = meta(cfg, "dist");
      m["kind"] = kind;
      m["T"] = std::isnan(T) ? json() : json(T);
      m["X"] = X;
      CStr body;
      if (format == "csv") {
        check(kpz_table_csv(t.t, &body.p), "csv");
        write_out(out, csv_with_meta(m, body.str()));
      } else {
        check(kpz_table_json(t.t, cfg.c, &body.p), "json");
        json j = json::parse(body.str());
        j["meta"] = m;
        write_out(out, j.dump(2) + "\n");
      }
      const std::size_t nw = kpz_table_warning_count(t.t);
      for (std::size_t i = 0; i < nw; ++i) std::cerr << "warning: " << kpz_table_warning(t.t, i) << "\n";
      return strict && nw > 0 ? 1 : 0;
    }

    if (*sim) {
      if (n_trials == 0) throw UsageError("--n-trials must be positive");
      if (stat != "edge" && stat != "fluc") throw UsageError("--stat must be edge or fluc");
      SamplesHandle sm;
      if (stat == "edge") {
        if (rho_minus != 0.0 || rho_plus != 0.5) throw UsageError("the edge statistic uses rho = (0, 1/2)");
        check(kpz_sample_edge(eps, sim_T, sim_X, n_trials, seed, threads, &sm.s), "simulate");
      } else {
        check(kpz_sample_fluctuation(eps, sim_T, sim_X, rho_minus, rho_plus, n_trials, seed, threads, &sm.s),
              "simulate");
      }
      json m = meta(cfg, "simulate");
      m.update({{"eps", eps}, {"T", sim_T}, {"X", sim_X}, {"rho_minus", rho_minus}, {"rho_plus", rho_plus},
                {"seed", seed}, {"stat", stat}});
      std::ostringstream os;
      os.precision(17);
      os << "trial,value\r\n";
      const double* d = kpz_samples_data(sm.s);
      for (std::size_t i = 0; i < kpz_samples_size(sm.s); ++i) os << i << "," << d[i] << "\r\n";
      write_out(out, csv_with_meta(m, os.str()));
      return 0;
    }

    if (*cmp) {
      if (cmp_trials == 0 || mc_trials == 0) throw UsageError("trial counts must be positive");
      const auto eps_v = parse_list(eps_list);
      const auto s = parse_grid(cmp_grid);
      if (s.size() < 3) throw UsageError("the reference grid needs at least three points");
      TableHandle ref;
      check(kpz_dist_table(cfg.c, KPZ_DIST_EDGE, cmp_T, cmp_X, s.data(), s.size(), &ref.t), "reference table");
      json rep = meta(cfg, "compare");
      rep.update({{"T", cmp_T}, {"X", cmp_X}, {"seed", seed}, {"n_trials", cmp_trials}});
      rep["ks"] = json::array();
      std::vector<double> ks;
      for (std::size_t i = 0; i < eps_v.size(); ++i) {
        SamplesHandle sm;
        check(kpz_sample_edge(eps_v[i], cmp_T, cmp_X, cmp_trials, seed + i, threads, &sm.s), "simulate");
        double d = 0.0;
        check(kpz_ks_distance(sm.s, ref.t, &d), "ks");
        ks.push_back(d);
        rep["ks"].push_back({{"eps", eps_v[i]}, {"ks", d}});
      }
      bool trend = true;
      for (std::size_t i = 1; i < ks.size(); ++i) trend = trend && ks[i] < ks[i - 1];
      double exact = 0, p = 0, se = 0;
      check(kpz_finite_eps_cdf(cfg.c, fe_eps, 0.5, fe_t, fe_m, fe_x, &exact), "finite eps");
      check(kpz_particle_mc(fe_eps, 0.5, fe_t, fe_m, fe_x, mc_trials, seed + 1000, threads, &p, &se), "monte carlo");
      const bool agree = std::abs(exact - p) <= 3.0 * se;
      rep["ks_trend_decreasing"] = trend;
      rep["finite_eps"] = {{"eps", fe_eps}, {"t", fe_t},    {"m", fe_m},         {"x", fe_x},
                           {"exact", exact}, {"mc", p},     {"mc_se", se},       {"ci95", {p - 1.96 * se, p + 1.96 * se}},
                           {"within_3se", agree}};
      write_out(out, rep.dump(2) + "\n");
      return trend && agree ? 0 : 1;
    }

    if (*val) {
      CStr j;
      int ok = 0;
      check(kpz_validate(cfg.c, full ? 1 : 0, &j.p, &ok), "validate");
      json rep = meta(cfg, "validate");
      rep["checks"] = json::parse(j.str());
      rep["all_pass"] = ok != 0;
      write_out(out, rep.dump(2) + "\n");
      return ok ? 0 : 1;
    }

    if (*tails) {
      const auto Tv = parse_list(tails_T), yv = parse_list(tails_y);
      for (double t : Tv)
        if (!(t >= 1.0)) throw UsageError("the tail bound needs T >= 1");
      CStr j;
      int ok = 0;
      check(kpz_tails(cfg.c, Tv.data(), Tv.size(), yv.data(), yv.size(), &j.p, &ok), "tails");
      json rep = meta(cfg, "tails");
      rep["tables"] = json::parse(j.str());
      rep["all_hold"] = ok != 0;
      write_out(out, rep.dump(2) + "\n");
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericFailure& e) {
    json d = {{"error", kpz_status_name(e.status)}, {"where", e.where}, {"message", e.what()},
              {"version", kpz_version()}};
    std::cerr << d.dump() << "\n";
    return e.status == KPZ_ERR_ARG ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "InternalError"}, {"message", e.what()}}).dump() << "\n";
    return 1;
  }
  return 0;
}
