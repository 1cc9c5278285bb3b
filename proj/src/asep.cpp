#include "kpz/asep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "kpz/errors.hpp"
#include "kpz/kernels.hpp"
#include "kpz/parallel.hpp"

namespace kpz {

namespace {

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

double exp_draw(Rng& rng, double rate) {
  double u;
  do u = uniform01(rng);
  while (u <= 0.0);
  return -std::log(u) / rate;
}

void check_pq(double p, double q) {
  if (p < 0.0 || q < 0.0 || std::abs(p + q - 1.0) > 1e-12) fail(ErrorKind::Arg, "need p, q >= 0 with p + q = 1");
}

// Allowed moves split by direction; each list holds bond indices b (sites b, b+1 in window offsets).
class MoveSets {
 public:
  explicit MoveSets(const std::vector<std::uint8_t>& occ) : occ_(occ), pos_(occ.size(), -1) {
    for (std::size_t b = 0; b + 1 < occ.size(); ++b) refresh(static_cast<long>(b));
  }
  void refresh(long b) {
    if (b < 0 || b + 1 >= static_cast<long>(occ_.size())) return;
    const int want = occ_[b] && !occ_[b + 1] ? 0 : (!occ_[b] && occ_[b + 1] ? 1 : -1);
    const int have = kind_of(b);
    if (want == have) return;
    if (have >= 0) remove(b, have);
    if (want >= 0) {
      auto& list = lists_[want];
      pos_[b] = static_cast<long>(list.size());
      list.push_back(b);
      kind_.resize(occ_.size(), -1);
      kind_[b] = want;
    }
  }
  const std::vector<long>& right() const { return lists_[0]; }
  const std::vector<long>& left() const { return lists_[1]; }

 private:
  int kind_of(long b) const { return b < static_cast<long>(kind_.size()) ? kind_[b] : -1; }
  void remove(long b, int k) {
    auto& list = lists_[k];
    const long i = pos_[b];
    const long last = list.back();
    list[i] = last;
    pos_[last] = i;
    list.pop_back();
    pos_[b] = -1;
    kind_[b] = -1;
  }
  const std::vector<std::uint8_t>& occ_;
  std::vector<long> pos_;
  std::vector<int> kind_;
  std::vector<long> lists_[2];
};

void note_bond(AsepState& s, long site) {
  if (site <= s.contam_lo) s.contam_lo = std::max(s.contam_lo, site + 1);
  if (site + 1 >= s.contam_hi) s.contam_hi = std::min(s.contam_hi, site);
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

AsepConfig wasep_config(double eps, double rho_minus, double rho_plus, long half_width) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Arg, "eps must lie in (0, 1)");
  AsepConfig c;
  const double g = std::sqrt(eps);
  c.p = 0.5 * (1.0 - g);
  c.q = 0.5 * (1.0 + g);
  c.rho_minus = rho_minus;
  c.rho_plus = rho_plus;
  c.half_width = half_width;
  return c;
}

long window_half_width(long obs_radius, double t_end) {
  return obs_radius + static_cast<long>(std::ceil(t_end + 10.0 * std::sqrt(t_end))) + 50;
}

int AsepState::occupied(long x) const {
  if (x < lo || x > hi) fail(ErrorKind::Window, "site outside the simulation window");
  return occ[static_cast<std::size_t>(x - lo)];
}

long AsepState::particles() const {
  long n = 0;
  for (auto v : occ) n += v;
  return n;
}

AsepState make_state(long half_width) {
  if (half_width < 2) fail(ErrorKind::Arg, "window too small");
  AsepState s;
  s.lo = -half_width;
  s.hi = half_width;
  s.occ.assign(static_cast<std::size_t>(2 * half_width + 1), 0);
  s.contam_lo = s.lo;
  s.contam_hi = s.hi;
  return s;
}

AsepState init_two_sided_bernoulli(const AsepConfig& cfg, Rng& rng) {
  if (cfg.rho_minus < 0 || cfg.rho_minus > 1 || cfg.rho_plus < 0 || cfg.rho_plus > 1)
    fail(ErrorKind::Arg, "densities must lie in [0, 1]");
  AsepState s = make_state(cfg.half_width);
  for (long x = s.lo; x <= s.hi; ++x) {
    const double rho = x > 0 ? cfg.rho_plus : cfg.rho_minus;
    // draw even for rho in {0, 1} so the stream does not depend on the densities
    s.occ[static_cast<std::size_t>(x - s.lo)] = uniform01(rng) < rho ? 1 : 0;
  }
  return s;
}

RunReport run_ctmc(AsepState& s, double p, double q, double t_end, Rng& rng, long obs_radius) {
  check_pq(p, q);
  if (t_end < s.time) fail(ErrorKind::Arg, "t_end precedes the current time");
  RunReport rep;
  MoveSets moves(s.occ);
  const long origin = -s.lo;  // offset of site 0
  while (true) {
    const double rr = p * double(moves.right().size()), rl = q * double(moves.left().size());
    const double rate = rr + rl;
    if (rate <= 0.0) break;
    const double dt = exp_draw(rng, rate);
    if (s.time + dt > t_end) break;
    s.time += dt;
    const double u = uniform01(rng) * rate;
    long b;
    if (u < rr) {
      const auto& list = moves.right();
      b = list[std::min(list.size() - 1, static_cast<std::size_t>(u / p))];
      s.occ[b] = 0;
      s.occ[b + 1] = 1;
      if (b == origin) --s.flux;
    } else {
      const auto& list = moves.left();
      b = list[std::min(list.size() - 1, static_cast<std::size_t>((u - rr) / q))];
      s.occ[b] = 1;
      s.occ[b + 1] = 0;
      if (b == origin) ++s.flux;
    }
    moves.refresh(b - 1);
    moves.refresh(b);
    moves.refresh(b + 1);
    note_bond(s, b + s.lo);
    ++rep.events;
  }
  s.time = t_end;
  if (obs_radius >= 0 && (s.contam_lo >= -obs_radius - 2 || s.contam_hi <= obs_radius + 2)) rep.breach = true;
  return rep;
}

long height(const AsepState& s, long x) {
  if (x < s.lo || x > s.hi) fail(ErrorKind::Window, "height outside the simulation window");
  long h = 2 * s.flux;
  if (x > 0)
    for (long y = 1; y <= x; ++y) h += s.spin(y);
  else
    for (long y = x + 1; y <= 0; ++y) h -= s.spin(y);
  return h;
}

double hydrodynamic_profile(double rho_minus, double rho_plus, double v) {
  if (rho_minus > rho_plus) fail(ErrorKind::Arg, "profile needs rho_minus <= rho_plus");
  if (v <= 2.0 * rho_minus - 1.0) return 2.0 * rho_minus * (1.0 - rho_minus) + (2.0 * rho_minus - 1.0) * v;
  if (v >= 2.0 * rho_plus - 1.0) return 2.0 * rho_plus * (1.0 - rho_plus) + (2.0 * rho_plus - 1.0) * v;
  return 0.5 * (1.0 + v * v);
}

// ---- graphical construction ----

std::vector<BondEvent> sample_bond_events(long lo, long hi, double p, double q, double t_end, Rng& rng) {
  check_pq(p, q);
  const long nb = hi - lo;  // bonds (lo, lo+1) ... (hi-1, hi)
  if (nb < 1) fail(ErrorKind::Arg, "window has no bonds");
  std::vector<BondEvent> ev;
  ev.reserve(static_cast<std::size_t>(double(nb) * t_end * 1.1) + 16);
  double t = 0.0;
  const double rate = double(nb) * (p + q);
  while (true) {
    t += exp_draw(rng, rate);
    if (t > t_end) break;
    const long b = lo + std::min(nb - 1, static_cast<long>(uniform01(rng) * double(nb)));
    ev.push_back({t, b, uniform01(rng) < q});
  }
  return ev;
}

void apply_events(AsepState& s, const std::vector<BondEvent>& events) {
  for (const auto& e : events) {
    if (e.bond < s.lo || e.bond >= s.hi) fail(ErrorKind::Window, "event outside the window");
    const std::size_t i = static_cast<std::size_t>(e.bond - s.lo);
    auto& a = s.occ[i];
    auto& b = s.occ[i + 1];
    if (e.left && !a && b) {
      a = 1;
      b = 0;
      if (e.bond == 0) ++s.flux;
    } else if (!e.left && a && !b) {
      a = 0;
      b = 1;
      if (e.bond == 0) --s.flux;
    }
    note_bond(s, e.bond);
    s.time = e.time;
  }
}

// ---- scaling ----

EdgeScaling edge_scaling(double eps, double T, double X) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Arg, "eps must lie in (0, 1)");
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  EdgeScaling e;
  e.t = std::pow(eps, -1.5) * T;
  e.gamma = std::sqrt(eps);
  e.horizon = e.t / e.gamma;
  e.x = std::lround(std::cbrt(2.0) * std::pow(e.t, 2.0 / 3.0) * X);
  return e;
}

double fluctuation_sample(double eps, double T, double X, double rho_minus, double rho_plus, Rng& rng,
                          long max_events) {
  const EdgeScaling sc = edge_scaling(eps, T, X);
  const long obs = std::labs(sc.x) + 1;
  AsepConfig cfg = wasep_config(eps, rho_minus, rho_plus, window_half_width(obs, sc.horizon));
  // expected work: active moves times horizon
  if (double(cfg.half_width) * sc.horizon > double(max_events)) fail(ErrorKind::Budget, "simulation exceeds the event budget");
  AsepState s = init_two_sided_bernoulli(cfg, rng);
  run_ctmc(s, cfg.p, cfg.q, sc.horizon, rng, obs);
  return (double(height(s, sc.x)) - 0.5 * sc.t) / std::cbrt(sc.t);
}

double edge_statistic(double hfluc, double X) { return X * X - std::cbrt(2.0) * hfluc; }

double hopf_cole_field(const AsepState& s, double eps, double T, double X) {
  const long x = std::lround(X / eps);
  const double horizon = std::pow(eps, -1.5) * T / std::sqrt(eps);
  return std::exp(-lambda_eps(eps) * double(height(s, x)) + nu_eps(eps) * horizon);
}

// ---- empirical laws ----

EmpiricalCDF::EmpiricalCDF(std::vector<double> v) : samples(std::move(v)) {
  std::sort(samples.begin(), samples.end());
}

double EmpiricalCDF::operator()(double s) const {
  if (samples.empty()) return 0.0;
  return double(std::upper_bound(samples.begin(), samples.end(), s) - samples.begin()) / double(samples.size());
}

double ks_distance(const EmpiricalCDF& e, const std::function<double(double)>& F) {
  const std::size_t n = e.n();
  if (n == 0) fail(ErrorKind::Arg, "empty sample");
  double d = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && e.samples[j] == e.samples[i]) ++j;
    const double f = F(e.samples[i]);
    d = std::max({d, std::abs(f - double(i) / double(n)), std::abs(f - double(j) / double(n))});
    i = j;
  }
  return d;
}

// ---- experiments ----

std::vector<double> sample_edge_statistic(double eps, double T, double X, std::size_t n, std::uint64_t seed,
                                          int threads) {
  std::vector<double> out(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        Rng rng = make_rng(seed, k);
        out[k] = edge_statistic(fluctuation_sample(eps, T, X, 0.0, 0.5, rng), X);
      },
      threads);
  return out;
}

HydroResult hydrodynamics_experiment(double eps, double rho_minus, double rho_plus, const std::vector<double>& v,
                                     int runs, std::uint64_t seed, int threads) {
  if (runs < 2) fail(ErrorKind::Arg, "need at least two runs");
  const double t = std::pow(eps, -1.5), horizon = t / std::sqrt(eps);
  long obs = 1;
  for (double vv : v) obs = std::max(obs, std::lround(std::abs(vv) * t) + 1);
  const AsepConfig cfg = wasep_config(eps, rho_minus, rho_plus, window_half_width(obs, horizon));
  std::vector<std::vector<double>> h(static_cast<std::size_t>(runs), std::vector<double>(v.size()));
  parallel_for(
      static_cast<std::size_t>(runs),
      [&](std::size_t k) {
        Rng rng = make_rng(seed, k);
        AsepState s = init_two_sided_bernoulli(cfg, rng);
        run_ctmc(s, cfg.p, cfg.q, horizon, rng, obs);
        for (std::size_t i = 0; i < v.size(); ++i) h[k][i] = double(height(s, std::lround(v[i] * t))) / t;
      },
      threads);
  HydroResult r;
  r.v = v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double m = 0, m2 = 0;
    for (const auto& row : h) {
      m += row[i];
      m2 += row[i] * row[i];
    }
    m /= runs;
    const double var = std::max(0.0, (m2 / runs - m * m) * runs / (runs - 1.0));
    r.mean.push_back(m);
    r.stderr_mean.push_back(std::sqrt(var / runs));
    r.profile.push_back(hydrodynamic_profile(rho_minus, rho_plus, v[i]));
  }
  return r;
}

ProbEstimate particle_position_mc(double eps, double rho_plus, double t, long m, long x, std::size_t n,
                                  std::uint64_t seed, int threads) {
  if (m < 1) fail(ErrorKind::Arg, "particle label must be positive");
  if (n == 0) fail(ErrorKind::Arg, "need at least one trial");
  const double horizon = t / std::sqrt(eps);
  const long half = std::max(std::labs(x) + 2 * m + 20, window_half_width(std::labs(x) + 2 * m, horizon));
  const AsepConfig cfg = wasep_config(eps, 0.0, rho_plus, half);
  std::vector<std::uint8_t> hit(n, 0);
  parallel_for(
      n,
      [&](std::size_t k) {
        Rng rng = make_rng(seed, k);
        AsepState s = init_two_sided_bernoulli(cfg, rng);
        run_ctmc(s, cfg.p, cfg.q, horizon, rng);
        long seen = 0;
        for (long y = s.lo; y <= s.hi; ++y)
          if (s.occupied(y) && ++seen == m) {
            hit[k] = y <= x;
            return;
          }
        fail(ErrorKind::Window, "fewer than m particles in the window");
      },
      threads);
  ProbEstimate e;
  e.n = n;
  double c = 0;
  for (auto v : hit) c += v;
  e.p = c / double(n);
  e.se = std::sqrt(std::max(e.p * (1.0 - e.p), 1e-300) / double(n));
  return e;
}

std::vector<double> gartner_residuals(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Arg, "eps must lie in (0, 1)");
  const double g = std::sqrt(eps), p = 0.5 * (1.0 - g), q = 0.5 * (1.0 + g);
  const double lam = 0.5 * std::log(q / p), D = 2.0 * std::sqrt(p * q), nu = p + q - 2.0 * std::sqrt(p * q);
  const double ep = std::exp(lam), em = std::exp(-lam);
  return {
      std::abs(0.5 * D * (em - 2.0 + ep) - nu),
      std::abs(0.5 * D * (ep - 2.0 + em) - nu),
      std::abs(0.5 * D * (ep - 2.0 + ep) - (nu + (std::exp(2.0 * lam) - 1.0) * p)),
      std::abs(0.5 * D * (em - 2.0 + em) - (nu + (std::exp(-2.0 * lam) - 1.0) * q)),
  };
}

double gartner_identity_check(double eps) {
  const auto r = gartner_residuals(eps);
  return *std::max_element(r.begin(), r.end());
}

namespace {

struct SplitSetup {
  EdgeScaling sc;
  long x_micro, half;
  double p, q;
};

SplitSetup split_setup(double eps, double T, double X) {
  SplitSetup st;
  st.sc = edge_scaling(eps, T, X);
  st.x_micro = std::lround(X / eps);
  st.half = window_half_width(std::labs(st.x_micro) + 1, st.sc.horizon);
  const AsepConfig c = wasep_config(eps, 0.0, 0.5, st.half);
  st.p = c.p;
  st.q = c.q;
  return st;
}

}  // namespace

CoupledZ coupled_split_sample(double eps, double T, double X, Rng& rng) {
  const SplitSetup st = split_setup(eps, T, X);
  AsepState plus = make_state(st.half), minus = make_state(st.half);
  for (long x = plus.lo; x <= plus.hi; ++x) {
    const std::uint8_t b = uniform01(rng) < 0.5 ? 1 : 0;
    const auto i = static_cast<std::size_t>(x - plus.lo);
    plus.occ[i] = x > 0 ? b : 0;
    minus.occ[i] = x > 0 ? 1 : b;
  }
  const auto ev = sample_bond_events(plus.lo, plus.hi, st.p, st.q, st.sc.horizon, rng);
  apply_events(plus, ev);
  apply_events(minus, ev);
  return {hopf_cole_field(plus, eps, T, X), hopf_cole_field(minus, eps, T, X)};
}

bool sandwich_check(double z_plus, double z_minus, double slack) {
  if (!(z_plus >= 0.0 && z_minus >= 0.0) || z_plus + z_minus <= 0.0) fail(ErrorKind::Arg, "Z values must be positive");
  const double heq = -std::log(z_plus + z_minus);
  const double hp = -std::log(z_plus), hm = -std::log(z_minus);
  const double lo = -std::log(2.0) + std::min(hp, hm), hi = -std::log(2.0) + std::max(hp, hm);
  return heq >= lo - slack && heq <= hi + slack;
}

SandwichResult sandwich_experiment(double eps, double T, double X, std::size_t n, std::uint64_t seed, int threads) {
  std::vector<CoupledZ> z(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        Rng rng = make_rng(seed, k);
        z[k] = coupled_split_sample(eps, T, X, rng);
      },
      threads);
  SandwichResult r;
  r.n = n;
  for (const auto& v : z) {
    const double heq = -std::log(v.z_plus + v.z_minus);
    const double hp = -std::log(v.z_plus), hm = -std::log(v.z_minus);
    const double ex = std::max(-std::log(2.0) + std::min(hp, hm) - heq, heq - (-std::log(2.0) + std::max(hp, hm)));
    r.max_excess = std::max(r.max_excess, ex);
    if (!sandwich_check(v.z_plus, v.z_minus)) ++r.violations;
  }
  return r;
}

std::vector<std::pair<double, double>> fkg_samples(double eps, double T, double X, std::size_t n, std::uint64_t seed,
                                                   int threads) {
  const SplitSetup st = split_setup(eps, T, X);
  std::vector<std::pair<double, double>> out(n);
  parallel_for(
      n,
      [&](std::size_t k) {
        Rng rng = make_rng(seed, k);
        AsepState a = make_state(st.half), b = make_state(st.half);
        for (long x = a.lo; x <= a.hi; ++x) {
          const auto i = static_cast<std::size_t>(x - a.lo);
          const std::uint8_t u = uniform01(rng) < 0.5 ? 1 : 0, w = uniform01(rng) < 0.5 ? 1 : 0;
          a.occ[i] = x > 0 ? u : 0;
          b.occ[i] = x > 0 ? 1 : w;
        }
        const auto ev = sample_bond_events(a.lo, a.hi, st.p, st.q, st.sc.horizon, rng);
        apply_events(a, ev);
        apply_events(b, ev);
        out[k] = {hopf_cole_field(a, eps, T, X), hopf_cole_field(b, eps, T, X)};
      },
      threads);
  return out;
}

FkgResult fkg_experiment(const std::vector<std::pair<double, double>>& z, double s1, double s2) {
  FkgResult r;
  r.n = z.size();
  if (r.n < 2) fail(ErrorKind::Arg, "need at least two samples");
  const double n = double(r.n);
  // per-sample influence terms of joint - marg1 * marg2 give its delta-method standard error
  double j = 0, a = 0, b = 0;
  std::vector<std::array<double, 3>> ind(r.n);
  for (std::size_t k = 0; k < r.n; ++k) {
    const double x = z[k].first <= s1, y = z[k].second <= s2;
    ind[k] = {x * y, x, y};
    j += x * y;
    a += x;
    b += y;
  }
  r.joint = j / n;
  r.marg1 = a / n;
  r.marg2 = b / n;
  double m = 0, m2 = 0;
  for (const auto& v : ind) {
    const double g = v[0] - r.marg2 * v[1] - r.marg1 * v[2];
    m += g;
    m2 += g * g;
  }
  m /= n;
  r.se = std::sqrt(std::max(0.0, m2 / n - m * m) / (n - 1.0));
  return r;
}

long coin_flip_monotonicity(long half_width, double p, double q, double t_end, Rng& rng) {
  AsepState base = make_state(half_width);
  for (auto& v : base.occ) v = uniform01(rng) < 0.5 ? 1 : 0;
  auto ev = sample_bond_events(base.lo, base.hi, p, q, t_end, rng);
  std::vector<std::size_t> right;
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (!ev[i].left) right.push_back(i);
  if (right.empty()) return 0;
  auto flipped = ev;
  flipped[right[std::min(right.size() - 1, static_cast<std::size_t>(uniform01(rng) * double(right.size())))]].left = true;
  AsepState a = base, b = base;
  apply_events(a, ev);
  apply_events(b, flipped);
  long worst = std::numeric_limits<long>::max();
  for (long x = a.lo; x <= a.hi; ++x) worst = std::min(worst, height(b, x) - height(a, x));
  return worst;
}

}  // namespace kpz
