#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace kpz {

using Rng = std::mt19937_64;
// independent stream per (seed, trial)
Rng make_rng(std::uint64_t seed, std::uint64_t trial);

struct AsepConfig {
  double p = 0.5;  // right jumps
  double q = 0.5;  // left jumps
  double rho_minus = 0.0;
  double rho_plus = 0.5;
  long half_width = 100;  // window [-L, L]
  double t_end = 0.0;
  std::uint64_t seed = 0;
};

// Left drift q > p with q - p = sqrt(eps).
AsepConfig wasep_config(double eps, double rho_minus, double rho_plus, long half_width);
// obs_radius + ceil(t + 10 sqrt(t)) + 50
long window_half_width(long obs_radius, double t_end);

struct AsepState {
  long lo = 0, hi = 0;  // window [lo, hi]
  std::vector<std::uint8_t> occ;
  long flux = 0;  // net crossings from site 1 to site 0
  double time = 0.0;
  // sites whose state may feel the closed window edges: x <= contam_lo or x >= contam_hi
  long contam_lo = 0, contam_hi = 0;

  int occupied(long x) const;
  int spin(long x) const { return 2 * occupied(x) - 1; }
  std::size_t size() const { return occ.size(); }
  long particles() const;
};

AsepState make_state(long half_width);
AsepState init_two_sided_bernoulli(const AsepConfig& cfg, Rng& rng);

struct RunReport {
  long events = 0;
  bool breach = false;  // edge influence reached the observation radius
};

// Gillespie evolution up to t_end; breach is flagged when the edge-influence front comes within
// obs_radius + 2 of the origin.
RunReport run_ctmc(AsepState& s, double p, double q, double t_end, Rng& rng, long obs_radius = -1);

long height(const AsepState& s, long x);
double hydrodynamic_profile(double rho_minus, double rho_plus, double v);

// ---- graphical construction ----
// Every bond (i, i+1) carries a rate-(p+q) Poisson clock; a ring is a left attempt with probability q.
struct BondEvent {
  double time;
  long bond;  // left site i
  bool left;
};

std::vector<BondEvent> sample_bond_events(long lo, long hi, double p, double q, double t_end, Rng& rng);
void apply_events(AsepState& s, const std::vector<BondEvent>& events);

// ---- scaling ----
struct EdgeScaling {
  double t;        // eps^{-3/2} T
  double gamma;    // sqrt(eps)
  double horizon;  // t / gamma
  long x;          // round(2^{1/3} t^{2/3} X)
};
EdgeScaling edge_scaling(double eps, double T, double X);

// (h(t/gamma, x) - t/2) / t^{1/3}
double fluctuation_sample(double eps, double T, double X, double rho_minus, double rho_plus, Rng& rng,
                          long max_events = 2000000000L);
// X^2 - 2^{1/3} h^fluc; P(stat <= s) is the edge crossover distribution in the limit
double edge_statistic(double hfluc, double X);

// exp(-lambda_eps h(t/gamma, X/eps) + nu_eps t/gamma) for a state already run to t/gamma
double hopf_cole_field(const AsepState& s, double eps, double T, double X);

// ---- empirical laws ----
struct EmpiricalCDF {
  std::vector<double> samples;  // sorted
  explicit EmpiricalCDF(std::vector<double> v);
  double operator()(double s) const;
  std::size_t n() const { return samples.size(); }
};
double ks_distance(const EmpiricalCDF& e, const std::function<double(double)>& F);

// ---- experiments; trials run in parallel, trial k uses make_rng(seed, k) ----
std::vector<double> sample_edge_statistic(double eps, double T, double X, std::size_t n, std::uint64_t seed,
                                          int threads = 0);

struct HydroResult {
  std::vector<double> v, mean, profile, stderr_mean;
};
HydroResult hydrodynamics_experiment(double eps, double rho_minus, double rho_plus, const std::vector<double>& v,
                                     int runs, std::uint64_t seed, int threads = 0);

struct ProbEstimate {
  double p = 0, se = 0;
  std::size_t n = 0;
};
// P(x(t/gamma, m) <= x) for the m-th particle from the left, rho_minus = 0
ProbEstimate particle_position_mc(double eps, double rho_plus, double t, long m, long x, std::size_t n,
                                  std::uint64_t seed, int threads = 0);

double gartner_identity_check(double eps);
// residuals of the spin cases 11, (-1)(-1), 1(-1), (-1)1, normalized by eps^{-2}
std::vector<double> gartner_residuals(double eps);

// Z_plus from rho = (0, 1/2), Z_minus from rho = (1/2, 1), both cut from one two-sided Bernoulli(1/2) draw
// and run under the same bond clocks.
struct CoupledZ {
  double z_plus, z_minus;
};
CoupledZ coupled_split_sample(double eps, double T, double X, Rng& rng);

// H^eq = -log(Z+ + Z-) against -log 2 + min/max(H+, H-)
bool sandwich_check(double z_plus, double z_minus, double slack = 1e-12);

struct SandwichResult {
  std::size_t n = 0, violations = 0;
  double max_excess = 0.0;
};
SandwichResult sandwich_experiment(double eps, double T, double X, std::size_t n, std::uint64_t seed, int threads = 0);

// Two systems with independent initial data (first rho = (0, 1/2), second rho = (1/2, 1)) under shared
// clocks and coins; events {Z_i <= s_i}.
struct FkgResult {
  std::size_t n = 0;
  double joint = 0, marg1 = 0, marg2 = 0;
  double se = 0;  // standard error of joint - marg1 * marg2
  bool holds(double k = 2.0) const { return joint >= marg1 * marg2 - k * se; }
};
std::vector<std::pair<double, double>> fkg_samples(double eps, double T, double X, std::size_t n, std::uint64_t seed,
                                                   int threads = 0);
FkgResult fkg_experiment(const std::vector<std::pair<double, double>>& z, double s1, double s2);

// Flips one right coin to left and reports min over sites of h' - h (never negative).
long coin_flip_monotonicity(long half_width, double p, double q, double t_end, Rng& rng);

}  // namespace kpz
