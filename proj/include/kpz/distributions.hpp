#pragma once

#include <string>
#include <vector>

#include "kpz/kernels.hpp"

namespace kpz {

struct NumericConfig {
  int n_per_segment = 16;  // Gauss-Legendre nodes per edge/fan contour piece
  int mu_nodes = 8;        // per mu contour piece
  double mu_x_max = 40.0;
  double tail_height = 10.0;
  double imag_tol = 1e-6;
  double range_tol = 1e-6;
  int threads = 0;
  // real-line Airy determinants: unit panels
  int line_nodes = 12;
  // K~ real-line form
  int ktilde_x_nodes = 6;
  int ktilde_t_nodes = 12;
  // finite eps circles
  int eps_eta_nodes = 96;
  int eps_zeta_nodes = 96;
  int eps_mu_nodes = 128;
  // eta/zeta nodes grow by 3/2 until successive values agree to eps_tol
  double eps_tol = 1e-7;
  int eps_max_nodes = 512;
};

enum class DistKind { Edge, Fan, A2BM, GUE, FiniteEps };
const char* dist_kind_name(DistKind k);

struct DistPoint {
  double F = 0.0;
  double imag = 0.0;
};

struct DistTable {
  DistKind kind = DistKind::Edge;
  double T = 0.0, X = 0.0, eps = 0.0, rho_plus = 0.5;
  std::vector<double> s;
  std::vector<double> F;
  std::vector<double> imag_residual;
  std::vector<std::string> warnings;  // CdfRangeWarning, monotonicity
};

// Raises NumericalError when |Im| exceeds cfg.imag_tol.
DistPoint edge_point(double T, double X, double s, const NumericConfig& cfg = {});
double f_edge(double T, double X, double s, const NumericConfig& cfg = {});
// Same distribution through the rescaled kernel (exponent 2^{1/3} a, Gamma offset X/T).
double f_edge_rescaled(double T, double X, double a, const NumericConfig& cfg = {});
DistPoint fan_point(double T, double s, const NumericConfig& cfg = {});
double f_fan(double T, double s, const NumericConfig& cfg = {});
// det(I + K~) on L^2(s, inf) integrated against e^{-mu}/mu; X = 0 only.
DistPoint ktilde_point(double T, double s, const NumericConfig& cfg = {});

double f_gue(double s, const NumericConfig& cfg = {});
double f_a2bm(double X, double s, const NumericConfig& cfg = {});

// P(x(t/gamma, m) <= x) for step Bernoulli ASEP; t is the formula time.
// Raises BudgetError when refinement passes eps_max_nodes without meeting eps_tol.
DistPoint finite_eps_point(double eps, double rho_plus, double t, long m, long x, const NumericConfig& cfg = {});
double finite_eps_cdf(double eps, double rho_plus, double t, long m, long x, const NumericConfig& cfg = {});

DistTable dist_table(DistKind kind, double T, double X, const std::vector<double>& s, const NumericConfig& cfg = {});
// Appends CdfRangeWarning / monotonicity messages; returns true when none were added.
bool check_table(DistTable& table, double monotone_slack = 1e-6, double range_tol = 1e-6);
std::string table_to_csv(const DistTable& table);
std::string table_to_json(const DistTable& table, const NumericConfig& cfg);
std::string config_to_json(const NumericConfig& cfg);

// Cubic spline through (s, F) of a table, clamped to the end values outside its range.
class TableInterpolant {
 public:
  explicit TableInterpolant(const DistTable& table);
  ~TableInterpolant();
  TableInterpolant(const TableInterpolant&) = delete;
  TableInterpolant& operator=(const TableInterpolant&) = delete;
  double operator()(double s) const;

 private:
  std::vector<double> s_, F_;
  void* spline_ = nullptr;
};

// ---- tail bounds ----
// 2^{1/3} y - 2^{1/3} T^{-1/3} log 2
double tail_argument(double T, double y);
double tail_bound_edge(double T, double y, double c1, double c2, double c3);

struct SandwichBounds {
  double lower_lo, lower_hi;  // bounds on P(H^eq - T/4! <= -T^{1/3} y)
  double upper_lo, upper_hi;  // bounds on P(H^eq - T/4! >= T^{1/3} y)
};
// F_plus = F^edge_{T,0}(2^{1/3} y - shift), F_minus = F^edge_{T,0}(-2^{1/3} y - shift)
SandwichBounds eq_sandwich(double F_plus, double F_minus);
SandwichBounds eq_sandwich_edge(double T, double y, const NumericConfig& cfg = {});

// ---- small T ----
struct PsiArgs {
  double x = 0, y = 0, x0 = 0, x0p = 0;
};
double small_t_psi(const PsiArgs& a);

// Brownian path sampled at X = k * dx, k = 0..n-1; linear interpolation in between.
struct BrownianPath {
  double dx = 0.01;
  std::vector<double> values;
  double operator()(double X) const;
  double x_max() const { return dx * double(values.size() - 1); }
};

// int int Psi(x, y, x0, x0') over the positive quadrant; with a path, the integrand also carries
// exp(-B(sqrt(T) x0) - B(sqrt(T) x0')).
double small_t_cov(double x, double y, const BrownianPath* path = nullptr, double T = 1.0);
// int_0^inf p(T, X - X0) e^{-B(X0)} dX0
double heat_baseline(double T, double X, const BrownianPath& path);
double heat_kernel(double T, double X);

}  // namespace kpz
