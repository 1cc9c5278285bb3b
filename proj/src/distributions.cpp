#include "kpz/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <gsl/gsl_spline.h>

#include <json.hpp>
#include <sstream>

#include "kpz/fredholm.hpp"
#include "kpz/quadrature.hpp"

namespace kpz {

namespace {

const double kCbrt2 = std::cbrt(2.0);

DistPoint finish(cplx v, const NumericConfig& cfg, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorKind::Numerical, std::string(what) + ": non-finite value");
  if (std::abs(v.imag()) > cfg.imag_tol) {
    std::ostringstream os;
    os << what << ": imaginary residual " << std::abs(v.imag()) << " exceeds " << cfg.imag_tol << " (value " << v.real()
       << ")";
    fail(ErrorKind::Numerical, os.str());
  }
  return {v.real(), std::abs(v.imag())};
}

cplx contour_distribution(const EdgeKernelMatrix& K, const NumericConfig& cfg) {
  const QuadratureGrid mu = build_mu_contour(cfg.mu_x_max, cfg.mu_nodes);
  return mu_integral([&](cplx m) { return det_identity_plus(-K.nystrom(m)); }, mu, true, cfg.threads);
}

// composite Gauss-Legendre on (a, b) in unit panels
void line_nodes(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
  const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
  composite_gl(a, b, panels, n, x, w);
}

}  // namespace

const char* dist_kind_name(DistKind k) {
  switch (k) {
    case DistKind::Edge: return "edge";
    case DistKind::Fan: return "fan";
    case DistKind::A2BM: return "a2bm";
    case DistKind::GUE: return "gue";
    case DistKind::FiniteEps: return "finite-eps";
  }
  return "?";
}

// ---- contour pipelines ----

DistPoint edge_point(double T, double X, double s, const NumericConfig& cfg) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  const EdgeContours c = build_edge_contours(T, X, cfg.tail_height, cfg.n_per_segment, true);
  return finish(contour_distribution(EdgeKernelMatrix::edge(T, X, s, c), cfg), cfg, "edge");
}

double f_edge(double T, double X, double s, const NumericConfig& cfg) { return edge_point(T, X, s, cfg).F; }

double f_edge_rescaled(double T, double X, double a, const NumericConfig& cfg) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  // the Gamma poles sit where they do for the edge coordinates, so the contours are shared
  const EdgeCoordinates e = edge_from_csc_gamma(T, a, X);
  const EdgeContours c = build_edge_contours(T, e.X, cfg.tail_height, cfg.n_per_segment, true);
  const EdgeKernelMatrix K(T, kCbrt2 * a, X / T, true, c.eta, c.zeta);
  return finish(contour_distribution(K, cfg), cfg, "edge (rescaled)").F;
}

DistPoint fan_point(double T, double s, const NumericConfig& cfg) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  const EdgeContours c = build_edge_contours(T, 0.0, cfg.tail_height, cfg.n_per_segment, false);
  return finish(contour_distribution(EdgeKernelMatrix::fan(T, s, c), cfg), cfg, "fan");
}

double f_fan(double T, double s, const NumericConfig& cfg) { return fan_point(T, s, cfg).F; }

// ---- K~ real-line form ----
// With x = s + u, y = s + v and t' = t + s the transforms no longer see s:
// K~(s+u, s+v) = int m(t' - s) Ai^G(u + t') Ai_G(v + t') dt', m(t) = mu/(e^{-kappa t} - mu).

DistPoint ktilde_point(double T, double s, const NumericConfig& cfg) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  const double k = kappa_T(T), b = 1.0 / k;
  const double length = std::max(20.0, 24.0 / k);
  const double t_lo = s - (40.0 / k + 10.0), t_hi = 15.0;
  std::vector<double> u, wu, t, wt;
  line_nodes(0.0, length, cfg.ktilde_x_nodes, u, wu);
  line_nodes(t_lo, t_hi, cfg.ktilde_t_nodes, t, wt);

  AiryTransform up(AiryTransform::Kind::Gamma, b, 0.0), down(AiryTransform::Kind::RecipGamma, b, 0.0);
  up.prepare(t_lo, length + t_hi);
  down.prepare(t_lo, length + t_hi);
  const auto nu = static_cast<Eigen::Index>(u.size()), nt = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXcd P(nu, nt), Q(nt, nu);
  for (Eigen::Index i = 0; i < nu; ++i)
    for (Eigen::Index j = 0; j < nt; ++j) {
      P(i, j) = up(u[i] + t[j]);
      Q(j, i) = down(u[i] + t[j]) * wu[i];
    }
  const QuadratureGrid mu = build_mu_contour(cfg.mu_x_max, cfg.mu_nodes);
  const cplx v = mu_integral(
      [&](cplx m) {
        Eigen::VectorXcd d(nt);
        for (Eigen::Index j = 0; j < nt; ++j) d(j) = wt[j] * m / (std::exp(-k * (t[j] - s)) - m);
        return det_identity_plus(P * d.asDiagonal() * Q);
      },
      mu, true, cfg.threads);
  return finish(v, cfg, "ktilde");
}

// ---- Airy-process one-point functions ----

double f_gue(double s, const NumericConfig& cfg) {
  std::vector<double> x, w;
  line_nodes(s, std::max(s + 2.0, 16.0), cfg.line_nodes, x, w);
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = -std::sqrt(w[i]) * airy_kernel(x[i], x[j]) * std::sqrt(w[j]);
  m.diagonal().array() += 1.0;
  return m.partialPivLu().determinant();
}

double f_a2bm(double X, double s, const NumericConfig& cfg) {
  const double hi = std::max(s, 0.0) + 16.0 + std::pow(std::max(X, 0.0), 2);
  std::vector<double> x, w;
  line_nodes(s, hi, cfg.line_nodes, x, w);
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<double> ai(n), br(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ai[i] = airy_ai(x[i]);
    br[i] = a2bm_bracket(X, x[i]);
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = -(airy_kernel(x[i], x[j]) + ai[i] * br[j]) * w[j];
  m.diagonal().array() += 1.0;
  return m.partialPivLu().determinant();
}

// ---- finite eps ----

DistPoint finite_eps_point(double eps, double rho_plus, double t, long m, long x, const NumericConfig& cfg) {
  // the circle integrands grow geometrically in |x|, so a fixed node count loses the cancellation
  auto at = [&](int n_eta, int n_zeta) {
    const FiniteEpsParams fp = make_finite_eps(eps, rho_plus, t, m, x, n_eta, n_zeta, cfg.eps_mu_nodes);
    return mu_integral(
        [&](cplx mu) { return prefactor_product(mu, fp.tau) / mu * det_identity_plus(finite_eps_matrix(fp, mu)); },
        fp.grids.mu, false, cfg.threads);
  };
  int ne = cfg.eps_eta_nodes, nz = cfg.eps_zeta_nodes;
  cplx prev = at(ne, nz);
  for (;;) {
    ne = (3 * ne + 1) / 2;
    nz = (3 * nz + 1) / 2;
    if (std::max(ne, nz) > cfg.eps_max_nodes)
      fail(ErrorKind::Budget, "finite-eps: no agreement to eps_tol within eps_max_nodes");
    const cplx v = at(ne, nz);
    if (std::abs(v - prev) < cfg.eps_tol) return finish(v, cfg, "finite-eps");
    prev = v;
  }
}

double finite_eps_cdf(double eps, double rho_plus, double t, long m, long x, const NumericConfig& cfg) {
  return finite_eps_point(eps, rho_plus, t, m, x, cfg).F;
}

// ---- tables ----

DistTable dist_table(DistKind kind, double T, double X, const std::vector<double>& s, const NumericConfig& cfg) {
  DistTable tab;
  tab.kind = kind;
  tab.T = T;
  tab.X = X;
  if (!std::is_sorted(s.begin(), s.end())) fail(ErrorKind::Arg, "s grid must be ascending");
  for (double sv : s) {
    DistPoint p;
    switch (kind) {
      case DistKind::Edge: p = edge_point(T, X, sv, cfg); break;
      case DistKind::Fan: p = fan_point(T, sv, cfg); break;
      case DistKind::A2BM: p.F = f_a2bm(X, sv, cfg); break;
      case DistKind::GUE: p.F = f_gue(sv, cfg); break;
      case DistKind::FiniteEps: fail(ErrorKind::Arg, "finite-eps tables are indexed by lattice site; use finite_eps_cdf");
    }
    tab.s.push_back(sv);
    tab.F.push_back(p.F);
    tab.imag_residual.push_back(p.imag);
  }
  check_table(tab, 1e-6, cfg.range_tol);
  return tab;
}

bool check_table(DistTable& table, double monotone_slack, double range_tol) {
  const std::size_t before = table.warnings.size();
  for (std::size_t i = 0; i < table.F.size(); ++i) {
    const double f = table.F[i];
    if (f < -range_tol || f > 1.0 + range_tol) {
      std::ostringstream os;
      os << "CdfRangeWarning: F(" << table.s[i] << ") = " << f;
      table.warnings.push_back(os.str());
    }
    if (i > 0 && f < table.F[i - 1] - monotone_slack) {
      std::ostringstream os;
      os << "MonotonicityWarning: F(" << table.s[i] << ") < F(" << table.s[i - 1] << ")";
      table.warnings.push_back(os.str());
    }
  }
  return table.warnings.size() == before;
}

std::string table_to_csv(const DistTable& table) {
  std::ostringstream os;
  os.precision(15);
  os << "s,F,imag_residual\r\n";
  for (std::size_t i = 0; i < table.s.size(); ++i)
    os << table.s[i] << ',' << table.F[i] << ',' << table.imag_residual[i] << "\r\n";
  return os.str();
}

namespace {
nlohmann::json config_json(const NumericConfig& c) {
  return {{"n_per_segment", c.n_per_segment}, {"mu_nodes", c.mu_nodes},
          {"mu_x_max", c.mu_x_max},           {"tail_height", c.tail_height},
          {"imag_tol", c.imag_tol},           {"range_tol", c.range_tol},
          {"line_nodes", c.line_nodes},       {"ktilde_x_nodes", c.ktilde_x_nodes},
          {"ktilde_t_nodes", c.ktilde_t_nodes}, {"eps_eta_nodes", c.eps_eta_nodes},
          {"eps_zeta_nodes", c.eps_zeta_nodes}, {"eps_mu_nodes", c.eps_mu_nodes},
          {"eps_tol", c.eps_tol},             {"eps_max_nodes", c.eps_max_nodes}};
}
}  // namespace

std::string config_to_json(const NumericConfig& cfg) { return config_json(cfg).dump(); }

std::string table_to_json(const DistTable& table, const NumericConfig& cfg) {
  nlohmann::json j;
  j["kind"] = dist_kind_name(table.kind);
  j["params"] = {{"T", table.T}, {"X", table.X}, {"eps", table.eps}, {"rho_plus", table.rho_plus}};
  j["numeric"] = config_json(cfg);
  j["s"] = table.s;
  j["F"] = table.F;
  j["imag_residual"] = table.imag_residual;
  j["warnings"] = table.warnings;
  return j.dump(2);
}

// ---- tail bounds ----

TableInterpolant::TableInterpolant(const DistTable& table) : s_(table.s), F_(table.F) {
  if (s_.size() < 3 || s_.size() != F_.size()) fail(ErrorKind::Arg, "interpolation needs at least three points");
  for (std::size_t i = 1; i < s_.size(); ++i)
    if (!(s_[i] > s_[i - 1])) fail(ErrorKind::Arg, "interpolation needs increasing s");
  auto* sp = gsl_spline_alloc(gsl_interp_cspline, s_.size());
  gsl_spline_init(sp, s_.data(), F_.data(), s_.size());
  spline_ = sp;
}

TableInterpolant::~TableInterpolant() { gsl_spline_free(static_cast<gsl_spline*>(spline_)); }

double TableInterpolant::operator()(double s) const {
  if (s <= s_.front()) return F_.front();
  if (s >= s_.back()) return F_.back();
  // gsl_spline_eval without an accelerator is safe to share across threads
  return gsl_spline_eval(static_cast<gsl_spline*>(spline_), s, nullptr);
}

double tail_argument(double T, double y) { return kCbrt2 * y - kCbrt2 * std::log(2.0) / std::cbrt(T); }

double tail_bound_edge(double T, double y, double c1, double c2, double c3) {
  if (!(T >= 1.0)) fail(ErrorKind::Arg, "the tail bound is stated for T >= 1");
  const double yp = std::max(y, 0.0);
  return c1 * std::sqrt(T) * (std::exp(-c2 * std::pow(yp, 1.5)) + std::exp(-c3 * std::cbrt(T) * y));
}

SandwichBounds eq_sandwich(double F_plus, double F_minus) {
  const double up = 1.0 - F_plus;
  return {up * up, 2.0 * up, F_minus * F_minus, 2.0 * F_minus};
}

SandwichBounds eq_sandwich_edge(double T, double y, const NumericConfig& cfg) {
  const double shift = kCbrt2 * std::log(2.0) / std::cbrt(T);
  return eq_sandwich(f_edge(T, 0.0, kCbrt2 * y - shift, cfg), f_edge(T, 0.0, -kCbrt2 * y - shift, cfg));
}

// ---- small T ----

namespace {

// int_0^1 e^{-A/(1-s) - B/s} / sqrt(s(1-s)) ds with s = sin^2(theta)
double psi_s_integral(double A, double B) {
  std::vector<double> th, w;
  composite_gl(0.0, kPi / 2.0, 32, 16, th, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double sn = std::sin(th[i]), cs = std::cos(th[i]);
    const double e1 = cs > 0.0 ? A / (cs * cs) : (A > 0.0 ? INFINITY : 0.0);
    const double e2 = sn > 0.0 ? B / (sn * sn) : (B > 0.0 ? INFINITY : 0.0);
    sum += 2.0 * w[i] * std::exp(-e1 - e2);
  }
  return sum;
}

}  // namespace

double small_t_psi(const PsiArgs& a) {
  const double c = a.x + a.y - a.x0 - a.x0p;
  const double A = 0.25 * (a.x - a.y) * (a.x - a.y), B = 0.25 * (a.x0 - a.x0p) * (a.x0 - a.x0p);
  return std::exp(-0.25 * c * c) / (4.0 * std::pow(kPi, 1.5)) * psi_s_integral(A, B);
}

double BrownianPath::operator()(double X) const {
  if (values.empty()) fail(ErrorKind::Arg, "empty Brownian path");
  if (X < 0.0 || X > x_max() + 1e-12) fail(ErrorKind::Domain, "Brownian path evaluated outside its grid");
  const double u = X / dx;
  const std::size_t k = std::min(values.size() - 2, static_cast<std::size_t>(u));
  const double f = u - double(k);
  return (1.0 - f) * values[k] + f * values[k + 1];
}

double small_t_cov(double x, double y, const BrownianPath* path, double T) {
  const double A = 0.25 * (x - y) * (x - y), c = x + y;
  if (!path) {
    // The quadrant integral in (x0 + x0', x0 - x0') is done in closed form, leaving
    // (1/pi) int_0^{pi/2} sin(th) e^{-A/cos^2 th} H(sin th) dth,  H(r) = int_0^inf erfc(r v - c/2) e^{-v^2} dv.
    std::vector<double> v, wv, th, wt;
    composite_gl(0.0, 7.0, 14, 16, v, wv);
    composite_gl(0.0, kPi / 2.0, 32, 16, th, wt);
    double sum = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double r = std::sin(th[i]), cs = std::cos(th[i]);
      double h = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) h += wv[k] * std::erfc(r * v[k] - 0.5 * c) * std::exp(-v[k] * v[k]);
      sum += wt[i] * r * std::exp(-A / (cs * cs)) * h;
    }
    return sum / kPi;
  }
  // weighted variant: u = x0 + x0', w = |x0 - x0'| over u >= w, where Psi is smooth
  const double hi = 2.0 * (std::max(x, y) + 14.0);
  const double rt = std::sqrt(T);
  if (rt * hi > path->x_max()) fail(ErrorKind::Domain, "Brownian path too short for the covariance window");
  std::vector<double> wn, ww;
  composite_gl(0.0, hi, static_cast<int>(std::ceil(hi)), 12, wn, ww);
  double sum = 0.0;
  for (std::size_t i = 0; i < wn.size(); ++i) {
    const double w = wn[i];
    std::vector<double> un, uw;
    composite_gl(w, hi, std::max(1, static_cast<int>(std::ceil(hi - w))), 12, un, uw);
    double inner = 0.0;
    for (std::size_t k = 0; k < un.size(); ++k) {
      const double a = 0.5 * (un[k] + w), b = 0.5 * (un[k] - w);
      inner += uw[k] * small_t_psi({x, y, a, b}) * std::exp(-(*path)(rt * a) - (*path)(rt * b));
    }
    sum += ww[i] * inner;
  }
  return sum;
}

double heat_kernel(double T, double X) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "heat kernel needs T > 0");
  return std::exp(-X * X / (2.0 * T)) / std::sqrt(2.0 * kPi * T);
}

double heat_baseline(double T, double X, const BrownianPath& path) {
  const double hi = std::min(path.x_max(), std::max(X, 0.0) + 12.0 * std::sqrt(T));
  if (hi <= 0.0) return 0.0;
  std::vector<double> g, w;
  composite_gl(0.0, hi, std::max(1, static_cast<int>(std::ceil(hi / (0.5 * std::sqrt(T))))), 16, g, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += w[i] * heat_kernel(T, X - g[i]) * std::exp(-path(g[i]));
  return sum;
}

}  // namespace kpz
