#include "kpz/kernels.hpp"


#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "kpz/quadrature.hpp"

namespace kpz {

namespace {

const double kCbrt2 = std::cbrt(2.0);

struct EdgeForm {
  double T;
  double linear;
  double offset;
  bool use_gamma;
};

EdgeForm edge_form(double T, double X, double s) { return {T, s * std::cbrt(T), kCbrt2 * X / std::cbrt(T), true}; }

cplx log_minus_mu(cplx mu) {
  if (mu.imag() == 0.0 && mu.real() >= 0.0) fail(ErrorKind::Branch, "mu on the cut [0, inf)");
  return std::log(-mu);
}

// Everything in the zeta integrand except 1/(zeta - eta), the weight and the mu power.
cplx edge_base(const EdgeForm& f, cplx zeta, cplx eta_p) {
  const cplx d = zeta - eta_p;
  const cplx w = kCbrt2 * d;
  const cplx sn = std::sin(kPi * w);
  if (std::abs(sn) < 1e-10) fail(ErrorKind::Singularity, "zeta - eta' hits a zero of the sine");
  cplx v = std::exp(-f.T / 3.0 * (zeta * zeta * zeta - eta_p * eta_p * eta_p) + f.linear * d) * (kPi * kCbrt2) / sn;
  if (f.use_gamma) v *= gamma_complex(kCbrt2 * zeta - f.offset) * recip_gamma(kCbrt2 * eta_p - f.offset);
  return v;
}

cplx edge_base_t(const EdgeForm& f, cplx mu, cplx zeta, cplx eta_p) {
  const cplx d = zeta - eta_p;
  cplx v = std::exp(-f.T / 3.0 * (zeta * zeta * zeta - eta_p * eta_p * eta_p) + f.linear * d) * kCbrt2 *
           csc_integral_quadrature(mu, 2.0 * kCbrt2 * d);
  if (f.use_gamma) v *= gamma_complex(kCbrt2 * zeta - f.offset) * recip_gamma(kCbrt2 * eta_p - f.offset);
  return v;
}

cplx edge_pointwise(const EdgeForm& f, cplx mu, cplx eta, cplx eta_p, const QuadratureGrid& zg, bool t_form) {
  const cplx L = kCbrt2 * log_minus_mu(mu);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < zg.size(); ++k) {
    const cplx z = zg.nodes[k];
    if (std::abs(z - eta) < 1e-10) fail(ErrorKind::Singularity, "zeta node coincides with eta");
    const cplx b = t_form ? edge_base_t(f, mu, z, eta_p) : edge_base(f, z, eta_p) * std::exp(-L * (z - eta_p));
    sum += zg.weights[k] * b / (z - eta);
  }
  return sum;
}

struct CscParams {
  cplx mu;
  cplx z;
  bool imag;
};

double csc_integrand(double t, void* p) {
  const auto* c = static_cast<const CscParams*>(p);
  // mu e^{-zt/2}/(e^t - mu), written to stay finite for large |t|
  cplx v;
  if (t > 0) v = c->mu * std::exp(-(1.0 + 0.5 * c->z) * t) / (1.0 - c->mu * std::exp(-t));
  else v = c->mu * std::exp(-0.5 * c->z * t) / (std::exp(t) - c->mu);
  return c->imag ? v.imag() : v.real();
}

double gl_integral(double a, double b, double panel, int n, const std::function<double(double)>& f) {
  if (!(b > a)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  std::vector<double> x, w;
  composite_gl(a, b, panels, n, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

}  // namespace

// ---- scaling ----

double lambda_eps(double eps) {
  const double g = std::sqrt(eps);
  return 0.5 * std::log((1.0 + g) / (1.0 - g));
}

double nu_eps(double eps) {
  // p + q - 2 sqrt(pq) = 1 - sqrt(1 - eps), written without cancellation
  return eps / (1.0 + std::sqrt(1.0 - eps));
}

double diffusivity_eps(double eps) { return std::sqrt(1.0 - eps); }

double kappa_T(double T) { return std::cbrt(T) / kCbrt2; }

ScalingParams make_scaling(double eps, double T, double X, double s, double rho_plus, SpaceConvention convention) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Arg, "eps must lie in (0, 1)");
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  if (!(rho_plus > 0.0 && rho_plus <= 1.0)) fail(ErrorKind::Arg, "rho_plus must lie in (0, 1]");
  ScalingParams sp;
  sp.eps = eps;
  sp.T = T;
  sp.X = X;
  sp.s = s;
  sp.rho_plus = rho_plus;
  sp.convention = convention;
  sp.gamma = std::sqrt(eps);
  sp.q = 0.5 * (1.0 + sp.gamma);
  sp.p = 0.5 * (1.0 - sp.gamma);
  sp.tau = sp.p / sp.q;
  sp.t = std::pow(eps, -1.5) * T;
  sp.x = convention == SpaceConvention::Edge ? X / eps : kCbrt2 * std::pow(sp.t, 2.0 / 3.0) * X;
  sp.lambda = lambda_eps(eps);
  sp.nu = nu_eps(eps);
  sp.D = diffusivity_eps(eps);
  sp.xi = -1.0 - 2.0 * sp.gamma * X / T;
  sp.a = s + X * X / (2.0 * T);
  sp.a_prime = sp.a + std::log(2.0);
  sp.m = 0.5 * ((-sp.a + X * X / (2.0 * T)) / sp.gamma + sp.t / 2.0 + sp.x);
  sp.kappa = kappa_T(T);
  sp.alpha = (1.0 - rho_plus) / rho_plus;
  sp.n0 = static_cast<long>(std::floor(std::log(1.0 / sp.gamma) / std::log(sp.tau)));
  return sp;
}

// ---- csc identity ----

cplx csc_integral_closed(cplx mu, cplx z) {
  const cplx h = 0.5 * z;
  return std::exp(-log_minus_mu(mu) * h) * kPi / std::sin(kPi * h);
}

cplx csc_integral_quadrature(cplx mu, cplx z) {
  if (!(z.real() > -2.0 && z.real() < 0.0)) fail(ErrorKind::Domain, "t-integral diverges unless -2 < Re z < 0");
  (void)log_minus_mu(mu);
  // integrand decays like e^{-(1 + Re z/2) t} on the right and e^{(Re z/2) |t|} on the left;
  // panels resolve the e^{-i Im z t/2} oscillation
  const double right = 38.0 / (1.0 + 0.5 * z.real());
  const double left = 38.0 / (-0.5 * z.real());
  const double panel = std::min(1.0, 2.0 * kPi / std::max(1.0, std::abs(z.imag())));
  if ((right + left) / panel > 4e6) fail(ErrorKind::Convergence, "t-integral needs too many panels");
  CscParams re{mu, z, false}, im{mu, z, true};
  auto f_re = [&](double t) { return csc_integrand(t, &re); };
  auto f_im = [&](double t) { return csc_integrand(t, &im); };
  const double a = gl_integral(-left, 0.0, panel, 12, f_re) + gl_integral(0.0, right, panel, 12, f_re);
  const double b = gl_integral(-left, 0.0, panel, 12, f_im) + gl_integral(0.0, right, panel, 12, f_im);
  if (!std::isfinite(a) || !std::isfinite(b)) fail(ErrorKind::Convergence, "t-integral quadrature did not converge");
  return {a, b};
}

// ---- edge / fan / rescaled kernels ----

cplx kernel_edge(const KernelParams& kp, cplx eta, cplx eta_prime) {
  return edge_pointwise(edge_form(kp.T, kp.X, kp.s), kp.mu_tilde, eta, eta_prime, kp.zeta_grid, false);
}

cplx kernel_edge_tintegral(const KernelParams& kp, cplx eta, cplx eta_prime) {
  return edge_pointwise(edge_form(kp.T, kp.X, kp.s), kp.mu_tilde, eta, eta_prime, kp.zeta_grid, true);
}

cplx kernel_fan(double T, double s, cplx mu_tilde, cplx eta, cplx eta_prime, const QuadratureGrid& zeta_grid) {
  EdgeForm f{T, s * std::cbrt(T), 0.0, false};
  return edge_pointwise(f, mu_tilde, eta, eta_prime, zeta_grid, false);
}

cplx kernel_fan_tintegral(double T, double s, cplx mu_tilde, cplx eta, cplx eta_prime,
                          const QuadratureGrid& zeta_grid) {
  EdgeForm f{T, s * std::cbrt(T), 0.0, false};
  return edge_pointwise(f, mu_tilde, eta, eta_prime, zeta_grid, true);
}

cplx kernel_csc_gamma(double T, double X, double a, cplx mu_tilde, cplx eta, cplx eta_prime,
                      const QuadratureGrid& zeta_grid) {
  EdgeForm f{T, kCbrt2 * a, X / T, true};
  return edge_pointwise(f, mu_tilde, eta, eta_prime, zeta_grid, false);
}

EdgeCoordinates edge_from_csc_gamma(double T, double a, double X) {
  return {kCbrt2 * a / std::cbrt(T), X / (kCbrt2 * std::pow(T, 2.0 / 3.0))};
}

EdgeCoordinates csc_gamma_from_edge(double T, double s, double X) {
  return {std::cbrt(T) * s / kCbrt2, kCbrt2 * std::pow(T, 2.0 / 3.0) * X};
}

EdgeKernelMatrix::EdgeKernelMatrix(double T, double linear, double gamma_offset, bool use_gamma,
                                   const QuadratureGrid& eta, const QuadratureGrid& zeta) {
  const auto ne = static_cast<Eigen::Index>(eta.size());
  const auto nz = static_cast<Eigen::Index>(zeta.size());
  eta_.resize(ne);
  zeta_.resize(nz);
  for (Eigen::Index i = 0; i < ne; ++i) eta_(i) = eta.nodes[i];
  for (Eigen::Index k = 0; k < nz; ++k) zeta_(k) = zeta.nodes[k];
  cauchy_.resize(ne, nz);
  for (Eigen::Index i = 0; i < ne; ++i)
    for (Eigen::Index k = 0; k < nz; ++k) {
      const cplx d = zeta_(k) - eta_(i);
      if (std::abs(d) < 1e-10) fail(ErrorKind::Singularity, "zeta node coincides with eta node");
      cauchy_(i, k) = zeta.weights[k] / d;
    }
  // Gamma factors depend on one variable only
  std::vector<cplx> gz(nz, 1.0), rg(ne, 1.0);
  if (use_gamma) {
    for (Eigen::Index k = 0; k < nz; ++k) gz[k] = gamma_complex(kCbrt2 * zeta_(k) - gamma_offset);
    for (Eigen::Index j = 0; j < ne; ++j) rg[j] = recip_gamma(kCbrt2 * eta_(j) - gamma_offset);
  }
  const EdgeForm plain{T, linear, 0.0, false};
  base_.resize(nz, ne);
  for (Eigen::Index k = 0; k < nz; ++k)
    for (Eigen::Index j = 0; j < ne; ++j)
      base_(k, j) = edge_base(plain, zeta_(k), eta_(j)) * gz[k] * rg[j] * eta.weights[j];
}

EdgeKernelMatrix EdgeKernelMatrix::edge(double T, double X, double s, const EdgeContours& c) {
  const EdgeForm f = edge_form(T, X, s);
  return EdgeKernelMatrix(T, f.linear, f.offset, true, c.eta, c.zeta);
}

EdgeKernelMatrix EdgeKernelMatrix::fan(double T, double s, const EdgeContours& c) {
  return EdgeKernelMatrix(T, s * std::cbrt(T), 0.0, false, c.eta, c.zeta);
}

Eigen::MatrixXcd EdgeKernelMatrix::nystrom(cplx mu_tilde) const {
  const cplx L = kCbrt2 * log_minus_mu(mu_tilde);
  const Eigen::VectorXcd left = (-L * zeta_).array().exp();
  const Eigen::VectorXcd right = (L * eta_).array().exp();
  Eigen::MatrixXcd scaled = left.asDiagonal() * base_;
  Eigen::MatrixXcd m = cauchy_ * scaled;
  return m * right.asDiagonal();
}

cplx EdgeKernelMatrix::entry(cplx mu_tilde, std::size_t i, std::size_t j) const {
  const cplx L = kCbrt2 * log_minus_mu(mu_tilde);
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < zeta_.size(); ++k)
    sum += cauchy_(i, k) * base_(k, j) * std::exp(-L * (zeta_(k) - eta_(j)));
  return sum;
}

// ---- real-line Airy kernels ----

double airy_kernel(double x, double y) {
  double ax, apx, ay, apy;
  airy_ai_pair(x, ax, apx);
  if (std::abs(x - y) < 1e-8) {
    // the symmetric difference quotient is flat to O((x-y)^2) around the diagonal
    const double m = 0.5 * (x + y);
    double am, apm;
    airy_ai_pair(m, am, apm);
    return apm * apm - m * am * am;
  }
  airy_ai_pair(y, ay, apy);
  return (ax * apy - apx * ay) / (x - y);
}

double kernel_airy2(double X, double x, double Xp, double y) {
  const double dX = Xp - X;
  if (X >= Xp) {
    const double t_end = std::max(0.0, 17.0 - std::max(x, y)) + 1.0;
    return gl_integral(0.0, t_end, 1.0, 20,
                       [&](double t) { return std::exp(dX * t) * airy_ai(t + x) * airy_ai(t + y); });
  }
  const double t_start = -(38.0 / dX) - std::max(0.0, std::max(x, y) - 17.0);
  return -gl_integral(t_start, 0.0, 1.0, 20,
                      [&](double t) { return std::exp(dX * t) * airy_ai(t + x) * airy_ai(t + y); });
}

double a2bm_bracket(double Xp, double y) {
  double bracket;
  if (Xp < -0.5) {
    const double u_end = 38.0 / -Xp;
    bracket = gl_integral(0.0, u_end, 1.0, 20, [&](double u) { return airy_ai(y - u) * std::exp(Xp * u); });
  } else {
    const double t_end = std::max(0.0, 17.0 - y) + 6.0;
    const double tail =
        gl_integral(0.0, t_end, 1.0, 20, [&](double t) { return airy_ai(y + t) * std::exp(-Xp * t); });
    bracket = std::exp(-Xp * Xp * Xp / 3.0 + Xp * y) - tail;
  }
  return bracket;
}

double a2bm_perturbation(double x, double Xp, double y) { return airy_ai(x) * a2bm_bracket(Xp, y); }

double kernel_a2bm(double X, double x, double Xp, double y) {
  return kernel_airy2(X, x, Xp, y) + a2bm_perturbation(x, Xp, y);
}

// ---- K~ real-line kernel ----

namespace {

struct KtildePair {
  std::unique_ptr<AiryTransform> up, down;
};

const KtildePair& ktilde_transforms(double T) {
  static std::mutex mu;
  static std::map<double, KtildePair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(T);
  if (it != cache.end()) return it->second;
  const double b = 1.0 / kappa_T(T);
  KtildePair p;
  p.up = std::make_unique<AiryTransform>(AiryTransform::Kind::Gamma, b, 0.0);
  p.down = std::make_unique<AiryTransform>(AiryTransform::Kind::RecipGamma, b, 0.0);
  return cache.emplace(T, std::move(p)).first->second;
}

}  // namespace

cplx kernel_ktilde(double T, cplx mu_tilde, double x, double y) {
  if (!(T > 0.0)) fail(ErrorKind::Arg, "T must be positive");
  (void)log_minus_mu(mu_tilde);
  const double k = kappa_T(T);
  const double b = 1.0 / k;
  const auto& tr = ktilde_transforms(T);
  double u = 45.0 / k;
  for (int it = 0; it < 6; ++it) u = (45.0 + 2.0 * b * std::sqrt(u + std::abs(x) + std::abs(y))) / k;
  const double t_lo = -u;
  const double t_hi = std::max(15.0 - y, t_lo + 1.0);
  const int panels = std::max(1, static_cast<int>(std::ceil((t_hi - t_lo) / 0.5)));
  std::vector<double> ts, ws;
  composite_gl(t_lo, t_hi, panels, 16, ts, ws);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const cplx m = mu_tilde / (std::exp(-k * t) - mu_tilde);
    sum += ws[i] * m * (*tr.up)(x + t) * (*tr.down)(y + t);
  }
  return sum;
}

// ---- exponential Airy moment identity ----

cplx airy_moment_contour_side(double b, double c) {
  // two rays leaving -1 at angles +-2pi/3, oriented upward
  const cplx z0(-1.0, 0.0);
  const cplx up = std::polar(1.0, 2.0 * kPi / 3.0), down = std::polar(1.0, -2.0 * kPi / 3.0);
  std::vector<double> r, w;
  composite_gl(0.0, 14.0, 56, 16, r, w);
  cplx sum = 0.0;
  auto f = [&](cplx z) { return std::exp(-z * z * z / 3.0 - b * z * z + c * z) / z; };
  for (std::size_t i = 0; i < r.size(); ++i) sum += w[i] * (f(z0 + r[i] * up) * up - f(z0 + r[i] * down) * down);
  return sum / kTwoPiI;
}

double airy_moment_closed_side(double b, double c) {
  const double shift = b * b + c;
  const double t_end = std::max(0.0, 17.0 - shift) + 8.0;
  const double integral =
      gl_integral(0.0, t_end, 0.5, 20, [&](double t) { return airy_ai(shift + t) * std::exp(-b * t); });
  return -std::exp(-2.0 / 3.0 * b * b * b - b * c) * integral;
}

// ---- finite eps ----

FiniteEpsParams make_finite_eps(double eps, double rho_plus, double t, long m, long x, int n_eta, int n_zeta,
                                int n_mu) {
  if (m < 1) fail(ErrorKind::Arg, "particle label m must be positive");
  if (!(t >= 0.0)) fail(ErrorKind::Arg, "t must be non-negative");
  FiniteEpsParams fp;
  fp.eps = eps;
  fp.rho_plus = rho_plus;
  fp.t = t;
  fp.m = static_cast<double>(m);
  fp.x = static_cast<double>(x);
  fp.grids = build_eps_circles(eps, rho_plus, n_eta, n_zeta, n_mu);
  fp.gamma = std::sqrt(eps);
  fp.tau = fp.grids.tau;
  fp.alpha = fp.grids.alpha;
  fp.xi = -1.0;
  return fp;
}

cplx lambda_fn(const FiniteEpsParams& fp, cplx z) {
  if (std::abs(z) < 1e-300 || std::abs(1.0 - z) < 1e-300) fail(ErrorKind::Domain, "Lambda is singular at 0 and 1");
  return -fp.x * std::log(1.0 - z) + fp.t * z / (1.0 - z) + fp.m * std::log(z);
}

cplx psi_fn(const FiniteEpsParams& fp, cplx z) { return lambda_fn(fp, z) - lambda_fn(fp, fp.xi); }

namespace {

cplx g_plus_series(cplx mu, cplx w, double tau) {
  // sum_{k>=0} mu (tau w)^k / (1 - tau^k mu), ratio |tau w| < 1/2
  cplx sum = 0.0, pw = 1.0;
  double tk = 1.0;
  for (int k = 0; k < 4000; ++k) {
    const cplx term = mu * pw / (1.0 - tk * mu);
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) return sum;
    pw *= tau * w;
    tk *= tau;
  }
  fail(ErrorKind::Convergence, "g+ series did not converge");
}

cplx g_minus_series(cplx mu, cplx w, double tau) {
  // sum_{k>=1} mu w^{-k} / (tau^k - mu), ratio 1/|w| < 1/2
  cplx sum = 0.0, pw = 1.0 / w;
  double tk = tau;
  for (int k = 1; k < 4000; ++k) {
    const cplx term = mu * pw / (tk - mu);
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) return sum;
    pw /= w;
    tk *= tau;
  }
  fail(ErrorKind::Convergence, "g- series did not converge");
}

}  // namespace

cplx mu_f_doubly_infinite(cplx mu, cplx z, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) fail(ErrorKind::Arg, "tau must lie in (0, 1)");
  if (std::abs(z) == 0.0) fail(ErrorKind::Domain, "f is singular at z = 0");
  if (std::abs(mu) == 0.0) return 0.0;
  if (mu.real() > 0.0) {
    const double j = std::round(std::log(mu.real()) / std::log(tau));
    if (std::abs(mu - std::pow(tau, j)) < 1e-12) fail(ErrorKind::Pole, "mu sits on tau^j");
  }
  // g+(z) = mu/(1 - tau z) + mu g+(tau z)
  cplx gp = 0.0, coef = 1.0, w = z;
  int guard = 0;
  while (std::abs(tau * w) >= 0.5) {
    gp += coef * mu / (1.0 - tau * w);
    coef *= mu;
    w *= tau;
    if (++guard > 100000) fail(ErrorKind::Convergence, "g+ recursion did not terminate");
  }
  gp += coef * g_plus_series(mu, w, tau);
  // g-(z) = -1/(z - 1) + g-(z/tau)/mu
  cplx gm = 0.0;
  coef = 1.0;
  w = z;
  guard = 0;
  while (std::abs(w) <= 2.0) {
    gm -= coef / (w - 1.0);
    coef /= mu;
    w /= tau;
    if (++guard > 100000) fail(ErrorKind::Convergence, "g- recursion did not terminate");
  }
  gm += coef * g_minus_series(mu, w, tau);
  return gp + gm;
}

cplx f_doubly_infinite(cplx mu, cplx z, double tau) {
  if (std::abs(mu) == 0.0) fail(ErrorKind::Domain, "f is evaluated through mu f; mu = 0 not allowed");
  return mu_f_doubly_infinite(mu, z, tau) / mu;
}

cplx g_product(cplx zeta, double tau, double alpha) {
  for (int n = 0; n < 4000; ++n) {
    const double r = std::pow(tau, n) * alpha;
    if (std::abs(1.0 + r * zeta) < 1e-14) fail(ErrorKind::Pole, "zeta on a pole of 1/g");
    if (r * std::abs(zeta) < 1e-17) break;
  }
  return q_pochhammer(-alpha * zeta, tau);
}

cplx prefactor_product(cplx mu, double tau) { return q_pochhammer(mu, tau); }

namespace {

// exp(Lambda(z)) with integer x and m, so principal logs are harmless
cplx exp_lambda(const FiniteEpsParams& fp, cplx z) { return std::exp(lambda_fn(fp, z)); }

void check_integral(const FiniteEpsParams& fp) {
  if (fp.m != std::round(fp.m) || fp.x != std::round(fp.x))
    fail(ErrorKind::Arg, "the exact formula needs integer m and x");
}

}  // namespace

cplx kernel_J_finite_eps(const FiniteEpsParams& fp, cplx mu, cplx eta, cplx eta_prime) {
  check_integral(fp);
  const auto& zg = fp.grids.zeta;
  const cplx right = g_product(eta_prime, fp.tau, fp.alpha) / (exp_lambda(fp, eta_prime) * eta_prime);
  cplx sum = 0.0;
  for (std::size_t k = 0; k < zg.size(); ++k) {
    const cplx z = zg.nodes[k];
    const cplx left = exp_lambda(fp, z) / g_product(z, fp.tau, fp.alpha);
    sum += zg.weights[k] * left * f_doubly_infinite(mu, z / eta_prime, fp.tau) / (z - eta);
  }
  return sum * right;
}

Eigen::MatrixXcd finite_eps_matrix(const FiniteEpsParams& fp, cplx mu) {
  check_integral(fp);
  const auto& zg = fp.grids.zeta;
  const auto& eg = fp.grids.eta;
  const auto nz = static_cast<Eigen::Index>(zg.size());
  const auto ne = static_cast<Eigen::Index>(eg.size());
  Eigen::MatrixXcd cauchy(ne, nz), inner(nz, ne);
  std::vector<cplx> left(nz), right(ne);
  for (Eigen::Index k = 0; k < nz; ++k) left[k] = exp_lambda(fp, zg.nodes[k]) / g_product(zg.nodes[k], fp.tau, fp.alpha);
  for (Eigen::Index j = 0; j < ne; ++j) {
    const cplx e = eg.nodes[j];
    right[j] = g_product(e, fp.tau, fp.alpha) / (exp_lambda(fp, e) * e) * eg.weights[j];
  }
  for (Eigen::Index i = 0; i < ne; ++i)
    for (Eigen::Index k = 0; k < nz; ++k) cauchy(i, k) = zg.weights[k] / (zg.nodes[k] - eg.nodes[i]);
  for (Eigen::Index k = 0; k < nz; ++k)
    for (Eigen::Index j = 0; j < ne; ++j)
      inner(k, j) = left[k] * mu_f_doubly_infinite(mu, zg.nodes[k] / eg.nodes[j], fp.tau) * right[j];
  return cauchy * inner;
}

}  // namespace kpz
