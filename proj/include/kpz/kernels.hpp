#pragma once

#include <Eigen/Dense>

#include "kpz/contours.hpp"
#include "kpz/specialfn.hpp"

namespace kpz {

// Microscopic position convention: x = X/eps (Hopf-Cole field) or x = 2^{1/3} t^{2/3} X (fluctuation field).
enum class SpaceConvention { Edge, Clt };

struct ScalingParams {
  double eps = 0, T = 0, X = 0, s = 0, rho_plus = 0.5;
  SpaceConvention convention = SpaceConvention::Edge;
  double gamma = 0, q = 0, p = 0, tau = 0;
  double t = 0, x = 0;
  double lambda = 0, nu = 0, D = 0;
  double xi = 0, a = 0, a_prime = 0, m = 0;
  double kappa = 0, c3 = kC3, alpha = 0;
  long n0 = 0;
};

ScalingParams make_scaling(double eps, double T, double X, double s, double rho_plus = 0.5,
                           SpaceConvention convention = SpaceConvention::Edge);

double lambda_eps(double eps);
double nu_eps(double eps);
double diffusivity_eps(double eps);
double kappa_T(double T);

// int mu e^{-z t/2} / (e^t - mu) dt over the real line, closed form and adaptive quadrature.
// The quadrature needs -2 < Re z < 0.
cplx csc_integral_closed(cplx mu, cplx z);
cplx csc_integral_quadrature(cplx mu, cplx z);

struct KernelParams {
  double T = 1.0;
  double X = 0.0;
  double s = 0.0;
  cplx mu_tilde{-1.0, 0.0};
  QuadratureGrid zeta_grid;
};

cplx kernel_edge(const KernelParams& kp, cplx eta, cplx eta_prime);
// Same kernel with the inner t-integral done by quadrature.
cplx kernel_edge_tintegral(const KernelParams& kp, cplx eta, cplx eta_prime);
cplx kernel_fan(double T, double s, cplx mu_tilde, cplx eta, cplx eta_prime, const QuadratureGrid& zeta_grid);
cplx kernel_fan_tintegral(double T, double s, cplx mu_tilde, cplx eta, cplx eta_prime, const QuadratureGrid& zeta_grid);

// Rescaled parameterization: exponent 2^{1/3} a (zeta - eta'), Gamma offset X/T.
cplx kernel_csc_gamma(double T, double X, double a, cplx mu_tilde, cplx eta, cplx eta_prime,
                      const QuadratureGrid& zeta_grid);

struct EdgeCoordinates {
  double s;
  double X;
};
// (a, X) of the rescaled form to (s, X) of the edge form and back.
EdgeCoordinates edge_from_csc_gamma(double T, double a, double X);
EdgeCoordinates csc_gamma_from_edge(double T, double s, double X);

// Nystrom matrix M_ij = K(eta_i, eta_j) w_j for every mu. The mu dependence enters only through
// exp(-L zeta) and exp(L eta'), L = 2^{1/3} log(-mu), so everything else is assembled once.
class EdgeKernelMatrix {
 public:
  // linear: coefficient of (zeta - eta') in the exponent; gamma_offset: Gamma(2^{1/3} zeta - offset);
  // use_gamma = false drops the Gamma ratio (fan kernel).
  EdgeKernelMatrix(double T, double linear, double gamma_offset, bool use_gamma, const QuadratureGrid& eta,
                   const QuadratureGrid& zeta);
  static EdgeKernelMatrix edge(double T, double X, double s, const EdgeContours& c);
  static EdgeKernelMatrix fan(double T, double s, const EdgeContours& c);

  Eigen::MatrixXcd nystrom(cplx mu_tilde) const;
  // direct zeta sum at one pair of grid indices, for cross-checks
  cplx entry(cplx mu_tilde, std::size_t i, std::size_t j) const;
  std::size_t size() const { return eta_.size(); }

 private:
  Eigen::VectorXcd eta_, zeta_;
  Eigen::MatrixXcd cauchy_;  // w_zeta / (zeta - eta), eta rows
  Eigen::MatrixXcd base_;    // zeta rows, eta' columns, includes w_eta'
};

double airy_kernel(double x, double y);  // int_0^inf Ai(x+t) Ai(y+t) dt in closed form

// Extended Airy kernel by t-quadrature, both orderings of X and X'.
double kernel_airy2(double X, double x, double Xp, double y);
// Rank-one perturbation Ai(x) (e^{-X'^3/3 + X' y} - int_0^inf Ai(y+t) e^{-X' t} dt); for X' < 0 the bracket
// is evaluated as int_{-inf}^0 Ai(y+t) e^{-X' t} dt.
double a2bm_perturbation(double x, double Xp, double y);
// the bracket alone, so the perturbation is Ai(x) a2bm_bracket(X', y)
double a2bm_bracket(double Xp, double y);
double kernel_a2bm(double X, double x, double Xp, double y);

// Real-line kernel K~_{T,mu}(x, y) = int mu/(e^{-kappa t} - mu) Ai^G(x+t, 1/kappa, 0) Ai_G(y+t, 1/kappa, 0) dt.
cplx kernel_ktilde(double T, cplx mu_tilde, double x, double y);

// left side: contour integral left of the origin; right side: the Airy closed form
cplx airy_moment_contour_side(double b, double c);
double airy_moment_closed_side(double b, double c);

// ---- finite eps ----
struct FiniteEpsParams {
  double eps = 0.0, rho_plus = 0.5;
  double t = 0.0;  // formula time; the particle is observed at physical time t / gamma
  double m = 1.0;  // particle label
  double x = 0.0;  // lattice site
  double xi = -1.0;
  double gamma = 0.0, tau = 0.0, alpha = 1.0;
  EpsCircles grids;
};

FiniteEpsParams make_finite_eps(double eps, double rho_plus, double t, long m, long x, int n_eta = 96,
                                int n_zeta = 96, int n_mu = 128);

cplx lambda_fn(const FiniteEpsParams& fp, cplx z);
cplx psi_fn(const FiniteEpsParams& fp, cplx z);

cplx mu_f_doubly_infinite(cplx mu, cplx z, double tau);
cplx f_doubly_infinite(cplx mu, cplx z, double tau);
cplx g_product(cplx zeta, double tau, double alpha);
cplx prefactor_product(cplx mu, double tau);

cplx kernel_J_finite_eps(const FiniteEpsParams& fp, cplx mu, cplx eta, cplx eta_prime);
// M_ij = mu J(eta_i, eta_j) w_j
Eigen::MatrixXcd finite_eps_matrix(const FiniteEpsParams& fp, cplx mu);

}  // namespace kpz
