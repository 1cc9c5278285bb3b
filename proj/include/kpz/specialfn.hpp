#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kpz/errors.hpp"

namespace kpz {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

cplx gamma_complex(cplx z);
// log Gamma up to a multiple of 2*pi*i; only meant to be exponentiated
cplx log_gamma_complex(cplx z);
cplx recip_gamma(cplx z);

cplx q_pochhammer(cplx a, double q);
cplx q_gamma(double q, cplx x);

// Ai for complex argument: series when |r| <= 5, contour quadrature beyond
cplx airy_ai(cplx r);
cplx airy_ai_series(cplx r);
cplx airy_ai_contour(cplx r);

// real Ai and Ai' for the real-line kernels
double airy_ai(double x);
double airy_ai_prime(double x);
void airy_ai_pair(double x, double& ai, double& aip);

struct AiryGammaArgs {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
};

// Ai^Gamma(a,b,c) = (1/2pi i) int exp(-z^3/3 + a z) Gamma(b z + c) dz, contour left of nothing,
// upward, right of all Gamma poles
cplx airy_gamma(const AiryGammaArgs& args);
// Ai_Gamma(a,b,c) = (1/2pi i) int exp(z^3/3 - a z) / Gamma(b z + c) dz, upward, Re z > 0
cplx airy_recip_gamma(const AiryGammaArgs& args);

// Value plus node-doubling difference.
struct AiryValue {
  cplx value;
  double est_error;
};
AiryValue airy_gamma_checked(const AiryGammaArgs& args);
AiryValue airy_recip_gamma_checked(const AiryGammaArgs& args);

// Batched evaluation at many real a for fixed (b, c). Contours are built per unit bin of a
// and cached; call prepare() over the needed range before sharing across threads.
class AiryTransform {
 public:
  enum class Kind { Plain, Gamma, RecipGamma };
  AiryTransform(Kind kind, double b, double c, double density = 1.0);
  ~AiryTransform();

  void prepare(double a_min, double a_max);
  cplx operator()(double a) const;
  Kind kind() const { return kind_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  struct Bin;
  const Bin& bin_for(double a) const;
  Kind kind_;
  double b_, c_, density_;
  mutable std::mutex mu_;
  mutable std::map<long, std::unique_ptr<Bin>> bins_;
};

}  // namespace kpz
