#pragma once

#include <string>
#include <vector>

#include "kpz/distributions.hpp"

namespace kpz {

struct Check {
  std::string name;
  double value = 0.0;  // measured discrepancy or ratio
  double limit = 0.0;  // pass when value <= limit
  bool pass = false;
  std::string detail;
};

// ---- existential constants ----
// ratio(a) = |lhs(a)| / shape(a); C is the max ratio on a coarse grid, drift = max on the refined and
// extended grid divided by C. A drift above 10 counts as a violation.
struct FittedBound {
  std::string name;
  double C = 0.0;
  double drift = 0.0;
  std::size_t points = 0;
  bool violated() const { return !(drift <= 10.0); }
};
std::vector<FittedBound> airy_transform_bounds(const std::vector<double>& b_values = {0.5, 1.0, 2.0});

// sup over the disc |mu~| <= 2 of |prod (1 - sqrt(eps) mu~ tau^k) - e^{-mu~/2}| / sqrt(eps)
double prefactor_deviation(double eps);

// upper tail bound right-hand side with c2, c3 fixed and c1 fitted at (T, y) = (1, 1)
struct TailRow {
  double T, y, one_minus_F, bound;
  bool holds() const { return one_minus_F <= bound * (1.0 + 1e-12); }
};
struct TailTable {
  double c1 = 0, c2 = 0.5, c3 = 0.5;
  std::vector<TailRow> rows;
};
TailTable tail_table(const std::vector<double>& T, const std::vector<double>& y, const NumericConfig& cfg = {});

struct SandwichRow {
  double T, y;
  SandwichBounds b;
  bool ordered() const { return b.lower_lo <= b.lower_hi + 1e-15 && b.upper_lo <= b.upper_hi + 1e-15; }
};
std::vector<SandwichRow> sandwich_table(const std::vector<double>& T, const std::vector<double>& y,
                                        const NumericConfig& cfg = {});

// Identity and invariant suite; full adds the representation triangle at (T, s) = (10, 0).
std::vector<Check> run_validation(const NumericConfig& cfg, bool full);
std::string checks_to_json(const std::vector<Check>& checks);
std::string tails_to_json(const TailTable& t, const std::vector<SandwichRow>& s);

}  // namespace kpz
