#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gfl/geometry.hpp"
#include "gfl/kernels.hpp"
#include "gfl/sampler.hpp"

namespace gfl {

// Per-rung ratio statistics r(s,t) = log sigma2 / (2 log d2) over pairs in
// B(t0, rho). alpha_tilde_hat tracks inf ratios (upper regularity), and
// alpha_under_hat tracks sup ratios (lower regularity); both extrapolate as
// the finest-rung value. sup ratios at or above sup_cap report infinity.
struct ExponentEstimate {
  Point t0;
  std::vector<double> rho_ladder;
  std::vector<double> inf_ratio;   // per rung
  std::vector<double> sup_ratio;   // per rung
  double alpha_tilde_hat = 0.0;
  double alpha_under_hat = 0.0;
  std::size_t pair_count = 0;      // pairs that entered the statistics
  std::size_t floored_pairs = 0;   // sigma2 below the positivity floor, excluded
  double inf_drift = 0.0;          // last inf_ratio step, monotonicity diagnostic
  double sup_drift = 0.0;          // last sup_ratio step
};

// Decreasing radii 2^-3 .. 2^-10, geometric ratio 1/2.
std::vector<double> default_rho_ladder();
std::vector<double> geometric_ladder(double from, double to, double ratio);

inline constexpr double kSigma2Floor = 1e-300;
inline constexpr double kSupRatioCap = 50.0;

ExponentEstimate kernel_exponents(const IncrementKernel& kernel, const Point& t0,
                                  const std::vector<double>& rho_ladder,
                                  std::size_t pairs_per_rho, std::uint64_t seed);

struct SandwichViolation {
  double rho = 0.0;
  Point s, t;
  double sigma2 = 0.0;
  double lower = 0.0;  // d^(2 alpha_under + eps)
  double upper = 0.0;  // d^(2 alpha_tilde - eps)
};

// Largest ladder radius rho0 such that every sampled pair inside B(t0, rho0)
// satisfies d^(2 alpha_under + eps) <= sigma2 <= d^(2 alpha_tilde - eps),
// using the estimated exponents. rho0_found is empty when no rung qualifies.
struct SandwichReport {
  ExponentEstimate exponents;
  double epsilon = 0.0;
  std::optional<double> rho0_found;
  std::vector<SandwichViolation> violations;  // at the largest rung checked
};

SandwichReport sandwich_check(const IncrementKernel& kernel, const Point& t0,
                              double epsilon, const std::vector<double>& rho_ladder,
                              std::size_t pairs_per_rho, std::uint64_t seed);

// Least-squares slope of log oscillation against log rho, where osc(rho) is
// the max-min of the path over grid points within d2-distance rho of t0.
// Requires at least 4 usable radii holding at least 8 grid points each.
double path_local_exponent(const SamplePath& path, const Point& t0,
                           const std::vector<double>& rho_ladder);

}  // namespace gfl
