#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfl/geometry.hpp"
#include "json.hpp"

namespace gfl {

enum class ProfileKind { constant, affine, power_cusp, smooth_periodic, user_table };

// Local regularity of the profile H itself, declared at a specific point.
// Infinite values are encoded as std::numeric_limits<double>::infinity().
struct MarkedPoint {
  double t0 = 0.0;
  double alpha_tilde = 0.0;
  double alpha_under = 0.0;
};

// Time-varying Hurst profile t -> H(t) on a bounded interval.
// H must stay inside (0,1) on the whole domain (checked at construction).
// Evaluation outside the domain throws.
struct HurstProfile {
  ProfileKind kind = ProfileKind::constant;
  std::vector<double> params;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  double declared_beta = 0.0;          // global Holder floor of H, informational
  std::vector<MarkedPoint> marked;     // points with declared local exponents

  // user_table only: piecewise-linear nodes
  std::vector<double> table_t;
  std::vector<double> table_h;

  double operator()(double t) const;
  double min_h() const;  // dense-sampled lower bound of H over the domain
  double max_h() const;
};

// H(t) = h
HurstProfile constant_profile(double h, double lo = 0.0, double hi = 1.0);
// H(t) = a + b t
HurstProfile affine_profile(double a, double b, double lo = 0.0, double hi = 1.0);
// H(t) = c + d |t - tc|^gamma, cusp at tc, 0 < gamma < 1
HurstProfile power_cusp_profile(double c, double d, double gamma, double tc,
                                double lo = 0.0, double hi = 1.0);
// H(t) = mean + amp * sin(freq * t + phase)
HurstProfile smooth_periodic_profile(double mean, double amp, double freq,
                                     double phase = 0.0, double lo = 0.0,
                                     double hi = 1.0);
// piecewise-linear interpolation through (t_i, h_i); nodes must be increasing
HurstProfile table_profile(std::vector<double> ts, std::vector<double> hs,
                           double declared_beta);

// Local exponent pair (alpha_tilde, alpha_under) of H at t0: a declared value
// from marked points, an analytic value for kinds where it is forced by the
// parameters, and nullopt when nothing justified is known. Never a guess.
std::optional<std::pair<double, double>> profile_exponents(const HurstProfile& p,
                                                           double t0);

enum class KernelFamily { fbm, mpfbm, mbm_asymptotic, gw };

// Second-order description of a Gaussian field: the incremental variance
// sigma2(s,t) = E|X_t - X_s|^2 per coordinate, plus the covariance when the
// family provides one in closed form (X_0 = 0 pinned families).
struct IncrementKernel {
  KernelFamily family = KernelFamily::fbm;
  int N = 1;  // parameter-space dimension
  std::function<double(const Point&, const Point&)> sigma2;
  std::function<double(const Point&, const Point&)> covariance;  // may be empty
  nlohmann::json params;  // family-specific scalars, serializable
  bool has_covariance() const { return static_cast<bool>(covariance); }
};

// Raw closed forms -------------------------------------------------------

double fbm_sigma2(double s, double t, double h);
double fbm_covariance(double s, double t, double h);

double mpfbm_sigma2(const Point& s, const Point& t, double h);
double mpfbm_covariance(const Point& s, const Point& t, double h);

// sigma2 ~ K |t-s|^{H(s)+H(t)} + L (H(t)-H(s))^2; small-scale surrogate valid
// near t0, no exact covariance. t0 is validated against the domain; the
// leading-order form itself does not depend on it.
double mbm_sigma2_asymptotic(double s, double t, double t0, const HurstProfile& p,
                             double k_scale = 1.0, double l_scale = 1.0);

// Truncated lacunary-series variance with profile-coupled amplitude drift.
double gw_sigma2(double u, double v, const HurstProfile& p, double lambda, int j_terms);

// Geometric tail bound of the dropped terms: 2 lambda^{-2(J+1) inf H} /
// (1 - lambda^{-2 inf H}).
double gw_tail_bound(double lambda, double inf_h, int j_terms);
// Smallest J whose tail bound is below tail_tol.
int gw_auto_truncation(const HurstProfile& p, double lambda, double tail_tol = 1e-12);

// Factories --------------------------------------------------------------

IncrementKernel make_fbm_kernel(double h);
IncrementKernel make_mpfbm_kernel(int n, double h);  // requires h in (0, 1/2]
IncrementKernel make_mbm_kernel(const HurstProfile& p, double k_scale = 1.0,
                                double l_scale = 1.0);
// j_terms = 0 selects gw_auto_truncation. The chosen J is stored in params.
IncrementKernel make_gw_kernel(const HurstProfile& p, double lambda, int j_terms = 0);

// JSON round-trip --------------------------------------------------------

nlohmann::json profile_to_json(const HurstProfile& p);
HurstProfile profile_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const IncrementKernel& k);
IncrementKernel kernel_from_json(const nlohmann::json& j);

}  // namespace gfl
