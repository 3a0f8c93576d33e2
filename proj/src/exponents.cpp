#include "gfl/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gfl/rng.hpp"

namespace gfl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RungStats {
  double inf_r = kInf;
  double sup_r = -kInf;
  std::size_t used = 0;
  std::size_t floored = 0;
  // retained pair data so the sandwich scan can reuse the same sample
  std::vector<Point> s, t;
  std::vector<double> sigma2, d2;
};

RungStats scan_rung(const IncrementKernel& kernel, const Point& t0, double rho,
                    std::size_t pairs, std::uint64_t seed, std::uint64_t tag,
                    bool keep_pairs) {
  RungStats st;
  auto sampled = sample_ball_pairs({t0, rho}, pairs, PairStrategy::quasi_random,
                                   mix64(seed) ^ tag);
  for (auto& [a, b] : sampled) {
    double v = kernel.sigma2(a, b);
    if (!(v > kSigma2Floor)) {
      ++st.floored;
      continue;
    }
    double d = dist(a, b, Norm::two);
    double r = std::log(v) / (2.0 * std::log(d));
    st.inf_r = std::min(st.inf_r, r);
    st.sup_r = std::max(st.sup_r, r);
    ++st.used;
    if (keep_pairs) {
      st.s.push_back(std::move(a));
      st.t.push_back(std::move(b));
      st.sigma2.push_back(v);
      st.d2.push_back(d);
    }
  }
  return st;
}

void validate_ladder(const std::vector<double>& ladder, const char* who) {
  if (ladder.empty()) throw std::invalid_argument(std::string(who) + ": empty rho ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0) || !std::isfinite(ladder[i]))
      throw std::invalid_argument(std::string(who) + ": ladder radii must be positive");
    if (i && !(ladder[i] < ladder[i - 1]))
      throw std::invalid_argument(std::string(who) + ": ladder must be strictly decreasing");
  }
}

ExponentEstimate estimate_impl(const IncrementKernel& kernel, const Point& t0,
                               const std::vector<double>& rho_ladder,
                               std::size_t pairs_per_rho, std::uint64_t seed,
                               std::vector<RungStats>* keep) {
  validate_ladder(rho_ladder, "kernel_exponents");
  if (pairs_per_rho == 0)
    throw std::invalid_argument("kernel_exponents: pairs_per_rho must be positive");
  if (static_cast<int>(t0.size()) != kernel.N)
    throw std::invalid_argument("kernel_exponents: t0 dimension does not match kernel");

  ExponentEstimate est;
  est.t0 = t0;
  est.rho_ladder = rho_ladder;
  for (std::size_t i = 0; i < rho_ladder.size(); ++i) {
    RungStats st = scan_rung(kernel, t0, rho_ladder[i], pairs_per_rho, seed, i,
                             keep != nullptr);
    est.pair_count += st.used;
    est.floored_pairs += st.floored;
    est.inf_ratio.push_back(st.used ? st.inf_r : kInf);
    est.sup_ratio.push_back(st.used ? st.sup_r : -kInf);
    if (keep) keep->push_back(std::move(st));
  }
  if (est.pair_count == 0)
    throw std::runtime_error("kernel_exponents: degenerate kernel, all sampled sigma2 vanish");

  est.alpha_tilde_hat = est.inf_ratio.back();
  double sup_last = est.sup_ratio.back();
  est.alpha_under_hat = (sup_last >= kSupRatioCap) ? kInf : sup_last;
  if (rho_ladder.size() >= 2) {
    est.inf_drift = est.inf_ratio.back() - est.inf_ratio[est.inf_ratio.size() - 2];
    est.sup_drift = est.sup_ratio.back() - est.sup_ratio[est.sup_ratio.size() - 2];
  }
  return est;
}

}  // namespace

std::vector<double> geometric_ladder(double from, double to, double ratio) {
  if (!(from > 0.0 && to > 0.0 && to <= from))
    throw std::invalid_argument("geometric_ladder: need from >= to > 0");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("geometric_ladder: ratio must lie in (0,1)");
  std::vector<double> out;
  for (double r = from; r >= to * 0.999999; r *= ratio) out.push_back(r);
  return out;
}

std::vector<double> default_rho_ladder() {
  return geometric_ladder(std::ldexp(1.0, -3), std::ldexp(1.0, -10), 0.5);
}

ExponentEstimate kernel_exponents(const IncrementKernel& kernel, const Point& t0,
                                  const std::vector<double>& rho_ladder,
                                  std::size_t pairs_per_rho, std::uint64_t seed) {
  return estimate_impl(kernel, t0, rho_ladder, pairs_per_rho, seed, nullptr);
}

SandwichReport sandwich_check(const IncrementKernel& kernel, const Point& t0,
                              double epsilon, const std::vector<double>& rho_ladder,
                              std::size_t pairs_per_rho, std::uint64_t seed) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("sandwich_check: epsilon must be positive");
  std::vector<RungStats> rungs;
  SandwichReport rep;
  rep.exponents = estimate_impl(kernel, t0, rho_ladder, pairs_per_rho, seed, &rungs);
  rep.epsilon = epsilon;
  const double at = rep.exponents.alpha_tilde_hat;
  const double au = rep.exponents.alpha_under_hat;
  if (!(epsilon < 2.0 * at))
    throw std::invalid_argument("sandwich_check: invalid epsilon, must be below 2*alpha_tilde");

  // Pairs sampled at rung j lie inside B(t0, rho_i) for every i <= j, so the
  // candidate rho_i must sandwich all rungs from i onward.
  auto rung_violations = [&](std::size_t i) {
    std::vector<SandwichViolation> out;
    for (std::size_t j = i; j < rungs.size(); ++j) {
      const RungStats& st = rungs[j];
      for (std::size_t k = 0; k < st.sigma2.size(); ++k) {
        double lo = std::pow(st.d2[k], std::isinf(au) ? kSupRatioCap * 2.0 + epsilon
                                                      : 2.0 * au + epsilon);
        double hi = std::pow(st.d2[k], 2.0 * at - epsilon);
        if (st.sigma2[k] < lo || st.sigma2[k] > hi)
          out.push_back({rho_ladder[j], st.s[k], st.t[k], st.sigma2[k], lo, hi});
      }
    }
    return out;
  };

  for (std::size_t i = 0; i < rungs.size(); ++i) {
    auto v = rung_violations(i);
    if (v.empty()) {
      rep.rho0_found = rho_ladder[i];
      return rep;
    }
    if (i == 0) rep.violations = std::move(v);
  }
  return rep;
}

double path_local_exponent(const SamplePath& path, const Point& t0,
                           const std::vector<double>& rho_ladder) {
  validate_ladder(rho_ladder, "path_local_exponent");
  if (static_cast<int>(t0.size()) != path.grid.dim())
    throw std::invalid_argument("path_local_exponent: t0 dimension does not match grid");
  for (int a = 0; a < path.grid.dim(); ++a)
    if (!(t0[a] > path.grid.domain.lower[a] && t0[a] < path.grid.domain.upper[a]))
      throw std::invalid_argument("path_local_exponent: t0 must be interior to the grid");

  const std::size_t n = path.num_points();
  std::vector<double> log_rho, log_osc;
  bool any_points = false;
  for (double rho : rho_ladder) {
    double mn = kInf, mx = -kInf;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Point p = path.grid.point_at(i);
      double r2 = 0.0;
      for (int a = 0; a < path.grid.dim(); ++a)
        r2 += (p[a] - t0[a]) * (p[a] - t0[a]);
      if (r2 > rho * rho) continue;
      ++hits;
      for (int c = 0; c < path.d; ++c) {
        double v = path.value(i, c);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    }
    if (hits < 8) continue;
    any_points = true;
    double osc = mx - mn;
    if (osc <= 0.0) continue;  // flat at this scale
    log_rho.push_back(std::log(rho));
    log_osc.push_back(std::log(osc));
  }
  if (any_points && log_osc.empty())
    throw std::runtime_error("path_local_exponent: degenerate path, zero oscillation at every radius");
  if (log_osc.size() < 4)
    throw std::invalid_argument(
        "path_local_exponent: need at least 4 ladder radii holding at least 8 grid points");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(log_osc.size());
  for (std::size_t i = 0; i < log_osc.size(); ++i) {
    sx += log_rho[i];
    sy += log_osc[i];
    sxx += log_rho[i] * log_rho[i];
    sxy += log_rho[i] * log_osc[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace gfl
