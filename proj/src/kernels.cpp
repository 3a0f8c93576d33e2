#include "gfl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kDenseSamples = 4096;

void check_domain(const HurstProfile& p, double t, const char* who) {
  if (!(t >= p.domain_lo && t <= p.domain_hi))
    throw std::invalid_argument(std::string(who) + ": point outside profile domain");
}

double eval_kind(const HurstProfile& p, double t) {
  switch (p.kind) {
    case ProfileKind::constant:
      return p.params[0];
    case ProfileKind::affine:
      return p.params[0] + p.params[1] * t;
    case ProfileKind::power_cusp:
      return p.params[0] + p.params[1] * std::pow(std::fabs(t - p.params[3]), p.params[2]);
    case ProfileKind::smooth_periodic:
      return p.params[0] + p.params[1] * std::sin(p.params[2] * t + p.params[3]);
    case ProfileKind::user_table: {
      const auto& ts = p.table_t;
      const auto& hs = p.table_h;
      auto it = std::upper_bound(ts.begin(), ts.end(), t);
      if (it == ts.begin()) return hs.front();
      if (it == ts.end()) return hs.back();
      std::size_t j = static_cast<std::size_t>(it - ts.begin());
      double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
      return hs[j - 1] + w * (hs[j] - hs[j - 1]);
    }
  }
  throw std::invalid_argument("profile: unknown kind");
}

std::size_t kind_arity(ProfileKind k) {
  switch (k) {
    case ProfileKind::constant: return 1;
    case ProfileKind::affine: return 2;
    case ProfileKind::power_cusp: return 4;
    case ProfileKind::smooth_periodic: return 4;
    case ProfileKind::user_table: return 0;
  }
  return 0;
}

// Construction-time invariant: H stays strictly inside (0,1) on the domain.
// Shape checks come first: profiles can arrive from JSON, not just factories,
// so eval_kind must never index past params or an empty table.
void validate_profile(const HurstProfile& p) {
  if (p.params.size() < kind_arity(p.kind))
    throw std::invalid_argument("profile: too few parameters for kind");
  if (p.kind == ProfileKind::user_table) {
    if (p.table_t.size() != p.table_h.size() || p.table_t.size() < 2)
      throw std::invalid_argument("profile: need at least 2 matching table nodes");
    for (std::size_t i = 1; i < p.table_t.size(); ++i)
      if (!(p.table_t[i] > p.table_t[i - 1]))
        throw std::invalid_argument("profile: table nodes must be strictly increasing");
  }
  if (!(p.domain_lo < p.domain_hi))
    throw std::invalid_argument("profile: empty domain");
  for (int i = 0; i <= kDenseSamples; ++i) {
    double t = p.domain_lo + (p.domain_hi - p.domain_lo) * i / kDenseSamples;
    double h = eval_kind(p, t);
    if (!(h > 0.0 && h < 1.0))
      throw std::invalid_argument("profile: H leaves (0,1) on the declared domain");
  }
  for (const auto& m : p.marked) {
    if (!(m.alpha_tilde <= m.alpha_under))
      throw std::invalid_argument("profile: marked exponents must satisfy alpha_tilde <= alpha_under");
  }
}

void check_h_open_unit(double h, const char* who) {
  if (!(h > 0.0 && h <= 1.0))
    throw std::invalid_argument(std::string(who) + ": H must lie in (0,1]");
}

}  // namespace

double HurstProfile::operator()(double t) const {
  check_domain(*this, t, "profile_eval");
  return eval_kind(*this, t);
}

double HurstProfile::min_h() const {
  double m = 1.0;
  for (int i = 0; i <= kDenseSamples; ++i)
    m = std::min(m, eval_kind(*this, domain_lo + (domain_hi - domain_lo) * i / kDenseSamples));
  return m;
}

double HurstProfile::max_h() const {
  double m = 0.0;
  for (int i = 0; i <= kDenseSamples; ++i)
    m = std::max(m, eval_kind(*this, domain_lo + (domain_hi - domain_lo) * i / kDenseSamples));
  return m;
}

HurstProfile constant_profile(double h, double lo, double hi) {
  HurstProfile p;
  p.kind = ProfileKind::constant;
  p.params = {h};
  p.domain_lo = lo;
  p.domain_hi = hi;
  p.declared_beta = kInf;
  validate_profile(p);
  return p;
}

HurstProfile affine_profile(double a, double b, double lo, double hi) {
  HurstProfile p;
  p.kind = ProfileKind::affine;
  p.params = {a, b};
  p.domain_lo = lo;
  p.domain_hi = hi;
  p.declared_beta = 1.0;
  validate_profile(p);
  return p;
}

HurstProfile power_cusp_profile(double c, double d, double gamma, double tc, double lo,
                                double hi) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("power_cusp_profile: gamma must lie in (0,1)");
  HurstProfile p;
  p.kind = ProfileKind::power_cusp;
  p.params = {c, d, gamma, tc};
  p.domain_lo = lo;
  p.domain_hi = hi;
  p.declared_beta = gamma;
  validate_profile(p);
  return p;
}

HurstProfile smooth_periodic_profile(double mean, double amp, double freq, double phase,
                                     double lo, double hi) {
  HurstProfile p;
  p.kind = ProfileKind::smooth_periodic;
  p.params = {mean, amp, freq, phase};
  p.domain_lo = lo;
  p.domain_hi = hi;
  p.declared_beta = 1.0;
  validate_profile(p);
  return p;
}

HurstProfile table_profile(std::vector<double> ts, std::vector<double> hs,
                           double declared_beta) {
  if (ts.size() != hs.size() || ts.size() < 2)
    throw std::invalid_argument("table_profile: need at least 2 matching nodes");
  if (!std::is_sorted(ts.begin(), ts.end()))
    throw std::invalid_argument("table_profile: nodes must be increasing");
  HurstProfile p;
  p.kind = ProfileKind::user_table;
  p.domain_lo = ts.front();
  p.domain_hi = ts.back();
  p.table_t = std::move(ts);
  p.table_h = std::move(hs);
  p.declared_beta = declared_beta;
  validate_profile(p);
  return p;
}

std::optional<std::pair<double, double>> profile_exponents(const HurstProfile& p,
                                                           double t0) {
  check_domain(p, t0, "profile_exponents");
  for (const auto& m : p.marked)
    if (std::fabs(m.t0 - t0) <= 1e-12) return std::make_pair(m.alpha_tilde, m.alpha_under);
  switch (p.kind) {
    case ProfileKind::constant:
      return std::make_pair(kInf, kInf);
    case ProfileKind::affine:
      if (p.params[1] == 0.0) return std::make_pair(kInf, kInf);
      return std::make_pair(1.0, 1.0);
    case ProfileKind::power_cusp:
      if (std::fabs(t0 - p.params[3]) <= 1e-12) {
        // at the cusp the inf ratio follows |dt|^gamma while symmetric pairs
        // share the same H value, so the sub-exponent is infinite
        return std::make_pair(p.params[2], kInf);
      }
      return std::make_pair(1.0, 1.0);  // smooth with nonzero slope away from the cusp
    case ProfileKind::smooth_periodic: {
      if (p.params[1] == 0.0 || p.params[2] == 0.0) return std::make_pair(kInf, kInf);
      double slope = p.params[1] * p.params[2] * std::cos(p.params[2] * t0 + p.params[3]);
      if (std::fabs(slope) > 1e-9) return std::make_pair(1.0, 1.0);
      return std::nullopt;  // at an extremum nothing is declared
    }
    case ProfileKind::user_table:
      return std::nullopt;
  }
  return std::nullopt;
}

// Raw closed forms -------------------------------------------------------

double fbm_sigma2(double s, double t, double h) {
  check_h_open_unit(h, "fbm_sigma2");
  return std::pow(std::fabs(t - s), 2.0 * h);
}

double fbm_covariance(double s, double t, double h) {
  check_h_open_unit(h, "fbm_covariance");
  return 0.5 * (std::pow(std::fabs(s), 2.0 * h) + std::pow(std::fabs(t), 2.0 * h) -
                std::pow(std::fabs(t - s), 2.0 * h));
}

static void check_mpfbm_h(double h) {
  if (!(h > 0.0 && h <= 0.5))
    throw std::invalid_argument("mpfbm: H must lie in (0,1/2]");
}

double mpfbm_sigma2(const Point& s, const Point& t, double h) {
  check_mpfbm_h(h);
  return std::pow(sym_diff_measure(s, t), 2.0 * h);
}

double mpfbm_covariance(const Point& s, const Point& t, double h) {
  check_mpfbm_h(h);
  return 0.5 * (std::pow(lebesgue_corner_volume(s), 2.0 * h) +
                std::pow(lebesgue_corner_volume(t), 2.0 * h) -
                std::pow(sym_diff_measure(s, t), 2.0 * h));
}

double mbm_sigma2_asymptotic(double s, double t, double t0, const HurstProfile& p,
                             double k_scale, double l_scale) {
  check_domain(p, t0, "mbm_sigma2_asymptotic");
  double hs = p(s), ht = p(t);
  if (s == t) return 0.0;
  return k_scale * std::pow(std::fabs(t - s), ht + hs) +
         l_scale * (ht - hs) * (ht - hs);
}

double gw_sigma2(double u, double v, const HurstProfile& p, double lambda, int j_terms) {
  if (lambda < 2.0) throw std::invalid_argument("gw_sigma2: lambda must be >= 2");
  if (j_terms < 1) throw std::invalid_argument("gw_sigma2: J must be >= 1");
  double hu = p(u), hv = p(v);
  double osc = 0.0, drift = 0.0;
  const double log_lambda = std::log(lambda);
  for (int j = 1; j <= j_terms; ++j) {
    double au = std::exp(-j * hu * log_lambda);
    double av = std::exp(-j * hv * log_lambda);
    double sj = std::sin(0.5 * std::exp(j * log_lambda) * (u - v));
    osc += au * au * sj * sj;
    drift += (av - au) * (av - au);
  }
  return 2.0 * osc + drift;
}

double gw_tail_bound(double lambda, double inf_h, int j_terms) {
  double q = std::pow(lambda, -2.0 * inf_h);
  return 2.0 * std::pow(lambda, -2.0 * (j_terms + 1) * inf_h) / (1.0 - q);
}

int gw_auto_truncation(const HurstProfile& p, double lambda, double tail_tol) {
  if (lambda < 2.0) throw std::invalid_argument("gw_auto_truncation: lambda must be >= 2");
  double inf_h = p.min_h();
  int j = 1;
  while (gw_tail_bound(lambda, inf_h, j) >= tail_tol && j < 100000) ++j;
  return j;
}

// Factories --------------------------------------------------------------

IncrementKernel make_fbm_kernel(double h) {
  check_h_open_unit(h, "make_fbm_kernel");
  IncrementKernel k;
  k.family = KernelFamily::fbm;
  k.N = 1;
  k.params = {{"family", "fbm"}, {"h", h}};
  k.sigma2 = [h](const Point& s, const Point& t) { return fbm_sigma2(s[0], t[0], h); };
  k.covariance = [h](const Point& s, const Point& t) {
    return fbm_covariance(s[0], t[0], h);
  };
  return k;
}

IncrementKernel make_mpfbm_kernel(int n, double h) {
  check_mpfbm_h(h);
  if (n < 1) throw std::invalid_argument("make_mpfbm_kernel: N must be >= 1");
  IncrementKernel k;
  k.family = KernelFamily::mpfbm;
  k.N = n;
  k.params = {{"family", "mpfbm"}, {"n", n}, {"h", h}};
  k.sigma2 = [h](const Point& s, const Point& t) { return mpfbm_sigma2(s, t, h); };
  k.covariance = [h](const Point& s, const Point& t) { return mpfbm_covariance(s, t, h); };
  return k;
}

IncrementKernel make_mbm_kernel(const HurstProfile& p, double k_scale, double l_scale) {
  if (!(k_scale > 0.0 && l_scale > 0.0))
    throw std::invalid_argument("make_mbm_kernel: K and L must be positive");
  IncrementKernel k;
  k.family = KernelFamily::mbm_asymptotic;
  k.N = 1;
  k.params = {{"family", "mbm_asymptotic"},
              {"k_scale", k_scale},
              {"l_scale", l_scale},
              {"profile", profile_to_json(p)}};
  double t0_ref = 0.5 * (p.domain_lo + p.domain_hi);
  k.sigma2 = [p, t0_ref, k_scale, l_scale](const Point& s, const Point& t) {
    return mbm_sigma2_asymptotic(s[0], t[0], t0_ref, p, k_scale, l_scale);
  };
  return k;  // no exact covariance for the asymptotic form
}

IncrementKernel make_gw_kernel(const HurstProfile& p, double lambda, int j_terms) {
  if (lambda < 2.0) throw std::invalid_argument("make_gw_kernel: lambda must be >= 2");
  if (j_terms <= 0) j_terms = gw_auto_truncation(p, lambda);
  IncrementKernel k;
  k.family = KernelFamily::gw;
  k.N = 1;
  k.params = {{"family", "gw"},
              {"lambda", lambda},
              {"j_terms", j_terms},
              {"tail_bound", gw_tail_bound(lambda, p.min_h(), j_terms)},
              {"profile", profile_to_json(p)}};
  k.sigma2 = [p, lambda, j_terms](const Point& s, const Point& t) {
    return gw_sigma2(s[0], t[0], p, lambda, j_terms);
  };
  return k;
}

// JSON round-trip --------------------------------------------------------

namespace {
const char* kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::affine: return "affine";
    case ProfileKind::power_cusp: return "power_cusp";
    case ProfileKind::smooth_periodic: return "smooth_periodic";
    case ProfileKind::user_table: return "user_table";
  }
  return "constant";
}

ProfileKind kind_from_name(const std::string& s) {
  if (s == "constant") return ProfileKind::constant;
  if (s == "affine") return ProfileKind::affine;
  if (s == "power_cusp") return ProfileKind::power_cusp;
  if (s == "smooth_periodic") return ProfileKind::smooth_periodic;
  if (s == "user_table") return ProfileKind::user_table;
  throw std::invalid_argument("profile_from_json: unknown kind '" + s + "'");
}

double json_exponent(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

nlohmann::json exponent_json(double a) {
  if (std::isinf(a)) return "inf";
  return a;
}
}  // namespace

nlohmann::json profile_to_json(const HurstProfile& p) {
  nlohmann::json j{{"kind", kind_name(p.kind)},
                   {"params", p.params},
                   {"domain", {p.domain_lo, p.domain_hi}},
                   {"declared_beta", exponent_json(p.declared_beta)}};
  if (p.kind == ProfileKind::user_table) {
    j["table_t"] = p.table_t;
    j["table_h"] = p.table_h;
  }
  for (const auto& m : p.marked)
    j["marked_points"].push_back({{"t0", m.t0},
                                  {"alpha_tilde", exponent_json(m.alpha_tilde)},
                                  {"alpha_under", exponent_json(m.alpha_under)}});
  return j;
}

HurstProfile profile_from_json(const nlohmann::json& j) {
  HurstProfile p;
  p.kind = kind_from_name(j.at("kind").get<std::string>());
  p.params = j.value("params", std::vector<double>{});
  auto dom = j.at("domain");
  p.domain_lo = dom.at(0).get<double>();
  p.domain_hi = dom.at(1).get<double>();
  p.declared_beta = j.contains("declared_beta") ? json_exponent(j["declared_beta"])
                                                : std::numeric_limits<double>::infinity();
  if (p.kind == ProfileKind::user_table) {
    p.table_t = j.at("table_t").get<std::vector<double>>();
    p.table_h = j.at("table_h").get<std::vector<double>>();
  }
  if (j.contains("marked_points"))
    for (const auto& m : j["marked_points"])
      p.marked.push_back({m.at("t0").get<double>(), json_exponent(m.at("alpha_tilde")),
                          json_exponent(m.at("alpha_under"))});
  validate_profile(p);
  return p;
}

nlohmann::json kernel_to_json(const IncrementKernel& k) { return k.params; }

IncrementKernel kernel_from_json(const nlohmann::json& j) {
  std::string family = j.at("family").get<std::string>();
  if (family == "fbm") return make_fbm_kernel(j.at("h").get<double>());
  if (family == "mpfbm")
    return make_mpfbm_kernel(j.value("n", 1), j.at("h").get<double>());
  if (family == "mbm_asymptotic")
    return make_mbm_kernel(profile_from_json(j.at("profile")), j.value("k_scale", 1.0),
                           j.value("l_scale", 1.0));
  if (family == "gw")
    return make_gw_kernel(profile_from_json(j.at("profile")),
                          j.at("lambda").get<double>(), j.value("j_terms", 0));
  throw std::invalid_argument("kernel_from_json: unknown family '" + family + "'");
}

}  // namespace gfl
