#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "gfl/exponents.hpp"
#include "gfl/geometry.hpp"
#include "gfl/kernels.hpp"
#include "gfl/sampler.hpp"

using namespace gfl;

namespace {
IncrementKernel scaled_fbm_kernel(double h, double c) {
  IncrementKernel k = make_fbm_kernel(h);
  k.sigma2 = [h, c](const Point& s, const Point& t) { return c * fbm_sigma2(s[0], t[0], h); };
  k.covariance = nullptr;
  return k;
}
}  // namespace

TEST_CASE("radius ladder helpers") {
  auto l = geometric_ladder(0.5, 0.125, 0.5);
  REQUIRE_EQ(l.size(), 3);
  CHECK_EQ(l[0], doctest::Approx(0.5));
  CHECK_EQ(l[1], doctest::Approx(0.25));
  CHECK_EQ(l[2], doctest::Approx(0.125));

  auto d = default_rho_ladder();
  REQUIRE_EQ(d.size(), 8);
  CHECK_EQ(d.front(), doctest::Approx(std::ldexp(1.0, -3)));
  CHECK_EQ(d.back(), doctest::Approx(std::ldexp(1.0, -10)));

  CHECK_THROWS_AS(geometric_ladder(0.0, 0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(geometric_ladder(0.1, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(geometric_ladder(0.5, 0.1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(geometric_ladder(0.5, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("fbm kernels reproduce the exact power law") {
  for (double h : {0.2, 0.5, 0.8}) {
    auto est = kernel_exponents(make_fbm_kernel(h), {0.5}, default_rho_ladder(), 2000, 1);
    CHECK_LE(std::fabs(est.alpha_tilde_hat - h), 1e-9);
    CHECK_LE(std::fabs(est.alpha_under_hat - h), 1e-9);
    for (std::size_t i = 0; i < est.rho_ladder.size(); ++i) {
      CHECK_LE(std::fabs(est.inf_ratio[i] - h), 1e-9);
      CHECK_LE(std::fabs(est.sup_ratio[i] - h), 1e-9);
    }
    CHECK_LE(std::fabs(est.inf_drift), 1e-9);
    CHECK_LE(std::fabs(est.sup_drift), 1e-9);
    CHECK_EQ(est.floored_pairs, 0);
    CHECK_EQ(est.pair_count, 8 * 2000);
  }
}

TEST_CASE("estimated exponent never exceeds the sub-exponent") {
  struct Case {
    IncrementKernel kernel;
    Point t0;
    std::vector<double> ladder;
  };
  const Case cases[] = {
      {make_fbm_kernel(0.5), {0.5}, default_rho_ladder()},
      {make_mpfbm_kernel(2, 0.4), {1.0, 1.0}, geometric_ladder(8e-3, 1e-3, 0.5)},
      {make_gw_kernel(affine_profile(0.3, 0.4, 0.0, 1.0), 2.0),
       {0.5},
       geometric_ladder(std::ldexp(1.0, -16), std::ldexp(1.0, -24), 0.5)},
      {make_mbm_kernel(power_cusp_profile(0.7, 0.9, 0.5, 0.5, 0.4, 0.6)),
       {0.5},
       geometric_ladder(std::ldexp(1.0, -6), std::ldexp(1.0, -16), 0.5)}};
  for (const auto& c : cases) {
    auto est = kernel_exponents(c.kernel, c.t0, c.ladder, 1000, 3);
    CHECK_LE(est.alpha_tilde_hat, est.alpha_under_hat + 1e-6);
    for (std::size_t i = 0; i < est.rho_ladder.size(); ++i)
      CHECK_LE(est.inf_ratio[i], est.sup_ratio[i] + 1e-6);
  }
}

TEST_CASE("estimates are bit-reproducible per seed") {
  auto kernel = make_gw_kernel(affine_profile(0.3, 0.4, 0.0, 1.0), 2.0);
  auto ladder = geometric_ladder(std::ldexp(1.0, -16), std::ldexp(1.0, -20), 0.5);
  auto a = kernel_exponents(kernel, {0.5}, ladder, 500, 42);
  auto b = kernel_exponents(kernel, {0.5}, ladder, 500, 42);
  CHECK(a.inf_ratio == b.inf_ratio);
  CHECK(a.sup_ratio == b.sup_ratio);
  CHECK_EQ(a.alpha_tilde_hat, b.alpha_tilde_hat);
  CHECK_EQ(a.alpha_under_hat, b.alpha_under_hat);
  auto c = kernel_exponents(kernel, {0.5}, ladder, 500, 43);
  CHECK(a.inf_ratio != c.inf_ratio);
}

TEST_CASE("estimator input validation") {
  auto fbm = make_fbm_kernel(0.5);
  CHECK_THROWS_AS(kernel_exponents(fbm, {0.5}, default_rho_ladder(), 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_exponents(fbm, {0.5}, {}, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_exponents(fbm, {0.5}, {0.001, 0.002}, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_exponents(fbm, {0.5}, {0.1, -0.1}, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_exponents(fbm, {0.5, 0.5}, default_rho_ladder(), 100, 1),
                  std::invalid_argument);

  IncrementKernel dead = make_fbm_kernel(0.5);
  dead.sigma2 = [](const Point&, const Point&) { return 0.0; };
  dead.covariance = nullptr;
  CHECK_THROWS_AS(kernel_exponents(dead, {0.5}, default_rho_ladder(), 100, 1),
                  std::runtime_error);
}

TEST_CASE("vanishing sigma2 pairs are excluded but counted") {
  IncrementKernel leaky = make_fbm_kernel(0.5);
  leaky.sigma2 = [](const Point& s, const Point& t) {
    double d = std::fabs(s[0] - t[0]);
    return d < 2e-4 ? 0.0 : fbm_sigma2(s[0], t[0], 0.5);
  };
  leaky.covariance = nullptr;
  auto est = kernel_exponents(leaky, {0.5}, {0.125}, 2000, 9);
  CHECK_GT(est.floored_pairs, 0);
  CHECK_EQ(est.pair_count + est.floored_pairs, 2000);
  CHECK_EQ(est.alpha_tilde_hat, doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("mpfbm estimates near H at the unit corner") {
  auto est = kernel_exponents(make_mpfbm_kernel(2, 0.4), {1.0, 1.0},
                              geometric_ladder(8e-3, 1e-3, 0.5), 10000, 1);
  CHECK_LE(std::fabs(est.alpha_tilde_hat - 0.4), 0.02);
  CHECK_LE(std::fabs(est.alpha_under_hat - 0.4), 0.02);
}

TEST_CASE("gw affine profile estimates track H(t0)") {
  auto kernel = make_gw_kernel(affine_profile(0.3, 0.4, 0.0, 1.0), 2.0);
  auto ladder = geometric_ladder(std::ldexp(1.0, -16), std::ldexp(1.0, -30), 0.5);
  auto est = kernel_exponents(kernel, {0.5}, ladder, 3000, 1);
  CHECK_LE(std::fabs(est.alpha_tilde_hat - 0.5), 0.03);
  CHECK_LE(std::fabs(est.alpha_under_hat - 0.5), 0.03);
}

TEST_CASE("mbm cusp kernel separates exponent from sub-exponent") {
  // cusp of order 0.5 under a smooth level of 0.7: the profile-drift term
  // decays like d^{2*0.5} and dominates, while mirrored pairs cancel the
  // drift and expose the d^{2*0.7} oscillation floor
  auto kernel = make_mbm_kernel(power_cusp_profile(0.7, 0.9, 0.5, 0.5, 0.4, 0.6));
  auto ladder = geometric_ladder(std::ldexp(1.0, -6), std::ldexp(1.0, -24), 0.5);
  auto est = kernel_exponents(kernel, {0.5}, ladder, 6000, 1);
  CHECK_LE(std::fabs(est.alpha_tilde_hat - 0.5), 0.05);
  CHECK_LE(std::fabs(est.alpha_under_hat - 0.7), 0.05);
}

TEST_CASE("kernel rescaling shifts estimates by the predicted log ratio") {
  // r(s,t) for c*sigma2 is r0(s,t) + ln c / (2 ln d): the inf lands on the
  // widest sampled pair and the sup on the narrowest, so the shift magnitude
  // is pinched between ln c / (2 |ln floor|) and ln c / (2 |ln 2 rho|) and
  // decays like 1/depth as the ladder descends, never reaching zero at
  // double precision
  const Point t0{0.5};
  const double exps[] = {-10.0, -20.0, -30.0};
  for (double c : {10.0, 0.1}) {
    double prev_mag = std::numeric_limits<double>::infinity();
    double deepest_mag = 0.0;
    for (double e : exps) {
      auto ladder = geometric_ladder(std::ldexp(1.0, static_cast<int>(e) + 2),
                                     std::ldexp(1.0, static_cast<int>(e)), 0.5);
      auto base = kernel_exponents(scaled_fbm_kernel(0.5, 1.0), t0, ladder, 800, 11);
      auto scaled = kernel_exponents(scaled_fbm_kernel(0.5, c), t0, ladder, 800, 11);
      double shift = scaled.alpha_tilde_hat - base.alpha_tilde_hat;
      double mag = std::fabs(shift);

      CHECK_EQ(shift < 0.0, c > 1.0);  // larger variance reads as lower regularity
      double rho_last = ladder.back();
      double lo = std::fabs(std::log(c)) /
                  (2.0 * std::fabs(std::log(pair_separation_floor({t0, rho_last}))));
      double hi = std::fabs(std::log(c)) / (2.0 * std::fabs(std::log(2.0 * rho_last)));
      CHECK_GE(mag, lo * 0.999999);
      CHECK_LE(mag, hi * 1.000001);

      double sup_shift = scaled.alpha_under_hat - base.alpha_under_hat;
      CHECK_EQ(sup_shift < 0.0, c > 1.0);
      CHECK_GE(std::fabs(sup_shift), lo * 0.999999);
      CHECK_LE(std::fabs(sup_shift), hi * 1.000001);

      CHECK_LT(mag, prev_mag);  // strictly shrinking with ladder depth
      prev_mag = mag;
      deepest_mag = mag;
    }
    CHECK_LE(deepest_mag, 0.055);
  }
}

TEST_CASE("growing the pair budget only widens the rung envelopes") {
  // pair generation is prefix-stable in the count, so the 500-pair extrema
  // are taken over a subset of the 2000-pair draws
  auto kernel = make_mbm_kernel(power_cusp_profile(0.7, 0.9, 0.5, 0.5, 0.4, 0.6));
  auto ladder = geometric_ladder(std::ldexp(1.0, -6), std::ldexp(1.0, -12), 0.5);
  auto small = kernel_exponents(kernel, {0.5}, ladder, 500, 5);
  auto big = kernel_exponents(kernel, {0.5}, ladder, 2000, 5);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK_LE(big.inf_ratio[i], small.inf_ratio[i]);
    CHECK_GE(big.sup_ratio[i], small.sup_ratio[i]);
  }
}

TEST_CASE("kernel estimates agree with sampled path oscillation slopes") {
  GridSpec grid{{{0.0}, {1.0}}, {1 << 14}};
  for (double h : {0.2, 0.5, 0.8}) {
    std::vector<double> slopes;
    for (std::uint64_t seed : {2, 3, 6, 7, 8, 9, 10, 11}) {
      auto path = sample_fbm_hosking(h, grid, 1, seed);
      slopes.push_back(path_local_exponent(path, {0.5}, default_rho_ladder()));
    }
    std::sort(slopes.begin(), slopes.end());
    double med = 0.5 * (slopes[3] + slopes[4]);
    CHECK_LE(std::fabs(med - h), 0.1);
  }
}

TEST_CASE("path_local_exponent on deterministic paths") {
  GridSpec grid{{{0.0}, {1.0}}, {4097}};
  auto fill = [&](double (*f)(double)) {
    SamplePath p;
    p.grid = grid;
    p.d = 1;
    p.values.resize(grid.num_points());
    for (std::size_t i = 0; i < p.values.size(); ++i) p.values[i] = f(grid.point_at(i)[0]);
    return p;
  };

  auto linear = fill([](double t) { return 2.0 * t; });
  CHECK_LE(std::fabs(path_local_exponent(linear, {0.5}, default_rho_ladder()) - 1.0), 0.05);

  auto root_cusp = fill([](double t) { return std::sqrt(std::fabs(t - 0.5)); });
  CHECK_LE(std::fabs(path_local_exponent(root_cusp, {0.5}, default_rho_ladder()) - 0.5),
           0.05);

  auto flat = fill([](double) { return 3.0; });
  CHECK_THROWS_AS(path_local_exponent(flat, {0.5}, default_rho_ladder()),
                  std::runtime_error);

  CHECK_THROWS_AS(path_local_exponent(linear, {0.0}, default_rho_ladder()),
                  std::invalid_argument);
  CHECK_THROWS_AS(path_local_exponent(linear, {0.5, 0.5}, default_rho_ladder()),
                  std::invalid_argument);
  CHECK_THROWS_AS(path_local_exponent(linear, {0.5}, {0.3, 0.15}),
                  std::invalid_argument);
}

TEST_CASE("sandwich_check certifies a working radius") {
  SUBCASE("fbm passes at the widest rung") {
    auto rep = sandwich_check(make_fbm_kernel(0.5), {0.5}, 0.1, default_rho_ladder(),
                              1000, 1);
    REQUIRE(rep.rho0_found.has_value());
    CHECK_EQ(*rep.rho0_found, default_rho_ladder().front());
    CHECK(rep.violations.empty());
    CHECK_EQ(rep.epsilon, 0.1);
  }
  SUBCASE("mpfbm at the unit corner") {
    auto rep = sandwich_check(make_mpfbm_kernel(2, 0.4), {1.0, 1.0}, 0.1,
                              geometric_ladder(8e-3, 1e-3, 0.5), 2000, 1);
    REQUIRE(rep.rho0_found.has_value());
    CHECK_GT(*rep.rho0_found, 0.0);
  }
  SUBCASE("gw constant profile") {
    auto rep = sandwich_check(make_gw_kernel(constant_profile(0.5, 0.0, 1.0), 2.0),
                              {0.5}, 0.05,
                              geometric_ladder(std::ldexp(1.0, -6), std::ldexp(1.0, -20), 0.5),
                              1500, 1);
    REQUIRE(rep.rho0_found.has_value());
    CHECK_GT(*rep.rho0_found, 0.0);
  }
  SUBCASE("epsilon must stay below twice the exponent") {
    CHECK_THROWS_AS(sandwich_check(make_fbm_kernel(0.2), {0.5}, 0.45,
                                   default_rho_ladder(), 500, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(sandwich_check(make_fbm_kernel(0.5), {0.5}, 0.0,
                                   default_rho_ladder(), 500, 1),
                    std::invalid_argument);
  }
}
