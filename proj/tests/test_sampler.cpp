#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfl/exponents.hpp"
#include "gfl/kernels.hpp"
#include "gfl/sampler.hpp"

using namespace gfl;

namespace {
std::string temp_file(const char* stem) {
  auto dir = std::filesystem::temp_directory_path();
  return (dir / (std::string("gfl_test_") + stem)).string();
}

double mean_sq_diff(const SamplePath& p, std::size_t i, std::size_t j) {
  double acc = 0.0;
  for (int c = 0; c < p.d; ++c) {
    double diff = p.value(i, c) - p.value(j, c);
    acc += diff * diff;
  }
  return acc / p.d;
}
}  // namespace

TEST_CASE("GridSpec enumerates points in C order, last axis fastest") {
  GridSpec g{{{0.0, 0.0}, {1.0, 2.0}}, {3, 3}};
  CHECK_EQ(g.num_points(), 9);
  CHECK_EQ(g.step(0), doctest::Approx(0.5));
  CHECK_EQ(g.step(1), doctest::Approx(1.0));
  CHECK(g.point_at(0) == Point{0.0, 0.0});
  CHECK(g.point_at(1) == Point{0.0, 1.0});
  CHECK(g.point_at(3) == Point{0.5, 0.0});
  CHECK(g.point_at(8) == Point{1.0, 2.0});

  GridSpec line{{{0.0}, {1.0}}, {5}};
  CHECK_EQ(line.num_points(), 5);
  CHECK(line.point_at(4) == Point{1.0});
}

TEST_CASE("exact sampler guards its inputs") {
  auto fbm = make_fbm_kernel(0.5);
  CHECK_THROWS_AS(sample_gaussian_exact(fbm, {{{0.0}, {1.0}}, {8193}}, 1, 1),
                  std::runtime_error);
  CHECK_THROWS_AS(
      sample_gaussian_exact(make_gw_kernel(constant_profile(0.5, 0.0, 1.0), 2.0),
                            {{{0.0}, {1.0}}, {32}}, 1, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian_exact(fbm, {{{0.0}, {1.0}}, {1}}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian_exact(fbm, {{{1.0}, {1.0}}, {8}}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian_exact(fbm, {{{0.0}, {1.0}}, {8}}, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("exact sampler is reproducible and seed-sensitive") {
  GridSpec grid{{{0.0}, {1.0}}, {32}};
  auto a = sample_gaussian_exact(make_fbm_kernel(0.5), grid, 2, 9);
  auto b = sample_gaussian_exact(make_fbm_kernel(0.5), grid, 2, 9);
  CHECK(a.values == b.values);
  CHECK(a.provenance.at("generator") == "gaussian_exact");
  auto c = sample_gaussian_exact(make_fbm_kernel(0.5), grid, 2, 10);
  CHECK(a.values != c.values);
}

TEST_CASE("exact fbm draw matches its second moments") {
  GridSpec grid{{{0.0}, {1.0}}, {16}};
  auto path = sample_gaussian_exact(make_fbm_kernel(0.5), grid, 10000, 3);
  double var_end = 0.0, var_first = 0.0;
  const std::size_t last = grid.num_points() - 1;
  for (int c = 0; c < path.d; ++c) {
    var_end += path.value(last, c) * path.value(last, c);
    var_first += path.value(1, c) * path.value(1, c);
  }
  var_end /= path.d;
  var_first /= path.d;
  CHECK_LE(std::fabs(var_end - 1.0), 0.05);             // Var X(1) = 1
  CHECK_LE(std::fabs(var_first / (1.0 / 15.0) - 1.0), 0.05);  // Var X(dt) = dt^(2H)
}

TEST_CASE("exact fbm empirical covariance matches the kernel entrywise") {
  GridSpec grid{{{0.125}, {1.0}}, {8}};
  const int replicas = 20000;
  auto path = sample_gaussian_exact(make_fbm_kernel(0.6), grid, replicas, 5);
  auto kernel = make_fbm_kernel(0.6);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i; j < 8; ++j) {
      double acc = 0.0;
      for (int c = 0; c < replicas; ++c) acc += path.value(i, c) * path.value(j, c);
      acc /= replicas;
      Point ti = grid.point_at(i), tj = grid.point_at(j);
      double cij = kernel.covariance(ti, tj);
      double cii = kernel.covariance(ti, ti), cjj = kernel.covariance(tj, tj);
      double se = std::sqrt((cii * cjj + cij * cij) / replicas);
      CHECK_LE(std::fabs(acc - cij), 5.0 * se);
    }
}

TEST_CASE("mpfbm exact draw reproduces the corner increment variance") {
  // one factorization, replicas carried by the value dimension; the second
  // axis is nearly collapsed so the 2x2 grid isolates the (1,1)->(2,1) edge
  GridSpec grid{{{1.0, 1.0}, {2.0, 1.0001}}, {2, 2}};
  auto path = sample_gaussian_exact(make_mpfbm_kernel(2, 0.4), grid, 10000, 11);
  double expected = mpfbm_sigma2({1.0, 1.0}, {2.0, 1.0}, 0.4);
  CHECK_EQ(expected, doctest::Approx(1.0));
  CHECK_LE(std::fabs(mean_sq_diff(path, 0, 2) / expected - 1.0), 0.05);
}

TEST_CASE("hosking sampler guards its inputs") {
  CHECK_THROWS_AS(sample_fbm_hosking(0.5, {{{0.1}, {1.0}}, {16}}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_fbm_hosking(1.0, {{{0.0}, {1.0}}, {16}}, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_fbm_hosking(0.5, {{{0.0, 0.0}, {1.0, 1.0}}, {4, 4}}, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("hosking paths pin the origin and match fbm moments") {
  GridSpec grid{{{0.0}, {1.0}}, {16}};
  auto path = sample_fbm_hosking(0.3, grid, 10000, 2);
  for (int c = 0; c < 3; ++c) CHECK_EQ(path.value(0, c), 0.0);

  double var_first = 0.0, var_end = 0.0;
  for (int c = 0; c < path.d; ++c) {
    var_first += path.value(1, c) * path.value(1, c);
    var_end += path.value(15, c) * path.value(15, c);
  }
  var_first /= path.d;
  var_end /= path.d;
  // Var X(1/15) = (1/15)^(2 * 0.3)
  CHECK_LE(std::fabs(var_first / 0.19694512927085184 - 1.0), 0.05);
  CHECK_LE(std::fabs(var_end - 1.0), 0.05);

  auto again = sample_fbm_hosking(0.3, grid, 10000, 2);
  CHECK(path.values == again.values);
  CHECK(path.provenance.at("generator") == "fbm_hosking");
}

TEST_CASE("gw sampler matches its kernel in mean square") {
  auto profile = constant_profile(0.5, 0.0, 1.0);
  CHECK_THROWS_AS(sample_gw(profile, 1.5, 0, {{{0.0}, {1.0}}, {8}}, 1, 1),
                  std::invalid_argument);

  GridSpec grid{{{0.3}, {0.35}}, {2}};
  auto path = sample_gw(profile, 2.0, 0, grid, 10000, 4);
  CHECK_EQ(path.provenance.at("j_terms").get<int>(), 41);
  double expected = gw_sigma2(0.3, 0.35, profile, 2.0, 41);
  CHECK_LE(std::fabs(mean_sq_diff(path, 0, 1) / expected - 1.0), 0.05);

  auto again = sample_gw(profile, 2.0, 0, grid, 10000, 4);
  CHECK(path.values == again.values);
}

TEST_CASE("gw value coordinates are independent streams") {
  GridSpec grid{{{0.4}, {0.6}}, {2}};
  auto path = sample_gw(constant_profile(0.5, 0.0, 1.0), 2.0, 0, grid, 10000, 8);
  const int half = 5000;
  double mx = 0.0, my = 0.0;
  for (int c = 0; c < half; ++c) {
    mx += path.value(0, c);
    my += path.value(0, c + half);
  }
  mx /= half;
  my /= half;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int c = 0; c < half; ++c) {
    double x = path.value(0, c) - mx, y = path.value(0, c + half) - my;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  CHECK_LE(std::fabs(sxy / std::sqrt(sxx * syy)), 0.05);
}

TEST_CASE("mbm spectral sampler guards and pins X(0) = 0") {
  auto profile = constant_profile(0.5, 0.0, 1.0);
  GridSpec grid{{{0.0}, {1.0}}, {1024}};
  CHECK_THROWS_AS(sample_mbm_spectral(profile, grid, 1, 1, 0.0, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_mbm_spectral(profile, grid, 1, 1, 0.5, 2048),
                  std::invalid_argument);

  auto path = sample_mbm_spectral(profile, grid, 2, 6);
  CHECK_EQ(path.value(0, 0), 0.0);
  CHECK_EQ(path.value(0, 1), 0.0);
  auto again = sample_mbm_spectral(profile, grid, 2, 6);
  CHECK(path.values == again.values);
  CHECK(path.provenance.at("generator") == "mbm_spectral");
}

TEST_CASE("mbm synthesis is stable under frequency refinement") {
  // refining the frequency grid re-pairs the Gaussian draws, so individual
  // paths differ; what must converge is the second moment over replicas,
  // up to the spectral tail beyond the default cutoff (a few percent here)
  auto profile = constant_profile(0.5, 0.0, 1.0);
  GridSpec grid{{{0.0}, {1.0}}, {16}};
  auto coarse = sample_mbm_spectral(profile, grid, 2000, 7, 800.0, 2048);
  auto fine = sample_mbm_spectral(profile, grid, 2000, 7, 1600.0, 4096);
  double a = mean_sq_diff(coarse, 8, 9);
  double b = mean_sq_diff(fine, 8, 9);
  CHECK_LE(std::fabs(a / b - 1.0), 0.10);
}

TEST_CASE("mbm paths carry the profile's regularity") {
  auto profile = constant_profile(0.5, 0.0, 1.0);
  GridSpec grid{{{0.0}, {1.0}}, {4096}};
  std::vector<double> exps;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto path = sample_mbm_spectral(profile, grid, 1, seed);
    exps.push_back(path_local_exponent(path, {0.5}, default_rho_ladder()));
  }
  std::sort(exps.begin(), exps.end());
  double med = 0.5 * (exps[3] + exps[4]);
  CHECK_LE(std::fabs(med - 0.5), 0.1);
}

TEST_CASE("csv export writes one parseable row per grid point") {
  GridSpec grid{{{0.25}, {1.0}}, {4}};
  auto path = sample_gaussian_exact(make_fbm_kernel(0.5), grid, 2, 13);
  std::string file = temp_file("path.csv");
  export_csv(path, file);

  std::ifstream in(file);
  REQUIRE(in.good());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> cells;
    while (std::getline(ss, tok, ',')) cells.push_back(std::stod(tok));
    REQUIRE_EQ(cells.size(), 3);  // 1 coordinate + 2 values
    CHECK_EQ(cells[0], grid.point_at(rows)[0]);
    CHECK_EQ(cells[1], path.value(rows, 0));
    CHECK_EQ(cells[2], path.value(rows, 1));
    ++rows;
  }
  CHECK_EQ(rows, grid.num_points());
  std::remove(file.c_str());
}

TEST_CASE("binary export round-trips exactly") {
  GridSpec grid{{{0.0, 0.0}, {1.0, 2.0}}, {4, 3}};
  auto path = sample_gaussian_exact(make_mpfbm_kernel(2, 0.4), grid, 2, 21);
  std::string file = temp_file("path.bin");
  export_binary(path, file);
  auto back = import_binary(file);
  CHECK(back.values == path.values);
  CHECK_EQ(back.d, path.d);
  CHECK_EQ(back.seed, path.seed);
  CHECK(back.grid.resolution == path.grid.resolution);
  CHECK(back.grid.domain.lower == path.grid.domain.lower);
  CHECK(back.grid.domain.upper == path.grid.domain.upper);
  std::remove(file.c_str());

  std::string junk = temp_file("junk.bin");
  {
    std::ofstream out(junk, std::ios::binary);
    out << "NOPE this is not a field file";
  }
  CHECK_THROWS_AS(import_binary(junk), std::runtime_error);
  std::remove(junk.c_str());

  std::string cut = temp_file("cut.bin");
  export_binary(path, cut);
  std::filesystem::resize_file(cut, std::filesystem::file_size(cut) / 2);
  CHECK_THROWS_AS(import_binary(cut), std::runtime_error);
  std::remove(cut.c_str());
}
