#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfl/geometry.hpp"
#include "gfl/kernels.hpp"
#include "json.hpp"

namespace gfl {

// Uniform rectangular grid over a box; resolution[i] >= 2 points per axis,
// endpoints included. Points are enumerated in C order (last axis fastest).
struct GridSpec {
  Box domain;
  std::vector<int> resolution;

  int dim() const { return static_cast<int>(resolution.size()); }
  std::size_t num_points() const;
  double step(int axis) const;
  Point point_at(std::size_t idx) const;
};

// Sampled vector-valued field on a grid. values is point-major: the d value
// coordinates of grid point idx live at values[idx*d .. idx*d+d-1].
struct SamplePath {
  GridSpec grid;
  int d = 1;
  std::uint64_t seed = 0;
  std::vector<double> values;
  nlohmann::json provenance;  // generator name and parameters

  std::size_t num_points() const { return grid.num_points(); }
  double value(std::size_t idx, int coord) const { return values[idx * d + coord]; }
};

// Exact Gaussian draw through Cholesky of the covariance matrix; requires a
// kernel with a closed-form covariance and at most 8192 grid points. A tiny
// diagonal jitter (1e-12 of the max diagonal, escalated tenfold up to 1e-6)
// is added if the factorization fails; beyond that the kernel is reported as
// not positive semidefinite. Value coordinates use independent seed streams.
SamplePath sample_gaussian_exact(const IncrementKernel& kernel, const GridSpec& grid,
                                 int d, std::uint64_t seed);

// Exact 1-D fractional Brownian motion of any length via the sequential
// conditional (Hosking) recursion on increments, O(n^2); no grid-size cap.
SamplePath sample_fbm_hosking(double h, const GridSpec& grid, int d, std::uint64_t seed);

// Lacunary series X(t) = sum_j Z_j lambda^{-j H(t)} sin(lambda^j t + theta_j)
// with one shared (Z, theta) stream per value coordinate. j_terms = 0 selects
// the automatic truncation for the profile.
SamplePath sample_gw(const HurstProfile& p, double lambda, int j_terms,
                     const GridSpec& grid, int d, std::uint64_t seed);

// Harmonizable synthesis on log-spaced frequency bins; X(0) = 0 exactly.
// freq_cutoff = 0 selects 2 pi times the grid resolution; freq_bins >= 16.
SamplePath sample_mbm_spectral(const HurstProfile& p, const GridSpec& grid, int d,
                               std::uint64_t seed, double freq_cutoff = 0.0,
                               int freq_bins = 2048);

// One row per grid point: N coordinates then d values, comma-separated.
void export_csv(const SamplePath& path, const std::string& file);

// Little-endian binary: magic "GFL1", then u32 N, u32 d, u32 resolution per
// axis, f64 domain bounds (lo,hi per axis), u64 seed, then the values array.
void export_binary(const SamplePath& path, const std::string& file);
SamplePath import_binary(const std::string& file);

}  // namespace gfl
