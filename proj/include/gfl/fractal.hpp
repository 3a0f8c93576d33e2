#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gfl/geometry.hpp"
#include "gfl/sampler.hpp"

namespace gfl {

// Flat point set in R^dim; point i occupies pts[i*dim .. i*dim+dim-1].
struct PointCloud {
  int dim = 1;
  std::vector<double> pts;
  std::size_t size() const { return dim ? pts.size() / dim : 0; }
  double coord(std::size_t i, int k) const { return pts[i * dim + k]; }
};

enum class DimTarget { graph, range };

// Graph cloud {(t, X_t)} in R^(N+d) from the raw grid vertices.
PointCloud graph_cloud(const SamplePath& path);
// Densified variant: linear (N=1) or bilinear (N=2) interpolation of the
// vertex data, refined until neighboring cloud points are within max_gap in
// sup norm. Removes the vertex-spacing artifact from fine-scale box counts.
PointCloud graph_cloud(const SamplePath& path, double max_gap);

// Range cloud {X_t} in R^d.
PointCloud range_cloud(const SamplePath& path);
PointCloud range_cloud(const SamplePath& path, double max_gap);

// Sub-path of grid points with d2(t, center) <= radius. Scalar grids only:
// there the intersection is a contiguous sub-grid, so the result is again a
// well-formed SamplePath. Throws on empty intersection.
SamplePath restrict_ball(const SamplePath& path, const BallSpec& ball);

// Number of occupied cells of the axis-aligned grid with side delta anchored
// at the bounding-box lower corner.
long box_count(const PointCloud& cloud, double delta);

// Scale-window selection for the log-log fit. Scales are dropped when the
// count is below min_count (coarse side, poor statistics), above
// saturation_fraction of the cloud size (finest side, counts saturate at the
// point count), or below delta_floor. Of the survivors the finest max_scales
// are kept.
struct WindowPolicy {
  long min_count = 8;
  double saturation_fraction = 0.25;
  double delta_floor = 0.0;
  int max_scales = 12;
  int min_scales = 5;
};

struct DimensionEstimate {
  DimTarget target = DimTarget::graph;
  std::vector<double> scales;   // full ladder
  std::vector<long> counts;     // per ladder entry
  std::vector<int> window;      // indices used in the fit
  double slope = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
};

// Least-squares slope of log count against log (1/delta) over the selected
// window. Requires >= 5 ladder scales and >= 100 cloud points; throws
// "no valid window" when the policy filters out too many scales.
DimensionEstimate box_dimension(const PointCloud& cloud,
                                const std::vector<double>& scale_ladder,
                                const WindowPolicy& policy,
                                DimTarget target = DimTarget::graph);

// Box dimension of the graph or range restricted to B(t0, rho) for each
// ladder radius. Every ball must retain at least 256 grid points. Clouds are
// densified with max_gap tied to the finest scale of scale_ladder.
std::vector<std::pair<double, DimensionEstimate>> localized_dimension(
    const SamplePath& path, const Point& t0, const std::vector<double>& rho_ladder,
    DimTarget target, const std::vector<double>& scale_ladder,
    const WindowPolicy& policy);

// Empirical scale floor below which 1-D graph box counts are dominated by the
// vertex spacing rather than the field: max of the RMS value step and twice
// the grid pitch.
double recommended_graph_floor(const SamplePath& path);

// Discrete Riesz energy (1/M^2) sum_{i != j} |x_i - x_j|^-beta. Pairs closer
// than dup_tol are treated as duplicates: excluded from the sum and counted.
struct RieszEnergy {
  double energy = 0.0;
  std::size_t duplicate_pairs = 0;
};
RieszEnergy riesz_energy(const PointCloud& cloud, double beta, double dup_tol = 1e-12);

// Energy growth across nested subsamples (strides 2^(L-1), ..., 2, 1, point
// count doubling per level). Energies are computed with the cloud rescaled to
// unit bounding-box diagonal, which makes each level's table nondecreasing in
// beta; the rescaling cancels from growth ratios. stable_max_beta is the
// largest beta whose energy grows by less than growth_tol per doubling at
// every level.
struct EnergyReport {
  std::vector<double> betas;
  std::vector<std::vector<double>> energies;  // [beta][level]
  std::optional<double> stable_max_beta;
};
EnergyReport frostman_probe(const PointCloud& cloud, const std::vector<double>& beta_grid,
                            int refinement_levels, double growth_tol = 0.20);

// Decreasing geometric scale ladder: span * ratio^k for k = 0..n-1.
std::vector<double> make_scale_ladder(double span, double ratio, int n);

}  // namespace gfl
