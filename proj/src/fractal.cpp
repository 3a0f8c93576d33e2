#include "gfl/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gfl/rng.hpp"

namespace gfl {
namespace {

void validate_cloud(const PointCloud& cloud, const char* who) {
  if (cloud.dim < 1) throw std::invalid_argument(std::string(who) + ": cloud dim must be >= 1");
  if (cloud.pts.empty()) throw std::invalid_argument(std::string(who) + ": empty cloud");
  if (cloud.pts.size() % cloud.dim != 0)
    throw std::invalid_argument(std::string(who) + ": ragged cloud storage");
}

// 1-D polyline through the graph vertices, subdivided until consecutive
// points are within max_gap in sup norm over (t, values).
PointCloud polyline_graph(const SamplePath& path, double max_gap) {
  const std::size_t n = path.num_points();
  const int d = path.d;
  PointCloud cloud;
  cloud.dim = 1 + d;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double t0 = path.grid.point_at(i)[0];
    double t1 = path.grid.point_at(i + 1)[0];
    double len = std::fabs(t1 - t0);
    for (int c = 0; c < d; ++c)
      len = std::max(len, std::fabs(path.value(i + 1, c) - path.value(i, c)));
    long k = std::max(1L, static_cast<long>(std::ceil(len / max_gap)));
    for (long j = 0; j < k; ++j) {
      double w = static_cast<double>(j) / static_cast<double>(k);
      cloud.pts.push_back(t0 + w * (t1 - t0));
      for (int c = 0; c < d; ++c)
        cloud.pts.push_back(path.value(i, c) + w * (path.value(i + 1, c) - path.value(i, c)));
    }
  }
  cloud.pts.push_back(path.grid.point_at(n - 1)[0]);
  for (int c = 0; c < d; ++c) cloud.pts.push_back(path.value(n - 1, c));
  return cloud;
}

// Bilinear upsampling of a 2-D sheet; refinement factor per axis chosen so
// the parameter pitch drops below max_gap.
PointCloud bilinear_graph(const SamplePath& path, double max_gap) {
  const int d = path.d;
  const int r0 = path.grid.resolution[0], r1 = path.grid.resolution[1];
  const double s0 = path.grid.step(0), s1 = path.grid.step(1);
  const long f0 = std::max(1L, static_cast<long>(std::ceil(s0 / max_gap)));
  const long f1 = std::max(1L, static_cast<long>(std::ceil(s1 / max_gap)));
  const long m0 = static_cast<long>(r0 - 1) * f0 + 1;
  const long m1 = static_cast<long>(r1 - 1) * f1 + 1;
  PointCloud cloud;
  cloud.dim = 2 + d;
  cloud.pts.reserve(static_cast<std::size_t>(m0) * m1 * (2 + d));
  auto vertex = [&](long i, long j, int c) {
    return path.value(static_cast<std::size_t>(i) * r1 + j, c);
  };
  for (long a = 0; a < m0; ++a) {
    long i = std::min<long>(a / f0, r0 - 2);
    double u = static_cast<double>(a) / f0 - i;
    double t0 = path.grid.domain.lower[0] + s0 * (i + u);
    for (long b = 0; b < m1; ++b) {
      long j = std::min<long>(b / f1, r1 - 2);
      double w = static_cast<double>(b) / f1 - j;
      double t1 = path.grid.domain.lower[1] + s1 * (j + w);
      cloud.pts.push_back(t0);
      cloud.pts.push_back(t1);
      for (int c = 0; c < d; ++c) {
        double v = (1 - u) * (1 - w) * vertex(i, j, c) + u * (1 - w) * vertex(i + 1, j, c) +
                   (1 - u) * w * vertex(i, j + 1, c) + u * w * vertex(i + 1, j + 1, c);
        cloud.pts.push_back(v);
      }
    }
  }
  return cloud;
}

}  // namespace

PointCloud graph_cloud(const SamplePath& path) {
  if (path.num_points() == 0) throw std::invalid_argument("graph_cloud: empty path");
  const std::size_t n = path.num_points();
  PointCloud cloud;
  cloud.dim = path.grid.dim() + path.d;
  cloud.pts.reserve(n * cloud.dim);
  for (std::size_t i = 0; i < n; ++i) {
    Point p = path.grid.point_at(i);
    for (double x : p) cloud.pts.push_back(x);
    for (int c = 0; c < path.d; ++c) cloud.pts.push_back(path.value(i, c));
  }
  return cloud;
}

PointCloud graph_cloud(const SamplePath& path, double max_gap) {
  if (path.num_points() == 0) throw std::invalid_argument("graph_cloud: empty path");
  if (!(max_gap > 0.0)) return graph_cloud(path);
  if (path.grid.dim() == 1) return polyline_graph(path, max_gap);
  if (path.grid.dim() == 2) return bilinear_graph(path, max_gap);
  throw std::invalid_argument("graph_cloud: densification supports N <= 2 only");
}

PointCloud range_cloud(const SamplePath& path) {
  if (path.num_points() == 0) throw std::invalid_argument("range_cloud: empty path");
  const std::size_t n = path.num_points();
  PointCloud cloud;
  cloud.dim = path.d;
  cloud.pts.reserve(n * path.d);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < path.d; ++c) cloud.pts.push_back(path.value(i, c));
  return cloud;
}

PointCloud range_cloud(const SamplePath& path, double max_gap) {
  if (path.num_points() == 0) throw std::invalid_argument("range_cloud: empty path");
  if (!(max_gap > 0.0)) return range_cloud(path);
  PointCloud cloud = range_cloud(path);
  const int d = path.d;
  const int n_ax = path.grid.dim();
  // interpolate values along every grid edge; by continuity the segment
  // between neighbor values lies near the range
  std::vector<std::size_t> stride(n_ax, 1);
  for (int a = n_ax - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * static_cast<std::size_t>(path.grid.resolution[a + 1]);
  const std::size_t n = path.num_points();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    for (int a = 0; a < n_ax; ++a) {
      std::size_t idx_a = rem / stride[a];
      rem %= stride[a];
      if (static_cast<int>(idx_a) + 1 >= path.grid.resolution[a]) continue;
      std::size_t nb = i + stride[a];
      double len = 0.0;
      for (int c = 0; c < d; ++c)
        len = std::max(len, std::fabs(path.value(nb, c) - path.value(i, c)));
      long k = static_cast<long>(std::ceil(len / max_gap));
      for (long j = 1; j < k; ++j) {
        double w = static_cast<double>(j) / static_cast<double>(k);
        for (int c = 0; c < d; ++c)
          cloud.pts.push_back(path.value(i, c) + w * (path.value(nb, c) - path.value(i, c)));
      }
    }
  }
  return cloud;
}

SamplePath restrict_ball(const SamplePath& path, const BallSpec& ball) {
  if (path.grid.dim() != 1)
    throw std::invalid_argument("restrict_ball: scalar grids only");
  if (path.num_points() == 0) throw std::invalid_argument("restrict_ball: empty path");
  const std::size_t n = path.num_points();
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = path.grid.point_at(i)[0];
    if (std::fabs(t - ball.center[0]) <= ball.radius) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  }
  if (first > last)
    throw std::invalid_argument("restrict_ball: ball does not intersect the grid");
  if (last - first + 1 < 2)
    throw std::invalid_argument("restrict_ball: ball retains fewer than 2 grid points");
  SamplePath out;
  out.grid.domain.lower = {path.grid.point_at(first)[0]};
  out.grid.domain.upper = {path.grid.point_at(last)[0]};
  out.grid.resolution = {static_cast<int>(last - first + 1)};
  out.d = path.d;
  out.seed = path.seed;
  out.values.assign(path.values.begin() + first * path.d,
                    path.values.begin() + (last + 1) * path.d);
  out.provenance = path.provenance;
  out.provenance["restricted_to"] = {{"center", ball.center[0]}, {"radius", ball.radius}};
  return out;
}

long box_count(const PointCloud& cloud, double delta) {
  validate_cloud(cloud, "box_count");
  if (!(delta > 0.0)) throw std::invalid_argument("box_count: delta must be positive");
  const int dim = cloud.dim;
  const std::size_t m = cloud.size();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i)
    for (int a = 0; a < dim; ++a) lo[a] = std::min(lo[a], cloud.coord(i, a));
  std::vector<std::uint64_t> keys(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t key = 0x9e3779b97f4a7c15ULL;
    for (int a = 0; a < dim; ++a) {
      auto cell = static_cast<std::int64_t>(std::floor((cloud.coord(i, a) - lo[a]) / delta));
      key = mix64(key ^ (static_cast<std::uint64_t>(cell) + 0x100000001b3ULL * a));
    }
    keys[i] = key;
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<long>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

DimensionEstimate box_dimension(const PointCloud& cloud,
                                const std::vector<double>& scale_ladder,
                                const WindowPolicy& policy, DimTarget target) {
  validate_cloud(cloud, "box_dimension");
  if (scale_ladder.size() < 5)
    throw std::invalid_argument("box_dimension: need at least 5 scales");
  if (cloud.size() < 100)
    throw std::invalid_argument("box_dimension: need at least 100 cloud points");
  for (std::size_t i = 1; i < scale_ladder.size(); ++i)
    if (!(scale_ladder[i] < scale_ladder[i - 1]))
      throw std::invalid_argument("box_dimension: scale ladder must be strictly decreasing");

  DimensionEstimate est;
  est.target = target;
  est.scales = scale_ladder;
  est.counts.reserve(scale_ladder.size());
  for (double delta : scale_ladder) est.counts.push_back(box_count(cloud, delta));

  const double sat_cap = policy.saturation_fraction * static_cast<double>(cloud.size());
  std::vector<int> valid;
  for (std::size_t i = 0; i < scale_ladder.size(); ++i) {
    if (est.counts[i] < policy.min_count) continue;               // too coarse
    if (static_cast<double>(est.counts[i]) > sat_cap) continue;   // saturated at point count
    if (scale_ladder[i] < policy.delta_floor) continue;           // below resolution floor
    valid.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(valid.size()) > policy.max_scales)
    valid.erase(valid.begin(), valid.end() - policy.max_scales);  // keep the finest
  if (static_cast<int>(valid.size()) < policy.min_scales)
    throw std::runtime_error("box_dimension: no valid window");
  est.window = valid;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(valid.size());
  for (int i : valid) {
    double x = std::log(1.0 / scale_ladder[i]);
    double y = std::log(static_cast<double>(est.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  est.slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - est.slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (int i : valid) {
    double x = std::log(1.0 / scale_ladder[i]);
    double y = std::log(static_cast<double>(est.counts[i]));
    double e = y - (intercept + est.slope * x);
    ss_res += e * e;
    ss_tot += (y - sy / m) * (y - sy / m);
  }
  est.r2 = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  est.stderr_slope = (m > 2) ? std::sqrt(ss_res / (m - 2) / (sxx - sx * sx / m)) : 0.0;
  return est;
}

std::vector<std::pair<double, DimensionEstimate>> localized_dimension(
    const SamplePath& path, const Point& t0, const std::vector<double>& rho_ladder,
    DimTarget target, const std::vector<double>& scale_ladder, const WindowPolicy& policy) {
  if (rho_ladder.empty())
    throw std::invalid_argument("localized_dimension: empty rho ladder");
  if (scale_ladder.empty())
    throw std::invalid_argument("localized_dimension: empty scale ladder");
  const double max_gap = scale_ladder.back() / 8.0;
  std::vector<std::pair<double, DimensionEstimate>> out;
  for (double rho : rho_ladder) {
    SamplePath sub = restrict_ball(path, {t0, rho});
    if (sub.num_points() < 256)
      throw std::invalid_argument("localized_dimension: ball too small, fewer than 256 grid points");
    PointCloud cloud = (target == DimTarget::graph) ? graph_cloud(sub, max_gap)
                                                    : range_cloud(sub, max_gap);
    out.emplace_back(rho, box_dimension(cloud, scale_ladder, policy, target));
  }
  return out;
}

double recommended_graph_floor(const SamplePath& path) {
  const std::size_t n = path.num_points();
  if (n < 2) throw std::invalid_argument("recommended_graph_floor: need at least 2 points");
  if (path.grid.dim() == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (int c = 0; c < path.d; ++c) {
        double dv = path.value(i + 1, c) - path.value(i, c);
        acc += dv * dv;
      }
    double rms = std::sqrt(acc / static_cast<double>((n - 1) * path.d));
    return std::max(rms, 2.05 * path.grid.step(0));
  }
  double pitch = 0.0;
  for (int a = 0; a < path.grid.dim(); ++a) pitch = std::max(pitch, path.grid.step(a));
  return 2.0 * pitch;
}

RieszEnergy riesz_energy(const PointCloud& cloud, double beta, double dup_tol) {
  validate_cloud(cloud, "riesz_energy");
  if (cloud.size() < 2) throw std::invalid_argument("riesz_energy: need at least 2 points");
  if (!(beta > 0.0)) throw std::invalid_argument("riesz_energy: beta must be positive");
  const std::size_t m = cloud.size();
  const int dim = cloud.dim;
  RieszEnergy out;
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        double dx = cloud.coord(i, a) - cloud.coord(j, a);
        r2 += dx * dx;
      }
      double r = std::sqrt(r2);
      if (r < dup_tol) {
        ++out.duplicate_pairs;
        continue;
      }
      acc += std::pow(r, -beta);
    }
  out.energy = 2.0 * acc / (static_cast<double>(m) * static_cast<double>(m));
  return out;
}

EnergyReport frostman_probe(const PointCloud& cloud, const std::vector<double>& beta_grid,
                            int refinement_levels, double growth_tol) {
  validate_cloud(cloud, "frostman_probe");
  if (refinement_levels < 2)
    throw std::invalid_argument("frostman_probe: need at least 2 refinement levels");
  if (beta_grid.empty()) throw std::invalid_argument("frostman_probe: empty beta grid");

  // probe in bounding-box-diagonal units: with every pair distance <= 1 the
  // energies are nondecreasing in beta, and the shared factor cancels from
  // the per-level growth ratios that decide stability
  double diag = 0.0;
  for (int a = 0; a < cloud.dim; ++a) {
    double lo = cloud.coord(0, a), hi = lo;
    for (std::size_t i = 1; i < cloud.size(); ++i) {
      lo = std::min(lo, cloud.coord(i, a));
      hi = std::max(hi, cloud.coord(i, a));
    }
    diag += (hi - lo) * (hi - lo);
  }
  diag = std::sqrt(diag);
  const double inv_diag = diag > 0.0 ? 1.0 / diag : 1.0;

  // nested subsamples: stride 2^(L-1) down to 1, point count doubling per level
  std::vector<PointCloud> levels;
  for (int l = 0; l < refinement_levels; ++l) {
    std::size_t stride = static_cast<std::size_t>(1) << (refinement_levels - 1 - l);
    PointCloud sub;
    sub.dim = cloud.dim;
    for (std::size_t i = 0; i < cloud.size(); i += stride)
      for (int a = 0; a < cloud.dim; ++a) sub.pts.push_back(inv_diag * cloud.coord(i, a));
    if (sub.size() < 2)
      throw std::invalid_argument("frostman_probe: cloud too small for requested levels");
    levels.push_back(std::move(sub));
  }

  EnergyReport rep;
  rep.betas = beta_grid;
  for (double beta : beta_grid) {
    std::vector<double> row;
    for (const auto& lv : levels) row.push_back(riesz_energy(lv, beta).energy);
    bool stable = true;
    for (std::size_t l = 0; l + 1 < row.size(); ++l) {
      if (!(row[l] > 0.0) || row[l + 1] / row[l] - 1.0 >= growth_tol) stable = false;
    }
    if (stable && (!rep.stable_max_beta || beta > *rep.stable_max_beta))
      rep.stable_max_beta = beta;
    rep.energies.push_back(std::move(row));
  }
  return rep;
}

std::vector<double> make_scale_ladder(double span, double ratio, int n) {
  if (!(span > 0.0) || !(ratio > 0.0 && ratio < 1.0) || n < 1)
    throw std::invalid_argument("make_scale_ladder: need span > 0, ratio in (0,1), n >= 1");
  std::vector<double> out;
  double s = span;
  for (int i = 0; i < n; ++i, s *= ratio) out.push_back(s);
  return out;
}

}  // namespace gfl
