#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gfl {

// Parameter point in [0,inf)^N. N is implied by size().
using Point = std::vector<double>;

// Axis-aligned box [lower[i], upper[i]] per axis.
struct Box {
  Point lower;
  Point upper;
  int dim() const { return static_cast<int>(lower.size()); }
};

// Euclidean ball used for local sampling; clipped to the nonnegative orthant.
struct BallSpec {
  Point center;
  double radius = 0.0;
};

enum class Norm { one, two, inf };

// Volume of the corner box [0, t] = prod_i t_i.
double lebesgue_corner_volume(const Point& t);

// Volume of the symmetric difference [0,s] sym-diff [0,t]
// = prod s_i + prod t_i - 2 prod min(s_i, t_i).
double sym_diff_measure(const Point& s, const Point& t);

double dist(const Point& s, const Point& t, Norm norm = Norm::two);

enum class PairStrategy { grid, quasi_random };

// Deterministic pairs (s, t) with both endpoints in the given ball clipped to
// the nonnegative orthant and separations in (0, min(1, 2*radius)).
// Separations are floored at max(2^-40 * radius, fp_floor) where fp_floor
// protects against float64 cancellation near large anchors; pairs that land
// below the floor are rejected and resampled. For a fixed seed the stream is
// a prefix-superset across growing counts. Throws std::invalid_argument when
// the floor leaves no usable separation range.
std::vector<std::pair<Point, Point>> sample_ball_pairs(const BallSpec& ball,
                                                       std::size_t count,
                                                       PairStrategy strategy,
                                                       std::uint64_t seed);

// Separation floor applied by sample_ball_pairs for this ball.
double pair_separation_floor(const BallSpec& ball);

}  // namespace gfl
