#include "gfl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gfl/rng.hpp"

namespace gfl {
namespace {

void check_point(const Point& p, const char* who) {
  if (p.empty()) throw std::invalid_argument(std::string(who) + ": empty point");
  for (double x : p) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": nonfinite coordinate");
    if (x < 0.0) throw std::invalid_argument(std::string(who) + ": negative coordinate");
  }
}

void check_same_dim(const Point& s, const Point& t, const char* who) {
  if (s.size() != t.size()) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Bit-reversed fraction of k: equidistributed, prefix-stable across counts.
double van_der_corput(std::uint64_t k) {
  std::uint64_t r = 0;
  for (int b = 0; b < 32; ++b) r = (r << 1) | ((k >> b) & 1u);
  return static_cast<double>(r) / 4294967296.0;  // 2^32
}

// Uniform direction on the unit sphere in R^n.
Point sphere_dir(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point w(n);
  for (;;) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] = gauss(rng);
      norm2 += w[i] * w[i];
    }
    if (norm2 > 1e-12) {
      double inv = 1.0 / std::sqrt(norm2);
      for (double& x : w) x *= inv;
      return w;
    }
  }
}

bool inside_clipped_ball(const Point& p, const BallSpec& ball) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) return false;
    double dx = p[i] - ball.center[i];
    r2 += dx * dx;
  }
  return r2 <= ball.radius * ball.radius;
}

}  // namespace

double lebesgue_corner_volume(const Point& t) {
  check_point(t, "lebesgue_corner_volume");
  double v = 1.0;
  for (double x : t) v *= x;
  return v;
}

double sym_diff_measure(const Point& s, const Point& t) {
  check_point(s, "sym_diff_measure");
  check_point(t, "sym_diff_measure");
  check_same_dim(s, t, "sym_diff_measure");
  double ps = 1.0, pt = 1.0, pm = 1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ps *= s[i];
    pt *= t[i];
    pm *= std::min(s[i], t[i]);
  }
  // nonnegative by inclusion; clamp the rounding residue
  return std::max(0.0, ps + pt - 2.0 * pm);
}

double dist(const Point& s, const Point& t, Norm norm) {
  check_same_dim(s, t, "dist");
  if (s.empty()) throw std::invalid_argument("dist: empty point");
  double acc = 0.0;
  switch (norm) {
    case Norm::one:
      for (std::size_t i = 0; i < s.size(); ++i) acc += std::fabs(s[i] - t[i]);
      return acc;
    case Norm::two:
      for (std::size_t i = 0; i < s.size(); ++i) acc += (s[i] - t[i]) * (s[i] - t[i]);
      return std::sqrt(acc);
    case Norm::inf:
      for (std::size_t i = 0; i < s.size(); ++i) acc = std::max(acc, std::fabs(s[i] - t[i]));
      return acc;
  }
  throw std::invalid_argument("dist: unknown norm");
}

double pair_separation_floor(const BallSpec& ball) {
  check_point(ball.center, "sample_ball_pairs");
  if (!(ball.radius > 0.0) || !std::isfinite(ball.radius))
    throw std::invalid_argument("sample_ball_pairs: radius must be positive and finite");
  double scale = 1.0;
  for (double c : ball.center) scale = std::max(scale, std::fabs(c));
  scale = std::max(scale, ball.radius);
  // 2^-40 of the radius, but never below the float64 cancellation guard:
  // separations under ~2^-45 of the coordinate magnitude would collapse when
  // added to an anchor.
  return std::max(std::ldexp(ball.radius, -40), std::ldexp(scale, -45));
}

std::vector<std::pair<Point, Point>> sample_ball_pairs(const BallSpec& ball,
                                                       std::size_t count,
                                                       PairStrategy strategy,
                                                       std::uint64_t seed) {
  const int n = static_cast<int>(ball.center.size());
  const double floor_sep = pair_separation_floor(ball);
  const double hard_cap = std::min(1.0, 2.0 * ball.radius);
  // Separations concentrate well inside the ball so that ratio statistics over
  // the pairs probe the scale of the ball radius, not its diameter.
  const double cap = ball.radius / 16.0;
  if (cap <= floor_sep)
    throw std::invalid_argument("sample_ball_pairs: radius too small relative to distance floor");
  std::vector<std::pair<Point, Point>> out;
  if (count == 0) return out;
  out.reserve(count);

  if (strategy == PairStrategy::grid) {
    // Axis-aligned lattice inscribed in the ball, clipped to the orthant;
    // pairs enumerated lexicographically. Deterministic, seed-independent.
    std::size_t q = 2;
    auto lattice_pairs = [&](std::size_t m) {
      std::size_t pts = 1;
      for (int i = 0; i < n; ++i) {
        if (pts > 2 * count) break;
        pts *= m;
      }
      return pts * (pts - 1) / 2;
    };
    while (lattice_pairs(q) < 4 * count && q < 64) ++q;
    const double half = 0.999 * ball.radius / std::sqrt(static_cast<double>(n));
    std::vector<Point> nodes;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      Point p(n);
      bool ok = true;
      for (int i = 0; i < n; ++i) {
        p[i] = ball.center[i] - half + 2.0 * half * static_cast<double>(idx[i]) /
                                           static_cast<double>(q - 1);
        if (p[i] < 0.0) ok = false;
      }
      if (ok && inside_clipped_ball(p, ball)) nodes.push_back(std::move(p));
      int axis = n - 1;
      while (axis >= 0 && ++idx[axis] == q) idx[axis--] = 0;
      if (axis < 0) break;
    }
    for (std::size_t i = 0; i < nodes.size() && out.size() < count; ++i)
      for (std::size_t j = i + 1; j < nodes.size() && out.size() < count; ++j) {
        double d = dist(nodes[i], nodes[j], Norm::two);
        if (d >= floor_sep && d < hard_cap) out.emplace_back(nodes[i], nodes[j]);
      }
    if (out.size() < count)
      throw std::invalid_argument("sample_ball_pairs: grid strategy cannot reach requested count");
    return out;
  }

  // quasi_random: anchors and directions from the seeded stream, separations
  // from a bit-reversal stratification of [log floor, log cap] so every count
  // prefix covers the scale range evenly.
  auto rng = substream(seed, 0x62616c6cULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_lo = std::log(floor_sep * 1.0000001);
  const double log_hi = std::log(cap * 0.9999999);
  for (std::size_t k = 0; out.size() < count; ++k) {
    double sep = std::exp(log_lo + (log_hi - log_lo) * van_der_corput(k + 1));
    bool accepted = false;
    for (int attempt = 0; attempt < 256 && !accepted; ++attempt) {
      Point a(n), b(n);
      Point w = sphere_dir(n, rng);
      if (k % 8 == 0) {
        // mirror pair straddling the center
        for (int i = 0; i < n; ++i) {
          a[i] = ball.center[i] - 0.5 * sep * w[i];
          b[i] = ball.center[i] + 0.5 * sep * w[i];
        }
      } else {
        Point u = sphere_dir(n, rng);
        double rad = ball.radius * std::pow(unif(rng), 1.0 / n);
        for (int i = 0; i < n; ++i) a[i] = ball.center[i] + rad * u[i];
        for (int i = 0; i < n; ++i) b[i] = a[i] + sep * w[i];
      }
      if (!inside_clipped_ball(a, ball) || !inside_clipped_ball(b, ball)) continue;
      double d = dist(a, b, Norm::two);
      // reject pairs whose separation collapsed in float64
      if (d < floor_sep || d >= hard_cap) continue;
      out.emplace_back(std::move(a), std::move(b));
      accepted = true;
    }
    if (!accepted)
      throw std::runtime_error("sample_ball_pairs: rejection sampling stalled");
  }
  return out;
}

}  // namespace gfl
