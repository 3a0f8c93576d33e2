#include "gfl/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "gfl/rng.hpp"

namespace gfl {
namespace {

constexpr std::size_t kExactBudget = 8192;     // covariance factorization cap
constexpr std::size_t kSeriesBudget = 1 << 24; // memory cap for series samplers

void validate_grid(const GridSpec& grid, const char* who) {
  int n = grid.dim();
  if (n == 0) throw std::invalid_argument(std::string(who) + ": empty grid");
  if (grid.domain.lower.size() != grid.resolution.size() ||
      grid.domain.upper.size() != grid.resolution.size())
    throw std::invalid_argument(std::string(who) + ": grid dimension mismatch");
  for (int a = 0; a < n; ++a) {
    if (grid.resolution[a] < 2)
      throw std::invalid_argument(std::string(who) + ": resolution must be >= 2 per axis");
    if (!(grid.domain.lower[a] < grid.domain.upper[a]))
      throw std::invalid_argument(std::string(who) + ": degenerate domain axis");
  }
  if (grid.num_points() > kSeriesBudget)
    throw std::runtime_error(std::string(who) + ": grid budget exceeded");
}

void check_d(int d, const char* who) {
  if (d < 1) throw std::invalid_argument(std::string(who) + ": d must be >= 1");
}

const char* family_name(KernelFamily f) {
  switch (f) {
    case KernelFamily::fbm: return "fbm";
    case KernelFamily::mpfbm: return "mpfbm";
    case KernelFamily::mbm_asymptotic: return "mbm_asymptotic";
    case KernelFamily::gw: return "gw";
  }
  return "unknown";
}

}  // namespace

std::size_t GridSpec::num_points() const {
  std::size_t total = 1;
  for (int r : resolution) total *= static_cast<std::size_t>(r);
  return total;
}

double GridSpec::step(int axis) const {
  return (domain.upper[axis] - domain.lower[axis]) / (resolution[axis] - 1);
}

Point GridSpec::point_at(std::size_t idx) const {
  int n = dim();
  Point p(n);
  for (int a = n - 1; a >= 0; --a) {
    std::size_t r = static_cast<std::size_t>(resolution[a]);
    std::size_t k = idx % r;
    idx /= r;
    p[a] = domain.lower[a] + step(a) * static_cast<double>(k);
  }
  return p;
}

SamplePath sample_gaussian_exact(const IncrementKernel& kernel, const GridSpec& grid,
                                 int d, std::uint64_t seed) {
  validate_grid(grid, "sample_gaussian_exact");
  check_d(d, "sample_gaussian_exact");
  if (!kernel.has_covariance())
    throw std::invalid_argument("sample_gaussian_exact: kernel provides no covariance");
  const std::size_t m = grid.num_points();
  if (m > kExactBudget)
    throw std::runtime_error("sample_gaussian_exact: grid budget exceeded (more than 8192 points)");

  Eigen::MatrixXd cov(m, m);
  std::vector<Point> pts(m);
  for (std::size_t i = 0; i < m; ++i) pts[i] = grid.point_at(i);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double c = kernel.covariance(pts[i], pts[j]);
      cov(i, j) = c;
      cov(j, i) = c;
    }
    max_diag = std::max(max_diag, cov(i, i));
  }
  if (max_diag <= 0.0) max_diag = 1.0;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  double jitter = 1e-12 * max_diag;
  while (llt.info() != Eigen::Success && jitter <= 1e-6 * max_diag) {
    Eigen::MatrixXd shifted = cov;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    jitter *= 10.0;
  }
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(std::string("sample_gaussian_exact: covariance of kernel '") +
                             family_name(kernel.family) +
                             "' is not positive semidefinite after jitter escalation");
  Eigen::MatrixXd chol = llt.matrixL();

  SamplePath path;
  path.grid = grid;
  path.d = d;
  path.seed = seed;
  path.values.assign(m * static_cast<std::size_t>(d), 0.0);
  for (int c = 0; c < d; ++c) {
    auto rng = substream(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd z(m);
    for (std::size_t i = 0; i < m; ++i) z(i) = gauss(rng);
    Eigen::VectorXd x = chol * z;
    for (std::size_t i = 0; i < m; ++i) path.values[i * d + c] = x(i);
  }
  path.provenance = {{"generator", "gaussian_exact"},
                     {"kernel", kernel_to_json(kernel)},
                     {"jitter_final", jitter}};
  return path;
}

SamplePath sample_fbm_hosking(double h, const GridSpec& grid, int d, std::uint64_t seed) {
  validate_grid(grid, "sample_fbm_hosking");
  check_d(d, "sample_fbm_hosking");
  if (grid.dim() != 1)
    throw std::invalid_argument("sample_fbm_hosking: scalar grids only");
  if (!(h > 0.0 && h < 1.0))
    throw std::invalid_argument("sample_fbm_hosking: H must lie in (0,1)");
  if (std::fabs(grid.domain.lower[0]) > 1e-15)
    throw std::invalid_argument("sample_fbm_hosking: grid must start at 0 (pinned origin)");

  const std::size_t n = grid.num_points();
  const std::size_t ninc = n - 1;
  const double dt = grid.step(0);
  // stationary increment autocovariance at lag k, scaled to the grid step
  std::vector<double> gam(ninc);
  for (std::size_t k = 0; k < ninc; ++k) {
    double kk = static_cast<double>(k);
    gam[k] = 0.5 * std::pow(dt, 2.0 * h) *
             (std::pow(kk + 1.0, 2.0 * h) - 2.0 * std::pow(kk, 2.0 * h) +
              std::pow(std::fabs(kk - 1.0), 2.0 * h));
  }

  SamplePath path;
  path.grid = grid;
  path.d = d;
  path.seed = seed;
  path.values.assign(n * static_cast<std::size_t>(d), 0.0);

  std::vector<double> fgn(ninc), phi, phi_next;
  for (int c = 0; c < d; ++c) {
    auto rng = substream(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, 1.0);
    phi.clear();
    double v = gam[0];
    fgn[0] = std::sqrt(gam[0]) * gauss(rng);
    for (std::size_t i = 1; i < ninc; ++i) {
      double num = gam[i];
      for (std::size_t m = 0; m + 1 < i; ++m) num -= phi[m] * gam[i - 1 - m];
      double kref = num / v;
      phi_next.assign(i, 0.0);
      phi_next[i - 1] = kref;
      for (std::size_t m = 0; m + 1 < i; ++m)
        phi_next[m] = phi[m] - kref * phi[i - 2 - m];
      v *= (1.0 - kref * kref);
      double mean = 0.0;
      for (std::size_t m = 0; m < i; ++m) mean += phi_next[m] * fgn[i - 1 - m];
      fgn[i] = mean + std::sqrt(v) * gauss(rng);
      phi.swap(phi_next);
    }
    double acc = 0.0;
    path.values[0 * d + c] = 0.0;
    for (std::size_t i = 0; i < ninc; ++i) {
      acc += fgn[i];
      path.values[(i + 1) * d + c] = acc;
    }
  }
  path.provenance = {{"generator", "fbm_hosking"}, {"h", h}};
  return path;
}

SamplePath sample_gw(const HurstProfile& p, double lambda, int j_terms,
                     const GridSpec& grid, int d, std::uint64_t seed) {
  validate_grid(grid, "sample_gw");
  check_d(d, "sample_gw");
  if (grid.dim() != 1) throw std::invalid_argument("sample_gw: scalar grids only");
  if (lambda < 2.0) throw std::invalid_argument("sample_gw: lambda must be >= 2");
  if (j_terms <= 0) j_terms = gw_auto_truncation(p, lambda);

  const std::size_t n = grid.num_points();
  const double log_lambda = std::log(lambda);
  SamplePath path;
  path.grid = grid;
  path.d = d;
  path.seed = seed;
  path.values.assign(n * static_cast<std::size_t>(d), 0.0);

  std::vector<double> z(j_terms), theta(j_terms), lam_pow(j_terms);
  for (int j = 0; j < j_terms; ++j) lam_pow[j] = std::exp((j + 1) * log_lambda);
  for (int c = 0; c < d; ++c) {
    auto rng = substream(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    // one shared (Z, theta) draw per replica, used at every t
    for (int j = 0; j < j_terms; ++j) z[j] = gauss(rng);
    for (int j = 0; j < j_terms; ++j) theta[j] = unif(rng);
    for (std::size_t i = 0; i < n; ++i) {
      double t = grid.point_at(i)[0];
      double ht = p(t);
      double acc = 0.0;
      for (int j = 0; j < j_terms; ++j)
        acc += z[j] * std::exp(-(j + 1) * ht * log_lambda) * std::sin(lam_pow[j] * t + theta[j]);
      path.values[i * d + c] = acc;
    }
  }
  path.provenance = {{"generator", "gw_series"},
                     {"lambda", lambda},
                     {"j_terms", j_terms},
                     {"profile", profile_to_json(p)}};
  return path;
}

SamplePath sample_mbm_spectral(const HurstProfile& p, const GridSpec& grid, int d,
                               std::uint64_t seed, double freq_cutoff, int freq_bins) {
  validate_grid(grid, "sample_mbm_spectral");
  check_d(d, "sample_mbm_spectral");
  if (grid.dim() != 1) throw std::invalid_argument("sample_mbm_spectral: scalar grids only");
  if (freq_bins < 16) throw std::invalid_argument("sample_mbm_spectral: freq_bins must be >= 16");

  const std::size_t n = grid.num_points();
  const double length = grid.domain.upper[0] - grid.domain.lower[0];
  const double xi_min = 2.0 * M_PI / (10.0 * length);
  if (freq_cutoff <= 0.0) freq_cutoff = 2.0 * M_PI * grid.resolution[0];
  if (freq_cutoff <= xi_min)
    throw std::invalid_argument("sample_mbm_spectral: cutoff below minimum frequency");

  std::vector<double> xi(freq_bins), dxi(freq_bins);
  const double ratio = std::pow(freq_cutoff / xi_min, 1.0 / (freq_bins - 1));
  for (int k = 0; k < freq_bins; ++k) xi[k] = xi_min * std::pow(ratio, k);
  for (int k = 0; k + 1 < freq_bins; ++k) dxi[k] = xi[k + 1] - xi[k];
  dxi[freq_bins - 1] = xi[freq_bins - 1] * (ratio - 1.0);

  SamplePath path;
  path.grid = grid;
  path.d = d;
  path.seed = seed;
  path.values.assign(n * static_cast<std::size_t>(d), 0.0);

  std::vector<double> g(freq_bins), gp(freq_bins), amp(freq_bins);
  for (int c = 0; c < d; ++c) {
    auto rng = substream(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < freq_bins; ++k) {
      g[k] = gauss(rng);
      gp[k] = gauss(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double t = grid.point_at(i)[0];
      double ht = p(t);
      for (int k = 0; k < freq_bins; ++k)
        amp[k] = std::pow(xi[k], -ht - 0.5) * std::sqrt(dxi[k]);
      double acc = 0.0;
      for (int k = 0; k < freq_bins; ++k)
        acc += ((std::cos(t * xi[k]) - 1.0) * g[k] + std::sin(t * xi[k]) * gp[k]) * amp[k];
      path.values[i * d + c] = acc;
    }
  }
  path.provenance = {{"generator", "mbm_spectral"},
                     {"freq_cutoff", freq_cutoff},
                     {"freq_bins", freq_bins},
                     {"profile", profile_to_json(p)}};
  return path;
}

void export_csv(const SamplePath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("export_csv: cannot open file for writing: " + file);
  out.precision(17);
  const std::size_t n = path.num_points();
  for (std::size_t i = 0; i < n; ++i) {
    Point p = path.grid.point_at(i);
    for (std::size_t a = 0; a < p.size(); ++a) out << (a ? "," : "") << p[a];
    for (int c = 0; c < path.d; ++c) out << "," << path.value(i, c);
    out << "\n";
  }
  if (!out) throw std::runtime_error("export_csv: write failed: " + file);
}

namespace {
template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void export_binary(const SamplePath& path, const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("export_binary: cannot open file for writing: " + file);
  out.write("GFL1", 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(path.grid.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(path.d));
  for (int r : path.grid.resolution) put<std::uint32_t>(out, static_cast<std::uint32_t>(r));
  for (int a = 0; a < path.grid.dim(); ++a) {
    put<double>(out, path.grid.domain.lower[a]);
    put<double>(out, path.grid.domain.upper[a]);
  }
  put<std::uint64_t>(out, path.seed);
  for (double v : path.values) put<double>(out, v);
  if (!out) throw std::runtime_error("export_binary: write failed: " + file);
}

SamplePath import_binary(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("import_binary: cannot open file: " + file);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "GFL1", 4) != 0)
    throw std::runtime_error("import_binary: bad magic, not a GFL1 file: " + file);
  SamplePath path;
  auto n = get<std::uint32_t>(in);
  path.d = static_cast<int>(get<std::uint32_t>(in));
  path.grid.resolution.resize(n);
  for (auto& r : path.grid.resolution) r = static_cast<int>(get<std::uint32_t>(in));
  path.grid.domain.lower.resize(n);
  path.grid.domain.upper.resize(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    path.grid.domain.lower[a] = get<double>(in);
    path.grid.domain.upper[a] = get<double>(in);
  }
  path.seed = get<std::uint64_t>(in);
  path.values.resize(path.grid.num_points() * static_cast<std::size_t>(path.d));
  for (double& v : path.values) v = get<double>(in);
  if (!in) throw std::runtime_error("import_binary: truncated file: " + file);
  path.provenance = {{"generator", "import_binary"}, {"file", file}};
  return path;
}

}  // namespace gfl
