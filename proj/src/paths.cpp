#include "loopgamma/paths.hpp"

#include <cmath>
#include <numbers>

#include "loopgamma/errors.hpp"
#include "loopgamma/philox.hpp"

namespace loopgamma {

Path::Path(const Grid& g, std::vector<double> v, PathKind k, double X)
    : grid(g), values(std::move(v)), kind(k), endpoint(X) {
  require_node_samples(values.size(), grid, "Path");
}

void fill_wiener(Path& out, const MeasureConfig& cfg, std::uint64_t seed, std::uint64_t index) {
  const std::size_t m = static_cast<std::size_t>(out.grid.m());
  out.values.resize(m + 1);
  const double sd = std::sqrt(cfg.t() * out.grid.du());
  double x = 0.0;
  out.values[0] = 0.0;
  for (std::size_t k = 1; k <= m; k += 2) {
    const auto z = normal_pair(seed, index, static_cast<std::uint32_t>(k / 2));
    x += sd * z[0];
    out.values[k] = x;
    if (k + 1 <= m) {
      x += sd * z[1];
      out.values[k + 1] = x;
    }
  }
  out.kind = PathKind::free;
  out.endpoint = 0.0;
}

void pin_to_endpoint(Path& path, double X) {
  const std::size_t m = static_cast<std::size_t>(path.grid.m());
  const double gap = path.values[m] - X;
  for (std::size_t k = 1; k < m; ++k) path.values[k] -= path.grid.node(k) / kTwoPi * gap;
  path.values[m] = X;
  path.kind = PathKind::bridge;
  path.endpoint = X;
}

Path sample_wiener(const Grid& grid, const MeasureConfig& cfg, std::uint64_t seed,
                   std::uint64_t index) {
  Path p(grid);
  fill_wiener(p, cfg, seed, index);
  return p;
}

Path sample_bridge(const Grid& grid, const MeasureConfig& cfg, double X, std::uint64_t seed,
                   std::uint64_t index) {
  Path p(grid);
  fill_wiener(p, cfg, seed, index);
  pin_to_endpoint(p, X);
  return p;
}

SmoothLoop::SmoothLoop(const Grid& grid, std::vector<double> values, std::vector<double> d1,
                       std::vector<double> d2)
    : grid_(grid), values_(std::move(values)), d1_(std::move(d1)), d2_(std::move(d2)) {
  require_node_samples(values_.size(), grid_, "SmoothLoop values");
  require_node_samples(d1_.size(), grid_, "SmoothLoop d1");
  if (!d2_.empty()) require_node_samples(d2_.size(), grid_, "SmoothLoop d2");
}

SmoothLoop SmoothLoop::zero(const Grid& grid) {
  return SmoothLoop(grid, std::vector<double>(grid.size(), 0.0),
                    std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0));
}

SmoothLoop SmoothLoop::from_functions(const Grid& grid, const std::function<double(double)>& f,
                                      const std::function<double(double)>& df,
                                      const std::function<double(double)>& d2f) {
  std::vector<double> v(grid.size()), d1(grid.size()), d2;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    v[k] = f(grid.node(k));
    d1[k] = df(grid.node(k));
  }
  if (d2f) {
    d2.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) d2[k] = d2f(grid.node(k));
  }
  return SmoothLoop(grid, std::move(v), std::move(d1), std::move(d2));
}

namespace {

// Second-order differences; wraps around when the samples close up.
std::vector<double> differentiate(const std::vector<double>& v, double h, bool periodic) {
  const std::size_t n = v.size();
  const std::size_t m = n - 1;
  std::vector<double> d(n);
  for (std::size_t k = 1; k < m; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
  if (periodic) {
    d[0] = (v[1] - v[m - 1]) / (2.0 * h);
    d[m] = d[0];
  } else if (n >= 3) {
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
  }
  return d;
}

std::vector<double> second_difference(const std::vector<double>& v, double h, bool periodic) {
  const std::size_t n = v.size();
  const std::size_t m = n - 1;
  std::vector<double> d(n);
  const double h2 = h * h;
  for (std::size_t k = 1; k < m; ++k) d[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
  if (periodic) {
    d[0] = (v[1] - 2.0 * v[0] + v[m - 1]) / h2;
    d[m] = d[0];
  } else if (n >= 4) {
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    d[m] = (2.0 * v[m] - 5.0 * v[m - 1] + 4.0 * v[m - 2] - v[m - 3]) / h2;
  } else {
    d[0] = d[1];
    d[m] = d[m - 1];
  }
  return d;
}

}  // namespace

SmoothLoop SmoothLoop::from_samples(const Grid& grid, std::vector<double> values) {
  require_node_samples(values.size(), grid, "SmoothLoop values");
  const double scale = std::max(1.0, std::abs(values.front()));
  const bool periodic = std::abs(values.front() - values.back()) <= 1e-12 * scale;
  auto d1 = differentiate(values, grid.du(), periodic);
  auto d2 = second_difference(values, grid.du(), periodic);
  return SmoothLoop(grid, std::move(values), std::move(d1), std::move(d2));
}

bool SmoothLoop::starts_at_zero(double tol) const { return std::abs(values_.front()) <= tol; }

bool SmoothLoop::is_closed(double tol) const {
  const double scale = std::max(1.0, std::abs(values_.front()));
  return std::abs(values_.front() - values_.back()) <= tol * scale;
}

std::vector<double> SmoothLoop::slopes() const {
  const std::size_t m = static_cast<std::size_t>(grid_.m());
  std::vector<double> s(m);
  for (std::size_t k = 1; k <= m; ++k) s[k - 1] = (values_[k] - values_[k - 1]) / grid_.du();
  return s;
}

SmoothLoop SmoothLoop::based() const {
  std::vector<double> v(values_);
  const double v0 = values_.front();
  for (auto& x : v) x -= v0;
  return SmoothLoop(grid_, std::move(v), d1_, d2_);
}

SmoothLoop SmoothLoop::scaled(double c) const {
  auto scale = [c](std::vector<double> v) {
    for (auto& x : v) x *= c;
    return v;
  };
  return SmoothLoop(grid_, scale(values_), scale(d1_), scale(d2_));
}

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": grid mismatch");
}

std::vector<double> combine(const std::vector<double>& a, const std::vector<double>& b,
                            double sign) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + sign * b[k];
  return out;
}

}  // namespace

SmoothLoop operator+(const SmoothLoop& a, const SmoothLoop& b) {
  require_same_grid(a.grid_, b.grid_, "SmoothLoop +");
  return SmoothLoop(a.grid_, combine(a.values_, b.values_, 1.0), combine(a.d1_, b.d1_, 1.0),
                    combine(a.d2_, b.d2_, 1.0));
}

SmoothLoop operator-(const SmoothLoop& a, const SmoothLoop& b) {
  require_same_grid(a.grid_, b.grid_, "SmoothLoop -");
  return SmoothLoop(a.grid_, combine(a.values_, b.values_, -1.0), combine(a.d1_, b.d1_, -1.0),
                    combine(a.d2_, b.d2_, -1.0));
}

double stieltjes(std::span<const double> integrand, std::span<const double> path_values) {
  if (path_values.size() < 2) throw UsageError("stieltjes: path needs at least two nodes");
  const std::size_t m = path_values.size() - 1;
  if (integrand.size() != m && integrand.size() != m + 1) {
    throw UsageError("stieltjes: integrand does not match the path grid");
  }
  double sum = 0.0;
  for (std::size_t k = 1; k <= m; ++k) sum += integrand[k - 1] * (path_values[k] - path_values[k - 1]);
  return sum;
}

double stieltjes(std::span<const double> integrand, const Path& path) {
  return stieltjes(integrand, std::span<const double>(path.values));
}

double stieltjes_slopes(const SmoothLoop& y, std::span<const double> path_values) {
  require_node_samples(path_values.size(), y.grid(), "stieltjes_slopes");
  const auto s = y.slopes();
  return stieltjes(s, path_values);
}

double slope_energy(const SmoothLoop& y) {
  double e = 0.0;
  for (double s : y.slopes()) e += s * s;
  return e * y.grid().du();
}

double log_cm_weight(const SmoothLoop& y, std::span<const double> path_values,
                     const MeasureConfig& cfg) {
  return -(stieltjes_slopes(y, path_values) + 0.5 * slope_energy(y)) / cfg.t();
}

double cm_weight(const SmoothLoop& y, const Path& path, const MeasureConfig& cfg) {
  if (!(y.grid() == path.grid)) throw UsageError("cm_weight: grid mismatch");
  return std::exp(log_cm_weight(y, path.values, cfg));
}

double log_increment_density(std::span<const double> path_values, const Grid& grid,
                             const MeasureConfig& cfg) {
  require_node_samples(path_values.size(), grid, "log_increment_density");
  const double v = cfg.t() * grid.du();
  const double norm = -0.5 * std::log(2.0 * std::numbers::pi * v);
  double sum = 0.0;
  for (std::size_t k = 1; k < path_values.size(); ++k) {
    const double dx = path_values[k] - path_values[k - 1];
    sum += norm - dx * dx / (2.0 * v);
  }
  return sum;
}

}  // namespace loopgamma
