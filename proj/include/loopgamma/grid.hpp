#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace loopgamma {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform partition of [0, 2π] into m subintervals.
class Grid {
 public:
  /// Throws UsageError for m < 2.
  explicit Grid(int m);

  int m() const noexcept { return m_; }
  double du() const noexcept { return du_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m_) + 1; }

  /// u_k = k·du, with u_m pinned to 2π exactly.
  double node(std::size_t k) const noexcept {
    return k == static_cast<std::size_t>(m_) ? kTwoPi : static_cast<double>(k) * du_;
  }
  std::vector<double> nodes() const;

  /// Trapezoid weight of node k.
  double weight(std::size_t k) const noexcept {
    return (k == 0 || k == static_cast<std::size_t>(m_)) ? 0.5 * du_ : du_;
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.m_ == b.m_; }

 private:
  int m_;
  double du_;
};

Grid make_grid(int m);

/// Variance parameter t of the Wiener measure.
class MeasureConfig {
 public:
  /// Throws UsageError unless t > 0.
  explicit MeasureConfig(double t);
  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Gaussian density of variance t·s evaluated at x.
double heat_kernel(double x, double s, double t);

/// Total mass of the conditional Wiener measure pinned at X: heat_kernel(X, 2π, t).
double bridge_mass(double X, const MeasureConfig& cfg);

/// Trapezoid rule over the grid; `values` must hold m+1 node samples.
double quad(std::span<const double> values, const Grid& grid);
std::complex<double> quad(std::span<const std::complex<double>> values, const Grid& grid);

/// Throws UsageError when a node-sample array does not match the grid.
void require_node_samples(std::size_t size, const Grid& grid, const char* what);

}  // namespace loopgamma
