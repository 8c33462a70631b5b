#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "loopgamma/grid.hpp"

namespace loopgamma {

enum class PathKind { free, bridge };

/// Node values of a continuous path with x(0) = 0, optionally pinned at 2π.
struct Path {
  Grid grid;
  std::vector<double> values;
  PathKind kind = PathKind::free;
  double endpoint = 0.0;  ///< X for bridge paths

  explicit Path(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Path(const Grid& g, std::vector<double> v, PathKind k = PathKind::free, double X = 0.0);
};

/// Fills `out` with a free Wiener path; increments are N(0, t·du).
void fill_wiener(Path& out, const MeasureConfig& cfg, std::uint64_t seed, std::uint64_t index);

/// Turns a free path into the bridge pinned at X: x_k -= (u_k/2π)(x_m - X).
void pin_to_endpoint(Path& path, double X);

Path sample_wiener(const Grid& grid, const MeasureConfig& cfg, std::uint64_t seed,
                   std::uint64_t index);
Path sample_bridge(const Grid& grid, const MeasureConfig& cfg, double X, std::uint64_t seed,
                   std::uint64_t index);

/// Sampled function with first (and optionally second) derivative at the nodes.
class SmoothLoop {
 public:
  SmoothLoop(const Grid& grid, std::vector<double> values, std::vector<double> d1,
             std::vector<double> d2 = {});

  static SmoothLoop zero(const Grid& grid);
  static SmoothLoop from_functions(const Grid& grid, const std::function<double(double)>& f,
                                   const std::function<double(double)>& df,
                                   const std::function<double(double)>& d2f = {});
  /// Derivatives by second-order finite differences (periodic when the samples close up).
  static SmoothLoop from_samples(const Grid& grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> d1() const noexcept { return d1_; }
  std::span<const double> d2() const noexcept { return d2_; }
  bool has_d2() const noexcept { return !d2_.empty(); }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  bool starts_at_zero(double tol = 1e-12) const;
  bool is_closed(double tol = 1e-12) const;

  /// Increment slopes (y_k - y_{k-1})/du, k = 1..m (size m).
  std::vector<double> slopes() const;

  /// y - y(0); the based part of a loop.
  SmoothLoop based() const;
  SmoothLoop scaled(double c) const;

  friend SmoothLoop operator+(const SmoothLoop& a, const SmoothLoop& b);
  friend SmoothLoop operator-(const SmoothLoop& a, const SmoothLoop& b);

 private:
  Grid grid_;
  std::vector<double> values_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

/// Left-endpoint sum Σ c_{k-1}(x_k - x_{k-1}). `integrand` holds m per-interval
/// values or m+1 node samples (the last node is unused).
double stieltjes(std::span<const double> integrand, std::span<const double> path_values);
double stieltjes(std::span<const double> integrand, const Path& path);

/// ∫y′dx with y′ realized by increment slopes.
double stieltjes_slopes(const SmoothLoop& y, std::span<const double> path_values);

/// Σ s_k² du with s the increment slopes; the discrete ∫y′² du.
double slope_energy(const SmoothLoop& y);

/// log of exp(-(1/t)∫y′dx - (1/2t)∫y′²du).
double log_cm_weight(const SmoothLoop& y, std::span<const double> path_values,
                     const MeasureConfig& cfg);
double cm_weight(const SmoothLoop& y, const Path& path, const MeasureConfig& cfg);

/// Log density of the node increments under the free Wiener law.
double log_increment_density(std::span<const double> path_values, const Grid& grid,
                             const MeasureConfig& cfg);

}  // namespace loopgamma
