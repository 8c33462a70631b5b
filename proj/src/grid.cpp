#include "loopgamma/grid.hpp"

#include <cmath>
#include <string>

#include "loopgamma/errors.hpp"

namespace loopgamma {

Grid::Grid(int m) : m_(m), du_(0.0) {
  if (m < 2) throw UsageError("grid needs m >= 2 subintervals, got " + std::to_string(m));
  du_ = kTwoPi / static_cast<double>(m);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = node(k);
  return out;
}

Grid make_grid(int m) { return Grid(m); }

MeasureConfig::MeasureConfig(double t) : t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("variance parameter t must be positive");
}

double heat_kernel(double x, double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw UsageError("heat_kernel needs s > 0 and t > 0");
  const double v = t * s;
  return std::exp(-x * x / (2.0 * v)) / std::sqrt(kTwoPi * v);
}

double bridge_mass(double X, const MeasureConfig& cfg) { return heat_kernel(X, kTwoPi, cfg.t()); }

void require_node_samples(std::size_t size, const Grid& grid, const char* what) {
  if (size != grid.size()) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(grid.size()) +
                     " node samples, got " + std::to_string(size));
  }
}

namespace {

template <class T>
T trapezoid(std::span<const T> values, const Grid& grid) {
  require_node_samples(values.size(), grid, "quad");
  T inner{};
  for (std::size_t k = 1; k + 1 < values.size(); ++k) inner += values[k];
  return grid.du() * (inner + 0.5 * (values.front() + values.back()));
}

}  // namespace

double quad(std::span<const double> values, const Grid& grid) { return trapezoid(values, grid); }

std::complex<double> quad(std::span<const std::complex<double>> values, const Grid& grid) {
  return trapezoid(values, grid);
}

}  // namespace loopgamma
