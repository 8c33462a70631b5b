#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "loopgamma/grid.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/paths.hpp"

namespace lgtest {

using loopgamma::Grid;
using loopgamma::SmoothLoop;

inline SmoothLoop sin_loop(const Grid& g, double amp = 1.0, double freq = 1.0) {
  return SmoothLoop::from_functions(
      g, [=](double u) { return amp * std::sin(freq * u); },
      [=](double u) { return amp * freq * std::cos(freq * u); },
      [=](double u) { return -amp * freq * freq * std::sin(freq * u); });
}

inline SmoothLoop cos_loop(const Grid& g, double amp = 1.0, double freq = 1.0) {
  return SmoothLoop::from_functions(
      g, [=](double u) { return amp * std::cos(freq * u); },
      [=](double u) { return -amp * freq * std::sin(freq * u); },
      [=](double u) { return -amp * freq * freq * std::cos(freq * u); });
}

inline SmoothLoop const_loop(const Grid& g, double c) {
  return SmoothLoop::from_functions(
      g, [=](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}

inline SmoothLoop linear_loop(const Grid& g, double slope) {
  return SmoothLoop::from_functions(
      g, [=](double u) { return slope * u; }, [=](double) { return slope; },
      [](double) { return 0.0; });
}

inline std::vector<std::complex<double>> complexify(std::span<const double> v) {
  return {v.begin(), v.end()};
}

inline bool within(std::complex<double> a, std::complex<double> b, double se,
                   double sigmas = 3.0) {
  return std::abs(a - b) <= sigmas * se + 1e-13 * std::max(1.0, std::abs(b));
}

}  // namespace lgtest
