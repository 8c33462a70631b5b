#pragma once

#include <cstdint>

#include "loopgamma/functional.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/report.hpp"

namespace loopgamma {

/// Cameron–Martin translation. Free: E[f(x)] vs E[f(x+y)W(y,x)].
/// Bridge at X: mass(X+Y)·E_{X+Y}[f] vs mass(X)·E_X[f(x+y)W(y,x)], Y = y(2π).
/// Both sides use the same normals.
CheckReport check_translation(const Functional& f, const SmoothLoop& y, const Sampler& sampler,
                              const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                              const EngineOptions& options = {});

/// log p(x) - log p(x+y) + log W(y,x); zero up to rounding.
double check_translation_exact(const Path& x, const SmoothLoop& y, const MeasureConfig& cfg);

struct DirectIntegralOptions {
  double half_width_sigmas = 6.0;  ///< X window is ±6√(2πt)
  int nodes = 49;
  double quadrature_tolerance = 1e-6;
};

/// E_free[f] against ∫ mass(X)·E_X[f] dX. Each sample splits a free path into
/// its bridge part and endpoint; the X-integral is a trapezoid over shifted
/// bridges of the same normals.
CheckReport check_direct_integral(const Functional& f, const Grid& grid,
                                  const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                  const DirectIntegralOptions& quad_options = {},
                                  const EngineOptions& options = {});

}  // namespace loopgamma
