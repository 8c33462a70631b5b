#pragma once

#include <complex>
#include <span>
#include <vector>

#include "loopgamma/mc.hpp"
#include "loopgamma/paths.hpp"

namespace loopgamma {

/// Covariance of the node law: t·min(s,u) (free) or t(min(s,u) - su/2π) (bridge).
double path_covariance(PathKind kind, double s, double u, double t);

/// Mean of x(u): zero for free paths, uX/2π for a bridge pinned at X.
double path_mean(const Sampler& sampler, double u);

/// aᵀCb with a, b node samples already multiplied by trapezoid weights.
std::complex<double> covariance_form(std::span<const std::complex<double>> a,
                                     std::span<const std::complex<double>> b, const Grid& grid,
                                     PathKind kind, const MeasureConfig& cfg);

/// E[exp(∫η(u)x(u)du)] in closed form, with the du-integral taken as the same
/// trapezoid rule the estimators use. η may be complex.
std::complex<double> gaussian_moment_oracle(std::span<const std::complex<double>> eta,
                                            const Grid& grid, const Sampler& sampler,
                                            const MeasureConfig& cfg);
std::complex<double> gaussian_moment_oracle(const SmoothLoop& eta, const Sampler& sampler,
                                            const MeasureConfig& cfg);

/// Cameron–Martin shift h with (1/t)∫h′dx = ∫ηx du + const on the sampler's
/// support. Tilting by h turns exp(∫ηx du) into a constant.
SmoothLoop exponential_tilt(std::span<const double> eta, const Grid& grid, PathKind kind,
                            const MeasureConfig& cfg);

/// Variance of ∫ηx du under the sampler (real η).
double linear_variance(std::span<const double> eta, const Grid& grid, PathKind kind,
                       const MeasureConfig& cfg);

}  // namespace loopgamma
