#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopgamma/functional.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/paths.hpp"

namespace loopgamma::io {

using nlohmann::json;

/// Complex scalar: number, [re, im], {"re": .., "im": ..} or "a+bi".
std::complex<double> complex_from(const json& j, const std::string& where);
json complex_to(std::complex<double> z);

/// Real loop: array of m+1 node values, a path object {grid_m, t, values},
/// or a sum of terms {"const": c, "linear": s, "sin": T, "cos": T} where T is
/// an amplitude, {"amp", "freq"} or an array of those.
SmoothLoop loop_from(const json& j, const Grid& grid, const std::string& where);
json loop_to(const SmoothLoop& y);

/// Complex node samples: a complex scalar (constant), an array of m+1 complex
/// scalars, or {"re": loop, "im": loop}.
std::vector<std::complex<double>> complex_loop_from(const json& j, const Grid& grid,
                                                    const std::string& where);

/// Path: {grid_m, t, values} or {"sample": {kind, X, seed, index}}.
Path path_from(const json& j, const Grid& grid, const MeasureConfig& cfg, const std::string& where);
json path_to(const Path& x, const MeasureConfig& cfg);

/// Group element {alpha, b, s}.
GroupElement element_from(const json& j, const Grid& grid, const std::string& where);
json element_to(const GroupElement& g);

/// Functional: "one", or {"type": one|constant|exp_inner|point_char|point_power, ...}.
Functional functional_from(const json& j, const Grid& grid, const std::string& where);

/// Profile in x0: {"type": gaussian|bump, "center", "width"|"radius"}.
std::function<std::complex<double>(double)> profile_from(const json& j, const std::string& where);

/// Sampler: {"kind": free|bridge, "X": ..}.
Sampler sampler_from(const json& j, const std::string& where);

/// Typed field access with UsageError diagnostics naming the field.
double number_from(const json& j, const std::string& where);
std::vector<double> numbers_from(const json& j, const std::string& where);

}  // namespace loopgamma::io
