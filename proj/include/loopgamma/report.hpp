#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace loopgamma {

/// One verification outcome. lhs/rhs are the two sides being compared and
/// std_error the combined (paired) standard error; deterministic checks leave
/// it at zero and put their residual in `extra`.
struct CheckReport {
  std::string check;
  std::complex<double> lhs{};
  std::complex<double> rhs{};
  double std_error = 0.0;
  bool pass = false;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& report);
std::string csv_header();
std::string to_csv_row(const CheckReport& report);

inline constexpr double kGateSigmas = 3.0;

/// |diff| ≤ sigmas·se, with a floor of a few hundred ulps of `scale` so that
/// zero-variance (pathwise exact) comparisons are not failed by rounding.
bool within_gate(std::complex<double> diff, double se, double scale,
                 double sigmas = kGateSigmas);

/// Runs a statistical check; a failure is rerun once at 4× the sample count
/// before it is reported.
CheckReport run_with_rerun(const std::function<CheckReport(std::uint64_t n)>& run,
                           std::uint64_t n);

nlohmann::json complex_json(std::complex<double> z);

}  // namespace loopgamma
