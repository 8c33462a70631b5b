#include "loopgamma/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace loopgamma {

nlohmann::json complex_json(std::complex<double> z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json j = nlohmann::json::object();
  j["check"] = report.check;
  j["lhs"] = complex_json(report.lhs);
  j["rhs"] = complex_json(report.rhs);
  j["stderr"] = report.std_error;
  j["pass"] = report.pass;
  for (const auto& [key, value] : report.extra.items()) j[key] = value;
  return j;
}

std::string csv_header() { return "check,lhs_re,lhs_im,rhs_re,rhs_im,diff_re,diff_im,stderr,pass"; }

std::string to_csv_row(const CheckReport& r) {
  const auto d = r.lhs - r.rhs;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d", r.check.c_str(),
                r.lhs.real(), r.lhs.imag(), r.rhs.real(), r.rhs.imag(), d.real(), d.imag(),
                r.std_error, r.pass ? 1 : 0);
  return buf;
}

bool within_gate(std::complex<double> diff, double se, double scale, double sigmas) {
  const double floor = 256.0 * std::numeric_limits<double>::epsilon() * std::abs(scale);
  return std::abs(diff) <= sigmas * se + floor;
}

CheckReport run_with_rerun(const std::function<CheckReport(std::uint64_t n)>& run,
                           std::uint64_t n) {
  CheckReport first = run(n);
  if (first.pass) return first;
  CheckReport second = run(4 * n);
  second.extra["rerun"] = true;
  second.extra["first_pass_n"] = n;
  return second;
}

}  // namespace loopgamma
