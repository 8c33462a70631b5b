#include "loopgamma/measure_checks.hpp"

#include <cmath>

#include "loopgamma/errors.hpp"

namespace loopgamma {

namespace {

CheckReport paired_report(const char* name, const std::vector<MCEstimate>& est) {
  CheckReport r;
  r.check = name;
  r.lhs = est[0].mean;
  r.rhs = est[1].mean;
  r.std_error = est[2].std_error;
  const double scale = std::abs(est[0].mean) + std::abs(est[1].mean);
  r.pass = within_gate(est[2].mean, est[2].std_error, scale);
  r.extra["diff"] = complex_json(est[2].mean);
  r.extra["n"] = est[0].n;
  r.extra["seed"] = est[0].seed;
  return r;
}

}  // namespace

CheckReport check_translation(const Functional& f, const SmoothLoop& y, const Sampler& sampler,
                              const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                              const EngineOptions& options) {
  if (!y.starts_at_zero()) throw UsageError("translation direction must start at 0");
  const Grid& grid = y.grid();
  const double Y = y.values().back();
  const bool bridge = sampler.kind == PathKind::bridge;
  const double X = sampler.endpoint;
  const double lhs_mass = bridge ? bridge_mass(X + Y, cfg) : 1.0;
  const double rhs_mass = bridge ? bridge_mass(X, cfg) : 1.0;

  const SampleKernel kernel = [&](const Path& x, std::span<std::complex<double>> out) {
    std::complex<double> lhs;
    if (bridge) {
      std::vector<double> moved(x.values);
      for (std::size_t k = 0; k < moved.size(); ++k) moved[k] += grid.node(k) / kTwoPi * Y;
      moved.back() = X + Y;
      lhs = lhs_mass * f(PathArg(grid, moved));
    } else {
      lhs = f(PathArg(x));
    }
    const double w = std::exp(log_cm_weight(y, x.values, cfg));
    const auto rhs = rhs_mass * w * f(PathArg(x).shifted(y));
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  };
  auto est = expect_many(grid, cfg, sampler, n, seed, 3, kernel, options);
  auto r = paired_report(bridge ? "translation_bridge" : "translation_free", est);
  if (bridge) {
    r.extra["X"] = X;
    r.extra["Y"] = Y;
  }
  return r;
}

double check_translation_exact(const Path& x, const SmoothLoop& y, const MeasureConfig& cfg) {
  if (!(x.grid == y.grid())) throw UsageError("check_translation_exact: grid mismatch");
  const Grid& grid = x.grid;
  const double v = cfg.t() * grid.du();
  const auto yv = y.values();
  // log p(x) - log p(x+y), term by term so the normalizations cancel exactly.
  double diff = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double dx = x.values[k] - x.values[k - 1];
    const double dz = (x.values[k] + yv[k]) - (x.values[k - 1] + yv[k - 1]);
    diff += (dz * dz - dx * dx) / (2.0 * v);
  }
  return diff + log_cm_weight(y, x.values, cfg);
}

CheckReport check_direct_integral(const Functional& f, const Grid& grid,
                                  const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                  const DirectIntegralOptions& quad_options,
                                  const EngineOptions& options) {
  if (quad_options.nodes < 3) throw UsageError("direct integral needs at least 3 X nodes");
  const double half = quad_options.half_width_sigmas * std::sqrt(kTwoPi * cfg.t());
  const int nx = quad_options.nodes;
  const double hx = 2.0 * half / (nx - 1);
  std::vector<double> xs(nx), wx(nx);
  for (int j = 0; j < nx; ++j) {
    xs[j] = -half + j * hx;
    wx[j] = (j == 0 || j == nx - 1 ? 0.5 : 1.0) * hx * bridge_mass(xs[j], cfg);
  }

  const SampleKernel kernel = [&](const Path& x, std::span<std::complex<double>> out) {
    const auto lhs = f(PathArg(x));
    const double end = x.values.back();
    std::vector<double> base(x.values), moved(x.values.size());
    for (std::size_t k = 0; k < base.size(); ++k) base[k] -= grid.node(k) / kTwoPi * end;
    base.back() = 0.0;
    std::complex<double> rhs{};
    for (int j = 0; j < nx; ++j) {
      for (std::size_t k = 0; k < base.size(); ++k) moved[k] = base[k] + grid.node(k) / kTwoPi * xs[j];
      moved.back() = xs[j];
      rhs += wx[j] * f(PathArg(grid, moved));
    }
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  };
  auto est = expect_many(grid, cfg, Sampler::free(), n, seed, 3, kernel, options);
  CheckReport r;
  r.check = "direct_integral";
  r.lhs = est[0].mean;
  r.rhs = est[1].mean;
  r.std_error = est[2].std_error;
  r.pass = std::abs(est[2].mean) <=
           kGateSigmas * est[2].std_error + quad_options.quadrature_tolerance;
  r.extra["diff"] = complex_json(est[2].mean);
  r.extra["n"] = n;
  r.extra["seed"] = seed;
  r.extra["x_nodes"] = nx;
  r.extra["x_half_width"] = half;
  return r;
}

}  // namespace loopgamma
