#include "loopgamma/loop_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "loopgamma/errors.hpp"
#include "loopgamma/gaussian.hpp"

namespace loopgamma {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": grid mismatch");
}

std::size_t node_index(const Grid& grid, double v) {
  const double r = v / grid.du();
  const double k = std::round(r);
  if (k < 0.0 || k > grid.m() || std::abs(r - k) > 1e-9) {
    std::ostringstream msg;
    msg << "delta shift point v = " << v << " is not a grid node";
    throw UsageError(msg.str());
  }
  return static_cast<std::size_t>(k);
}

/// The tilt for exp(∫p Re z du) under the bridge at 0, or nothing.
std::optional<SmoothLoop> choose_tilt(const ComplexLoopArgument& z, const MeasureConfig& cfg,
                                      const LoopGammaOptions& opts) {
  if (opts.tilt == TiltPolicy::never) return std::nullopt;
  std::vector<double> re(z.z.size());
  for (std::size_t i = 0; i < re.size(); ++i) re[i] = z.z[i].real();
  if (opts.tilt == TiltPolicy::automatic &&
      linear_variance(re, z.grid, PathKind::bridge, cfg) <= opts.tilt_variance_threshold) {
    return std::nullopt;
  }
  return exponential_tilt(re, z.grid, PathKind::bridge, cfg);
}

/// Fills `p` with the (possibly tilted) bridge and returns the log of the
/// Cameron–Martin weight.
double tilted_values(const Path& path, const std::optional<SmoothLoop>& tilt,
                     const MeasureConfig& cfg, std::vector<double>& p) {
  p = path.values;
  if (!tilt) return 0.0;
  const auto h = tilt->values();
  const double lw = log_cm_weight(*tilt, path.values, cfg);
  for (std::size_t k = 0; k < p.size(); ++k) p[k] += h[k];
  return lw;
}

/// log of exp(∫pz du - ∫μe^p du).
std::complex<double> log_integrand(const std::vector<double>& p, const ComplexLoopArgument& z,
                                   const MuWeight& mu) {
  const Grid& grid = z.grid;
  std::complex<double> s{};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double w = grid.weight(k);
    s += w * (p[k] * z.z[k]);
    if (mu.mu[k] != 0.0) s -= w * mu.mu[k] * std::exp(p[k]);
  }
  return s;
}

using Insertion = std::function<std::complex<double>(const std::vector<double>& p)>;

struct GammaRun {
  std::vector<MCEstimate> estimates;
  bool tilted = false;
};

/// mass(0)·E[insertion_j(p)·exp(∫pz - ∫μe^p)] for each insertion.
GammaRun run_gamma(const ComplexLoopArgument& z, const MuWeight& mu, const MeasureConfig& cfg,
                   std::uint64_t n, std::uint64_t seed, const LoopGammaOptions& opts,
                   const std::vector<Insertion>& insertions) {
  require_grid(z.grid, mu.grid, "loop gamma");
  const auto tilt = choose_tilt(z, cfg, opts);
  const SampleKernel kernel = [&](const Path& path, std::span<std::complex<double>> out) {
    std::vector<double> p;
    const double lw = tilted_values(path, tilt, cfg, p);
    const auto value = std::exp(log_integrand(p, z, mu) + lw);
    for (std::size_t j = 0; j < insertions.size(); ++j) out[j] = value * insertions[j](p);
  };
  GammaRun run;
  run.tilted = tilt.has_value();
  run.estimates = expect_many(z.grid, cfg, Sampler::bridge(0.0), n, seed, insertions.size(),
                              kernel, opts.engine);
  const double mass = bridge_mass(0.0, cfg);
  for (auto& e : run.estimates) {
    e.mean *= mass;
    e.std_error *= mass;
  }
  return run;
}

}  // namespace

ComplexLoopArgument::ComplexLoopArgument(const Grid& g, std::vector<std::complex<double>> values)
    : grid(g), z(std::move(values)) {
  require_node_samples(z.size(), grid, "ComplexLoopArgument");
  for (const auto& v : z) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw UsageError("loop argument z must be finite at every node");
    }
  }
}

ComplexLoopArgument ComplexLoopArgument::constant(const Grid& g, std::complex<double> c) {
  return ComplexLoopArgument(g, std::vector<std::complex<double>>(g.size(), c));
}

MuWeight::MuWeight(const Grid& g, std::vector<double> values) : grid(g), mu(std::move(values)) {
  require_node_samples(mu.size(), grid, "MuWeight");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(mu[i] >= 0.0) || !std::isfinite(mu[i])) {
      std::ostringstream msg;
      msg << "mu must be nonnegative; node " << i << " has mu = " << mu[i];
      throw DomainError(msg.str());
    }
  }
}

MuWeight MuWeight::constant(const Grid& g, double c) {
  return MuWeight(g, std::vector<double>(g.size(), c));
}

TestFunction::TestFunction(const Grid& grid_, std::vector<double> g_, std::vector<double> d1_,
                           std::vector<double> d2_)
    : grid(grid_), g(std::move(g_)), d1(std::move(d1_)), d2(std::move(d2_)) {
  require_node_samples(g.size(), grid, "TestFunction g");
  require_node_samples(d1.size(), grid, "TestFunction g'");
  require_node_samples(d2.size(), grid, "TestFunction g''");
  if (std::abs(g.front()) > 1e-12 || std::abs(g.back()) > 1e-12) {
    throw UsageError("test function must vanish at 0 and 2π");
  }
  g.front() = 0.0;
  g.back() = 0.0;
}

TestFunction TestFunction::from_functions(const Grid& grid,
                                          const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          const std::function<double(double)>& d2f) {
  std::vector<double> v(grid.size()), a(grid.size()), b(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    v[k] = f(grid.node(k));
    a[k] = df(grid.node(k));
    b[k] = d2f(grid.node(k));
  }
  return TestFunction(grid, std::move(v), std::move(a), std::move(b));
}

std::vector<double> TestFunction::second_difference() const {
  std::vector<double> out(g.size(), 0.0);
  const double h2 = grid.du() * grid.du();
  for (std::size_t k = 1; k + 1 < g.size(); ++k) out[k] = (g[k + 1] - 2.0 * g[k] + g[k - 1]) / h2;
  return out;
}

SmoothLoop TestFunction::as_loop() const { return SmoothLoop(grid, g, d1, d2); }

MCEstimate hat_gamma(const ComplexLoopArgument& z, const MuWeight& mu, const MeasureConfig& cfg,
                     std::uint64_t n, std::uint64_t seed, const LoopGammaOptions& opts) {
  const std::vector<Insertion> ins{[](const std::vector<double>&) { return 1.0; }};
  return run_gamma(z, mu, cfg, n, seed, opts, ins).estimates.front();
}

MCEstimate hat_gamma_delta_shift(const ComplexLoopArgument& z, const MuWeight& mu, double v,
                                 const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                 const LoopGammaOptions& opts) {
  const std::size_t node = node_index(z.grid, v);
  const std::vector<Insertion> ins{
      [node](const std::vector<double>& p) { return std::complex<double>(std::exp(p[node])); }};
  return run_gamma(z, mu, cfg, n, seed, opts, ins).estimates.front();
}

MCEstimate variational_derivative(const ComplexLoopArgument& z, const MuWeight& mu,
                                  std::span<const double> xi, const MeasureConfig& cfg,
                                  std::uint64_t n, std::uint64_t seed,
                                  const LoopGammaOptions& opts) {
  require_node_samples(xi.size(), z.grid, "variational_derivative");
  std::vector<double> w(xi.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = z.grid.weight(k) * xi[k];
  const std::vector<Insertion> ins{[w](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += w[k] * p[k];
    return std::complex<double>(s);
  }};
  return run_gamma(z, mu, cfg, n, seed, opts, ins).estimates.front();
}

FunctionalEquationReport check_functional_equation(const ComplexLoopArgument& z,
                                                   const MuWeight& mu, const TestFunction& g,
                                                   const MeasureConfig& cfg, std::uint64_t n,
                                                   std::uint64_t seed,
                                                   const LoopGammaOptions& opts) {
  require_grid(z.grid, g.grid, "functional equation");
  const Grid& grid = z.grid;
  const double t = cfg.t();
  const auto g2 = g.second_difference();
  std::vector<double> wg(grid.size()), wgmu(grid.size()), wg2(grid.size());
  std::complex<double> gz{};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double w = grid.weight(k);
    wg[k] = w * g.g[k];
    wgmu[k] = wg[k] * mu.mu[k];
    wg2[k] = w * g2[k];
    gz += wg[k] * z.z[k];
  }
  auto delta_part = [wgmu](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (wgmu[k] != 0.0) s += wgmu[k] * std::exp(p[k]);
    }
    return s;
  };
  auto second_part = [wg2](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += wg2[k] * p[k];
    return s;
  };
  const std::vector<Insertion> ins{
      [=](const std::vector<double>& p) {
        return delta_part(p) - gz - second_part(p) / t;
      },
      [=](const std::vector<double>& p) { return std::complex<double>(delta_part(p)); },
      [](const std::vector<double>&) { return std::complex<double>(1.0); },
      [=](const std::vector<double>& p) { return std::complex<double>(second_part(p) / t); }};

  auto evaluate = [&](std::uint64_t samples) {
    const auto run = run_gamma(z, mu, cfg, samples, seed, opts, ins);
    FunctionalEquationReport r;
    r.residual = run.estimates[0];
    r.delta_term = run.estimates[1];
    r.z_term = run.estimates[2];
    r.z_term.mean *= gz;
    r.z_term.std_error *= std::abs(gz);
    r.derivative_term = run.estimates[3];
    r.tilted = run.tilted;
    const double scale = std::abs(r.delta_term.mean) + std::abs(r.z_term.mean) +
                         std::abs(r.derivative_term.mean);
    r.pass = within_gate(r.residual.mean, r.residual.std_error, scale);
    return r;
  };
  auto r = evaluate(n);
  if (!r.pass) r = evaluate(4 * n);
  return r;
}

CheckReport check_ibp_identity(const Functional& f, const TestFunction& g,
                               const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                               const EngineOptions& options) {
  const Grid& grid = g.grid;
  const auto g2 = g.second_difference();
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = grid.weight(k) * g2[k] / cfg.t();
  const SmoothLoop dir = g.as_loop();
  const SampleKernel kernel = [&](const Path& x, std::span<std::complex<double>> out) {
    const PathArg arg(x);
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * x.values[k];
    const auto lhs = s * f(arg);
    const auto rhs = -f.directional_derivative(arg, dir);
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  };
  auto est = expect_many(grid, cfg, Sampler::bridge(0.0), n, seed, 3, kernel, options);
  CheckReport r;
  r.check = "integration_by_parts";
  r.lhs = est[0].mean;
  r.rhs = est[1].mean;
  r.std_error = est[2].std_error;
  r.pass = within_gate(est[2].mean, est[2].std_error, std::abs(r.lhs) + std::abs(r.rhs));
  r.extra["diff"] = complex_json(est[2].mean);
  r.extra["n"] = n;
  r.extra["seed"] = seed;
  return r;
}

MuWeight kernel_mu(const GroupElement& g, const RepContext& ctx, double x0) {
  const auto lambda = ctx.lambda();
  const auto b = g.b.values();
  std::vector<double> mu(lambda.size());
  const double e = std::exp(x0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto v = -lambda[i] * b[i] * e;
    if (std::abs(v.imag()) > 1e-14 * std::max(1.0, std::abs(v)) || v.real() < 0.0) {
      std::ostringstream msg;
      msg << "kernel weight mu = -lambda*b*e^x0 must be real and nonnegative; node " << i
          << " has " << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
      throw DomainError(msg.str());
    }
    mu[i] = v.real();
  }
  return MuWeight(ctx.grid(), std::move(mu));
}

namespace {

void require_kernel_inputs(const Path& x, const Path& y, const GroupElement& g,
                           const RepContext& ctx) {
  const Grid& grid = ctx.grid();
  if (!(x.grid == grid) || !(y.grid == grid) || !(g.grid() == grid)) {
    throw UsageError("kernel: grid mismatch");
  }
  if (!g.alpha.is_closed()) throw UsageError("kernel needs alpha to be a loop (alpha(0) = alpha(2π))");
}

struct KernelParts {
  std::vector<double> x_minus_y;
  std::vector<double> alpha;
  std::vector<double> slopes;
  std::complex<double> prefactor;  // e^{is - Q/4t}
};

KernelParts kernel_parts(const Path& x, const Path& y, const GroupElement& g,
                         const RepContext& ctx) {
  KernelParts parts;
  parts.x_minus_y.resize(x.values.size());
  for (std::size_t k = 0; k < x.values.size(); ++k) parts.x_minus_y[k] = x.values[k] - y.values[k];
  const auto a = g.alpha.values();
  parts.alpha.assign(a.begin(), a.end());
  parts.slopes = g.alpha.slopes();
  const double q = slope_energy(g.alpha);
  parts.prefactor = std::exp(std::complex<double>(-q / (4.0 * ctx.cfg().t()), g.s));
  return parts;
}

/// Log of the 𝕂 integrand on a bridge p pinned at 0.
std::complex<double> kernel_log_integrand(const KernelParts& parts, const MuWeight& mu,
                                          const RepContext& ctx, const std::vector<double>& p) {
  const Grid& grid = ctx.grid();
  const double t = ctx.cfg().t();
  std::complex<double> s{};
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double w = grid.weight(k);
    s += kI * (w * p[k] * parts.x_minus_y[k]);
    if (mu.mu[k] != 0.0) s -= w * mu.mu[k] * std::exp(p[k]);
  }
  s += kI * (ctx.k() * stieltjes(parts.alpha, p));
  s -= stieltjes(parts.slopes, p) / (2.0 * t);
  return s;
}

}  // namespace

ComplexLoopArgument kernel_z_eff(const Path& x, const Path& y, const GroupElement& g,
                                 const RepContext& ctx) {
  require_kernel_inputs(x, y, g, ctx);
  const Grid& grid = ctx.grid();
  const std::size_t m = static_cast<std::size_t>(grid.m());
  const double du = grid.du();
  const double t = ctx.cfg().t();
  const double k = ctx.k();
  const auto a = g.alpha.values();
  auto prev = [&](std::size_t j) { return j == 0 ? a[m - 1] : a[j - 1]; };
  auto next = [&](std::size_t j) { return j == m ? a[1] : a[j + 1]; };
  std::vector<std::complex<double>> z(grid.size());
  for (std::size_t j = 0; j <= m; ++j) {
    const double back = (a[j] - prev(j)) / du;
    const double second = (next(j) - 2.0 * a[j] + prev(j)) / (du * du);
    z[j] = std::complex<double>(second / (2.0 * t), x.values[j] - y.values[j] - k * back);
  }
  return ComplexLoopArgument(grid, std::move(z));
}

MCEstimate kernel_K(const Path& x, const Path& y, double x0, const GroupElement& g,
                    const RepContext& ctx, std::uint64_t n, std::uint64_t seed,
                    const EngineOptions& options) {
  require_kernel_inputs(x, y, g, ctx);
  const auto mu = kernel_mu(g, ctx, x0);
  const auto parts = kernel_parts(x, y, g, ctx);
  const SampleKernel kernel = [&](const Path& p, std::span<std::complex<double>> out) {
    out[0] = std::exp(kernel_log_integrand(parts, mu, ctx, p.values));
  };
  auto est = expect_many(ctx.grid(), ctx.cfg(), Sampler::bridge(0.0), n, seed, 1, kernel, options)
                 .front();
  const auto scale = bridge_mass(0.0, ctx.cfg()) * parts.prefactor;
  est.mean *= scale;
  est.std_error *= std::abs(scale);
  return est;
}

KernelReductionReport check_kernel_reduction(const Path& x, const Path& y, double x0,
                                             const GroupElement& g, const RepContext& ctx,
                                             std::uint64_t paths, std::uint64_t seed,
                                             double tol) {
  require_kernel_inputs(x, y, g, ctx);
  const auto mu = kernel_mu(g, ctx, x0);
  const auto parts = kernel_parts(x, y, g, ctx);
  const auto z = kernel_z_eff(x, y, g, ctx);
  KernelReductionReport r;
  r.prefactor = parts.prefactor;
  for (std::uint64_t i = 0; i < paths; ++i) {
    const auto p = sample_bridge(ctx.grid(), ctx.cfg(), 0.0, seed, i);
    const auto lhs = std::exp(kernel_log_integrand(parts, mu, ctx, p.values));
    const auto rhs = std::exp(log_integrand(p.values, z, mu));
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) r.residual = std::max(r.residual, std::abs(lhs - rhs) / scale);
  }
  r.pass = r.residual <= tol;
  return r;
}

}  // namespace loopgamma
