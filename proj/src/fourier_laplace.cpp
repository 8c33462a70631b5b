#include "loopgamma/fourier_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "loopgamma/errors.hpp"
#include "loopgamma/gaussian.hpp"
#include "loopgamma/special.hpp"

namespace loopgamma {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

double trapezoid_weight(std::size_t i, std::size_t n, double h) {
  return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

}  // namespace

LineFunction LineFunction::sample(double half_width, std::size_t n,
                                  const std::function<cd(double)>& f, double contour_shift) {
  if (!(half_width > 0.0) || n < 3) throw UsageError("LineFunction needs L > 0 and n >= 3");
  LineFunction out;
  out.half_width = half_width;
  out.contour_shift = contour_shift;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = f(out.point(i));
  return out;
}

double LineFunction::spacing() const noexcept {
  return 2.0 * half_width / static_cast<double>(samples.size() - 1);
}

double LineFunction::point(std::size_t i) const noexcept {
  return -half_width + static_cast<double>(i) * spacing();
}

cd LineFunction::interpolate(double s) const {
  const double r = (s + half_width) / spacing();
  if (r < 0.0 || r > static_cast<double>(samples.size() - 1)) return 0.0;
  const double fl = std::floor(r);
  const std::size_t i = static_cast<std::size_t>(fl);
  if (i + 1 >= samples.size()) return samples.back();
  const double frac = r - fl;
  if (frac == 0.0) return samples[i];
  return (1.0 - frac) * samples[i] + frac * samples[i + 1];
}

double LineFunction::norm_squared() const {
  double s = 0.0;
  const double h = spacing();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s += trapezoid_weight(i, samples.size(), h) * std::norm(samples[i]);
  }
  return s;
}

LineFunction rep_finite(double a, double b, cd lambda, const LineFunction& f) {
  if (!(a > 0.0)) throw UsageError("rep_finite needs a > 0");
  const double alpha = std::log(a);
  double peak = 0.0;
  for (const auto& v : f.samples) peak = std::max(peak, std::abs(v));
  const double h = f.spacing();
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (std::abs(f.samples[j]) <= 1e-14 * peak) continue;
    const double moved = f.point(j) - alpha;
    if (moved < -f.half_width - 1e-9 * h || moved > f.half_width + 1e-9 * h) {
      std::ostringstream msg;
      msg << "shift by log a = " << alpha << " moves the support of f outside the window [-"
          << f.half_width << ", " << f.half_width << "]";
      throw UsageError(msg.str());
    }
  }
  LineFunction out = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double s = f.point(i);
    out.samples[i] = std::exp(lambda * b * std::exp(s)) * f.interpolate(s + alpha);
  }
  return out;
}

cd laplace_at(const LineFunction& f, cd p) {
  const double h = f.spacing();
  cd sum{};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.samples[i] == 0.0) continue;
    sum += trapezoid_weight(i, f.size(), h) * std::exp(kI * p * f.point(i)) * f.samples[i];
  }
  return kInvSqrt2Pi * sum;
}

LineFunction bilateral_laplace(const LineFunction& f, double Q, std::size_t n, double T) {
  return LineFunction::sample(Q, n, [&](double q) { return laplace_at(f, cd(q, T)); }, T);
}

cd inverse_laplace_at(const LineFunction& F, double s) {
  const double h = F.spacing();
  const double T = F.contour_shift;
  cd sum{};
  for (std::size_t i = 0; i < F.size(); ++i) {
    const cd p(F.point(i), T);
    sum += trapezoid_weight(i, F.size(), h) * std::exp(-kI * p * s) * F.samples[i];
  }
  return kInvSqrt2Pi * sum;
}

LineFunction inverse_laplace(const LineFunction& F, double L, std::size_t n) {
  return LineFunction::sample(L, n, [&](double s) { return inverse_laplace_at(F, s); });
}

namespace {

void finish(DualRouteReport& r, double tol) {
  double diff = 0.0, size = 0.0;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    diff = std::max(diff, std::abs(r.transform_route[i] - r.kernel_route[i]));
    size = std::max(size, std::abs(r.transform_route[i]));
  }
  r.max_relative = size > 0.0 ? diff / size : diff;
  r.pass = r.max_relative <= tol;
}

}  // namespace

DualRouteReport check_prop22(double a, double b, double lambda, const LineFunction& f,
                             const std::vector<double>& t1, double contour, double tol) {
  if (!(a > 0.0)) throw UsageError("check_prop22 needs a > 0");
  const double c = -lambda * b;
  if (!(c > 0.0)) {
    std::ostringstream msg;
    msg << "kernel route needs -lambda*b > 0, got " << c;
    throw DomainError(msg.str());
  }
  if (!(contour > 0.0)) throw UsageError("check_prop22 needs a contour Im p > 0");
  const double alpha = std::log(a);
  const double log_c = std::log(c);

  // Spectral data F = ℒf on Im p = contour.
  const LineFunction F = bilateral_laplace(f, 14.0, 561, contour);

  // Route 1: ℒ[e^{λbe^s}(ℒ⁻¹F)(s+α)] at real t1.
  LineFunction moved = f;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const double s = moved.point(i);
    const double damp = lambda * b * std::exp(s);
    moved.samples[i] = damp < -745.0 ? cd{} : std::exp(damp) * inverse_laplace_at(F, s + alpha);
  }

  DualRouteReport r;
  r.points = t1;
  const double hq = F.spacing();
  for (double t : t1) {
    r.transform_route.push_back(laplace_at(moved, cd(t, 0.0)));
    cd sum{};
    for (std::size_t i = 0; i < F.size(); ++i) {
      const cd p(F.point(i), contour);
      const cd kernel = gamma_classical(kI * t - kI * p) * std::exp(-kI * p * alpha) *
                        std::exp((kI * p - kI * t) * log_c);
      sum += trapezoid_weight(i, F.size(), hq) * kernel * F.samples[i];
    }
    r.kernel_route.push_back(sum / (2.0 * kPi));
  }
  finish(r, tol);
  return r;
}

DualRouteReport check_theorem52(const Path& x, const GroupElement& g, const RepContext& ctx,
                                const Functional& path_part,
                                const std::function<cd(double)>& profile,
                                const std::vector<double>& z_points,
                                const Theorem52Options& opts) {
  const RepOperator op(g, ctx);
  const PathArg arg(x);
  const auto fac = op.factors(arg);
  const cd A = fac.lambda_sum;
  if (A.imag() == 0.0 && A.real() >= 0.0) {
    std::ostringstream msg;
    msg << "A = integral of lambda*b*e^x is " << A.real()
        << " (arg = 0): the kernel branch needs arg(-A) in (-pi, pi)";
    throw DomainError(msg.str());
  }
  const cd log_minus_a = std::log(-A);
  const double alpha0 = g.alpha0();
  const cd common = std::exp(fac.log_prefactor) * path_part(op.target(arg));

  const LineFunction phi =
      LineFunction::sample(opts.profile_half_width, opts.profile_nodes, profile);
  const LineFunction Phi =
      bilateral_laplace(phi, opts.spectral_half_width, opts.spectral_nodes, opts.contour);

  LineFunction moved = phi;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const double x0 = moved.point(i);
    const cd e = A * std::exp(x0);
    moved.samples[i] = e.real() < -745.0 ? cd{} : std::exp(e) * inverse_laplace_at(Phi, x0 + alpha0);
  }

  DualRouteReport r;
  r.points = z_points;
  const double hv = Phi.spacing();
  for (double z : z_points) {
    r.transform_route.push_back(common * laplace_at(moved, cd(z, 0.0)));
    cd sum{};
    for (std::size_t i = 0; i < Phi.size(); ++i) {
      const cd v(Phi.point(i), opts.contour);
      const cd kernel = std::exp(-kI * v * alpha0) * std::exp((kI * v - kI * z) * log_minus_a) *
                        gamma_classical(kI * (z - v));
      sum += trapezoid_weight(i, Phi.size(), hv) * kernel * Phi.samples[i];
    }
    r.kernel_route.push_back(common * sum / (2.0 * kPi));
  }
  finish(r, opts.tol);
  return r;
}

FourierWienerReport fourier_wiener_check(std::span<const cd> eta, std::span<const cd> zeta,
                                         const Grid& grid, const MeasureConfig& cfg,
                                         double tol) {
  require_node_samples(eta.size(), grid, "fourier_wiener_check eta");
  require_node_samples(zeta.size(), grid, "fourier_wiener_check zeta");
  const MeasureConfig doubled(2.0 * cfg.t());
  const auto bridge = Sampler::bridge(0.0);
  std::vector<cd> cross(eta.size()), sum(eta.size());
  for (std::size_t k = 0; k < eta.size(); ++k) {
    cross[k] = kI * (zeta[k] - std::conj(eta[k]));
    sum[k] = std::conj(eta[k]) + zeta[k];
  }
  FourierWienerReport r;
  r.transformed = std::conj(gaussian_moment_oracle(eta, grid, bridge, doubled)) *
                  gaussian_moment_oracle(zeta, grid, bridge, doubled) *
                  gaussian_moment_oracle(cross, grid, bridge, cfg);
  r.original = gaussian_moment_oracle(sum, grid, bridge, cfg);
  r.relative = std::abs(r.transformed - r.original) / std::max(std::abs(r.original), 1e-300);
  r.pass = r.relative <= tol;
  return r;
}

MCEstimate path_fourier_transform(const Functional& f, const SmoothLoop& p,
                                  const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                  const EngineOptions& options) {
  if (!p.starts_at_zero() || std::abs(p.values().back()) > 1e-12) {
    throw UsageError("Fourier argument p must vanish at 0 and 2π");
  }
  const Grid& grid = p.grid();
  std::vector<double> w(grid.size());
  const auto pv = p.values();
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = grid.weight(k) * pv[k];
  const SampleKernel kernel = [&](const Path& x, std::span<cd> out) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * x.values[k];
    out[0] = std::polar(1.0, s) * f(PathArg(x));
  };
  auto est = expect_many(grid, cfg, Sampler::bridge(0.0), n, seed, 1, kernel, options).front();
  const double mass = bridge_mass(0.0, cfg);
  est.mean *= mass;
  est.std_error *= mass;
  return est;
}

}  // namespace loopgamma
