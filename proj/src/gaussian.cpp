#include "loopgamma/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "loopgamma/errors.hpp"

namespace loopgamma {

double path_covariance(PathKind kind, double s, double u, double t) {
  const double c = std::min(s, u);
  if (kind == PathKind::free) return t * c;
  return t * (c - s * u / kTwoPi);
}

double path_mean(const Sampler& sampler, double u) {
  return sampler.kind == PathKind::bridge ? u * sampler.endpoint / kTwoPi : 0.0;
}

std::complex<double> covariance_form(std::span<const std::complex<double>> a,
                                     std::span<const std::complex<double>> b, const Grid& grid,
                                     PathKind kind, const MeasureConfig& cfg) {
  require_node_samples(a.size(), grid, "covariance_form");
  require_node_samples(b.size(), grid, "covariance_form");
  std::complex<double> sum{};
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) continue;
    std::complex<double> row{};
    for (std::size_t k = 0; k < b.size(); ++k) {
      row += b[k] * path_covariance(kind, grid.node(j), grid.node(k), cfg.t());
    }
    sum += a[j] * row;
  }
  return sum;
}

std::complex<double> gaussian_moment_oracle(std::span<const std::complex<double>> eta,
                                            const Grid& grid, const Sampler& sampler,
                                            const MeasureConfig& cfg) {
  require_node_samples(eta.size(), grid, "gaussian_moment_oracle");
  std::vector<std::complex<double>> a(eta.size());
  std::complex<double> mean{};
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = grid.weight(k) * eta[k];
    mean += a[k] * path_mean(sampler, grid.node(k));
  }
  return std::exp(mean + 0.5 * covariance_form(a, a, grid, sampler.kind, cfg));
}

std::complex<double> gaussian_moment_oracle(const SmoothLoop& eta, const Sampler& sampler,
                                            const MeasureConfig& cfg) {
  const auto v = eta.values();
  const std::vector<std::complex<double>> c(v.begin(), v.end());
  return gaussian_moment_oracle(c, eta.grid(), sampler, cfg);
}

SmoothLoop exponential_tilt(std::span<const double> eta, const Grid& grid, PathKind kind,
                            const MeasureConfig& cfg) {
  require_node_samples(eta.size(), grid, "exponential_tilt");
  const std::size_t m = static_cast<std::size_t>(grid.m());
  // ∫ηx du = Σ_j c_j Δx_j with c_j the weighted tail sum from node j on.
  std::vector<double> c(m + 1, 0.0);
  for (std::size_t k = m + 1; k-- > 1;) {
    c[k] = (k == m ? 0.0 : c[k + 1]) + grid.weight(k) * eta[k];
  }
  double shift = 0.0;
  if (kind == PathKind::bridge) {
    for (std::size_t j = 1; j <= m; ++j) shift += c[j];
    shift /= static_cast<double>(m);
  }
  std::vector<double> h(m + 1, 0.0), d1(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) {
    const double s = cfg.t() * (c[j] - shift);
    h[j] = h[j - 1] + s * grid.du();
    d1[j - 1] = s;
  }
  d1[m] = d1[m - 1];
  if (kind == PathKind::bridge) h[m] = 0.0;
  return SmoothLoop(grid, std::move(h), std::move(d1));
}

double linear_variance(std::span<const double> eta, const Grid& grid, PathKind kind,
                       const MeasureConfig& cfg) {
  std::vector<std::complex<double>> a(eta.size());
  require_node_samples(eta.size(), grid, "linear_variance");
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = grid.weight(k) * eta[k];
  return covariance_form(a, a, grid, kind, cfg).real();
}

}  // namespace loopgamma
