#include "loopgamma/functional.hpp"

#include <cmath>

#include "loopgamma/errors.hpp"

namespace loopgamma {

PathArg::PathArg(const Grid& grid, std::span<const double> base, double x0)
    : grid_(grid), base_(base), x0_(x0) {
  require_node_samples(base.size(), grid, "PathArg");
}

PathArg::PathArg(const Path& path, double x0) : PathArg(path.grid, path.values, x0) {}

std::vector<double> PathArg::values() const {
  std::vector<double> v(base_.begin(), base_.end());
  if (!shift_.empty()) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += shift_[k];
  }
  return v;
}

PathArg PathArg::shifted(const SmoothLoop& y, double dx0, double c) const {
  if (!(y.grid() == grid_)) throw UsageError("PathArg::shifted: grid mismatch");
  PathArg out(*this);
  if (out.shift_.empty()) {
    out.shift_.assign(grid_.size(), 0.0);
    out.shift_d1_.assign(grid_.size(), 0.0);
  }
  const auto v = y.values();
  const auto d = y.d1();
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    out.shift_[k] += c * v[k];
    out.shift_d1_[k] += c * d[k];
  }
  out.x0_ += dx0;
  return out;
}

PathArg PathArg::with_x0(double x0) const {
  PathArg out(*this);
  out.x0_ = x0;
  return out;
}

double PathArg::ito(std::span<const double> integrand) const {
  double sum = stieltjes(integrand, base_);
  if (!shift_.empty()) {
    require_node_samples(integrand.size(), grid_, "PathArg::ito");
    double inner = 0.0;
    const std::size_t m = static_cast<std::size_t>(grid_.m());
    for (std::size_t k = 1; k < m; ++k) inner += integrand[k] * shift_d1_[k];
    sum += grid_.du() *
           (inner + 0.5 * (integrand[0] * shift_d1_[0] + integrand[m] * shift_d1_[m]));
  }
  return sum;
}

double PathArg::slope_integral(std::span<const double> slopes) const {
  const std::size_t m = static_cast<std::size_t>(grid_.m());
  if (slopes.size() != m) throw UsageError("PathArg::slope_integral: expected m slopes");
  double sum = 0.0;
  for (std::size_t k = 1; k <= m; ++k) sum += slopes[k - 1] * (at(k) - at(k - 1));
  return sum;
}

Functional::Functional(Eval eval, Traits traits)
    : eval_(std::make_shared<const Eval>(std::move(eval))), traits_(traits) {
  if (!*eval_) throw UsageError("Functional: empty evaluation function");
}

std::complex<double> Functional::directional_derivative(const PathArg& arg, const SmoothLoop& g,
                                                        double eps) const {
  if (!traits_.differentiable) {
    throw UsageError("directional derivative requested for a non-differentiable functional");
  }
  const auto plus = (*this)(arg.shifted(g, 0.0, eps));
  const auto minus = (*this)(arg.shifted(g, 0.0, -eps));
  return (plus - minus) / (2.0 * eps);
}

Functional SplitFunctional::combined() const {
  auto f = path;
  auto phi = profile;
  return Functional([f, phi](const PathArg& arg) { return f(arg) * phi(arg.x0()); },
                    f.traits());
}

namespace functionals {

Functional constant(std::complex<double> c) {
  return Functional([c](const PathArg&) { return c; }, {true, true});
}

Functional exp_inner(std::vector<std::complex<double>> eta, std::complex<double> scale) {
  auto weights = std::make_shared<std::vector<std::complex<double>>>(std::move(eta));
  return Functional(
      [weights, scale](const PathArg& arg) {
        const Grid& grid = arg.grid();
        require_node_samples(weights->size(), grid, "exp_inner");
        const std::size_t m = static_cast<std::size_t>(grid.m());
        std::complex<double> inner{};
        for (std::size_t k = 1; k < m; ++k) inner += (*weights)[k] * arg.at(k);
        inner = grid.du() * (inner + 0.5 * ((*weights)[0] * arg.at(0) + (*weights)[m] * arg.at(m)));
        return std::exp(scale * inner);
      },
      {false, true});
}

Functional exp_inner(const SmoothLoop& eta, std::complex<double> scale) {
  const auto v = eta.values();
  return exp_inner(std::vector<std::complex<double>>(v.begin(), v.end()), scale);
}

Functional point_char(std::size_t node, double omega) {
  return Functional(
      [node, omega](const PathArg& arg) {
        if (node >= arg.grid().size()) throw UsageError("point_char: node outside the grid");
        return std::polar(1.0, omega * arg.at(node));
      },
      {true, true});
}

Functional point_power(std::size_t node, int n) {
  return Functional(
      [node, n](const PathArg& arg) {
        if (node >= arg.grid().size()) throw UsageError("point_power: node outside the grid");
        return std::complex<double>(std::pow(arg.at(node), n));
      },
      {false, true});
}

std::function<std::complex<double>(double)> bump_profile(double center, double radius) {
  return [center, radius](double x0) -> std::complex<double> {
    const double r = (x0 - center) / radius;
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
  };
}

std::function<std::complex<double>(double)> gaussian_profile(double center, double width) {
  return [center, width](double x0) -> std::complex<double> {
    const double r = (x0 - center) / width;
    const double e = r * r;
    if (e > 36.8) return 0.0;
    return std::exp(-e);
  };
}

}  // namespace functionals

}  // namespace loopgamma
