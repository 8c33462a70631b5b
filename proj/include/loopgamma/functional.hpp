#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "loopgamma/paths.hpp"

namespace loopgamma {

/// Argument of a functional: a sampled path, an accumulated smooth shift and
/// the real coordinate x0. The shift is kept apart from the sampled values so
/// stochastic integrals can integrate it with its analytic derivative.
class PathArg {
 public:
  PathArg(const Grid& grid, std::span<const double> base, double x0 = 0.0);
  explicit PathArg(const Path& path, double x0 = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> base() const noexcept { return base_; }
  std::span<const double> shift() const noexcept { return shift_; }
  std::span<const double> shift_d1() const noexcept { return shift_d1_; }
  bool has_shift() const noexcept { return !shift_.empty(); }
  double x0() const noexcept { return x0_; }

  double at(std::size_t k) const noexcept {
    return shift_.empty() ? base_[k] : base_[k] + shift_[k];
  }
  std::vector<double> values() const;

  /// Argument (x + c·y, x0 + dx0).
  PathArg shifted(const SmoothLoop& y, double dx0 = 0.0, double c = 1.0) const;
  PathArg with_x0(double x0) const;

  /// ∫c dx: left-endpoint sum over the sampled part plus quadrature of
  /// c·shift′ over the smooth part.
  double ito(std::span<const double> integrand) const;

  /// ∫y′dx with increment slopes over the full node values.
  double slope_integral(std::span<const double> slopes) const;

 private:
  Grid grid_;
  std::span<const double> base_;
  std::vector<double> shift_;
  std::vector<double> shift_d1_;
  double x0_;
};

/// Deterministic, side-effect free map (path, x0) → ℂ.
class Functional {
 public:
  using Eval = std::function<std::complex<double>(const PathArg&)>;

  struct Traits {
    bool bounded = false;
    bool differentiable = true;
  };

  Functional(Eval eval, Traits traits);
  explicit Functional(Eval eval) : Functional(std::move(eval), Traits{}) {}

  std::complex<double> operator()(const PathArg& arg) const { return (*eval_)(arg); }
  std::complex<double> operator()(const Path& path, double x0 = 0.0) const {
    return (*eval_)(PathArg(path, x0));
  }

  bool bounded() const noexcept { return traits_.bounded; }
  bool differentiable() const noexcept { return traits_.differentiable; }
  const Traits& traits() const noexcept { return traits_; }

  /// d/dε f(x + εg) at ε = 0 by central differences. UsageError when the
  /// functional is not flagged differentiable.
  std::complex<double> directional_derivative(const PathArg& arg, const SmoothLoop& g,
                                              double eps = 1e-5) const;

 private:
  std::shared_ptr<const Eval> eval_;
  Traits traits_;
};

/// Path functional times a profile in x0; the x0 slot is integrated by quadrature.
struct SplitFunctional {
  Functional path;
  std::function<std::complex<double>(double)> profile;

  Functional combined() const;
};

namespace functionals {

Functional constant(std::complex<double> c);

/// exp(scale · ∫η(u)x(u)du), trapezoid in u.
Functional exp_inner(std::vector<std::complex<double>> eta, std::complex<double> scale = 1.0);
Functional exp_inner(const SmoothLoop& eta, std::complex<double> scale = 1.0);

/// exp(iω·x(u_k)).
Functional point_char(std::size_t node, double omega);

/// x(u_k)^n.
Functional point_power(std::size_t node, int n);

/// Compact-support bump exp(-1/(1-r²)), r = (x0-center)/radius.
std::function<std::complex<double>(double)> bump_profile(double center, double radius);

/// Gaussian window exp(-(x0-center)²/width²) truncated where it is below 1e-16.
std::function<std::complex<double>(double)> gaussian_profile(double center, double width);

}  // namespace functionals

}  // namespace loopgamma
