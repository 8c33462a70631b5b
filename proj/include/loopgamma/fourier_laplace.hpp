#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "loopgamma/functional.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/report.hpp"
#include "loopgamma/rep.hpp"

namespace loopgamma {

/// Samples on the uniform grid of [-L, L], shifted by i·contour_shift when the
/// function lives on a horizontal line of the complex plane.
struct LineFunction {
  double half_width = 0.0;
  std::vector<std::complex<double>> samples;
  double contour_shift = 0.0;

  static LineFunction sample(double half_width, std::size_t n,
                             const std::function<std::complex<double>(double)>& f,
                             double contour_shift = 0.0);

  std::size_t size() const noexcept { return samples.size(); }
  double spacing() const noexcept;
  double point(std::size_t i) const noexcept;
  /// Linear interpolation; zero outside the window.
  std::complex<double> interpolate(double s) const;
  /// ∫|f|² by trapezoid.
  double norm_squared() const;
};

/// R(e^α, b) f(s) = e^{λ b e^s} f(s + α), α = log a. UsageError when the
/// shifted support leaves the window.
LineFunction rep_finite(double a, double b, std::complex<double> lambda, const LineFunction& f);

/// ℒf(p) = (1/√2π)∫ e^{ips} f(s) ds at p = q + iT for q on [-Q, Q].
LineFunction bilateral_laplace(const LineFunction& f, double Q, std::size_t n, double T);
std::complex<double> laplace_at(const LineFunction& f, std::complex<double> p);

/// ℒ⁻¹F(s) = (1/√2π)∫_{ℝ+iT} e^{-ips} F(p) dp on the grid of [-L, L].
LineFunction inverse_laplace(const LineFunction& F, double L, std::size_t n);
std::complex<double> inverse_laplace_at(const LineFunction& F, double s);

struct DualRouteReport {
  std::vector<double> points;
  std::vector<std::complex<double>> transform_route;
  std::vector<std::complex<double>> kernel_route;
  double max_relative = 0.0;
  bool pass = false;
};

/// ℒ R_λ(a,b) ℒ⁻¹ F at real t1 two ways: by transform conjugation and by the
/// Γ-kernel (1/2π)∫Γ(it1-ip) a^{-ip} (-λb)^{ip-it1} F(p) dp on Im p = T > 0.
/// DomainError unless -λb > 0.
DualRouteReport check_prop22(double a, double b, double lambda, const LineFunction& f,
                             const std::vector<double>& t1, double contour = 0.5,
                             double tol = 1e-4);

struct Theorem52Options {
  double profile_half_width = 8.0;  ///< x0 window for the profile
  std::size_t profile_nodes = 801;
  double spectral_half_width = 14.0;
  std::size_t spectral_nodes = 561;
  double contour = 0.5;
  double tol = 1e-4;
};

/// ℒρℒ⁻¹ in the x0 variable at a fixed path, for f = F(x)·φ(x0). Both routes
/// share the path factor; the kernel route uses
/// (1/2π) e^{-ivα0} (-A)^{iv-iz} Γ(i(z-v)), A = ∫λ b e^x du.
/// DomainError when A lies on [0, ∞).
DualRouteReport check_theorem52(const Path& x, const GroupElement& g, const RepContext& ctx,
                                const Functional& path_part,
                                const std::function<std::complex<double>(double)>& profile,
                                const std::vector<double>& z_points,
                                const Theorem52Options& opts = {});

struct FourierWienerReport {
  std::complex<double> transformed;  ///< ⟨Ff_η, Ff_ζ⟩
  std::complex<double> original;     ///< ⟨f_η, f_ζ⟩
  double relative = 0.0;
  bool pass = false;
};

/// Unitarity of Ff(y) = ∫ f(x+iy) dw₀^{2t}(x) on f_η = exp(∫ηx du), with all
/// inner products in closed form over the bridge law pinned at 0.
FourierWienerReport fourier_wiener_check(std::span<const std::complex<double>> eta,
                                         std::span<const std::complex<double>> zeta,
                                         const Grid& grid, const MeasureConfig& cfg,
                                         double tol = 1e-10);

/// mass(0)·E_bridge[exp(i∫p x du) f(x)]; p must vanish at both ends.
MCEstimate path_fourier_transform(const Functional& f, const SmoothLoop& p,
                                  const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                  const EngineOptions& options = {});

}  // namespace loopgamma
