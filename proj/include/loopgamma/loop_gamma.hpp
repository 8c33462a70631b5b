#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "loopgamma/functional.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/report.hpp"
#include "loopgamma/rep.hpp"

namespace loopgamma {

/// Complex argument z(u) of the loop Γ-functional.
struct ComplexLoopArgument {
  Grid grid;
  std::vector<std::complex<double>> z;

  ComplexLoopArgument(const Grid& g, std::vector<std::complex<double>> values);
  static ComplexLoopArgument constant(const Grid& g, std::complex<double> c);
};

/// Nonnegative weight μ(u); construction throws DomainError on a negative node.
struct MuWeight {
  Grid grid;
  std::vector<double> mu;

  MuWeight(const Grid& g, std::vector<double> values);
  static MuWeight constant(const Grid& g, double c);
};

/// g with g(0) = g(2π) = 0 and its first two derivatives.
struct TestFunction {
  Grid grid;
  std::vector<double> g;
  std::vector<double> d1;
  std::vector<double> d2;

  /// Throws UsageError unless the boundary values vanish.
  TestFunction(const Grid& grid, std::vector<double> g, std::vector<double> d1,
               std::vector<double> d2);
  static TestFunction from_functions(const Grid& grid, const std::function<double(double)>& f,
                                     const std::function<double(double)>& df,
                                     const std::function<double(double)>& d2f);

  /// Central second differences of g at interior nodes, zero at the ends.
  std::vector<double> second_difference() const;
  SmoothLoop as_loop() const;
};

enum class TiltPolicy { automatic, never, always };

struct LoopGammaOptions {
  TiltPolicy tilt = TiltPolicy::automatic;
  double tilt_variance_threshold = 4.0;  ///< Var ∫Re z·p above which the tilt is used
  EngineOptions engine{};
};

/// Γ̂_μ(z) = mass(0)·E_bridge[exp(∫pz du - ∫μe^p du)].
MCEstimate hat_gamma(const ComplexLoopArgument& z, const MuWeight& mu, const MeasureConfig& cfg,
                     std::uint64_t n, std::uint64_t seed, const LoopGammaOptions& opts = {});

/// Γ̂_μ(z + δ_v): the integrand times e^{p(v)}. `v` must be a grid node.
MCEstimate hat_gamma_delta_shift(const ComplexLoopArgument& z, const MuWeight& mu, double v,
                                 const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                                 const LoopGammaOptions& opts = {});

/// ∫ξ(v) δΓ̂/δz(v) dv: the integrand times ∫ξp du.
MCEstimate variational_derivative(const ComplexLoopArgument& z, const MuWeight& mu,
                                  std::span<const double> xi, const MeasureConfig& cfg,
                                  std::uint64_t n, std::uint64_t seed,
                                  const LoopGammaOptions& opts = {});

struct FunctionalEquationReport {
  MCEstimate residual;       ///< E[(∫gμe^p - ∫gz - (1/t)∫g″p)·F]
  MCEstimate delta_term;     ///< ∫gμ Γ̂(z+δ_v) dv
  MCEstimate z_term;         ///< ∫gz dv · Γ̂(z)
  MCEstimate derivative_term;  ///< (1/t)∫g″ δΓ̂/δz(v) dv
  bool tilted = false;
  bool pass = false;
};

FunctionalEquationReport check_functional_equation(const ComplexLoopArgument& z,
                                                   const MuWeight& mu, const TestFunction& g,
                                                   const MeasureConfig& cfg, std::uint64_t n,
                                                   std::uint64_t seed,
                                                   const LoopGammaOptions& opts = {});

/// E[(1/t)∫g″x du · f(x)] against -E[d/dε f(x+εg)] over the bridge pinned at 0.
CheckReport check_ibp_identity(const Functional& f, const TestFunction& g,
                               const MeasureConfig& cfg, std::uint64_t n, std::uint64_t seed,
                               const EngineOptions& options = {});

/// μ(u) = -λ(u)b(u)e^{x0}; DomainError unless real and nonnegative everywhere.
MuWeight kernel_mu(const GroupElement& g, const RepContext& ctx, double x0);

/// z_eff = i(x-y) - ik α′ + (1/2t)α″ with difference-quotient derivatives.
ComplexLoopArgument kernel_z_eff(const Path& x, const Path& y, const GroupElement& g,
                                 const RepContext& ctx);

/// Path-integral kernel 𝕂(x-y, x0) for group element g, by Monte Carlo over
/// bridges pinned at 0 (mass included).
MCEstimate kernel_K(const Path& x, const Path& y, double x0, const GroupElement& g,
                    const RepContext& ctx, std::uint64_t n, std::uint64_t seed,
                    const EngineOptions& options = {});

struct KernelReductionReport {
  double residual = 0.0;  ///< max relative pathwise difference
  std::complex<double> prefactor;
  bool pass = false;
};

/// Pathwise comparison of the 𝕂 integrand with prefactor·(Γ̂ integrand at z_eff).
KernelReductionReport check_kernel_reduction(const Path& x, const Path& y, double x0,
                                             const GroupElement& g, const RepContext& ctx,
                                             std::uint64_t paths = 64, std::uint64_t seed = 1,
                                             double tol = 1e-12);

}  // namespace loopgamma
