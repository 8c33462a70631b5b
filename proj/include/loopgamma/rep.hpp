#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "loopgamma/functional.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/mc.hpp"
#include "loopgamma/report.hpp"

namespace loopgamma {

/// Parameters of ρ_{λ,k}. Unitary mode requires λ purely imaginary; semigroup
/// mode accepts complex λ and checks convergence per group element.
class RepContext {
 public:
  enum class Mode { unitary, semigroup };

  RepContext(const Grid& grid, std::vector<std::complex<double>> lambda, double k,
             const MeasureConfig& cfg, Mode mode = Mode::unitary);

  static RepContext constant(const Grid& grid, std::complex<double> lambda, double k,
                             const MeasureConfig& cfg, Mode mode = Mode::unitary);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> lambda() const noexcept { return lambda_; }
  double k() const noexcept { return k_; }
  const MeasureConfig& cfg() const noexcept { return cfg_; }
  Mode mode() const noexcept { return mode_; }

  RepContext with_charge(double k) const;
  /// Context with λ replaced by e^{ξ}λ.
  RepContext rescaled(const SmoothLoop& xi) const;

 private:
  Grid grid_;
  std::vector<std::complex<double>> lambda_;
  double k_;
  MeasureConfig cfg_;
  Mode mode_;
};

/// Domain check for non-unitary λ: Re(λ(u)b(u)) ≤ 0 at every node, so that
/// ∫λ b e^{x+x0} has nonpositive real part for every path and x0.
/// Throws DomainError naming the first offending node.
void semigroup_guard(const RepContext& ctx, const GroupElement& g, double x0_lo = -1e300,
                     double x0_hi = 1e300);

/// The operator ρ_{λ,k}(g):
///   (ρf)(x,x0) = e^{is} e^{-(1/4t)∫α′²} e^{-(1/2t)∫α′dx} e^{ik∫αdx}
///                e^{∫λ b e^{x+x0}du} f(x + α - α(0), x0 + α(0)).
class RepOperator {
 public:
  RepOperator(GroupElement g, RepContext ctx);

  /// Log of every path-dependent factor except the λ term, plus the λ sum
  /// A = ∫λ b e^{x}du so that the λ factor is exp(e^{x0}A).
  struct Factors {
    std::complex<double> log_prefactor;
    std::complex<double> lambda_sum;
  };
  Factors factors(const PathArg& arg) const;

  /// The argument f is evaluated at.
  PathArg target(const PathArg& arg) const;

  std::complex<double> apply(const Functional& f, const PathArg& arg) const;

  const GroupElement& element() const noexcept { return g_; }
  const RepContext& context() const noexcept { return ctx_; }

 private:
  GroupElement g_;
  RepContext ctx_;
  SmoothLoop alpha_based_;
  std::vector<double> alpha_slopes_;
  std::vector<std::complex<double>> lambda_b_;
  double energy_ = 0.0;
};

Functional apply_rep(const GroupElement& g, const RepContext& ctx, const Functional& f);

/// Pointwise homomorphism residuals on pinned paths. `matching` compares
/// against the product at charge -k (the law the operators compose with),
/// `printed` against multiply(g1, g2, k).
struct HomomorphismReport {
  double matching = 0.0;
  double printed = 0.0;
  bool pass = false;
};
HomomorphismReport check_homomorphism(const GroupElement& g1, const GroupElement& g2,
                                      const RepContext& ctx, const Functional& f,
                                      const std::vector<Path>& paths, double x0 = 0.0,
                                      double tol = 1e-10);

struct UnitarityOptions {
  int x0_nodes = 64;
  double x0_lo = -4.0;
  double x0_hi = 4.0;
};

/// ⟨ρf, ρh⟩ vs ⟨f, h⟩ over dw^t × dx0 with paired samples.
CheckReport check_unitarity(const GroupElement& g, const RepContext& ctx,
                            const SplitFunctional& f, const SplitFunctional& h,
                            std::uint64_t n, std::uint64_t seed,
                            const UnitarityOptions& quad = {}, const EngineOptions& options = {});

/// U_ξ f(x) = W(ξ,x)^{1/2} f(x+ξ), mapping functionals on C_{0,X1} to C_{0,X2}.
Functional intertwiner(const SmoothLoop& xi, const MeasureConfig& cfg, const Functional& f);
Functional intertwiner_inverse(const SmoothLoop& xi, const MeasureConfig& cfg,
                               const Functional& f);

struct IntertwinerReport {
  double residual = 0.0;
  bool pass = false;
};

/// max |U ρ^{X1}_λ(g) f - ρ^{X2}_{e^ξλ}(g) U f| over paths pinned at X2.
IntertwinerReport check_intertwiner(double X1, double X2, const SmoothLoop& xi,
                                    const GroupElement& g, const RepContext& ctx,
                                    const Functional& f, const std::vector<Path>& paths,
                                    double tol = 1e-10);

/// U_ξ⁻¹ ρ^{X2}_{e^ξλ}(g) U_ξ f, evaluated on a path pinned at X1.
std::complex<double> conjugated_action(const SmoothLoop& xi, const GroupElement& g,
                                       const RepContext& ctx, const Functional& f,
                                       const Path& x);

/// D_α f by central differences of ε ↦ ρ(e^{εα}, 0, 0)f.
Functional lie_D(const SmoothLoop& alpha, const RepContext& ctx, const Functional& f,
                 double eps = 1e-4, bool richardson = false);

/// Multiplication by T_b = ∫λ b e^{x+x0}du.
Functional lie_T(const SmoothLoop& b, const RepContext& ctx);
Functional times(const Functional& multiplier, const Functional& f);

struct CommutatorReport {
  std::complex<double> central;   ///< measured [D_α1, D_α2] on f ≡ 1
  double expected_magnitude = 0;  ///< 2|k|·|∫α1′α2 du|
  double central_error = 0;       ///< ||central| - expected|
  double sign = 0;                ///< Im(central)/(2k∫α1′α2), +1 or -1
  double bracket_T_residual = 0;  ///< |[D_α1, T_b]1 - T_{α1 b}1|
  double opposite_charge_residual = 0;  ///< |[D_{k,α1}, D_{-k,α2}]1|
  bool pass = false;
};

CommutatorReport check_commutators(const SmoothLoop& alpha1, const SmoothLoop& alpha2,
                                   const SmoothLoop& b, const RepContext& ctx,
                                   const std::vector<Path>& paths, double eps = 1e-4,
                                   double x0 = 0.0, double central_tol = 1e-3,
                                   double bracket_tol = 1e-6);

/// Max |ρ_k(α1,0,s1)ρ_{-k}(α2,0,s2)f - ρ_{-k}(α2,0,s2)ρ_k(α1,0,s1)f| over paths.
double check_opposite_charge_commute(const SmoothLoop& alpha1, double s1,
                                     const SmoothLoop& alpha2, double s2,
                                     const RepContext& ctx, const Functional& f,
                                     const std::vector<Path>& paths, double x0 = 0.0);

}  // namespace loopgamma
