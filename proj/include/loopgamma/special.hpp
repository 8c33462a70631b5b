#pragma once

#include <complex>
#include <vector>

namespace loopgamma {

/// Γ(z) by the g = 7, 9-term Lanczos series, reflected for Re z < 1/2.
/// DomainError at the poles z = 0, -1, -2, ...
std::complex<double> gamma_classical(std::complex<double> z);

/// Parameters of Γ_{μ,t}(z) = ∫ exp(-μe^x + zx - x²/2t) dx.
struct RegGammaParams {
  double mu;
  double t;
  std::complex<double> z;

  /// Throws UsageError unless μ > 0 and t > 0.
  void validate() const;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_bound = 0.0;  ///< quadrature estimate plus truncated tails
  double lo = 0.0;
  double hi = 0.0;
};

/// ∫ x^n exp(-μe^x + zx - x²/2t) dx on a window solved from the tails of the
/// (log-concave) modulus. μ = 0 is accepted here as the pure Gaussian case.
QuadratureResult gamma_reg_moment(double mu, double t, std::complex<double> z, int n,
                                  double rel_tol = 1e-13);

std::complex<double> gamma_reg(const RegGammaParams& p);
std::complex<double> gamma_reg_prime(const RegGammaParams& p);

/// |μΓ(z+1) - zΓ(z) + (1/t)Γ′(z)| / |Γ(z)|.
double check_recurrence(const RegGammaParams& p);

struct LimitRow {
  double t;
  std::complex<double> value;  ///< Γ_{μ,t}(z+1)
  double error;                ///< |value - oracle|
};

struct LimitReport {
  std::complex<double> oracle;   ///< μ^{-(z+1)}Γ(z+1) = ∫₀^∞ e^{-μs}s^z ds
  std::complex<double> printed;  ///< μ^{-z}Γ(z), logged for comparison
  std::vector<LimitRow> rows;
  bool monotone = false;  ///< errors strictly decrease along the sequence
};

/// Γ_{μ,t}(z+1) along increasing t against the large-t oracle.
/// DomainError unless Re(z+1) > 0.
LimitReport check_large_t_limit(std::complex<double> z, double mu, const std::vector<double>& ts);

/// (1/2π)∫ e^{iηw} e^{-e^η} dη for real w ≠ 0, computed in the absolutely
/// convergent split form; equals Γ(iw)/2π.
std::complex<double> laplace_kernel_value(double w);

}  // namespace loopgamma
