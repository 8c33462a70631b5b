#include "loopgamma/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "loopgamma/errors.hpp"

namespace loopgamma {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

cd lanczos(cd z) {
  z -= 1.0;
  cd x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cd t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

struct Panel {
  cd value;
  double error;
};

Panel integrate_panel(const std::function<cd(double)>& f, double a, double b) {
  double err = 0.0;
  const cd v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-13,
                                                                              &err);
  return {v, err};
}

/// Composite adaptive Gauss–Kronrod over [a, b] split into panels of width ≤ h.
Panel integrate_panels(const std::function<cd(double)>& f, double a, double b, double h) {
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h)));
  const double w = (b - a) / panels;
  Panel total{0.0, 0.0};
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * w;
    const double hi = i + 1 == panels ? b : lo + w;
    const auto p = integrate_panel(f, lo, hi);
    total.value += p.value;
    total.error += p.error;
  }
  return total;
}

}  // namespace

cd gamma_classical(cd z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
    std::ostringstream msg;
    msg << "Gamma has a pole at z = " << z.real();
    throw DomainError(msg.str());
  }
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * lanczos(1.0 - z));
  return lanczos(z);
}

void RegGammaParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw UsageError("regularized Gamma needs mu > 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw UsageError("regularized Gamma needs t > 0");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw UsageError("z must be finite");
}

QuadratureResult gamma_reg_moment(double mu, double t, cd z, int n, double rel_tol) {
  if (!(mu >= 0.0) || !(t > 0.0)) throw UsageError("gamma_reg_moment needs mu >= 0, t > 0");
  if (n < 0) throw UsageError("gamma_reg_moment needs n >= 0");
  const double a = z.real();
  // φ(x) = -μe^x + a x - x²/2t is concave; φ' is strictly decreasing.
  auto phi = [&](double x) { return -mu * std::exp(x) + a * x - x * x / (2.0 * t); };
  auto dphi = [&](double x) { return -mu * std::exp(x) + a - x / t; };

  // Bracket and bisect the peak.
  double lo = -1.0, hi = 1.0;
  while (dphi(lo) < 0.0) lo = 2.0 * lo - 1.0;
  while (dphi(hi) > 0.0) hi = 2.0 * hi + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (dphi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double peak = 0.5 * (lo + hi);
  const double top = phi(peak);

  // Window edges where φ has dropped by `drop`; the x^n factor is covered by
  // widening the drop with log|x|.
  auto edge = [&](double direction) {
    double step = 1.0;
    double x = peak;
    for (;;) {
      const double cand = peak + direction * step;
      const double d = top - phi(cand) - n * std::log(std::max(1.0, std::abs(cand)));
      if (d > 60.0) {
        x = cand;
        break;
      }
      step *= 2.0;
    }
    double inner = peak;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (inner + x);
      const double d = top - phi(mid) - n * std::log(std::max(1.0, std::abs(mid)));
      (d > 60.0 ? x : inner) = mid;
      if (std::abs(x - inner) < 1e-10 * std::max(1.0, std::abs(x))) break;
    }
    return x;
  };
  const double left = edge(-1.0);
  const double right = edge(1.0);

  auto integrand = [&](double x) -> cd {
    const double xn = n == 0 ? 1.0 : std::pow(x, n);
    const cd e = cd(phi(x) - top, z.imag() * x);
    return xn * std::exp(e);
  };

  // Panels resolve both the curvature scale and the oscillation in Im z.
  const double curvature = std::sqrt(1.0 / t + mu * std::exp(peak));
  const double width = std::min(2.0 / curvature, 2.0) / std::max(1.0, std::abs(z.imag()) / 2.0);
  auto panel = integrate_panels(integrand, left, right, std::max(width, (right - left) / 4000.0));

  auto tail = [&](double x) {
    const double slope = std::abs(dphi(x));
    const double xn = n == 0 ? 1.0 : std::pow(std::abs(x), n);
    return xn * std::exp(phi(x) - top) / std::max(slope, 1e-300) * (1.0 + n);
  };
  const double scale = std::exp(top);
  QuadratureResult r;
  r.value = panel.value * scale;
  // Rounding floor: a few ulps of ∫|integrand| ≈ √(2π)/curvature (peak normalized to 1).
  const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                          std::sqrt(2.0 * kPi) / curvature *
                          std::pow(std::max({1.0, std::abs(left), std::abs(right)}), n);
  r.error_bound = (panel.error + tail(left) + tail(right) + roundoff) * scale;
  r.lo = left;
  r.hi = right;
  if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()) ||
      r.error_bound > std::max(rel_tol, 1e-6) * std::abs(r.value)) {
    std::ostringstream msg;
    msg << "regularized Gamma quadrature did not reach the requested accuracy (bound "
        << r.error_bound << " for value modulus " << std::abs(r.value) << ")";
    throw AccuracyError(msg.str(), r.error_bound);
  }
  return r;
}

cd gamma_reg(const RegGammaParams& p) {
  p.validate();
  return gamma_reg_moment(p.mu, p.t, p.z, 0).value;
}

cd gamma_reg_prime(const RegGammaParams& p) {
  p.validate();
  return gamma_reg_moment(p.mu, p.t, p.z, 1).value;
}

double check_recurrence(const RegGammaParams& p) {
  p.validate();
  const cd g0 = gamma_reg(p);
  const cd g1 = gamma_reg({p.mu, p.t, p.z + 1.0});
  const cd d = gamma_reg_prime(p);
  return std::abs(p.mu * g1 - p.z * g0 + d / p.t) / std::abs(g0);
}

LimitReport check_large_t_limit(cd z, double mu, const std::vector<double>& ts) {
  if (!(mu > 0.0)) throw UsageError("limit check needs mu > 0");
  if (!((z + 1.0).real() > 0.0)) {
    std::ostringstream msg;
    msg << "large-t limit diverges: Re(z+1) = " << (z + 1.0).real() << " <= 0";
    throw DomainError(msg.str());
  }
  LimitReport r;
  r.oracle = std::exp(-(z + 1.0) * std::log(mu)) * gamma_classical(z + 1.0);
  try {
    r.printed = std::exp(-z * std::log(mu)) * gamma_classical(z);
  } catch (const DomainError&) {
    r.printed = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
  }
  for (double t : ts) {
    const cd v = gamma_reg({mu, t, z + 1.0});
    r.rows.push_back({t, v, std::abs(v - r.oracle)});
  }
  r.monotone = r.rows.size() >= 2;
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (!(r.rows[i].error < r.rows[i - 1].error)) r.monotone = false;
  }
  return r;
}

cd laplace_kernel_value(double w) {
  if (w == 0.0) throw DomainError("laplace kernel is singular at w = 0");
  const auto left = [w](double eta) -> cd {
    return std::expm1(-std::exp(eta)) * std::polar(1.0, eta * w);
  };
  const auto right = [w](double eta) -> cd {
    return std::exp(-std::exp(eta)) * std::polar(1.0, eta * w);
  };
  const double h = std::min(2.0, 2.0 / std::abs(w));
  const auto a = integrate_panels(left, -45.0, 0.0, h);
  const auto b = integrate_panels(right, 0.0, 4.5, std::min(h, 0.5));
  const cd value = (a.value + cd(0.0, -1.0 / w) + b.value) / (2.0 * kPi);
  return value;
}

}  // namespace loopgamma
