#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "loopgamma/errors.hpp"
#include "loopgamma/special.hpp"

using namespace loopgamma;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

// Plain trapezoid over a wide window; the integrand decays doubly
// exponentially on the right and like a Gaussian on the left.
cd brute_integral(double mu, double t, cd z, int power = 0) {
  const double lo = -40.0 - 12.0 * std::sqrt(t) - std::abs(z.real()) * t;
  const double hi = 8.0 + std::abs(std::log(mu));
  const int n = 400000;
  const double h = (hi - lo) / n;
  cd s{};
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * std::pow(x, power) * std::exp(-mu * std::exp(x) + z * x - x * x / (2 * t));
  }
  return s * h;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("classical gamma") {
  CHECK(std::abs(gamma_classical(5.0) - 24.0) <= 1e-12 * 24.0);
  CHECK(std::abs(gamma_classical(0.5) - std::sqrt(pi)) <= 1e-13);
  CHECK(std::abs(std::abs(gamma_classical(cd(0, 1))) - std::sqrt(pi / std::sinh(pi))) <= 1e-13);
  CHECK(std::abs(std::abs(gamma_classical(cd(0, 1))) - 0.52156404686494) <= 1e-12);
  double fact = 1.0;
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::abs(gamma_classical(n) - fact) <= 1e-12 * fact);
    fact *= n;
  }
  for (double x : {0.1, 0.3, 0.75, 1.7, 3.2, 7.9}) {
    CHECK(std::abs(gamma_classical(x).real() - std::tgamma(x)) <= 1e-12 * std::tgamma(x));
  }
  for (cd z : {cd(0.3, 0.4), cd(-1.2, 2.0), cd(0.5, -3.0), cd(2.5, 0.1)}) {
    const auto lhs = gamma_classical(z) * gamma_classical(1.0 - z);
    const auto rhs = pi / std::sin(pi * z);
    CHECK(rel(lhs, rhs) <= 1e-10);
  }
  for (double pole : {0.0, -1.0, -2.0, -7.0}) CHECK_THROWS_AS(gamma_classical(pole), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(gamma_reg({0.0, 1.0, 1.0}), UsageError);
  CHECK_THROWS_AS(gamma_reg({1.0, 0.0, 1.0}), UsageError);
  CHECK_THROWS_AS(gamma_reg({-1.0, 1.0, 1.0}), UsageError);
  CHECK_NOTHROW(gamma_reg({1.0, 1.0, cd(-3.0, 2.0)}));
}

TEST_CASE("mu = 0 reduces to a gaussian integral") {
  for (double t : {0.5, 1.0, 3.0}) {
    for (cd z : {cd(0.0), cd(1.0, 0.5), cd(-0.7, 2.0)}) {
      const auto r = gamma_reg_moment(0.0, t, z, 0);
      const auto exact = std::sqrt(2 * pi * t) * std::exp(t * z * z / 2.0);
      CHECK(rel(r.value, exact) <= 1e-12);
    }
  }
}

TEST_CASE("against direct quadrature") {
  for (auto p : {RegGammaParams{1.0, 1.0, 1.5}, RegGammaParams{0.3, 2.0, cd(0.5, 2.0)},
                 RegGammaParams{2.5, 0.7, cd(-1.0, -1.0)}}) {
    CHECK(rel(gamma_reg(p), brute_integral(p.mu, p.t, p.z)) <= 1e-9);
    CHECK(rel(gamma_reg_prime(p), brute_integral(p.mu, p.t, p.z, 1)) <= 1e-8);
  }
}

TEST_CASE("recurrence") {
  CHECK(check_recurrence({1.0, 2.0, 1.5}) <= 1e-9);
  CHECK(check_recurrence({1.5, 1.0, 2.0}) <= 1e-9);
  CHECK(check_recurrence({0.5, 0.7, cd(5.0, 2.0)}) <= 1e-9);
  CHECK(check_recurrence({0.7, 5.0, cd(0.5, 2.0)}) <= 1e-9);
  std::mt19937_64 rng(20240611);
  // t·(Im z)² stays below 12, where the real-line integral does not cancel
  // below the rounding floor of its integrand.
  std::uniform_real_distribution<double> mu(0.1, 5.0), t(0.2, 3.0), re(-3.0, 3.0), im(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    worst = std::max(worst, check_recurrence({mu(rng), t(rng), cd(re(rng), im(rng))}));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("derivative against finite differences") {
  const RegGammaParams p{0.8, 1.3, cd(0.4, 1.1)};
  const double h = 1e-4;
  const auto fd = (gamma_reg({p.mu, p.t, p.z + h}) - gamma_reg({p.mu, p.t, p.z - h})) / (2 * h);
  CHECK(rel(fd, gamma_reg_prime(p)) <= 1e-7);
}

TEST_CASE("decreasing in mu for real z") {
  double prev = 1e300;
  for (double mu : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const double v = gamma_reg({mu, 1.0, 0.7}).real();
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("large t limit") {
  const std::vector<double> ts{1e2, 1e3, 1e4};
  const auto r = check_large_t_limit(cd(1.0, 0.0), 1.0, ts);
  CHECK(std::abs(r.oracle - 1.0) <= 1e-12);
  CHECK(std::abs(r.printed - 1.0) <= 1e-12);
  CHECK(r.monotone);
  CHECK(r.rows.back().error <= 1e-2);
  const auto two = check_large_t_limit(cd(2.0, 0.0), 1.0, ts);
  CHECK(std::abs(two.oracle - 2.0) <= 1e-12);
  CHECK(std::abs(two.printed - 1.0) <= 1e-12);
  CHECK(two.monotone);
  CHECK(std::abs(two.rows.back().value - 2.0) < std::abs(two.rows.back().value - 1.0));
  const auto mu2 = check_large_t_limit(cd(1.0, 0.0), 2.0, ts);
  CHECK(std::abs(mu2.oracle - 0.25) <= 1e-12);
  CHECK(mu2.monotone);
  const auto c = check_large_t_limit(cd(0.5, 1.0), 2.0, ts);
  const auto expected = std::pow(cd(2.0), -cd(1.5, 1.0)) * gamma_classical(cd(1.5, 1.0));
  CHECK(rel(c.oracle, expected) <= 1e-12);
  CHECK_THROWS_AS(check_large_t_limit(cd(-1.5, 0.0), 1.0, ts), DomainError);
}

TEST_CASE("laplace kernel") {
  for (double w : {0.5, 1.0, 2.0, 4.0, -0.5, -1.0, -2.0, -4.0}) {
    const auto v = laplace_kernel_value(w);
    const double modulus = std::sqrt(pi / (std::abs(w) * std::sinh(pi * std::abs(w)))) / (2 * pi);
    CHECK(std::abs(std::abs(v) - modulus) <= 1e-8 * modulus);
    const auto ref = gamma_classical(cd(0.0, w)) / (2 * pi);
    CHECK(std::abs(v - ref) <= 1e-8 * std::abs(ref));
    CHECK(std::abs(laplace_kernel_value(-w) - std::conj(v)) <= 1e-12 * std::abs(v));
  }
  CHECK_THROWS_AS(laplace_kernel_value(0.0), DomainError);
}
