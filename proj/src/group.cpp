#include "loopgamma/group.hpp"

#include <algorithm>
#include <cmath>

#include "loopgamma/errors.hpp"

namespace loopgamma {

GroupElement GroupElement::identity(const Grid& grid) {
  return {SmoothLoop::zero(grid), SmoothLoop::zero(grid), 0.0};
}

double cocycle(const SmoothLoop& alpha1, const SmoothLoop& alpha2, double k) {
  if (!(alpha1.grid() == alpha2.grid())) throw UsageError("cocycle: grid mismatch");
  const auto a = alpha1.values();
  const auto d = alpha2.d1();
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * d[i];
  return k * quad(prod, alpha1.grid());
}

GroupElement multiply(const GroupElement& g1, const GroupElement& g2, double k) {
  const Grid& grid = g1.grid();
  if (!(grid == g2.grid()) || !(grid == g1.b.grid()) || !(grid == g2.b.grid())) {
    throw UsageError("multiply: grid mismatch");
  }
  const std::size_t n = grid.size();
  const auto a1 = g1.alpha.values(), a1d = g1.alpha.d1(), a1dd = g1.alpha.d2();
  const auto b1 = g1.b.values(), b1d = g1.b.d1(), b1dd = g1.b.d2();
  const auto b2 = g2.b.values(), b2d = g2.b.d1(), b2dd = g2.b.d2();
  const bool second = g1.alpha.has_d2() && g1.b.has_d2() && g2.b.has_d2();
  std::vector<double> v(n), d1(n), d2(second ? n : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(a1[i]);
    v[i] = e * b2[i] + b1[i];
    d1[i] = e * (a1d[i] * b2[i] + b2d[i]) + b1d[i];
    if (second) {
      d2[i] = e * ((a1dd[i] + a1d[i] * a1d[i]) * b2[i] + 2.0 * a1d[i] * b2d[i] + b2dd[i]) + b1dd[i];
    }
  }
  return {g1.alpha + g2.alpha, SmoothLoop(grid, std::move(v), std::move(d1), std::move(d2)),
          g1.s + g2.s + cocycle(g1.alpha, g2.alpha, k)};
}

GroupElement inverse(const GroupElement& g, double k) {
  const Grid& grid = g.grid();
  const std::size_t n = grid.size();
  const auto a = g.alpha.values(), ad = g.alpha.d1(), add = g.alpha.d2();
  const auto b = g.b.values(), bd = g.b.d1(), bdd = g.b.d2();
  const bool second = g.alpha.has_d2() && g.b.has_d2();
  // b' = -e^{-α} b
  std::vector<double> v(n), d1(n), d2(second ? n : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(-a[i]);
    v[i] = -e * b[i];
    d1[i] = -e * (bd[i] - ad[i] * b[i]);
    if (second) {
      d2[i] = -e * (bdd[i] - 2.0 * ad[i] * bd[i] + (ad[i] * ad[i] - add[i]) * b[i]);
    }
  }
  return {g.alpha.scaled(-1.0), SmoothLoop(grid, std::move(v), std::move(d1), std::move(d2)),
          -g.s + cocycle(g.alpha, g.alpha, k)};
}

double distance(const GroupElement& a, const GroupElement& b) {
  double d = std::abs(a.s - b.s);
  const auto aa = a.alpha.values(), ba = b.alpha.values();
  const auto ab = a.b.values(), bb = b.b.values();
  for (std::size_t i = 0; i < aa.size(); ++i) {
    d = std::max(d, std::abs(aa[i] - ba[i]));
    d = std::max(d, std::abs(ab[i] - bb[i]));
  }
  return d;
}

}  // namespace loopgamma
