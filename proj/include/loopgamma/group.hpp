#pragma once

#include "loopgamma/paths.hpp"

namespace loopgamma {

/// Element (e^α, b, s) of the centrally extended loop ax+b group.
struct GroupElement {
  SmoothLoop alpha;
  SmoothLoop b;
  double s = 0.0;

  static GroupElement identity(const Grid& grid);

  const Grid& grid() const noexcept { return alpha.grid(); }
  double alpha0() const noexcept { return alpha[0]; }
  SmoothLoop alpha_based() const { return alpha.based(); }
  bool is_loop(double tol = 1e-12) const { return alpha.is_closed(tol) && b.is_closed(tol); }
};

/// k·∫α1 α2′ du (trapezoid, analytic α2′).
double cocycle(const SmoothLoop& alpha1, const SmoothLoop& alpha2, double k);

/// (α1+α2, e^{α1}b2 + b1, s1 + s2 + k∫α1α2′du).
GroupElement multiply(const GroupElement& g1, const GroupElement& g2, double k);

/// Two-sided inverse under multiply(·, ·, k).
GroupElement inverse(const GroupElement& g, double k);

/// Max deviation of the (α, b, s) components, for identity/associativity checks.
double distance(const GroupElement& a, const GroupElement& b);

}  // namespace loopgamma
