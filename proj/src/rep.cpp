#include "loopgamma/rep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loopgamma/errors.hpp"

namespace loopgamma {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double relative_gap(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

RepContext::RepContext(const Grid& grid, std::vector<std::complex<double>> lambda, double k,
                       const MeasureConfig& cfg, Mode mode)
    : grid_(grid), lambda_(std::move(lambda)), k_(k), cfg_(cfg), mode_(mode) {
  require_node_samples(lambda_.size(), grid_, "RepContext lambda");
  if (mode_ == Mode::unitary) {
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
      if (lambda_[i].real() != 0.0) {
        std::ostringstream msg;
        msg << "unitary representation needs purely imaginary lambda; node " << i
            << " has real part " << lambda_[i].real();
        throw DomainError(msg.str());
      }
    }
  }
}

RepContext RepContext::constant(const Grid& grid, std::complex<double> lambda, double k,
                                const MeasureConfig& cfg, Mode mode) {
  return RepContext(grid, std::vector<std::complex<double>>(grid.size(), lambda), k, cfg, mode);
}

RepContext RepContext::with_charge(double k) const {
  RepContext out(*this);
  out.k_ = k;
  return out;
}

RepContext RepContext::rescaled(const SmoothLoop& xi) const {
  if (!(xi.grid() == grid_)) throw UsageError("RepContext::rescaled: grid mismatch");
  RepContext out(*this);
  const auto v = xi.values();
  for (std::size_t i = 0; i < out.lambda_.size(); ++i) out.lambda_[i] *= std::exp(v[i]);
  return out;
}

void semigroup_guard(const RepContext& ctx, const GroupElement& g, double x0_lo, double x0_hi) {
  if (x0_lo > x0_hi) throw UsageError("semigroup_guard: empty x0 range");
  const auto lambda = ctx.lambda();
  const auto b = g.b.values();
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double re = (lambda[i] * b[i]).real();
    if (re > 0.0) {
      std::ostringstream msg;
      msg << "semigroup condition violated at node " << i << " (u = " << ctx.grid().node(i)
          << "): Re(lambda*b) = " << re << " > 0";
      throw DomainError(msg.str());
    }
  }
}

RepOperator::RepOperator(GroupElement g, RepContext ctx)
    : g_(std::move(g)), ctx_(std::move(ctx)), alpha_based_(g_.alpha.based()) {
  const Grid& grid = ctx_.grid();
  if (!(g_.grid() == grid) || !(g_.b.grid() == grid)) throw UsageError("RepOperator: grid mismatch");
  if (ctx_.mode() == RepContext::Mode::semigroup) semigroup_guard(ctx_, g_);
  alpha_slopes_ = g_.alpha.slopes();
  energy_ = slope_energy(g_.alpha);
  const auto lambda = ctx_.lambda();
  const auto b = g_.b.values();
  lambda_b_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) lambda_b_[i] = grid.weight(i) * lambda[i] * b[i];
}

RepOperator::Factors RepOperator::factors(const PathArg& arg) const {
  const double t = ctx_.cfg().t();
  const double k = ctx_.k();
  std::complex<double> log_pre{-energy_ / (4.0 * t) - arg.slope_integral(alpha_slopes_) / (2.0 * t),
                               g_.s};
  if (k != 0.0) log_pre += kI * (k * arg.ito(g_.alpha.values()));
  std::complex<double> a{};
  for (std::size_t i = 0; i < lambda_b_.size(); ++i) {
    if (lambda_b_[i] != 0.0) a += lambda_b_[i] * std::exp(arg.at(i));
  }
  return {log_pre, a};
}

PathArg RepOperator::target(const PathArg& arg) const {
  return arg.shifted(alpha_based_, g_.alpha0());
}

std::complex<double> RepOperator::apply(const Functional& f, const PathArg& arg) const {
  const auto fac = factors(arg);
  return std::exp(fac.log_prefactor + std::exp(arg.x0()) * fac.lambda_sum) * f(target(arg));
}

Functional apply_rep(const GroupElement& g, const RepContext& ctx, const Functional& f) {
  auto op = std::make_shared<const RepOperator>(g, ctx);
  return Functional([op, f](const PathArg& arg) { return op->apply(f, arg); }, f.traits());
}

HomomorphismReport check_homomorphism(const GroupElement& g1, const GroupElement& g2,
                                      const RepContext& ctx, const Functional& f,
                                      const std::vector<Path>& paths, double x0, double tol) {
  const auto nested = apply_rep(g1, ctx, apply_rep(g2, ctx, f));
  const RepOperator matching(multiply(g1, g2, -ctx.k()), ctx);
  const RepOperator printed(multiply(g1, g2, ctx.k()), ctx);
  HomomorphismReport r;
  for (const auto& x : paths) {
    const PathArg arg(x, x0);
    const auto lhs = nested(arg);
    r.matching = std::max(r.matching, relative_gap(lhs, matching.apply(f, arg)));
    r.printed = std::max(r.printed, relative_gap(lhs, printed.apply(f, arg)));
  }
  r.pass = r.matching <= tol;
  return r;
}

CheckReport check_unitarity(const GroupElement& g, const RepContext& ctx,
                            const SplitFunctional& f, const SplitFunctional& h, std::uint64_t n,
                            std::uint64_t seed, const UnitarityOptions& quad_opts,
                            const EngineOptions& options) {
  if (ctx.mode() != RepContext::Mode::unitary) {
    throw DomainError("unitarity is only claimed for purely imaginary lambda");
  }
  if (quad_opts.x0_nodes < 2 || !(quad_opts.x0_hi > quad_opts.x0_lo)) {
    throw UsageError("check_unitarity: invalid x0 quadrature");
  }
  const RepOperator op(g, ctx);
  const int nq = quad_opts.x0_nodes;
  const double hq = (quad_opts.x0_hi - quad_opts.x0_lo) / (nq - 1);
  std::vector<double> x0s(nq), wq(nq), ex0(nq);
  std::vector<std::complex<double>> phi(nq), psi(nq), phi_s(nq), psi_s(nq);
  std::complex<double> plain_profile{};
  for (int j = 0; j < nq; ++j) {
    x0s[j] = quad_opts.x0_lo + j * hq;
    wq[j] = (j == 0 || j == nq - 1 ? 0.5 : 1.0) * hq;
    ex0[j] = std::exp(x0s[j]);
    phi[j] = f.profile(x0s[j]);
    psi[j] = h.profile(x0s[j]);
    phi_s[j] = f.profile(x0s[j] + g.alpha0());
    psi_s[j] = h.profile(x0s[j] + g.alpha0());
    plain_profile += wq[j] * std::conj(phi[j]) * psi[j];
  }

  const SampleKernel kernel = [&](const Path& x, std::span<std::complex<double>> out) {
    const PathArg arg(x);
    const auto lhs = std::conj(f.path(arg)) * h.path(arg) * plain_profile;
    const auto fac = op.factors(arg);
    const auto moved = op.target(arg);
    const auto fm = f.path(moved);
    const auto hm = h.path(moved);
    std::complex<double> rhs{};
    for (int j = 0; j < nq; ++j) {
      if (phi_s[j] == 0.0 && psi_s[j] == 0.0) continue;
      const auto pre = std::exp(fac.log_prefactor + ex0[j] * fac.lambda_sum);
      rhs += wq[j] * std::conj(pre * fm * phi_s[j]) * (pre * hm * psi_s[j]);
    }
    out[0] = rhs;
    out[1] = lhs;
    out[2] = rhs - lhs;
  };
  auto est = expect_many(ctx.grid(), ctx.cfg(), Sampler::free(), n, seed, 3, kernel, options);
  CheckReport r;
  r.check = "unitarity";
  r.lhs = est[0].mean;
  r.rhs = est[1].mean;
  r.std_error = est[2].std_error;
  r.pass = within_gate(est[2].mean, est[2].std_error, std::abs(r.lhs) + std::abs(r.rhs));
  r.extra["diff"] = complex_json(est[2].mean);
  r.extra["n"] = n;
  r.extra["seed"] = seed;
  r.extra["k"] = ctx.k();
  return r;
}

Functional intertwiner(const SmoothLoop& xi, const MeasureConfig& cfg, const Functional& f) {
  if (!xi.starts_at_zero()) throw UsageError("intertwiner shift must start at 0");
  return Functional(
      [xi, cfg, f](const PathArg& arg) {
        const auto v = arg.values();
        return std::exp(0.5 * log_cm_weight(xi, v, cfg)) * f(arg.shifted(xi));
      },
      f.traits());
}

Functional intertwiner_inverse(const SmoothLoop& xi, const MeasureConfig& cfg,
                               const Functional& f) {
  if (!xi.starts_at_zero()) throw UsageError("intertwiner shift must start at 0");
  const SmoothLoop minus = xi.scaled(-1.0);
  return Functional(
      [minus, cfg, f](const PathArg& arg) {
        const auto v = arg.values();
        return std::exp(0.5 * log_cm_weight(minus, v, cfg)) * f(arg.shifted(minus));
      },
      f.traits());
}

IntertwinerReport check_intertwiner(double X1, double X2, const SmoothLoop& xi,
                                    const GroupElement& g, const RepContext& ctx,
                                    const Functional& f, const std::vector<Path>& paths,
                                    double tol) {
  if (ctx.k() != 0.0) throw UsageError("intertwiner check is defined for charge k = 0");
  const double scale = std::max(1.0, std::abs(X1 - X2));
  if (!xi.starts_at_zero() || std::abs(xi.values().back() - (X1 - X2)) > 1e-12 * scale) {
    throw UsageError("intertwiner shift must satisfy xi(0) = 0 and xi(2π) = X1 - X2");
  }
  const auto lhs_op = intertwiner(xi, ctx.cfg(), apply_rep(g, ctx, f));
  const auto rhs_op = apply_rep(g, ctx.rescaled(xi), intertwiner(xi, ctx.cfg(), f));
  IntertwinerReport r;
  for (const auto& x : paths) {
    if (x.kind != PathKind::bridge || std::abs(x.endpoint - X2) > 1e-12 * scale) {
      throw UsageError("intertwiner test paths must be pinned at X2");
    }
    const PathArg arg(x);
    r.residual = std::max(r.residual, relative_gap(lhs_op(arg), rhs_op(arg)));
  }
  r.pass = r.residual <= tol;
  return r;
}

std::complex<double> conjugated_action(const SmoothLoop& xi, const GroupElement& g,
                                       const RepContext& ctx, const Functional& f,
                                       const Path& x) {
  const auto op = intertwiner_inverse(
      xi, ctx.cfg(), apply_rep(g, ctx.rescaled(xi), intertwiner(xi, ctx.cfg(), f)));
  return op(PathArg(x));
}

namespace {

GroupElement pure_alpha(const SmoothLoop& alpha, double eps) {
  return {alpha.scaled(eps), SmoothLoop::zero(alpha.grid()), 0.0};
}

}  // namespace

Functional lie_D(const SmoothLoop& alpha, const RepContext& ctx, const Functional& f, double eps,
                 bool richardson) {
  if (!f.differentiable()) throw UsageError("lie_D needs a differentiable functional");
  if (!(eps > 0.0)) throw UsageError("lie_D needs eps > 0");
  auto make = [&](double e) {
    auto plus = std::make_shared<const RepOperator>(pure_alpha(alpha, e), ctx);
    auto minus = std::make_shared<const RepOperator>(pure_alpha(alpha, -e), ctx);
    return std::function<std::complex<double>(const PathArg&)>(
        [plus, minus, f, e](const PathArg& arg) {
          return (plus->apply(f, arg) - minus->apply(f, arg)) / (2.0 * e);
        });
  };
  auto coarse = make(eps);
  if (!richardson) return Functional(coarse, {false, true});
  auto fine = make(0.5 * eps);
  return Functional(
      [coarse, fine](const PathArg& arg) { return (4.0 * fine(arg) - coarse(arg)) / 3.0; },
      {false, true});
}

Functional lie_T(const SmoothLoop& b, const RepContext& ctx) {
  if (!(b.grid() == ctx.grid())) throw UsageError("lie_T: grid mismatch");
  const Grid grid = ctx.grid();
  std::vector<std::complex<double>> w(grid.size());
  const auto lambda = ctx.lambda();
  const auto bv = b.values();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = grid.weight(i) * lambda[i] * bv[i];
  return Functional(
      [w](const PathArg& arg) {
        std::complex<double> a{};
        for (std::size_t i = 0; i < w.size(); ++i) a += w[i] * std::exp(arg.at(i));
        return a * std::exp(arg.x0());
      },
      {false, true});
}

Functional times(const Functional& multiplier, const Functional& f) {
  return Functional([multiplier, f](const PathArg& arg) { return multiplier(arg) * f(arg); },
                    {multiplier.bounded() && f.bounded(),
                     multiplier.differentiable() && f.differentiable()});
}

CommutatorReport check_commutators(const SmoothLoop& alpha1, const SmoothLoop& alpha2,
                                   const SmoothLoop& b, const RepContext& ctx,
                                   const std::vector<Path>& paths, double eps, double x0,
                                   double central_tol, double bracket_tol) {
  const Grid& grid = ctx.grid();
  const double k = ctx.k();
  const auto one = functionals::constant(1.0);

  std::vector<double> prod(grid.size());
  const auto d1 = alpha1.d1();
  const auto v2 = alpha2.values();
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = d1[i] * v2[i];
  const double overlap = quad(prod, grid);

  const auto D1 = [&](const Functional& f) { return lie_D(alpha1, ctx, f, eps); };
  const auto D2 = [&](const Functional& f) { return lie_D(alpha2, ctx, f, eps); };
  const auto bracket = D1(D2(one));
  const auto bracket_rev = D2(D1(one));

  const auto opp = ctx.with_charge(-k);
  const auto D2opp = [&](const Functional& f) { return lie_D(alpha2, opp, f, eps); };
  const auto mixed = D1(D2opp(one));
  const auto mixed_rev = D2opp(D1(one));

  const auto T = lie_T(b, ctx);
  std::vector<double> ab(grid.size()), ab_d1(grid.size());
  const auto av = alpha1.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = av[i] * bv[i];
  const auto Tab = lie_T(SmoothLoop(grid, ab, ab_d1), ctx);
  const auto DT = D1(T);
  const auto TD = times(T, D1(one));

  CommutatorReport r;
  r.expected_magnitude = 2.0 * std::abs(k) * std::abs(overlap);
  std::complex<double> central_sum{};
  for (const auto& x : paths) {
    const PathArg arg(x, x0);
    const auto c = bracket(arg) - bracket_rev(arg);
    central_sum += c;
    r.central_error = std::max(r.central_error, std::abs(std::abs(c) - r.expected_magnitude));
    r.opposite_charge_residual =
        std::max(r.opposite_charge_residual, std::abs(mixed(arg) - mixed_rev(arg)));
    const auto lhs = DT(arg) - TD(arg);
    const auto rhs = Tab(arg);
    r.bracket_T_residual =
        std::max(r.bracket_T_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  r.central = paths.empty() ? std::complex<double>{} : central_sum / static_cast<double>(paths.size());
  const double predicted = 2.0 * k * overlap;
  r.sign = predicted != 0.0 ? r.central.imag() / predicted : 0.0;
  r.pass = r.central_error <= central_tol && r.bracket_T_residual <= bracket_tol &&
           r.opposite_charge_residual <= central_tol;
  return r;
}

double check_opposite_charge_commute(const SmoothLoop& alpha1, double s1,
                                     const SmoothLoop& alpha2, double s2,
                                     const RepContext& ctx, const Functional& f,
                                     const std::vector<Path>& paths, double x0) {
  const Grid& grid = ctx.grid();
  const GroupElement g1{alpha1, SmoothLoop::zero(grid), s1};
  const GroupElement g2{alpha2, SmoothLoop::zero(grid), s2};
  const auto pos = ctx;
  const auto neg = ctx.with_charge(-ctx.k());
  const auto ab = apply_rep(g1, pos, apply_rep(g2, neg, f));
  const auto ba = apply_rep(g2, neg, apply_rep(g1, pos, f));
  double worst = 0.0;
  for (const auto& x : paths) {
    const PathArg arg(x, x0);
    worst = std::max(worst, relative_gap(ab(arg), ba(arg)));
  }
  return worst;
}

}  // namespace loopgamma
