#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "loopgamma/fourier_laplace.hpp"
#include "loopgamma/gaussian.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/loop_gamma.hpp"
#include "loopgamma/measure_checks.hpp"
#include "loopgamma/rep.hpp"
#include "loopgamma/special.hpp"

using namespace loopgamma;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const Grid G(256);
const MeasureConfig CFG(1.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// |diff| as a fraction of the 3 SE gate (with its rounding floor); ≤ 1 passes.
double gate_ratio(const CheckReport& r, double extra = 0.0) {
  const double floor = 256.0 * std::numeric_limits<double>::epsilon() * (std::abs(r.lhs) + std::abs(r.rhs));
  return std::abs(r.lhs - r.rhs) / (3.0 * r.std_error + floor + extra);
}

SmoothLoop wave(double amp, double freq, bool cosine = false) {
  return SmoothLoop::from_functions(
      G,
      [=](double u) { return cosine ? amp * std::cos(freq * u) : amp * std::sin(freq * u); },
      [=](double u) {
        return cosine ? -amp * freq * std::sin(freq * u) : amp * freq * std::cos(freq * u);
      },
      [=](double u) {
        return cosine ? -amp * freq * freq * std::cos(freq * u) : -amp * freq * freq * std::sin(freq * u);
      });
}

SmoothLoop constant(double c) {
  return SmoothLoop::from_functions(
      G, [=](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}

std::vector<cd> profile_eta(double a, double b, double c, int freq) {
  std::vector<cd> eta(G.size());
  for (std::size_t k = 0; k < G.size(); ++k) {
    const double u = G.node(k);
    eta[k] = cd(a * std::cos(freq * u) + b, c * std::sin(u));
  }
  return eta;
}

std::vector<Path> bridges(int count, std::uint64_t seed) {
  std::vector<Path> out;
  for (int i = 0; i < count; ++i) out.push_back(sample_bridge(G, CFG, 0.0, seed, i));
  return out;
}

TestFunction test_function(int which) {
  switch (which) {
    case 0:
      return TestFunction::from_functions(
          G, [](double u) { return 1 - std::cos(u); }, [](double u) { return std::sin(u); },
          [](double u) { return std::cos(u); });
    case 1:
      return TestFunction::from_functions(
          G, [](double u) { return std::sin(u); }, [](double u) { return std::cos(u); },
          [](double u) { return -std::sin(u); });
    default:
      return TestFunction::from_functions(
          G, [](double u) { return std::sin(u / 2); }, [](double u) { return 0.5 * std::cos(u / 2); },
          [](double u) { return -0.25 * std::sin(u / 2); });
  }
}

// ---------------------------------------------------------------------------

Outcome c1() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto x = i % 2 ? sample_wiener(G, CFG, 11, i) : sample_bridge(G, CFG, coef(rng), 11, i);
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    const int f = 1 + i % 4;
    const auto y = SmoothLoop::from_functions(
        G, [=](double u) { return a * std::sin(f * u) + b * (1 - std::cos(u)) + c * u; },
        [=](double u) { return a * f * std::cos(f * u) + b * std::sin(u) + c; });
    worst = std::max(worst, std::abs(check_translation_exact(x, y, CFG)));
  }
  return {worst <= 1e-12, fmt("max residual %.2e over 100 pairs", worst)};
}

Outcome c2(std::uint64_t n) {
  const auto eta = profile_eta(0.1, 0.05, 0.05, 1);
  struct Pair {
    Functional f;
    SmoothLoop y;
    Sampler s;
  };
  const auto ramp = SmoothLoop::from_functions(
      G, [](double u) { return 0.3 * std::sin(u) + 0.1 * u; },
      [](double u) { return 0.3 * std::cos(u) + 0.1; });
  const std::vector<Pair> pairs{
      {functionals::constant(1.0), ramp, Sampler::free()},
      {functionals::point_char(64, 0.7), wave(0.4, 1.0) + ramp, Sampler::free()},
      {functionals::exp_inner(eta), wave(0.3, 2.0), Sampler::free()},
      {functionals::point_power(128, 2), ramp, Sampler::bridge(0.2)},
      {functionals::point_char(96, 0.5), ramp, Sampler::bridge(-0.5)}};
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto r = run_with_rerun(
        [&](std::uint64_t nn) { return check_translation(pairs[i].f, pairs[i].y, pairs[i].s, CFG, nn, 200 + i); },
        n);
    o.pass = o.pass && r.pass;
    worst = std::max(worst, gate_ratio(r));
  }
  o.detail = fmt("5 pairs, N = %.0e, worst |diff|/gate = %.2f", double(n), worst);
  return o;
}

Outcome c3(std::uint64_t n) {
  Outcome o;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto eta = profile_eta(0.05 * (i % 5 + 1), 0.04 * (i - 5), 0.03 * i, 1 + i % 3);
    const Sampler s = i < 5 ? Sampler::free() : Sampler::bridge(0.3 * (i - 7));
    const auto oracle = gaussian_moment_oracle(eta, G, s, CFG);
    auto run = [&](std::uint64_t nn) {
      const auto est = expect(functionals::exp_inner(eta), G, CFG, s, nn, 300 + i);
      CheckReport r;
      r.check = "gaussian_moment";
      r.lhs = est.mean;
      r.rhs = oracle;
      r.std_error = est.std_error;
      r.pass = within_gate(est.mean - oracle, est.std_error, std::abs(oracle));
      return r;
    };
    const auto r = run_with_rerun(run, n);
    o.pass = o.pass && r.pass;
    worst = std::max(worst, gate_ratio(r));
  }
  o.detail = fmt("10 profiles, N = %.0e, worst |diff|/gate = %.2f", double(n), worst);
  return o;
}

Outcome c4(std::uint64_t n) {
  const std::vector<Functional> fs{functionals::constant(1.0), functionals::point_char(64, 1.0),
                                   functionals::point_power(128, 2)};
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto r = run_with_rerun(
        [&](std::uint64_t nn) { return check_direct_integral(fs[i], G, CFG, nn, 400 + i); }, n);
    o.pass = o.pass && r.pass;
    worst = std::max(worst, gate_ratio(r, 1e-6));
  }
  o.detail = fmt("3 functionals, N = %.0e, worst |diff|/(gate + 1e-6) = %.2f", double(n), worst);
  return o;
}

GroupElement element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-0.5, 0.5);
  return {wave(c(rng), 1.0) + wave(c(rng), 2.0, true) + constant(c(rng)),
          constant(c(rng)) + wave(c(rng), 3.0), c(rng)};
}

Outcome c5() {
  std::mt19937_64 rng(505);
  double assoc = 0.0, hom = 0.0, coc = 0.0;
  for (double k : {0.0, 1.0, -2.0}) {
    for (int i = 0; i < 20; ++i) {
      const auto a = element(rng), b = element(rng), c = element(rng);
      assoc = std::max(assoc, distance(multiply(multiply(a, b, k), c, k), multiply(a, multiply(b, c, k), k)));
    }
    coc = std::max(coc, std::abs(cocycle(wave(1.0, 1.0), wave(1.0, 1.0, true), k) + k * kPi));
    const auto ctx = RepContext::constant(G, cd(0.0, -0.6), k, CFG);
    const auto eta = profile_eta(0.2, 0.1, 0.2, 1);
    const auto e = functionals::exp_inner(eta);
    const Functional f([e](const PathArg& p) { return e(p) * std::exp(cd(-0.5 * p.x0() * p.x0(), p.x0())); });
    const auto paths = bridges(8, 55);
    for (int i = 0; i < 5; ++i) {
      const auto r = check_homomorphism(element(rng), element(rng), ctx, f, paths, 0.25);
      hom = std::max(hom, r.matching);
    }
  }
  return {assoc <= 1e-10 && hom <= 1e-10 && coc <= 1e-10,
          fmt("associativity %.2e, homomorphism %.2e, cocycle(sin, cos) + k*pi %.2e", assoc, hom, coc)};
}

Outcome c6(std::uint64_t n) {
  const std::vector<GroupElement> elements{
      {wave(0.5, 1.0), constant(0.3) + wave(0.2, 1.0, true), 0.1},
      {wave(0.3, 2.0, true) + constant(0.2), wave(0.4, 1.0), 0.0},
      {SmoothLoop::zero(G), constant(0.5), 0.0},
      {wave(0.8, 1.0) + wave(0.2, 1.0, true), constant(-0.3), -0.4},
      {wave(0.6, 1.0, true), wave(0.2, 3.0) + constant(0.1), 0.2}};
  struct FPair {
    SplitFunctional f, h;
  };
  const std::vector<FPair> pairs{
      {{functionals::exp_inner(profile_eta(0.1, 0.0, 0.2, 1)), functionals::gaussian_profile(0.0, 0.7)},
       {functionals::exp_inner(profile_eta(-0.1, 0.05, 0.1, 2)), functionals::gaussian_profile(0.3, 0.6)}},
      {{functionals::point_char(64, 0.8), functionals::gaussian_profile(-0.2, 0.8)},
       {functionals::point_char(192, -0.4), functionals::gaussian_profile(0.1, 0.5)}},
      {{functionals::constant(1.0), functionals::gaussian_profile(0.0, 0.5)},
       {functionals::exp_inner(profile_eta(0.0, 0.1, 0.3, 1)), functionals::gaussian_profile(0.2, 0.9)}}};
  Outcome o;
  double worst = 0.0;
  int count = 0;
  for (double k : {0.0, 1.0}) {
    const auto ctx = RepContext::constant(G, cd(0.0, 0.5), k, CFG);
    for (std::size_t e = 0; e < elements.size(); ++e) {
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto seed = 600 + 100 * static_cast<std::uint64_t>(k) + 10 * e + p;
        const auto r = run_with_rerun(
            [&](std::uint64_t nn) {
              return check_unitarity(elements[e], ctx, pairs[p].f, pairs[p].h, nn, seed);
            },
            n);
        o.pass = o.pass && r.pass;
        ++count;
        worst = std::max(worst, gate_ratio(r));
      }
    }
  }
  o.detail = fmt("%.0f cases, N = %.0e, worst |diff|/gate = %.2f", count, double(n), worst);
  return o;
}

Outcome c7() {
  const auto eta = profile_eta(0.2, 0.3, 0.0, 1);
  const auto e = functionals::exp_inner(eta);
  const Functional f([e](const PathArg& p) { return e(p) * std::exp(cd(-0.5 * p.x0() * p.x0(), p.x0())); });
  double worst = 0.0;
  for (double k : {0.5, 1.0, 1.5}) {
    const auto ctx = RepContext::constant(G, cd(0.0, 0.5), k, CFG);
    worst = std::max(worst, check_opposite_charge_commute(wave(0.6, 1.0), 0.2, wave(0.4, 2.0, true),
                                                          -0.4, ctx, f, bridges(6, 77), 0.1));
  }
  return {worst <= 1e-10, fmt("max residual %.2e", worst)};
}

Outcome c8() {
  const auto ctx = RepContext::constant(G, cd(0.0, 0.5), 1.0, CFG);
  const auto r = check_commutators(wave(1.0, 1.0), wave(1.0, 1.0, true), constant(1.0) + wave(0.3, 1.0),
                                   ctx, bridges(3, 88));
  const double central = std::abs(std::abs(r.central) - 2 * kPi);
  return {central <= 1e-3 && r.bracket_T_residual <= 1e-6,
          fmt("|central| - 2pi = %.2e, [D, T_b] - T_ab = %.2e, sign %+.0f", central,
              r.bracket_T_residual, r.sign)};
}

Outcome c9(std::uint64_t n) {
  struct Triple {
    ComplexLoopArgument z;
    MuWeight mu;
    int g;
  };
  std::vector<cd> osc(G.size()), ramp(G.size());
  std::vector<double> bump(G.size());
  for (std::size_t k = 0; k < G.size(); ++k) {
    const double u = G.node(k);
    osc[k] = cd(1.2 * std::sin(u), 0.4);
    ramp[k] = cd(0.2 * std::cos(2 * u), -0.3 * std::sin(u));
    bump[k] = 0.5 + 0.4 * std::cos(u);
  }
  const std::vector<Triple> triples{
      {ComplexLoopArgument::constant(G, 0.3), MuWeight::constant(G, 1.0), 0},
      {ComplexLoopArgument(G, osc), MuWeight::constant(G, 0.5), 0},
      {ComplexLoopArgument::constant(G, 0.0), MuWeight::constant(G, 0.0), 1},
      {ComplexLoopArgument(G, ramp), MuWeight(G, bump), 1},
      {ComplexLoopArgument::constant(G, cd(0.2, 1.0)), MuWeight::constant(G, 2.0), 2},
      {ComplexLoopArgument(G, osc), MuWeight(G, bump), 2}};
  Outcome o;
  double worst = 0.0;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto r = check_functional_equation(triples[i].z, triples[i].mu, test_function(triples[i].g),
                                             CFG, n, 900 + i);
    o.pass = o.pass && r.pass;
    const double scale = std::abs(r.delta_term.mean) + std::abs(r.z_term.mean) + std::abs(r.derivative_term.mean);
    worst = std::max(worst, std::abs(r.residual.mean) /
                                (3.0 * r.residual.std_error + 256.0 * std::numeric_limits<double>::epsilon() * scale));
  }
  o.detail = fmt("6 triples, N = %.0e, worst |residual|/gate = %.2f", double(n), worst);
  return o;
}

Outcome c10() {
  double worst = 0.0;
  const auto xs = bridges(4, 1010);
  const auto ys = bridges(4, 1011);
  const std::vector<GroupElement> gs{
      {wave(1.0, 1.0), constant(0.5) + wave(0.2, 1.0, true), 0.4},
      {wave(0.3, 2.0, true), constant(1.0), 0.0},
      {SmoothLoop::zero(G), constant(0.7) + wave(0.5, 2.0), -0.2}};
  for (double k : {0.0, 1.0}) {
    const auto ctx = RepContext::constant(G, -1.0, k, CFG, RepContext::Mode::semigroup);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (const auto& g : gs) {
        worst = std::max(worst, check_kernel_reduction(xs[i], ys[i], 0.3 * i - 0.5, g, ctx).residual);
      }
    }
  }
  return {worst <= 1e-12, fmt("max pathwise residual %.2e", worst)};
}

Outcome c11() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> mu(0.1, 5.0), t(0.2, 3.0), re(-3.0, 3.0), im(-2.0, 2.0);
  double rec = std::max(check_recurrence({1.0, 2.0, 1.5}), check_recurrence({0.7, 5.0, cd(0.5, 2.0)}));
  for (int i = 0; i < 50; ++i) rec = std::max(rec, check_recurrence({mu(rng), t(rng), cd(re(rng), im(rng))}));
  double fact = 1.0, ferr = 0.0;
  for (int n = 1; n <= 12; ++n) {
    ferr = std::max(ferr, std::abs(gamma_classical(n) - fact) / fact);
    fact *= n;
  }
  return {rec <= 1e-8 && ferr <= 1e-12,
          fmt("recurrence max %.2e over 52 triples, factorials max %.2e", rec, ferr)};
}

Outcome c12() {
  const std::vector<double> ts{1e2, 1e3, 1e4};
  const auto one = check_large_t_limit(1.0, 1.0, ts);
  const auto two = check_large_t_limit(2.0, 1.0, ts);
  const double e1 = one.rows.back().error;
  const double e2 = two.rows.back().error;
  const bool pass = e1 <= 1e-2 && one.monotone && two.monotone && std::abs(two.oracle - 2.0) < 1e-12 &&
                    e2 < std::abs(two.rows.back().value - two.printed);
  return {pass, fmt("z=1: error %.2e at t=1e4; z=2: value %.4f (oracle 2, printed form %.0f)", e1,
                    two.rows.back().value.real(), two.printed.real())};
}

Outcome c13() {
  const std::vector<double> t1{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  const auto g0 = LineFunction::sample(10.0, 801, [](double s) { return std::exp(-s * s); });
  const auto g1 = LineFunction::sample(10.0, 801, [](double s) { return std::exp(-(s - 1) * (s - 1) / 2) * cd(1.0, 0.3 * s); });
  struct Case {
    double a, b, lambda;
    const LineFunction* f;
  };
  const std::vector<Case> cases{{1.0, 1.0, -1.0, &g0}, {2.0, 1.0, -1.0, &g0}, {0.5, 3.0, -0.5, &g0},
                                {1.0, 1.0, -1.0, &g1}, {1.5, -2.0, 0.5, &g1}};
  double worst = 0.0;
  for (const auto& c : cases) worst = std::max(worst, check_prop22(c.a, c.b, c.lambda, *c.f, t1).max_relative);
  return {worst <= 1e-4, fmt("5 cases, max relative difference %.2e", worst)};
}

Outcome c14() {
  const auto ctx = RepContext::constant(G, -1.0, 0.0, CFG, RepContext::Mode::semigroup);
  const GroupElement g{wave(0.4, 1.0) + constant(0.3), constant(1.0), 0.0};
  const auto path_part = functionals::point_char(64, 0.7);
  const auto profile = functionals::gaussian_profile(0.0, 1.0);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto x = sample_bridge(G, CFG, 0.0, 1414, i);
    worst = std::max(worst, check_theorem52(x, g, ctx, path_part, profile, {-1.0, 0.0, 1.0}).max_relative);
  }
  return {worst <= 1e-4, fmt("10 paths, max relative difference %.2e", worst)};
}

Outcome c15() {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const auto r = fourier_wiener_check(profile_eta(0.2 * i, -0.1, 0.15, 1 + j % 2),
                                          profile_eta(0.1 * j, 0.05 * i, -0.1, 1), G, CFG);
      worst = std::max(worst, r.relative);
    }
  }
  return {worst <= 1e-10, fmt("25 pairs, max relative residual %.2e", worst)};
}

std::string report_bundle(unsigned workers, std::uint64_t n) {
  EngineOptions eo;
  eo.workers = workers;
  nlohmann::json all = nlohmann::json::array();
  auto add_est = [&](const char* name, const MCEstimate& e) {
    all.push_back({{"check", name}, {"mean", complex_json(e.mean)}, {"stderr", e.std_error}});
  };
  const auto ramp = SmoothLoop::from_functions(
      G, [](double u) { return 0.3 * std::sin(u) + 0.1 * u; },
      [](double u) { return 0.3 * std::cos(u) + 0.1; });
  all.push_back(to_json(check_translation(functionals::point_char(64, 0.7), ramp, Sampler::bridge(0.2), CFG, n, 1, eo)));
  all.push_back(to_json(check_direct_integral(functionals::point_char(64, 1.0), G, CFG, n / 4, 2, {}, eo)));
  add_est("moment", expect(functionals::exp_inner(profile_eta(0.1, 0.05, 0.05, 1)), G, CFG, Sampler::free(), n, 3,
                           std::nullopt, eo));
  const auto ctx = RepContext::constant(G, cd(0.0, 0.5), 1.0, CFG);
  const SplitFunctional f{functionals::point_char(64, 0.8), functionals::gaussian_profile(0.0, 0.7)};
  all.push_back(to_json(check_unitarity({wave(0.5, 1.0), constant(0.3), 0.1}, ctx, f, f, n, 4, {}, eo)));
  all.push_back(to_json(check_ibp_identity(functionals::point_char(64, 0.5), test_function(0), CFG, n, 5, eo)));
  LoopGammaOptions lo;
  lo.engine = eo;
  const auto fe = check_functional_equation(ComplexLoopArgument::constant(G, 0.3), MuWeight::constant(G, 1.0),
                                            test_function(0), CFG, n, 6, lo);
  add_est("functional_equation", fe.residual);
  const auto semi = RepContext::constant(G, -1.0, 1.0, CFG, RepContext::Mode::semigroup);
  const auto x = sample_bridge(G, CFG, 0.0, 7, 0);
  add_est("kernel", kernel_K(x, x, 0.1, {wave(1.0, 1.0), constant(0.5), 0.0}, semi, n, 7, eo));
  add_est("fourier", path_fourier_transform(functionals::point_char(64, 1.0), wave(0.5, 1.0), CFG, n, 8, eo));
  return all.dump();
}

Outcome c16() {
  const std::uint64_t n = 20000;
  const auto one = report_bundle(1, n);
  const auto four = report_bundle(4, n);
  const auto sixteen = report_bundle(16, n);
  const bool same = one == four && one == sixteen;
  return {same, fmt(same ? "8 report kinds, N = %.0e, %.0f bytes, identical across 1/4/16 workers"
                         : "8 report kinds, N = %.0e, %.0f bytes, reports differ between worker counts",
                    double(n), double(one.size()))};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "exact discrete Cameron-Martin identity", c1},
      {2, "statistical translation invariance", [] { return c2(100000); }},
      {3, "gaussian moment oracle", [] { return c3(100000); }},
      {4, "direct-integral decomposition", [] { return c4(100000); }},
      {5, "group algebra", c5},
      {6, "unitarity of the loop representation", [] { return c6(100000); }},
      {7, "opposite-charge commutation", c7},
      {8, "lie bracket constants", c8},
      {9, "loop gamma functional equation", [] { return c9(1000000); }},
      {10, "kernel reduction", c10},
      {11, "regularized gamma recurrence", c11},
      {12, "large t limit", c12},
      {13, "finite-dimensional dual-route kernel", c13},
      {14, "loop dual-route kernel", c14},
      {15, "fourier-wiener unitarity", c15},
      {16, "reproducibility across worker counts", c16}};
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-40s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
