#include <doctest.h>

#include <cmath>
#include <numbers>

#include "loopgamma/errors.hpp"
#include "loopgamma/gaussian.hpp"
#include "loopgamma/measure_checks.hpp"
#include "loopgamma/mc.hpp"
#include "support.hpp"

using namespace loopgamma;
constexpr double pi = std::numbers::pi;

TEST_CASE("expectation of constants and zero-mean functionals") {
  const Grid g(32);
  const MeasureConfig cfg(1.0);
  const auto one = expect(functionals::constant(1.0), g, cfg, Sampler::free(), 1000, 1);
  CHECK(one.mean == std::complex<double>(1.0));
  CHECK(one.std_error == 0.0);
  CHECK(one.n == 1000);
  CHECK(one.seed == 1);
  const auto mid = expect(functionals::point_power(16, 1), g, cfg, Sampler::free(), 20000, 2);
  CHECK(std::abs(mid.mean) <= 3 * mid.std_error);
  CHECK(mid.std_error == doctest::Approx(std::sqrt(pi / 20000)).epsilon(0.05));
  CHECK_THROWS_AS(expect(functionals::constant(1.0), g, cfg, Sampler::free(), 1, 1), UsageError);
}

TEST_CASE("gaussian moment oracle closed forms") {
  const Grid g(256);
  const MeasureConfig cfg(1.0);
  const std::vector<std::complex<double>> zero(g.size(), 0.0), one(g.size(), 1.0);
  CHECK(gaussian_moment_oracle(zero, g, Sampler::free(), cfg) == std::complex<double>(1.0));
  const double V = std::pow(2 * pi, 3) / 12;
  const auto bridge = gaussian_moment_oracle(one, g, Sampler::bridge(0.0), cfg);
  CHECK(std::log(bridge.real()) == doctest::Approx(V / 2).epsilon(1e-4));
  const auto free = gaussian_moment_oracle(one, g, Sampler::free(), cfg);
  CHECK(std::log(free.real()) == doctest::Approx(std::pow(2 * pi, 3) / 6).epsilon(1e-4));
  // Bridge at X shifts the mean by ∫uX/2π du = πX.
  const auto pinned = gaussian_moment_oracle(one, g, Sampler::bridge(0.5), cfg);
  CHECK(std::log(pinned.real()) - std::log(bridge.real()) == doctest::Approx(pi * 0.5).epsilon(1e-12));
}

TEST_CASE("tilted estimator of a heavy-tailed exponential is exact") {
  const Grid g(256);
  const MeasureConfig cfg(1.0);
  const std::vector<double> eta(g.size(), 1.0);
  const auto h = exponential_tilt(eta, g, PathKind::bridge, cfg);
  CHECK(h.values().back() == 0.0);
  const auto f = functionals::exp_inner(lgtest::complexify(eta));
  const auto est = expect(f, g, cfg, Sampler::bridge(0.0), 1000, 5, h);
  const auto oracle = gaussian_moment_oracle(lgtest::complexify(eta), g, Sampler::bridge(0.0), cfg);
  CHECK(std::abs(est.mean / oracle - 1.0) < 1e-10);
  CHECK(est.std_error < 1e-9 * std::abs(oracle));
  CHECK(std::log(std::abs(est.mean)) == doctest::Approx(10.335).epsilon(1e-3));

  const auto hf = exponential_tilt(eta, g, PathKind::free, cfg);
  const auto ef = expect(f, g, cfg, Sampler::free(), 1000, 5, hf);
  const auto of = gaussian_moment_oracle(lgtest::complexify(eta), g, Sampler::free(), cfg);
  CHECK(std::abs(ef.mean / of - 1.0) < 1e-10);
}

TEST_CASE("monte carlo agrees with the oracle on exponential functionals") {
  const Grid g(64);
  const MeasureConfig cfg(0.8);
  const std::vector<std::vector<std::complex<double>>> etas = [&] {
    std::vector<std::vector<std::complex<double>>> out;
    for (int j = 0; j < 4; ++j) {
      std::vector<std::complex<double>> e(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double u = g.node(k);
        e[k] = {0.1 * std::sin((j + 1) * u), 0.15 * std::cos(j * u)};
      }
      out.push_back(e);
    }
    return out;
  }();
  for (const auto& s : {Sampler::free(), Sampler::bridge(0.0), Sampler::bridge(1.0)}) {
    for (const auto& eta : etas) {
      const auto est = expect(functionals::exp_inner(eta), g, cfg, s, 40000, 31);
      const auto oracle = gaussian_moment_oracle(eta, g, s, cfg);
      CHECK(lgtest::within(est.mean, oracle, est.std_error));
    }
  }
}

TEST_CASE("results are bit-identical across worker counts") {
  const Grid g(32);
  const MeasureConfig cfg(1.0);
  const auto f = functionals::point_char(10, 1.3);
  EngineOptions opts;
  opts.chunk_size = 128;
  opts.workers = 1;
  const auto a = expect(f, g, cfg, Sampler::bridge(0.3), 5000, 77, std::nullopt, opts);
  for (unsigned w : {2u, 4u, 16u}) {
    opts.workers = w;
    const auto b = expect(f, g, cfg, Sampler::bridge(0.3), 5000, 77, std::nullopt, opts);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
  }
}

TEST_CASE("evaluation errors carry the lowest failing sample index") {
  const Grid g(16);
  const MeasureConfig cfg(1.0);
  const Functional bad([](const PathArg& arg) -> std::complex<double> {
    if (arg.at(8) > 2.5) throw std::runtime_error("too far");
    return 1.0;
  });
  std::uint64_t first = 0;
  while (sample_wiener(g, cfg, 9, first).values[8] <= 2.5) ++first;
  for (unsigned w : {1u, 4u}) {
    EngineOptions opts;
    opts.workers = w;
    opts.chunk_size = 64;
    try {
      expect(bad, g, cfg, Sampler::free(), 4000, 9, std::nullopt, opts);
      FAIL("expected an evaluation error");
    } catch (const EvaluationError& e) {
      CHECK(e.sample_index() == first);
    }
  }
  const Functional nan([](const PathArg&) { return std::complex<double>(std::nan("")); });
  CHECK_THROWS_AS(expect(nan, g, cfg, Sampler::free(), 10, 1), EvaluationError);
}

TEST_CASE("welford merge matches a single pass") {
  Welford all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const std::complex<double> v(std::sin(i * 0.37), std::cos(i * 1.1) * 3.0);
    all.add(v);
    (i < 377 ? left : right).add(v);
  }
  left.merge(right);
  CHECK(left.count() == all.count());
  CHECK(std::abs(left.mean() - all.mean()) < 1e-14);
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("statistical translation invariance") {
  const Grid g(64);
  const MeasureConfig cfg(1.0);
  const auto y = SmoothLoop::from_functions(
      g, [](double u) { return 0.3 * std::sin(u) + 0.1 * u; },
      [](double u) { return 0.3 * std::cos(u) + 0.1; });

  SUBCASE("zero shift is pathwise exact") {
    const auto r = check_translation(functionals::point_char(20, 0.7), SmoothLoop::zero(g),
                                     Sampler::free(), cfg, 2000, 3);
    CHECK(r.lhs == r.rhs);
    CHECK(r.std_error == 0.0);
    CHECK(r.pass);
    const auto rb = check_translation(functionals::point_char(20, 0.7), SmoothLoop::zero(g),
                                      Sampler::bridge(0.4), cfg, 2000, 3);
    CHECK(rb.lhs == rb.rhs);
  }
  SUBCASE("constant functional gives E[W] = 1") {
    const auto r = check_translation(functionals::constant(1.0), y, Sampler::free(), cfg, 40000, 4);
    CHECK(r.pass);
    CHECK(r.lhs == std::complex<double>(1.0));
    CHECK(std::abs(r.rhs - 1.0) <= 3 * r.std_error);
  }
  SUBCASE("exponential functional matches the oracle on both sides") {
    std::vector<std::complex<double>> eta(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) eta[k] = {0.1 * std::cos(g.node(k)), 0.05};
    const auto oracle = gaussian_moment_oracle(eta, g, Sampler::free(), cfg);
    const auto r = check_translation(functionals::exp_inner(eta), y, Sampler::free(), cfg, 40000, 5);
    CHECK(r.pass);
    CHECK(std::abs(r.rhs - oracle) <= 4 * r.std_error + 4 * std::abs(r.lhs - oracle));
  }
  SUBCASE("bridge variant compares endpoints X+Y and X") {
    const auto r = check_translation(functionals::point_char(32, 0.5), y, Sampler::bridge(-0.5),
                                     cfg, 40000, 6);
    CHECK(r.pass);
  }
}

TEST_CASE("direct integral decomposition") {
  const Grid g(32);
  const MeasureConfig cfg(1.0);
  const std::uint64_t n = 20000;
  const auto one = check_direct_integral(functionals::constant(1.0), g, cfg, n, 1);
  CHECK(one.pass);
  CHECK(std::abs(one.rhs - 1.0) < 1e-6);

  const auto ch = check_direct_integral(functionals::point_char(16, 1.0), g, cfg, n, 2);
  CHECK(ch.pass);
  CHECK(std::abs(ch.lhs - std::exp(-pi / 2)) <= 4 * std::sqrt(1.0 / n));

  const auto sq = check_direct_integral(functionals::point_power(32, 2), g, cfg, n, 3);
  CHECK(sq.pass);
  CHECK(std::abs(sq.lhs - 2 * pi) <= 4 * 2 * pi * std::sqrt(2.0 / n));
}
