#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loopgamma/errors.hpp"
#include "loopgamma/fourier_laplace.hpp"
#include "loopgamma/gaussian.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/json_io.hpp"
#include "loopgamma/loop_gamma.hpp"
#include "loopgamma/measure_checks.hpp"
#include "loopgamma/rep.hpp"
#include "loopgamma/report.hpp"
#include "loopgamma/special.hpp"

using namespace loopgamma;
using nlohmann::json;
using cd = std::complex<double>;

namespace {

struct Settings {
  int grid = 64;
  double t = 1.0;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  std::string mode;  // gamma-reg: value, recurrence or prime
  json params = json::object();
};

struct PlotRow {
  double parameter;
  double value;
  double std_error;
};

struct Outcome {
  bool pass = true;
  std::vector<CheckReport> reports;
  std::vector<PlotRow> plot;
  json data = json::object();
};

using Runner = std::function<Outcome(const Settings&)>;

struct Command {
  std::string name;
  std::string description;
  std::vector<std::string> keys;
  Runner run;
};

// Parameter access with defaults; every access names the field on error.
class Params {
 public:
  Params(const Settings& s) : p_(s.params), grid_(s.grid), cfg_(s.t) {}

  const Grid& grid() const { return grid_; }
  const MeasureConfig& cfg() const { return cfg_; }
  bool has(const std::string& key) const { return p_.contains(key); }
  const json& raw(const std::string& key, const json& fallback) const {
    return p_.contains(key) ? p_[key] : fallback;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? io::number_from(p_[key], key) : fallback;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? io::numbers_from(p_[key], key) : fallback;
  }
  cd complex(const std::string& key, cd fallback) const {
    return has(key) ? io::complex_from(p_[key], key) : fallback;
  }
  SmoothLoop loop(const std::string& key, const json& fallback) const {
    return io::loop_from(raw(key, fallback), grid_, key);
  }
  std::vector<cd> complex_loop(const std::string& key, const json& fallback) const {
    return io::complex_loop_from(raw(key, fallback), grid_, key);
  }
  GroupElement element(const std::string& key, const json& fallback) const {
    return io::element_from(raw(key, fallback), grid_, key);
  }
  Functional functional(const std::string& key, const json& fallback) const {
    return io::functional_from(raw(key, fallback), grid_, key);
  }
  Path path(const std::string& key, const json& fallback) const {
    return io::path_from(raw(key, fallback), grid_, cfg_, key);
  }
  Sampler sampler(const std::string& key, const json& fallback) const {
    return io::sampler_from(raw(key, fallback), key);
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    const double v = number(key, static_cast<double>(fallback));
    if (v < 0 || v != std::floor(v)) throw UsageError(key + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }
  RepContext context(cd lambda_default, double k_default, RepContext::Mode mode) const {
    return RepContext::constant(grid_, complex("lambda", lambda_default), number("k", k_default), cfg_, mode);
  }

 private:
  const json& p_;
  Grid grid_;
  MeasureConfig cfg_;
};

CheckReport deterministic(const std::string& name, cd lhs, cd rhs, bool pass, json extra = json::object()) {
  CheckReport r;
  r.check = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.pass = pass;
  r.extra = std::move(extra);
  return r;
}

CheckReport from_estimate(const std::string& name, const MCEstimate& e, cd reference, bool pass) {
  CheckReport r;
  r.check = name;
  r.lhs = e.mean;
  r.rhs = reference;
  r.std_error = e.std_error;
  r.pass = pass;
  r.extra = {{"n", e.n}, {"seed", e.seed}};
  return r;
}

Outcome single(CheckReport r, double parameter = 0.0) {
  Outcome o;
  o.pass = r.pass;
  o.plot.push_back({parameter, std::abs(r.lhs - r.rhs), r.std_error});
  o.reports.push_back(std::move(r));
  return o;
}

std::vector<Path> bridge_sample(const Params& p, std::uint64_t count, std::uint64_t seed) {
  std::vector<Path> out;
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(sample_bridge(p.grid(), p.cfg(), 0.0, seed, i));
  return out;
}

TestFunction test_function(const SmoothLoop& y) {
  const auto v = y.values();
  const auto d1 = y.d1();
  std::vector<double> g(v.begin(), v.end());
  std::vector<double> d2;
  if (y.has_d2()) {
    d2.assign(y.d2().begin(), y.d2().end());
  } else {
    d2.assign(g.size(), 0.0);
  }
  TestFunction tf(y.grid(), g, {d1.begin(), d1.end()}, d2);
  if (!y.has_d2()) tf.d2 = tf.second_difference();
  return tf;
}

SplitFunctional split_from(const Params& p, const std::string& key, const json& fallback) {
  const json& j = p.raw(key, fallback);
  if (!j.is_object() || !j.contains("path")) throw UsageError(key + ": expected {path, profile}");
  for (const auto& [k, v] : j.items()) {
    if (k != "path" && k != "profile") throw UsageError(key + ": unknown key '" + k + "' (expected path, profile)");
  }
  return {io::functional_from(j["path"], p.grid(), key + ".path"),
          io::profile_from(j.value("profile", json{{"type", "gaussian"}}), key + ".profile")};
}

const json kSinLoop = {{"sin", 1.0}};
const json kCosLoop = {{"cos", 1.0}};
const json kDefaultElement = {{"alpha", {{"sin", 0.5}}}, {"b", {{"const", 0.5}}}, {"s", 0.1}};

// ---------------------------------------------------------------------------

Outcome cmd_sample(const Settings& s) {
  const Params p(s);
  const auto sampler = p.sampler("sampler", "free");
  const auto count = p.count("count", 1);
  Outcome o;
  o.data["paths"] = json::array();
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto x = sampler.kind == PathKind::free ? sample_wiener(p.grid(), p.cfg(), s.seed, i)
                                                  : sample_bridge(p.grid(), p.cfg(), sampler.endpoint, s.seed, i);
    o.data["paths"].push_back(io::path_to(x, p.cfg()));
    if (i == 0) {
      for (std::size_t k = 0; k < x.values.size(); ++k) o.plot.push_back({p.grid().node(k), x.values[k], 0.0});
    }
  }
  return o;
}

Outcome cmd_translation(const Settings& s) {
  const Params p(s);
  return single(check_translation(p.functional("f", "one"), p.loop("y", 0.0), p.sampler("sampler", "free"),
                                  p.cfg(), s.samples, s.seed));
}

Outcome cmd_direct_integral(const Settings& s) {
  const Params p(s);
  DirectIntegralOptions q;
  q.nodes = static_cast<int>(p.count("nodes", 49));
  q.half_width_sigmas = p.number("half_width_sigmas", 6.0);
  return single(check_direct_integral(p.functional("f", "one"), p.grid(), p.cfg(), s.samples, s.seed, q));
}

Outcome cmd_unitarity(const Settings& s) {
  const Params p(s);
  const json f_default = {{"path", {{"type", "point_char"}, {"node", s.grid / 4}, {"omega", 0.8}}},
                          {"profile", {{"type", "gaussian"}, {"center", 0.0}, {"width", 0.7}}}};
  const json h_default = {{"path", "one"}, {"profile", {{"type", "gaussian"}, {"center", 0.3}, {"width", 0.6}}}};
  UnitarityOptions q;
  q.x0_nodes = static_cast<int>(p.count("x0_nodes", q.x0_nodes));
  q.x0_lo = p.number("x0_lo", q.x0_lo);
  q.x0_hi = p.number("x0_hi", q.x0_hi);
  return single(check_unitarity(p.element("g", kDefaultElement), p.context(cd(0.0, 0.5), 0.0, RepContext::Mode::unitary),
                                split_from(p, "f", f_default), split_from(p, "h", h_default), s.samples, s.seed, q));
}

Outcome cmd_group_law(const Settings& s) {
  const Params p(s);
  const double k = p.number("k", 1.0);
  const auto g1 = p.element("g1", kDefaultElement);
  const auto g2 = p.element("g2", {{"alpha", {{"cos", 0.3}}}, {"b", {{"sin", 0.4}}}, {"s", -0.2}});
  const auto g3 = p.element("g3", {{"alpha", {{"sin", {{"amp", 0.2}, {"freq", 2.0}}}}}, {"b", {{"const", -0.3}}}, {"s", 0.0}});
  const double tol = p.number("tol", 1e-10);
  const auto e = GroupElement::identity(p.grid());
  Outcome o;
  const double assoc = distance(multiply(multiply(g1, g2, k), g3, k), multiply(g1, multiply(g2, g3, k), k));
  const double ident = std::max(distance(multiply(g1, e, k), g1), distance(multiply(e, g1, k), g1));
  const auto inv = inverse(g1, k);
  const double invres = std::max(distance(multiply(g1, inv, k), e), distance(multiply(inv, g1, k), e));
  const double coc = cocycle(SmoothLoop::from_functions(p.grid(), [](double u) { return std::sin(u); },
                                                        [](double u) { return std::cos(u); }),
                             SmoothLoop::from_functions(p.grid(), [](double u) { return std::cos(u); },
                                                        [](double u) { return -std::sin(u); }),
                             k);
  o.reports.push_back(deterministic("associativity", assoc, 0.0, assoc <= tol));
  o.reports.push_back(deterministic("identity", ident, 0.0, ident <= tol));
  o.reports.push_back(deterministic("inverse", invres, 0.0, invres <= tol));
  o.reports.push_back(deterministic("cocycle_sin_cos", coc, -k * std::numbers::pi,
                                    std::abs(coc + k * std::numbers::pi) <= tol));
  const auto ctx = p.context(cd(0.0, 0.5), k, RepContext::Mode::unitary);
  const auto f = p.functional("f", {{"type", "point_char"}, {"node", s.grid / 4}, {"omega", 0.7}});
  const auto hom = check_homomorphism(g1, g2, ctx, f, bridge_sample(p, p.count("paths", 8), s.seed), 0.0, tol);
  o.reports.push_back(deterministic("homomorphism", hom.matching, 0.0, hom.matching <= tol,
                                    {{"printed_law_residual", hom.printed}}));
  for (const auto& r : o.reports) {
    o.pass = o.pass && r.pass;
    o.plot.push_back({static_cast<double>(o.plot.size()), std::abs(r.lhs - r.rhs), 0.0});
  }
  return o;
}

Outcome cmd_commutators(const Settings& s) {
  const Params p(s);
  const auto ctx = p.context(cd(0.0, 0.5), 1.0, RepContext::Mode::unitary);
  const auto r = check_commutators(p.loop("alpha1", kSinLoop), p.loop("alpha2", kCosLoop), p.loop("b", 1.0), ctx,
                                   bridge_sample(p, p.count("paths", 3), s.seed), p.number("eps", 1e-4));
  Outcome o;
  o.pass = r.pass;
  o.reports.push_back(deterministic("central_constant", std::abs(r.central), r.expected_magnitude,
                                    r.central_error <= 1e-3,
                                    {{"central", complex_json(r.central)}, {"sign", r.sign}}));
  o.reports.push_back(deterministic("bracket_T", r.bracket_T_residual, 0.0, r.bracket_T_residual <= 1e-6));
  o.reports.push_back(deterministic("opposite_charge", r.opposite_charge_residual, 0.0,
                                    r.opposite_charge_residual <= 1e-3));
  for (const auto& c : o.reports) o.plot.push_back({static_cast<double>(o.plot.size()), std::abs(c.lhs - c.rhs), 0.0});
  return o;
}

Outcome cmd_intertwiner(const Settings& s) {
  const Params p(s);
  const double X1 = p.number("X1", 1.0);
  const double X2 = p.number("X2", 0.0);
  const json xi_default = {{"linear", (X1 - X2) / kTwoPi}};
  const auto xi = p.loop("xi", xi_default);
  const auto ctx = p.context(cd(0.0, 0.5), 0.0, RepContext::Mode::unitary);
  std::vector<Path> paths;
  for (std::uint64_t i = 0; i < p.count("paths", 8); ++i) paths.push_back(sample_bridge(p.grid(), p.cfg(), X2, s.seed, i));
  const auto f = p.functional("f", {{"type", "point_char"}, {"node", s.grid / 4}, {"omega", 0.7}});
  const auto r = check_intertwiner(X1, X2, xi, p.element("g", kDefaultElement), ctx, f, paths, p.number("tol", 1e-10));
  return single(deterministic("intertwiner", r.residual, 0.0, r.pass));
}

LoopGammaOptions tilt_options(const Params& p) {
  LoopGammaOptions o;
  const std::string tilt = p.raw("tilt", "automatic").get<std::string>();
  if (tilt == "automatic" || tilt == "auto") o.tilt = TiltPolicy::automatic;
  else if (tilt == "never") o.tilt = TiltPolicy::never;
  else if (tilt == "always") o.tilt = TiltPolicy::always;
  else throw UsageError("tilt: expected automatic, never or always");
  return o;
}

Outcome cmd_gamma_loop(const Settings& s) {
  const Params p(s);
  const ComplexLoopArgument z(p.grid(), p.complex_loop("z", 0.3));
  const auto mu_loop = p.loop("mu", 1.0);
  const MuWeight mu(p.grid(), {mu_loop.values().begin(), mu_loop.values().end()});
  const auto est = hat_gamma(z, mu, p.cfg(), s.samples, s.seed, tilt_options(p));
  bool zero_mu = true;
  for (double v : mu.mu) zero_mu = zero_mu && v == 0.0;
  if (zero_mu) {
    const auto oracle = bridge_mass(0.0, p.cfg()) * gaussian_moment_oracle(z.z, p.grid(), Sampler::bridge(0.0), p.cfg());
    return single(from_estimate("loop_gamma_gaussian", est, oracle,
                                within_gate(est.mean - oracle, est.std_error, std::abs(oracle))));
  }
  const bool finite = std::isfinite(est.mean.real()) && std::isfinite(est.mean.imag());
  auto r = from_estimate("loop_gamma", est, est.mean, finite);
  r.extra["bound"] = bridge_mass(0.0, p.cfg());
  return single(r);
}

Outcome cmd_functional_eq(const Settings& s) {
  const Params p(s);
  const ComplexLoopArgument z(p.grid(), p.complex_loop("z", 0.3));
  const auto mu_loop = p.loop("mu", 1.0);
  const MuWeight mu(p.grid(), {mu_loop.values().begin(), mu_loop.values().end()});
  const auto g = test_function(p.loop("g", {{"const", 1.0}, {"cos", -1.0}}));
  const auto r = check_functional_equation(z, mu, g, p.cfg(), s.samples, s.seed, tilt_options(p));
  CheckReport c;
  c.check = "functional_equation";
  c.lhs = r.delta_term.mean - r.z_term.mean;
  c.rhs = r.derivative_term.mean;
  c.std_error = r.residual.std_error;
  c.pass = r.pass;
  c.extra = {{"residual", complex_json(r.residual.mean)},
             {"delta_term", complex_json(r.delta_term.mean)},
             {"z_term", complex_json(r.z_term.mean)},
             {"derivative_term", complex_json(r.derivative_term.mean)},
             {"tilted", r.tilted},
             {"n", r.residual.n},
             {"seed", r.residual.seed}};
  return single(c);
}

Outcome cmd_kernel(const Settings& s) {
  const Params p(s);
  const json x_default = {{"sample", {{"kind", "bridge"}, {"seed", 1}, {"index", 0}}}};
  const json y_default = {{"sample", {{"kind", "bridge"}, {"seed", 2}, {"index", 0}}}};
  const auto x = p.path("x", x_default);
  const auto y = p.path("y", y_default);
  const double x0 = p.number("x0", 0.0);
  const auto g = p.element("g", {{"alpha", kSinLoop}, {"b", {{"const", 0.5}}}, {"s", 0.0}});
  const auto ctx = p.context(-1.0, 0.0, RepContext::Mode::semigroup);
  const auto red = check_kernel_reduction(x, y, x0, g, ctx, p.count("paths", 64), s.seed, p.number("tol", 1e-12));
  Outcome o;
  o.reports.push_back(deterministic("kernel_reduction", red.residual, 0.0, red.pass,
                                    {{"prefactor", complex_json(red.prefactor)}}));
  const auto K = kernel_K(x, y, x0, g, ctx, s.samples, s.seed);
  const auto gamma = hat_gamma(kernel_z_eff(x, y, g, ctx), kernel_mu(g, ctx, x0), p.cfg(), s.samples, s.seed,
                               LoopGammaOptions{TiltPolicy::never});
  const cd reduced = red.prefactor * gamma.mean;
  o.reports.push_back(from_estimate("kernel_vs_loop_gamma", K, reduced,
                                    std::abs(K.mean - reduced) <= 1e-10 * std::max(std::abs(K.mean), 1e-300)));
  o.pass = o.reports[0].pass && o.reports[1].pass;
  for (const auto& c : o.reports) o.plot.push_back({static_cast<double>(o.plot.size()), std::abs(c.lhs - c.rhs), c.std_error});
  return o;
}

Outcome cmd_gamma_reg(const Settings& s) {
  const Params p(s);
  const RegGammaParams rp{p.number("mu", 1.0), s.t, p.complex("z", 1.5)};
  rp.validate();
  if (s.mode == "recurrence") {
    const double res = check_recurrence(rp);
    const double tol = p.number("tol", 1e-8);
    return single(deterministic("recurrence", res, 0.0, res <= tol, {{"tol", tol}}), std::abs(rp.z));
  }
  if (s.mode == "prime") {
    const double h = p.number("h", 1e-4);
    const auto d = gamma_reg_prime(rp);
    const auto fd = (gamma_reg({rp.mu, rp.t, rp.z + h}) - gamma_reg({rp.mu, rp.t, rp.z - h})) / (2.0 * h);
    const double tol = p.number("tol", 1e-8);
    return single(deterministic("derivative", d, fd, std::abs(d - fd) <= tol * std::abs(d), {{"h", h}, {"tol", tol}}));
  }
  const auto q = gamma_reg_moment(rp.mu, rp.t, rp.z, 0);
  auto r = deterministic("gamma_reg", q.value, q.value, true,
                         {{"error_bound", q.error_bound}, {"window", {q.lo, q.hi}}});
  Outcome o;
  o.reports.push_back(r);
  o.plot.push_back({rp.mu, std::abs(q.value), q.error_bound});
  return o;
}

Outcome cmd_limit(const Settings& s) {
  const Params p(s);
  const auto ts = p.numbers("ts", {1e2, 1e3, 1e4});
  Outcome o;
  if (ts.empty()) return o;
  const auto r = check_large_t_limit(p.complex("z", 1.0), p.number("mu", 1.0), ts);
  o.pass = r.monotone;
  o.data["oracle"] = complex_json(r.oracle);
  o.data["printed"] = complex_json(r.printed);
  o.data["monotone"] = r.monotone;
  for (const auto& row : r.rows) {
    o.reports.push_back(deterministic("limit", row.value, r.oracle, r.monotone, {{"t", row.t}, {"error", row.error}}));
    o.plot.push_back({row.t, row.value.real(), row.error});
  }
  return o;
}

Outcome dual_route(const DualRouteReport& r, const std::string& name) {
  Outcome o;
  o.pass = r.pass;
  o.data["max_relative"] = r.max_relative;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    o.reports.push_back(deterministic(name, r.transform_route[i], r.kernel_route[i], r.pass, {{"point", r.points[i]}}));
    o.plot.push_back({r.points[i], std::abs(r.transform_route[i] - r.kernel_route[i]), 0.0});
  }
  return o;
}

Outcome cmd_prop22(const Settings& s) {
  const Params p(s);
  const double center = p.number("center", 0.0);
  const double width = p.number("width", 1.0);
  const auto f = LineFunction::sample(p.number("half_width", 10.0), p.count("nodes", 801), [=](double x) {
    const double r = (x - center) / width;
    return cd(std::exp(-r * r));
  });
  return dual_route(check_prop22(p.number("a", 1.0), p.number("b", 1.0), p.number("lambda", -1.0), f,
                                 p.numbers("t1", {-2.0, -1.0, 0.0, 1.0, 2.0}), p.number("contour", 0.5),
                                 p.number("tol", 1e-4)),
                    "prop22");
}

Outcome cmd_theorem52(const Settings& s) {
  const Params p(s);
  const auto ctx = p.context(-1.0, 0.0, RepContext::Mode::semigroup);
  const auto g = p.element("g", {{"alpha", {{"sin", 0.4}, {"const", 0.3}}}, {"b", 1.0}, {"s", 0.0}});
  const auto path_part = p.functional("f", {{"type", "point_char"}, {"node", s.grid / 4}, {"omega", 0.7}});
  const auto profile = io::profile_from(p.raw("profile", {{"type", "gaussian"}, {"center", 0.0}, {"width", 1.0}}), "profile");
  const auto z = p.numbers("z", {-1.0, 0.0, 1.0});
  Theorem52Options opts;
  opts.tol = p.number("tol", opts.tol);
  Outcome o;
  double worst = 0.0;
  const auto count = p.count("paths", 10);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto x = sample_bridge(p.grid(), p.cfg(), 0.0, s.seed, i);
    const auto r = check_theorem52(x, g, ctx, path_part, profile, z, opts);
    worst = std::max(worst, r.max_relative);
    o.pass = o.pass && r.pass;
    o.reports.push_back(deterministic("theorem52", r.transform_route[0], r.kernel_route[0], r.pass,
                                      {{"path", i}, {"max_relative", r.max_relative}}));
    o.plot.push_back({static_cast<double>(i), r.max_relative, 0.0});
  }
  o.data["max_relative"] = worst;
  return o;
}

Outcome cmd_fourier_wiener(const Settings& s) {
  const Params p(s);
  const auto eta = p.complex_loop("eta", {{"re", {{"sin", 0.2}}}, {"im", 0.1}});
  const auto zeta = p.complex_loop("zeta", {{"re", {{"cos", -0.1}}}, {"im", {{"sin", 0.15}}}});
  const auto r = fourier_wiener_check(eta, zeta, p.grid(), p.cfg(), p.number("tol", 1e-10));
  return single(deterministic("fourier_wiener", r.transformed, r.original, r.pass, {{"relative", r.relative}}));
}

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"sample", "draw Wiener or bridge paths on the grid", {"sampler", "count"}, cmd_sample},
      {"check-translation", "Cameron-Martin translation invariance with common random numbers", {"f", "y", "sampler"}, cmd_translation},
      {"check-direct-integral", "free Wiener measure as the integral of pinned bridge measures over the endpoint", {"f", "nodes", "half_width_sigmas"}, cmd_direct_integral},
      {"check-unitarity", "inner products preserved by the loop representation", {"g", "lambda", "k", "f", "h", "x0_nodes", "x0_lo", "x0_hi"}, cmd_unitarity},
      {"check-group-law", "associativity, identity, inverse, cocycle and the homomorphism property", {"g1", "g2", "g3", "k", "lambda", "f", "paths", "tol"}, cmd_group_law},
      {"check-commutators", "central term, [D, T] bracket and opposite-charge commutation of the generators", {"alpha1", "alpha2", "b", "lambda", "k", "paths", "eps"}, cmd_commutators},
      {"check-intertwiner", "shift intertwiner between representations at different endpoints", {"X1", "X2", "xi", "g", "lambda", "k", "f", "paths", "tol"}, cmd_intertwiner},
      {"gamma-loop", "Monte Carlo estimate of the loop Gamma functional", {"z", "mu", "tilt"}, cmd_gamma_loop},
      {"check-functional-eq", "functional equation of the loop Gamma functional", {"z", "mu", "g", "tilt"}, cmd_functional_eq},
      {"kernel", "path-integral kernel against prefactor times the loop Gamma functional", {"x", "y", "x0", "g", "lambda", "k", "paths", "tol"}, cmd_kernel},
      {"gamma-reg", "regularized Gamma integral, its recurrence (--recurrence) and z-derivative (--prime)", {"z", "mu", "tol", "h"}, cmd_gamma_reg},
      {"check-limit", "large-t limit of the regularized Gamma integral", {"z", "mu", "ts"}, cmd_limit},
      {"check-prop22", "finite-dimensional representation conjugated by the Laplace transform, two routes", {"a", "b", "lambda", "center", "width", "half_width", "nodes", "t1", "contour", "tol"}, cmd_prop22},
      {"check-theorem52", "loop representation conjugated by the Laplace transform in x0, two routes", {"g", "lambda", "k", "f", "profile", "z", "paths", "tol"}, cmd_theorem52},
      {"fourier-wiener", "unitarity of the Fourier-Wiener transform on exponential functionals", {"eta", "zeta", "tol"}, cmd_fourier_wiener}};
  return all;
}

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

void apply_setting(Settings& s, const std::string& key, const json& v) {
  auto integer = [&](const char* what) {
    const double d = io::number_from(v, key);
    if (d < 0 || d != std::floor(d)) throw UsageError(std::string(what) + " must be a nonnegative integer");
    return d;
  };
  if (key == "grid" || key == "m") s.grid = static_cast<int>(integer("grid"));
  else if (key == "t") s.t = io::number_from(v, key);
  else if (key == "samples" || key == "N") s.samples = static_cast<std::uint64_t>(integer("samples"));
  else if (key == "seed") s.seed = static_cast<std::uint64_t>(integer("seed"));
  else s.params[key] = v;
}

void load_config(Settings& s, const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command) {
        throw UsageError("config is for command '" + value.dump() + "', not '" + command + "'");
      }
    } else if (key == "params") {
      if (!value.is_object()) throw UsageError("config.params must be an object");
      for (const auto& [k, v] : value.items()) s.params[k] = v;
    } else if (key == "grid" || key == "t" || key == "samples" || key == "seed") {
      apply_setting(s, key, value);
    } else {
      throw UsageError("config: unknown key '" + key + "' (expected command, grid, t, samples, seed, params)");
    }
  }
}

void validate(const Settings& s, const Command& c) {
  if (s.grid < 2) throw UsageError("grid must be at least 2");
  if (!(s.t > 0.0)) throw UsageError("t must be positive");
  const std::set<std::string> allowed(c.keys.begin(), c.keys.end());
  for (const auto& [key, value] : s.params.items()) {
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& k : c.keys) list += (list.empty() ? "" : ", ") + k;
      throw UsageError("unknown parameter '" + key + "' for " + c.name + " (expected: " + list + ")");
    }
  }
}

void write_outputs(const std::filesystem::path& dir, const Command& c, const Settings& s, const Outcome& o) {
  std::filesystem::create_directories(dir);
  json report = {{"command", c.name},
                 {"config", {{"grid", s.grid}, {"t", s.t}, {"samples", s.samples}, {"seed", s.seed}, {"params", s.params}}},
                 {"pass", o.pass},
                 {"reports", json::array()}};
  if (!s.mode.empty()) report["config"]["mode"] = s.mode;
  for (const auto& r : o.reports) report["reports"].push_back(to_json(r));
  if (!o.data.empty()) report["data"] = o.data;
  std::ofstream(dir / "report.json") << report.dump(2) << "\n";
  std::ofstream csv(dir / "report.csv");
  if (!o.reports.empty()) {
    csv << csv_header() << "\n";
    for (const auto& r : o.reports) csv << to_csv_row(r) << "\n";
  }
  std::ofstream dat(dir / "report.dat");
  if (!o.plot.empty()) {
    dat << "# parameter value stderr\n";
    char buf[128];
    for (const auto& row : o.plot) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", row.parameter, row.value, std::abs(row.std_error));
      dat << buf;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-integral checks for loop-group representations and the loop Gamma functional"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "List the commands and the identity each one checks");

  Settings settings;
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool recurrence = false, prime = false;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.description);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", settings.seed, "RNG seed");
    sub->add_option("--samples", settings.samples, "Monte Carlo sample count");
    sub->add_option("--grid", settings.grid, "Grid intervals m");
    sub->add_option("--out", out_dir, "Output directory for report.json, report.csv, report.dat");
    sub->add_option("overrides", overrides, "key=value parameter overrides");
    if (c.name == "gamma-reg") {
      sub->add_flag("--recurrence", recurrence, "Check the recurrence");
      sub->add_flag("--prime", prime, "Check the z-derivative against finite differences");
    }
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& c : commands()) std::printf("%-22s %s\n", c.name.c_str(), c.description.c_str());
    return 0;
  }
  const Command* chosen = nullptr;
  for (const auto& c : commands()) {
    if (subs[c.name]->parsed()) chosen = &c;
  }
  if (!chosen) {
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    // Flags given on the command line take precedence over the config file.
    Settings s;
    if (!config_path.empty()) load_config(s, config_path, chosen->name);
    auto* sub = subs[chosen->name];
    if (sub->count("--seed")) s.seed = settings.seed;
    if (sub->count("--samples")) s.samples = settings.samples;
    if (sub->count("--grid")) s.grid = settings.grid;
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("override '" + o + "' is not key=value");
      apply_setting(s, o.substr(0, eq), parse_override_value(o.substr(eq + 1)));
    }
    if (recurrence && prime) throw UsageError("--recurrence and --prime are exclusive");
    s.mode = recurrence ? "recurrence" : prime ? "prime" : "";
    validate(s, *chosen);
    const Outcome outcome = chosen->run(s);
    write_outputs(out_dir, *chosen, s, outcome);
    for (const auto& r : outcome.reports) {
      const auto d = r.lhs - r.rhs;
      std::printf("%-22s |diff| = %.3e  stderr = %.3e  %s\n", r.check.c_str(), std::abs(d), r.std_error,
                  r.pass ? "pass" : "FAIL");
    }
    std::printf("%s: %s\n", chosen->name.c_str(), outcome.pass ? "pass" : "FAIL");
    return outcome.pass ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 1;
  } catch (const EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
