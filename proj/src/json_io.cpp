#include "loopgamma/json_io.hpp"

#include <cmath>
#include <sstream>

#include "loopgamma/errors.hpp"

namespace loopgamma::io {

namespace {

using cd = std::complex<double>;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw UsageError(where + ": " + what);
}

double parse_real(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(where, "cannot parse number '" + s + "'");
  }
  if (used != s.size()) fail(where, "cannot parse number '" + s + "'");
  return v;
}

cd parse_complex_string(std::string s, const std::string& where) {
  std::string compact;
  for (char c : s) {
    if (c != ' ') compact += c;
  }
  if (compact.empty()) fail(where, "empty complex number");
  const char last = compact.back();
  if (last != 'i' && last != 'j') return parse_real(compact, where);
  compact.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = compact.size(); k-- > 1;) {
    if ((compact[k] == '+' || compact[k] == '-') && compact[k - 1] != 'e' && compact[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : compact.substr(0, split);
  std::string im = split == std::string::npos ? compact : compact.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, where), parse_real(im, where)};
}

struct Term {
  double amp;
  double freq;
};

std::vector<Term> terms_from(const json& j, const std::string& where) {
  std::vector<Term> out;
  auto one = [&](const json& t) {
    if (t.is_number()) return Term{t.get<double>(), 1.0};
    if (t.is_object()) {
      for (const auto& [key, value] : t.items()) {
        if (key != "amp" && key != "freq") fail(where, "unknown key '" + key + "' (expected amp, freq)");
      }
      return Term{t.contains("amp") ? number_from(t["amp"], where + ".amp") : 1.0,
                  t.contains("freq") ? number_from(t["freq"], where + ".freq") : 1.0};
    }
    fail(where, "expected an amplitude or {amp, freq}");
  };
  if (j.is_array()) {
    for (const auto& t : j) out.push_back(one(t));
  } else {
    out.push_back(one(j));
  }
  return out;
}

}  // namespace

double number_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>(), where);
  fail(where, "expected a number");
}

std::vector<double> numbers_from(const json& j, const std::string& where) {
  if (!j.is_array()) return {number_from(j, where)};
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

cd complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_complex_string(j.get<std::string>(), where);
  if (j.is_array() && j.size() == 2) return {number_from(j[0], where + "[0]"), number_from(j[1], where + "[1]")};
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key != "re" && key != "im") fail(where, "unknown key '" + key + "' (expected re, im)");
    }
    return {j.contains("re") ? number_from(j["re"], where + ".re") : 0.0,
            j.contains("im") ? number_from(j["im"], where + ".im") : 0.0};
  }
  fail(where, "expected a complex number (number, [re, im], {re, im} or \"a+bi\")");
}

json complex_to(cd z) { return json::array({z.real(), z.imag()}); }

SmoothLoop loop_from(const json& j, const Grid& grid, const std::string& where) {
  if (j.is_number()) {
    const double c = j.get<double>();
    return SmoothLoop(grid, std::vector<double>(grid.size(), c), std::vector<double>(grid.size(), 0.0),
                      std::vector<double>(grid.size(), 0.0));
  }
  if (j.is_array()) {
    const auto values = numbers_from(j, where);
    if (values.size() != grid.size()) {
      fail(where, "expected " + std::to_string(grid.size()) + " node values, got " + std::to_string(values.size()));
    }
    return SmoothLoop::from_samples(grid, values);
  }
  if (!j.is_object()) fail(where, "expected a loop (array, number or {const, linear, sin, cos})");
  if (j.contains("values")) {
    if (j.contains("grid_m") && number_from(j["grid_m"], where + ".grid_m") != grid.m()) {
      fail(where, "grid_m does not match the configured grid");
    }
    return loop_from(j["values"], grid, where + ".values");
  }
  double c = 0.0, slope = 0.0;
  std::vector<Term> sines, cosines;
  for (const auto& [key, value] : j.items()) {
    if (key == "const") c = number_from(value, where + ".const");
    else if (key == "linear") slope = number_from(value, where + ".linear");
    else if (key == "sin") sines = terms_from(value, where + ".sin");
    else if (key == "cos") cosines = terms_from(value, where + ".cos");
    else fail(where, "unknown key '" + key + "' (expected const, linear, sin, cos, values)");
  }
  return SmoothLoop::from_functions(
      grid,
      [=](double u) {
        double v = c + slope * u;
        for (const auto& t : sines) v += t.amp * std::sin(t.freq * u);
        for (const auto& t : cosines) v += t.amp * std::cos(t.freq * u);
        return v;
      },
      [=](double u) {
        double v = slope;
        for (const auto& t : sines) v += t.amp * t.freq * std::cos(t.freq * u);
        for (const auto& t : cosines) v -= t.amp * t.freq * std::sin(t.freq * u);
        return v;
      },
      [=](double u) {
        double v = 0.0;
        for (const auto& t : sines) v -= t.amp * t.freq * t.freq * std::sin(t.freq * u);
        for (const auto& t : cosines) v -= t.amp * t.freq * t.freq * std::cos(t.freq * u);
        return v;
      });
}

json loop_to(const SmoothLoop& y) {
  const auto v = y.values();
  return json{{"grid_m", y.grid().m()}, {"values", std::vector<double>(v.begin(), v.end())}};
}

std::vector<cd> complex_loop_from(const json& j, const Grid& grid, const std::string& where) {
  if (j.is_object() && (j.contains("re") || j.contains("im"))) {
    for (const auto& [key, value] : j.items()) {
      if (key != "re" && key != "im") fail(where, "unknown key '" + key + "' (expected re, im)");
    }
    std::vector<cd> out(grid.size());
    if (j.contains("re")) {
      const auto loop = loop_from(j["re"], grid, where + ".re");
      const auto re = loop.values();
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += re[k];
    }
    if (j.contains("im")) {
      const auto loop = loop_from(j["im"], grid, where + ".im");
      const auto im = loop.values();
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += cd(0.0, im[k]);
    }
    return out;
  }
  if (j.is_array() && j.size() == grid.size()) {
    std::vector<cd> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(complex_from(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
  }
  if (j.is_object()) {
    const auto loop = loop_from(j, grid, where);
    const auto re = loop.values();
    return {re.begin(), re.end()};
  }
  return std::vector<cd>(grid.size(), complex_from(j, where));
}

Sampler sampler_from(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto kind = j.get<std::string>();
    if (kind == "free") return Sampler::free();
    if (kind == "bridge") return Sampler::bridge(0.0);
    fail(where, "unknown sampler '" + kind + "' (expected free or bridge)");
  }
  if (!j.is_object()) fail(where, "expected a sampler {kind, X}");
  std::string kind = "free";
  double X = 0.0;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") kind = value.get<std::string>();
    else if (key == "X") X = number_from(value, where + ".X");
    else fail(where, "unknown key '" + key + "' (expected kind, X)");
  }
  if (kind == "free") return Sampler::free();
  if (kind == "bridge") return Sampler::bridge(X);
  fail(where, "unknown sampler kind '" + kind + "' (expected free or bridge)");
}

Path path_from(const json& j, const Grid& grid, const MeasureConfig& cfg, const std::string& where) {
  if (j.is_object() && j.contains("sample")) {
    const auto& s = j["sample"];
    const Sampler sampler = sampler_from(s.value("kind", json("bridge")) == "free" ? json("free") : json{{"kind", "bridge"}, {"X", s.value("X", json(0.0))}}, where + ".sample");
    const auto seed = static_cast<std::uint64_t>(number_from(s.value("seed", json(1)), where + ".sample.seed"));
    const auto index = static_cast<std::uint64_t>(number_from(s.value("index", json(0)), where + ".sample.index"));
    return sampler.kind == PathKind::free ? sample_wiener(grid, cfg, seed, index)
                                          : sample_bridge(grid, cfg, sampler.endpoint, seed, index);
  }
  const json& values = j.is_object() ? j.value("values", json()) : j;
  if (j.is_object() && j.contains("grid_m") && number_from(j["grid_m"], where + ".grid_m") != grid.m()) {
    fail(where, "grid_m does not match the configured grid");
  }
  const auto v = numbers_from(values, where + ".values");
  if (v.size() != grid.size()) fail(where, "expected " + std::to_string(grid.size()) + " path values");
  if (v.front() != 0.0) fail(where, "paths start at 0");
  return Path(grid, v, PathKind::bridge, v.back());
}

json path_to(const Path& x, const MeasureConfig& cfg) {
  return json{{"grid_m", x.grid.m()},
              {"t", cfg.t()},
              {"kind", x.kind == PathKind::free ? "free" : "bridge"},
              {"values", x.values}};
}

GroupElement element_from(const json& j, const Grid& grid, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a group element {alpha, b, s}");
  GroupElement g = GroupElement::identity(grid);
  for (const auto& [key, value] : j.items()) {
    if (key == "alpha") g.alpha = loop_from(value, grid, where + ".alpha");
    else if (key == "b") g.b = loop_from(value, grid, where + ".b");
    else if (key == "s") g.s = number_from(value, where + ".s");
    else if (key == "k") continue;
    else fail(where, "unknown key '" + key + "' (expected alpha, b, s)");
  }
  return g;
}

json element_to(const GroupElement& g) {
  return json{{"alpha", loop_to(g.alpha)["values"]}, {"b", loop_to(g.b)["values"]}, {"s", g.s}};
}

Functional functional_from(const json& j, const Grid& grid, const std::string& where) {
  const std::string type = j.is_string() ? j.get<std::string>() : j.is_object() ? j.value("type", std::string()) : "";
  auto allow = [&](std::initializer_list<const char*> keys) {
    if (!j.is_object()) return;
    for (const auto& [key, value] : j.items()) {
      bool ok = key == "type";
      for (const char* k : keys) ok = ok || key == k;
      if (!ok) fail(where, "unknown key '" + key + "' for functional '" + type + "'");
    }
  };
  auto node = [&](const char* key) {
    const double v = number_from(j.at(key), where + "." + key);
    if (v < 0 || v > grid.m() || v != std::floor(v)) fail(where, std::string(key) + " must be a grid node index");
    return static_cast<std::size_t>(v);
  };
  try {
    if (type == "one") {
      allow({});
      return functionals::constant(1.0);
    }
    if (type == "constant") {
      allow({"value"});
      return functionals::constant(complex_from(j.at("value"), where + ".value"));
    }
    if (type == "exp_inner") {
      allow({"eta", "scale"});
      const cd scale = j.contains("scale") ? complex_from(j["scale"], where + ".scale") : cd(1.0);
      return functionals::exp_inner(complex_loop_from(j.at("eta"), grid, where + ".eta"), scale);
    }
    if (type == "point_char") {
      allow({"node", "omega"});
      return functionals::point_char(node("node"), number_from(j.at("omega"), where + ".omega"));
    }
    if (type == "point_power") {
      allow({"node", "n"});
      return functionals::point_power(node("node"), static_cast<int>(number_from(j.at("n"), where + ".n")));
    }
  } catch (const json::out_of_range& e) {
    fail(where, std::string("missing field: ") + e.what());
  }
  fail(where, "unknown functional type '" + type + "' (expected one, constant, exp_inner, point_char, point_power)");
}

std::function<cd(double)> profile_from(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a profile {type, center, width}");
  const std::string type = j.value("type", std::string("gaussian"));
  const double center = j.contains("center") ? number_from(j["center"], where + ".center") : 0.0;
  for (const auto& [key, value] : j.items()) {
    if (key != "type" && key != "center" && key != "width" && key != "radius") {
      fail(where, "unknown key '" + key + "' (expected type, center, width, radius)");
    }
  }
  if (type == "gaussian") {
    const double w = j.contains("width") ? number_from(j["width"], where + ".width") : 1.0;
    if (!(w > 0)) fail(where, "width must be positive");
    return functionals::gaussian_profile(center, w);
  }
  if (type == "bump") {
    const double r = j.contains("radius") ? number_from(j["radius"], where + ".radius") : 1.0;
    if (!(r > 0)) fail(where, "radius must be positive");
    return functionals::bump_profile(center, r);
  }
  fail(where, "unknown profile type '" + type + "' (expected gaussian or bump)");
}

}  // namespace loopgamma::io
