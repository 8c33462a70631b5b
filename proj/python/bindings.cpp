#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loopgamma/errors.hpp"
#include "loopgamma/fourier_laplace.hpp"
#include "loopgamma/gaussian.hpp"
#include "loopgamma/group.hpp"
#include "loopgamma/loop_gamma.hpp"
#include "loopgamma/measure_checks.hpp"
#include "loopgamma/special.hpp"

namespace py = pybind11;
using namespace loopgamma;
using cd = std::complex<double>;

namespace {

Sampler make_sampler(const std::string& kind, double X) {
  if (kind == "free") return Sampler::free();
  if (kind == "bridge") return Sampler::bridge(X);
  throw UsageError("sampler kind must be 'free' or 'bridge'");
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

std::vector<double> node_values(const std::vector<double>& v, const Grid& grid, const char* what) {
  require_node_samples(v.size(), grid, what);
  return v;
}

TiltPolicy make_tilt(const std::string& tilt) {
  if (tilt == "automatic") return TiltPolicy::automatic;
  if (tilt == "never") return TiltPolicy::never;
  if (tilt == "always") return TiltPolicy::always;
  throw UsageError("tilt must be 'automatic', 'never' or 'always'");
}

py::dict report_dict(const CheckReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["stderr"] = r.std_error;
  d["passed"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Path-integral checks for loop-group representations and the loop Gamma functional";

  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_RuntimeError);

  py::class_<MCEstimate>(m, "MCEstimate")
      .def_readonly("mean", &MCEstimate::mean)
      .def_readonly("stderr", &MCEstimate::std_error)
      .def_readonly("n", &MCEstimate::n)
      .def_readonly("seed", &MCEstimate::seed)
      .def("__repr__", [](const MCEstimate& e) {
        return "MCEstimate(mean=" + py::repr(py::cast(e.mean)).cast<std::string>() +
               ", stderr=" + std::to_string(e.std_error) + ", n=" + std::to_string(e.n) + ")";
      });

  m.def("grid_nodes", [](int m_) { return to_array(Grid(m_).nodes()); }, py::arg("m"));
  m.def("heat_kernel", &heat_kernel, py::arg("x"), py::arg("s"), py::arg("t"));
  m.def("bridge_mass", [](double X, double t) { return bridge_mass(X, MeasureConfig(t)); }, py::arg("X"),
        py::arg("t") = 1.0);

  m.def(
      "sample_path",
      [](int m_, double t, std::uint64_t seed, std::uint64_t index, const std::string& kind, double X) {
        const Grid g(m_);
        const MeasureConfig cfg(t);
        const auto sampler = make_sampler(kind, X);
        const auto p = sampler.kind == PathKind::free ? sample_wiener(g, cfg, seed, index)
                                                      : sample_bridge(g, cfg, X, seed, index);
        return to_array(p.values);
      },
      py::arg("m"), py::arg("t") = 1.0, py::arg("seed") = 1, py::arg("index") = 0, py::arg("kind") = "free",
      py::arg("X") = 0.0);

  m.def(
      "gaussian_moment",
      [](const std::vector<cd>& eta, double t, const std::string& kind, double X) {
        const Grid g(static_cast<int>(eta.size()) - 1);
        return gaussian_moment_oracle(eta, g, make_sampler(kind, X), MeasureConfig(t));
      },
      py::arg("eta"), py::arg("t") = 1.0, py::arg("kind") = "free", py::arg("X") = 0.0,
      "Closed-form E[exp(∫η x du)] with the trapezoid rule on the grid implied by len(eta).");

  m.def(
      "expect_exp_inner",
      [](const std::vector<cd>& eta, double t, std::uint64_t n, std::uint64_t seed, const std::string& kind,
         double X) {
        const Grid g(static_cast<int>(eta.size()) - 1);
        py::gil_scoped_release release;
        return expect(functionals::exp_inner(eta), g, MeasureConfig(t), make_sampler(kind, X), n, seed);
      },
      py::arg("eta"), py::arg("t") = 1.0, py::arg("n") = 10000, py::arg("seed") = 1, py::arg("kind") = "free",
      py::arg("X") = 0.0);

  m.def(
      "translation_residual",
      [](const std::vector<double>& path, const std::vector<double>& shift, double t) {
        const Grid g(static_cast<int>(path.size()) - 1);
        const Path x(g, node_values(path, g, "path"));
        return check_translation_exact(x, SmoothLoop::from_samples(g, node_values(shift, g, "shift")),
                                       MeasureConfig(t));
      },
      py::arg("path"), py::arg("shift"), py::arg("t") = 1.0,
      "Log residual of the discrete Cameron-Martin identity for one path and shift.");

  m.def(
      "check_translation_point_char",
      [](int m_, std::size_t node, double omega, const std::vector<double>& shift, double t, std::uint64_t n,
         std::uint64_t seed, const std::string& kind, double X) {
        const Grid g(m_);
        const auto y = SmoothLoop::from_samples(g, node_values(shift, g, "shift"));
        py::gil_scoped_release release;
        return check_translation(functionals::point_char(node, omega), y, make_sampler(kind, X), MeasureConfig(t),
                                 n, seed);
      },
      py::arg("m"), py::arg("node"), py::arg("omega"), py::arg("shift"), py::arg("t") = 1.0,
      py::arg("n") = 10000, py::arg("seed") = 1, py::arg("kind") = "free", py::arg("X") = 0.0);

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("check", &CheckReport::check)
      .def_readonly("lhs", &CheckReport::lhs)
      .def_readonly("rhs", &CheckReport::rhs)
      .def_readonly("stderr", &CheckReport::std_error)
      .def_readonly("passed", &CheckReport::pass)
      .def("as_dict", &report_dict);

  m.def(
      "cocycle",
      [](const std::vector<double>& alpha1, const std::vector<double>& alpha2, double k) {
        const Grid g(static_cast<int>(alpha1.size()) - 1);
        return cocycle(SmoothLoop::from_samples(g, alpha1), SmoothLoop::from_samples(g, node_values(alpha2, g, "alpha2")),
                       k);
      },
      py::arg("alpha1"), py::arg("alpha2"), py::arg("k"),
      "k∫α1 α2′ du with α2′ from finite differences of the node samples.");

  m.def(
      "hat_gamma",
      [](const std::vector<cd>& z, const std::vector<double>& mu, double t, std::uint64_t n, std::uint64_t seed,
         const std::string& tilt) {
        const Grid g(static_cast<int>(z.size()) - 1);
        const ComplexLoopArgument arg(g, z);
        const MuWeight w(g, node_values(mu, g, "mu"));
        LoopGammaOptions opts;
        opts.tilt = make_tilt(tilt);
        py::gil_scoped_release release;
        return hat_gamma(arg, w, MeasureConfig(t), n, seed, opts);
      },
      py::arg("z"), py::arg("mu"), py::arg("t") = 1.0, py::arg("n") = 10000, py::arg("seed") = 1,
      py::arg("tilt") = "automatic");

  m.def("gamma_classical", &gamma_classical, py::arg("z"));
  m.def(
      "gamma_reg", [](double mu, double t, cd z) { return gamma_reg({mu, t, z}); }, py::arg("mu"), py::arg("t"),
      py::arg("z"));
  m.def(
      "gamma_reg_prime", [](double mu, double t, cd z) { return gamma_reg_prime({mu, t, z}); }, py::arg("mu"),
      py::arg("t"), py::arg("z"));
  m.def(
      "check_recurrence", [](double mu, double t, cd z) { return check_recurrence({mu, t, z}); }, py::arg("mu"),
      py::arg("t"), py::arg("z"));
  m.def(
      "check_large_t_limit",
      [](cd z, double mu, const std::vector<double>& ts) {
        const auto r = check_large_t_limit(z, mu, ts);
        py::dict d;
        d["oracle"] = r.oracle;
        d["printed"] = r.printed;
        d["monotone"] = r.monotone;
        py::list rows;
        for (const auto& row : r.rows) rows.append(py::make_tuple(row.t, row.value, row.error));
        d["rows"] = rows;
        return d;
      },
      py::arg("z"), py::arg("mu"), py::arg("ts"));
  m.def("laplace_kernel_value", &laplace_kernel_value, py::arg("w"));

  m.def(
      "check_prop22",
      [](double a, double b, double lambda, const std::function<cd(double)>& f, const std::vector<double>& t1,
         double half_width, std::size_t nodes) {
        const auto line = LineFunction::sample(half_width, nodes, f);
        const auto r = check_prop22(a, b, lambda, line, t1);
        py::dict d;
        d["transform_route"] = r.transform_route;
        d["kernel_route"] = r.kernel_route;
        d["max_relative"] = r.max_relative;
        d["passed"] = r.pass;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("lam"), py::arg("f"), py::arg("t1"), py::arg("half_width") = 10.0,
      py::arg("nodes") = 801);

  m.def(
      "fourier_wiener_check",
      [](const std::vector<cd>& eta, const std::vector<cd>& zeta, double t) {
        const Grid g(static_cast<int>(eta.size()) - 1);
        const auto r = fourier_wiener_check(eta, zeta, g, MeasureConfig(t));
        py::dict d;
        d["transformed"] = r.transformed;
        d["original"] = r.original;
        d["relative"] = r.relative;
        d["passed"] = r.pass;
        return d;
      },
      py::arg("eta"), py::arg("zeta"), py::arg("t") = 1.0);
}
