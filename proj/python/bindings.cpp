// Python entry points. Configs and results cross the boundary as JSON text;
// the package wrapper converts them to and from dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "posifract/ifs_attractor.hpp"
#include "posifract/io.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/verify.hpp"

namespace py = pybind11;
using namespace posifract;

namespace {

RunConfig config_from(const std::string& text) { return parse_config(Json::parse(text)); }

SampledFunction initial_guess(const RBSpec& spec) {
  if (const CForm* c = spec.c_form()) return c->germ;
  return SampledFunction::zero(spec.domain(), spec.grid_size());
}

std::vector<double> abscissae(const SampledFunction& f) {
  std::vector<double> x(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) x[k] = f.abscissa(k);
  return x;
}

std::string fit(const std::string& config_text) {
  const RunConfig config = config_from(config_text);
  const RBSpec spec = build_spec(config);
  const ValidationReport validation = validate_spec(spec);
  if (!validation.passed()) throw ValidationError(validation.failure_summary());
  const FixedPointResult r =
      fixed_point(spec, initial_guess(spec), config.tolerance(), config.iterations());
  Json out = to_json(r);
  out["x"] = abscissae(r.fstar);
  out["fstar"] = std::vector<double>(r.fstar.samples().begin(), r.fstar.samples().end());
  if (spec.is_c_form()) out["knot_errors"] = knot_errors(spec, r.fstar);
  out["validation"] = to_json(validation);
  return out.dump();
}

std::string validate(const std::string& config_text) {
  return to_json(validate_spec(build_spec(config_from(config_text)))).dump();
}

double factor(const std::string& config_text) {
  return contraction_factor(build_spec(config_from(config_text)));
}

std::string render_attractor(const std::string& config_text, std::size_t k,
                             std::optional<double> resolution) {
  const RunConfig config = config_from(config_text);
  const RBSpec spec = build_spec(config);
  const ValidationReport validation = validate_spec(spec);
  if (!validation.passed()) throw ValidationError(validation.failure_summary());
  const FixedPointResult r =
      fixed_point(spec, initial_guess(spec), config.tolerance(), config.iterations());
  const GraphIFS ifs = ifs_from_spec(spec, r.fstar.sup());
  const PointSet graph = graph_of(r.fstar);
  const double res = resolution.value_or(std::ldexp(1.0, -12) * graph.diameter());
  const Interval d = spec.domain();
  const PointSet a = attractor(ifs, PointSet({{d.lo, 0.0}}), k, res);
  const double h = d.width() / static_cast<double>(spec.grid_size() - 1);

  Json out = Json::object();
  Json points = Json::array();
  for (const auto& p : a.points()) points.push_back({p.x, p.y});
  out["points"] = std::move(points);
  out["hausdorff"] = hausdorff(a, graph);
  out["bound"] = 5.0 * (h + res);
  out["resolution"] = res;
  out["theta"] = ifs.theta();
  return out.dump();
}

std::string run_verify(const std::string& suite, std::uint64_t seed,
                       const std::string& config_text) {
  if (!is_suite(suite)) throw ConfigurationError("unknown suite '" + suite + "'");
  const RunConfig config = config_text.empty() ? RunConfig{} : config_from(config_text);
  return run_suite(suite, config, seed).report.dump();
}

double metric(const std::vector<double>& f, const std::vector<double>& g, double p, double lo,
              double hi) {
  const Interval d{lo, hi};
  const SampledFunction a(d, f);
  const SampledFunction b(d, g);
  if (std::isinf(p)) return sup_metric(a, b);
  return lp_metric(a, b, Exponent(p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Positivity-preserving fractal interpolation (compiled core)";

  static py::exception<Error> error(m, "CoreError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // The payload is the same JSON object the CLI prints on stderr.
      py::set_error(error, error_json(e).dump().c_str());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(error, error_json(ConfigurationError(e.what())).dump().c_str());
    }
  });

  m.def("fit", &fit, py::arg("config"));
  m.def("validate", &validate, py::arg("config"));
  m.def("contraction_factor", &factor, py::arg("config"));
  m.def("attractor", &render_attractor, py::arg("config"), py::arg("k") = 30,
        py::arg("resolution") = py::none());
  m.def("verify", &run_verify, py::arg("suite"), py::arg("seed") = 20240607,
        py::arg("config") = "");
  m.def("metric", &metric, py::arg("f"), py::arg("g"), py::arg("p"), py::arg("lo") = 0.0,
        py::arg("hi") = 1.0);
  m.def("suite_names", &suite_names);
}
