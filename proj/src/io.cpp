#include "posifract/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace posifract {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigurationError(what); }

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long long>() < 0)) {
    bad(where + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> as_numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(as_number(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

FunctionSource parse_function(const Json& j, const std::string& where) {
  if (j.is_array()) return as_numbers(j, where);
  if (j.is_object()) {
    only_keys(j, {"polynomial"}, where);
    if (!j.contains("polynomial")) bad(where + " needs a 'polynomial' key or a sample array");
    Polynomial poly{as_numbers(j.at("polynomial"), where + ".polynomial")};
    if (poly.coefficients.empty()) bad(where + ".polynomial needs at least one coefficient");
    return poly;
  }
  bad(where + " must be a sample array or {\"polynomial\": [...]}");
}

std::vector<FunctionSource> parse_functions(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array of functions");
  std::vector<FunctionSource> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(parse_function(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Json function_json(const FunctionSource& f) {
  if (const auto* samples = std::get_if<std::vector<double>>(&f)) return Json(*samples);
  Json j = Json::object();
  j["polynomial"] = std::get<Polynomial>(f).coefficients;
  return j;
}

Json functions_json(const std::vector<FunctionSource>& fs) {
  Json j = Json::array();
  for (const auto& f : fs) j.push_back(function_json(f));
  return j;
}

OperatorConfig parse_operator(const Json& j) {
  OperatorConfig op;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "identity") {
      op.kind = SemiLinearOperator::Kind::identity;
    } else if (name == "endpoint_affine") {
      op.kind = SemiLinearOperator::Kind::endpoint_affine;
    } else {
      bad("unknown operator '" + name + "'");
    }
    return op;
  }
  only_keys(j, {"multiplier"}, "form.c.operator");
  if (!j.contains("multiplier")) bad("form.c.operator object needs a 'multiplier' key");
  op.kind = SemiLinearOperator::Kind::multiplier;
  op.multiplier = parse_function(j.at("multiplier"), "form.c.operator.multiplier");
  return op;
}

double parse_exponent(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    bad("p must be a number >= 1 or \"inf\", got \"" + s + "\"");
  }
  const double p = as_number(j, "p");
  if (!(p >= 1.0)) bad("p must be >= 1");
  return p;
}

const std::vector<double>* first_samples(const RunConfig& c) {
  auto pick = [](const FunctionSource& f) { return std::get_if<std::vector<double>>(&f); };
  if (c.form) {
    if (const auto* lp = std::get_if<LpFormConfig>(&*c.form)) {
      for (const auto& q : lp->q) {
        if (const auto* s = pick(q)) return s;
      }
    } else {
      const auto& cf = std::get<CFormConfig>(*c.form);
      if (const auto* s = pick(cf.germ)) return s;
      if (cf.op.multiplier) {
        if (const auto* s = pick(*cf.op.multiplier)) return s;
      }
    }
  }
  if (c.scaling) {
    if (const auto* sampled = std::get_if<SampledScaling>(&*c.scaling)) {
      for (const auto& f : sampled->functions) {
        if (const auto* s = pick(f)) return s;
      }
    }
  }
  return nullptr;
}

SampledFunction materialize(const FunctionSource& source, Interval domain, std::size_t grid,
                            Continuity continuity, const std::string& what) {
  if (const auto* samples = std::get_if<std::vector<double>>(&source)) {
    if (samples->size() != grid) {
      std::ostringstream msg;
      msg << what << " has " << samples->size() << " samples but the grid has " << grid;
      throw DimensionError(msg.str());
    }
    return SampledFunction(domain, *samples, continuity);
  }
  const auto& c = std::get<Polynomial>(source).coefficients;
  return SampledFunction::from_function(
      domain, grid,
      [&c](double x) {
        double acc = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
      },
      continuity);
}

const char* continuity_name(Continuity c) {
  return c == Continuity::continuous ? "continuous" : "measurable";
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

// ------------------------------------------------------------------ config

RunConfig parse_config(const Json& j) {
  only_keys(j,
            {"knots", "p", "scaling", "form", "grid", "tol", "max_iter", "attractor", "seed",
             "suite"},
            "config");
  RunConfig c;
  if (j.contains("knots")) c.knots = as_numbers(j.at("knots"), "knots");
  if (j.contains("p")) c.p = parse_exponent(j.at("p"));
  if (j.contains("scaling")) {
    const Json& s = j.at("scaling");
    only_keys(s, {"constants", "sampled"}, "scaling");
    if (s.size() != 1) bad("scaling needs exactly one of 'constants' or 'sampled'");
    if (s.contains("constants")) {
      c.scaling = ConstantScaling{as_numbers(s.at("constants"), "scaling.constants")};
    } else {
      c.scaling = SampledScaling{parse_functions(s.at("sampled"), "scaling.sampled")};
    }
  }
  if (j.contains("form")) {
    const Json& f = j.at("form");
    only_keys(f, {"lp", "c"}, "form");
    if (f.size() != 1) bad("form needs exactly one of 'lp' or 'c'");
    if (f.contains("lp")) {
      only_keys(f.at("lp"), {"q"}, "form.lp");
      if (!f.at("lp").contains("q")) bad("form.lp needs 'q'");
      c.form = LpFormConfig{parse_functions(f.at("lp").at("q"), "form.lp.q")};
    } else {
      const Json& cf = f.at("c");
      only_keys(cf, {"germ", "operator"}, "form.c");
      if (!cf.contains("germ") || !cf.contains("operator")) {
        bad("form.c needs 'germ' and 'operator'");
      }
      c.form = CFormConfig{parse_function(cf.at("germ"), "form.c.germ"),
                           parse_operator(cf.at("operator"))};
    }
  }
  if (j.contains("grid")) c.grid = as_count(j.at("grid"), "grid");
  if (j.contains("tol")) {
    c.tol = as_number(j.at("tol"), "tol");
    if (!(*c.tol > 0.0)) bad("tol must be positive");
  }
  if (j.contains("max_iter")) c.max_iter = as_count(j.at("max_iter"), "max_iter");
  if (j.contains("attractor")) {
    const Json& a = j.at("attractor");
    only_keys(a, {"k", "resolution"}, "attractor");
    AttractorConfig ac;
    if (a.contains("k")) ac.k = as_count(a.at("k"), "attractor.k");
    if (a.contains("resolution")) ac.resolution = as_number(a.at("resolution"), "attractor.resolution");
    c.attractor = ac;
  }
  if (j.contains("seed")) {
    const Json& seed = j.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      bad("seed must be a nonnegative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("suite")) {
    if (!j.at("suite").is_string()) bad("suite must be a string");
    c.suite = j.at("suite").get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigurationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json to_json(const RunConfig& c) {
  Json j = Json::object();
  if (c.knots) j["knots"] = *c.knots;
  if (c.p) {
    if (std::isinf(*c.p)) {
      j["p"] = "inf";
    } else {
      j["p"] = *c.p;
    }
  }
  if (c.scaling) {
    if (const auto* k = std::get_if<ConstantScaling>(&*c.scaling)) {
      j["scaling"] = {{"constants", k->values}};
    } else {
      j["scaling"] = {{"sampled", functions_json(std::get<SampledScaling>(*c.scaling).functions)}};
    }
  }
  if (c.form) {
    if (const auto* lp = std::get_if<LpFormConfig>(&*c.form)) {
      j["form"] = {{"lp", {{"q", functions_json(lp->q)}}}};
    } else {
      const auto& cf = std::get<CFormConfig>(*c.form);
      Json op;
      if (cf.op.kind == SemiLinearOperator::Kind::multiplier) {
        op = Json::object();
        op["multiplier"] = function_json(*cf.op.multiplier);
      } else {
        op = to_string(cf.op.kind);
      }
      Json body = Json::object();
      body["germ"] = function_json(cf.germ);
      body["operator"] = op;
      j["form"] = {{"c", body}};
    }
  }
  if (c.grid) j["grid"] = *c.grid;
  if (c.tol) j["tol"] = *c.tol;
  if (c.max_iter) j["max_iter"] = *c.max_iter;
  if (c.attractor) {
    Json a = Json::object();
    a["k"] = c.attractor->k;
    if (c.attractor->resolution) a["resolution"] = *c.attractor->resolution;
    j["attractor"] = a;
  }
  if (c.seed) j["seed"] = *c.seed;
  if (c.suite) j["suite"] = *c.suite;
  return j;
}

std::size_t default_grid(std::size_t intervals) { return (std::size_t{1} << 10) * intervals + 1; }

std::size_t resolve_grid(const RunConfig& c) {
  if (c.grid) return *c.grid;
  if (const auto* s = first_samples(c)) return s->size();
  const std::size_t n = c.knots && c.knots->size() > 1 ? c.knots->size() - 1 : 1;
  return default_grid(n);
}

RBSpec build_spec(const RunConfig& c) {
  if (!c.has_spec()) throw ConfigurationError("config needs 'knots', 'scaling' and 'form'");
  KnotVector knots(*c.knots);
  ContractionFamily family = ContractionFamily::affine(knots);
  const Interval domain = family.domain();
  const std::size_t grid = resolve_grid(c);
  if (grid < 2) throw DimensionError("grid must have at least 2 points");
  const bool c_form = std::holds_alternative<CFormConfig>(*c.form);
  const Continuity sc = c_form ? Continuity::continuous : Continuity::measurable;

  std::vector<SampledFunction> s;
  if (const auto* k = std::get_if<ConstantScaling>(&*c.scaling)) {
    for (double v : k->values) s.push_back(SampledFunction::constant(domain, grid, v, sc));
  } else {
    const auto& fs = std::get<SampledScaling>(*c.scaling).functions;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      s.push_back(materialize(fs[i], domain, grid, sc, "scaling function " + std::to_string(i)));
    }
  }
  if (s.empty()) throw DimensionError("scaling needs one entry per interval");
  ScalingFamily scaling(std::move(s));

  if (const auto* lp = std::get_if<LpFormConfig>(&*c.form)) {
    if (!c.p) throw ConfigurationError("the lp form needs an exponent 'p'");
    std::vector<SampledFunction> q;
    for (std::size_t i = 0; i < lp->q.size(); ++i) {
      q.push_back(materialize(lp->q[i], domain, grid, Continuity::measurable,
                              "offset q_" + std::to_string(i)));
    }
    return RBSpec(std::move(family), std::move(scaling), LpForm{std::move(q), Exponent(*c.p)});
  }
  const auto& cf = std::get<CFormConfig>(*c.form);
  if (c.p && !std::isinf(*c.p)) {
    throw ConfigurationError("the c form lives in the sup metric; omit 'p' or set it to \"inf\"");
  }
  SampledFunction germ = materialize(cf.germ, domain, grid, Continuity::continuous, "germ");
  SemiLinearOperator op = SemiLinearOperator::identity();
  if (cf.op.kind == SemiLinearOperator::Kind::endpoint_affine) {
    op = SemiLinearOperator::endpoint_affine();
  } else if (cf.op.kind == SemiLinearOperator::Kind::multiplier) {
    op = SemiLinearOperator::multiplier(
        materialize(*cf.op.multiplier, domain, grid, Continuity::continuous, "multiplier"));
  }
  return RBSpec(std::move(family), std::move(scaling), CForm{std::move(germ), std::move(op)});
}

// ----------------------------------------------------------------- results

Json to_json(const SampledFunction& f) {
  Json j = Json::object();
  j["domain"] = {f.domain().lo, f.domain().hi};
  j["samples"] = std::vector<double>(f.samples().begin(), f.samples().end());
  j["continuity"] = continuity_name(f.continuity());
  return j;
}

Json to_json(const FixedPointResult& r) {
  Json j = Json::object();
  j["iterations"] = r.iterations;
  j["contraction_factor"] = r.contraction_factor;
  j["residual"] = r.residual;
  j["history"] = r.history;
  return j;
}

Json to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e = Json::object();
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["required"] = c.required;
    e["measured"] = number_or_null(c.measured);
    e["detail"] = c.detail;
    checks.push_back(e);
  }
  Json j = Json::object();
  j["passed"] = report.passed();
  j["checks"] = checks;
  return j;
}

Json to_json(const GraphIFS& ifs) {
  Json maps = Json::array();
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    Json m = Json::object();
    m["slope"] = ifs.family().slope(i);
    m["offset"] = ifs.family().offset(i);
    m["q"] = to_json(ifs.offsets()[i]);
    m["S"] = to_json(ifs.scaling()[i]);
    maps.push_back(m);
  }
  Json j = Json::object();
  const auto knots = ifs.family().knots().knots();
  j["knots"] = std::vector<double>(knots.begin(), knots.end());
  j["theta"] = ifs.theta();
  j["lipschitz_x"] = ifs.lipschitz_x();
  j["contraction_bound"] = contraction_bound(ifs);
  j["warnings"] = ifs.warnings();
  j["maps"] = maps;
  return j;
}

Json to_json(const NormEstimate& e) {
  Json j = Json::object();
  j["estimate"] = e.estimate;
  j["argmax"] = e.argmax;
  j["used"] = e.used;
  j["skipped"] = e.skipped;
  return j;
}

Json to_json(const SandwichReport& r) {
  Json per = Json::array();
  for (const auto& c : r.per_function) {
    Json e = Json::object();
    e["name"] = c.name;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    e["ok"] = c.ok;
    per.push_back(e);
  }
  Json j = Json::object();
  j["estimate"] = r.estimate;
  j["argmax"] = r.argmax;
  j["upper_bound"] = r.upper_bound;
  j["s_infinity"] = r.s_infinity;
  j["identity_minus_L"] = r.identity_minus_L;
  j["lower_ok"] = r.lower_ok;
  j["upper_ok"] = r.upper_ok;
  j["passed"] = r.passed();
  j["per_function"] = per;
  j["skipped"] = r.skipped;
  return j;
}

Json to_json(const SequenceResult& r) {
  Json j = Json::object();
  j["c_bar"] = r.c_bar;
  j["distances"] = r.distances;
  j["bounds"] = r.bounds;
  j["within_bound"] = r.within_bound;
  j["tail_decays"] = r.tail_decays;
  Json iters = Json::array();
  for (const auto& m : r.members) iters.push_back(m.iterations);
  j["iterations"] = iters;
  return j;
}

Json to_json(const SeriesResult& r) {
  Json j = Json::object();
  j["factors"] = r.factors;
  j["increments"] = r.increments;
  j["ratios"] = r.ratios;
  j["max_ratio"] = r.max_ratio();
  j["sum"] = to_json(r.sum());
  return j;
}

Json error_json(const std::exception& e) {
  Json j = Json::object();
  if (const auto* pe = dynamic_cast<const Error*>(&e)) {
    j["error"] = to_string(pe->kind());
  } else {
    j["error"] = "internal";
  }
  j["message"] = e.what();
  if (const auto* pos = dynamic_cast<const PositivityError*>(&e)) {
    j["x"] = pos->x();
    j["value"] = pos->value();
  }
  if (const auto* nc = dynamic_cast<const NotContractiveError*>(&e)) {
    j["factor"] = nc->factor();
  }
  if (const auto* nc = dynamic_cast<const NonConvergenceError*>(&e)) {
    j["history"] = nc->history();
  }
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_function_csv(std::ostream& out, const SampledFunction& f) {
  out << "x,value\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    out << format_double(f.abscissa(k)) << ',' << format_double(f[k]) << '\n';
  }
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  out << "x,y\n";
  for (const auto& p : points.points()) {
    out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
}

}  // namespace posifract
