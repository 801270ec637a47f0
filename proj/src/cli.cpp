#include "posifract/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "posifract/fractal_operator.hpp"
#include "posifract/ifs_attractor.hpp"
#include "posifract/io.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/verify.hpp"

namespace posifract {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240607;

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = kDefaultSeed;
  std::size_t grid = 0;
  double tol = 0.0;
  std::size_t max_iter = 0;
  std::string suite;
  std::size_t chaos_points = 0;
  std::size_t k = 0;
  double resolution = 0.0;
};

/// Files are buffered and written only once every computation succeeded.
using Outputs = std::map<std::string, std::string>;

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_outputs(const std::filesystem::path& dir, const Outputs& outputs) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : outputs) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  }
}

std::filesystem::path output_dir(const Flags& flags) {
  if (const char* env = std::getenv("POSIFRACT_OUT"); env != nullptr && *env != '\0') return env;
  return flags.out;
}

RunConfig effective_config(const Flags& flags, const CLI::App& cmd) {
  RunConfig c;
  if (!flags.config.empty()) c = load_config(flags.config);
  if (cmd.count("--grid")) c.grid = flags.grid;
  if (cmd.count("--tol")) {
    if (!(flags.tol > 0.0)) throw ParameterError("--tol must be positive");
    c.tol = flags.tol;
  }
  if (cmd.count("--max-iter")) c.max_iter = flags.max_iter;
  if (cmd.count("--seed")) c.seed = flags.seed;
  return c;
}

SampledFunction initial_guess(const RBSpec& spec) {
  if (const CForm* c = spec.c_form()) return c->germ;
  return SampledFunction::zero(spec.domain(), spec.grid_size());
}

Json metric_name(const RBSpec& spec) {
  const Exponent p = spec.metric_exponent();
  if (p.is_infinite()) return "sup";
  return Json(p.value());
}

// -------------------------------------------------------------------- fit

Outputs cmd_fit(const RunConfig& config) {
  const RBSpec spec = build_spec(config);
  const ValidationReport validation = validate_spec(spec);
  if (!validation.passed()) throw ValidationError(validation.failure_summary());
  const FixedPointResult result =
      fixed_point(spec, initial_guess(spec), config.tolerance(), config.iterations());

  Json report = to_json(result);
  report["metric"] = metric_name(spec);
  report["grid"] = spec.grid_size();
  report["tol"] = config.tolerance();
  report["max_iter"] = config.iterations();
  if (spec.is_c_form()) {
    report["knot_errors"] = knot_errors(spec, result.fstar);
    report["interpolation_error"] = interpolation_check(spec, result.fstar);
  }
  report["config"] = to_json(config);

  std::ostringstream csv;
  write_function_csv(csv, result.fstar);
  return {{"fstar.csv", csv.str()},
          {"report.json", dump(report)},
          {"validation.json", dump(to_json(validation))}};
}

// -------------------------------------------------------------- attractor

Outputs cmd_attractor(const RunConfig& config, const Flags& flags, const CLI::App& cmd) {
  const RBSpec spec = build_spec(config);
  const ValidationReport validation = validate_spec(spec);
  if (!validation.passed()) throw ValidationError(validation.failure_summary());

  const FixedPointResult result =
      fixed_point(spec, initial_guess(spec), config.tolerance(), config.iterations());
  const GraphIFS ifs = ifs_from_spec(spec, result.fstar.sup());
  const PointSet graph = graph_of(result.fstar);

  AttractorConfig ac = config.attractor.value_or(AttractorConfig{});
  if (cmd.count("--k")) ac.k = flags.k;
  if (ac.k == 0) throw ParameterError("attractor iteration count k must be at least 1");
  double resolution = std::ldexp(1.0, -12) * graph.diameter();
  if (ac.resolution) resolution = *ac.resolution;
  if (cmd.count("--resolution")) resolution = flags.resolution;
  if (!(resolution > 0.0)) throw ParameterError("resolution must be positive");

  const Interval d = spec.domain();
  const PointSet a = attractor(ifs, PointSet({{d.lo, 0.0}}), ac.k, resolution);
  const double h = d.width() / static_cast<double>(spec.grid_size() - 1);
  const double distance = hausdorff(a, graph);
  const double bound = 5.0 * (h + resolution);

  Json eq = Json::object();
  eq["hausdorff"] = distance;
  eq["grid_spacing"] = h;
  eq["resolution"] = resolution;
  eq["bound"] = bound;
  eq["within_bound"] = distance <= bound;
  eq["k"] = ac.k;
  eq["points"] = a.size();
  eq["fixed_point_iterations"] = result.iterations;

  std::ostringstream csv;
  write_points_csv(csv, a);
  Outputs out{{"attractor.csv", csv.str()},
              {"equivalence.json", dump(eq)},
              {"ifs.json", dump(to_json(ifs))}};
  if (flags.chaos_points > 0) {
    std::ostringstream chaos;
    write_points_csv(chaos, chaos_game(ifs, flags.chaos_points, config.seed.value_or(kDefaultSeed)));
    out["chaos.csv"] = chaos.str();
  }
  return out;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const RunConfig& config, const Flags& flags, const CLI::App& cmd,
               Outputs& out) {
  std::string suite = config.suite.value_or("");
  if (cmd.count("--suite")) suite = flags.suite;
  if (!is_suite(suite)) {
    Json err = Json::object();
    err["error"] = "usage";
    err["message"] = suite.empty() ? "verify needs --suite" : "unknown suite '" + suite + "'";
    Json names = suite_names();
    err["suites"] = names;
    std::cerr << err.dump() << "\n";
    return kExitUsage;
  }
  const SuiteResult r = run_suite(suite, config, config.seed.value_or(kDefaultSeed));
  out["verify_" + suite + ".json"] = dump(r.report);
  return r.passed ? kExitOk : kExitValidation;
}

int exit_code_for(const Error& e) {
  return e.kind() == ErrorKind::non_convergence ? kExitNonConvergence : kExitValidation;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Positivity-preserving fractal interpolation"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&flags](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "JSON config file");
    cmd->add_option("--out", flags.out, "output directory (POSIFRACT_OUT overrides)");
    cmd->add_option("--seed", flags.seed, "seed for randomized inputs");
    cmd->add_option("--grid", flags.grid, "grid size N")->check(CLI::Range(2ul, 1ul << 26));
    cmd->add_option("--tol", flags.tol, "fixed-point tolerance");
    cmd->add_option("--max-iter", flags.max_iter, "fixed-point iteration limit");
  };

  CLI::App* fit = app.add_subcommand("fit", "compute the fractal function of a spec");
  common(fit);
  CLI::App* attr = app.add_subcommand("attractor", "render the graph IFS attractor");
  common(attr);
  attr->add_option("--k", flags.k, "Hutchinson iterations");
  attr->add_option("--resolution", flags.resolution, "snapping resolution");
  attr->add_option("--chaos-game", flags.chaos_points,
                   "also write chaos.csv with this many random-iteration points");
  CLI::App* ver = app.add_subcommand("verify", "run a property suite");
  common(ver);
  ver->add_option("--suite", flags.suite, "metrics|contraction|sandwich|semilinearity|series");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Outputs outputs;
    int code = kExitOk;
    if (fit->parsed()) {
      outputs = cmd_fit(effective_config(flags, *fit));
    } else if (attr->parsed()) {
      outputs = cmd_attractor(effective_config(flags, *attr), flags, *attr);
    } else {
      code = cmd_verify(effective_config(flags, *ver), flags, *ver, outputs);
      if (code == kExitUsage) return code;
    }
    write_outputs(output_dir(flags), outputs);
    return code;
  } catch (const Error& e) {
    std::cerr << error_json(e).dump() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << error_json(e).dump() << "\n";
    return kExitInternal;
  }
}

}  // namespace posifract
