#pragma once

// JSON configs and reports, CSV sample dumps.
//
// Config schema (all keys optional except where a command needs a spec):
//   {"knots":[...], "p":1|2|...|"inf",
//    "scaling":{"constants":[...]} | {"sampled":[F, ...]},
//    "form":{"lp":{"q":[F, ...]}} |
//           {"c":{"germ":F, "operator":"identity"|"endpoint_affine"|{"multiplier":F}}},
//    "grid":N, "tol":x, "max_iter":n,
//    "attractor":{"k":n, "resolution":x}, "seed":n, "suite":"name"}
// where a function F is either an array of exactly `grid` samples or
// {"polynomial":[c0, c1, ...]} meaning c0 + c1 x + c2 x^2 + ... on the grid.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "posifract/fractal_operator.hpp"
#include "posifract/ifs_attractor.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/series.hpp"

namespace posifract {

using Json = nlohmann::ordered_json;

struct Polynomial {
  std::vector<double> coefficients;  // ascending powers of x
  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

using FunctionSource = std::variant<std::vector<double>, Polynomial>;

struct ConstantScaling {
  std::vector<double> values;
  friend bool operator==(const ConstantScaling&, const ConstantScaling&) = default;
};
struct SampledScaling {
  std::vector<FunctionSource> functions;
  friend bool operator==(const SampledScaling&, const SampledScaling&) = default;
};

struct LpFormConfig {
  std::vector<FunctionSource> q;
  friend bool operator==(const LpFormConfig&, const LpFormConfig&) = default;
};

struct OperatorConfig {
  SemiLinearOperator::Kind kind = SemiLinearOperator::Kind::identity;
  std::optional<FunctionSource> multiplier;
  friend bool operator==(const OperatorConfig&, const OperatorConfig&) = default;
};

struct CFormConfig {
  FunctionSource germ;
  OperatorConfig op;
  friend bool operator==(const CFormConfig&, const CFormConfig&) = default;
};

struct AttractorConfig {
  std::size_t k = 30;
  std::optional<double> resolution;
  friend bool operator==(const AttractorConfig&, const AttractorConfig&) = default;
};

struct RunConfig {
  std::optional<std::vector<double>> knots;
  /// Stored as given: a number or infinity.
  std::optional<double> p;
  std::optional<std::variant<ConstantScaling, SampledScaling>> scaling;
  std::optional<std::variant<LpFormConfig, CFormConfig>> form;
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<AttractorConfig> attractor;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> suite;

  bool has_spec() const noexcept { return knots && scaling && form; }
  double tolerance() const noexcept { return tol.value_or(kDefaultTolerance); }
  std::size_t iterations() const noexcept { return max_iter.value_or(kDefaultMaxIterations); }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigurationError on schema violations.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& config);

/// Default grid 2^10 n + 1, which puts equally spaced knots on grid points.
std::size_t default_grid(std::size_t intervals);

/// Grid size implied by the config: `grid`, else the first sampled array's
/// length, else the default.
std::size_t resolve_grid(const RunConfig& config);

/// Builds the spec. Throws ConfigurationError, DimensionError or ValidationError.
RBSpec build_spec(const RunConfig& config);

Json to_json(const SampledFunction& f);
Json to_json(const FixedPointResult& r);
Json to_json(const ValidationReport& report);
Json to_json(const GraphIFS& ifs);
Json to_json(const NormEstimate& e);
Json to_json(const SandwichReport& report);
Json to_json(const SequenceResult& result);
Json to_json(const SeriesResult& result);

/// Error object {"error": kind, "message": text, ...extra fields}.
Json error_json(const std::exception& e);

/// Decimal with 17 significant digits so every double round-trips.
std::string format_double(double v);

void write_function_csv(std::ostream& out, const SampledFunction& f);
void write_points_csv(std::ostream& out, const PointSet& points);

}  // namespace posifract
