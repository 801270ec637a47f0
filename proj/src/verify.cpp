#include "posifract/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "posifract/generators.hpp"

namespace posifract {

namespace {

constexpr std::size_t kSuiteMaxIterations = 5000;
constexpr double kTriangleSlack = 1e-12;

struct Property {
  std::string name;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();

  void record(double slack) {
    ++trials;
    if (!(slack >= 0.0)) ++violations;
    worst_slack = std::min(worst_slack, slack);
  }
  void record(bool ok) { record(ok ? 0.0 : -1.0); }

  bool passed() const noexcept { return trials > 0 && violations == 0; }

  Json json() const {
    Json j = Json::object();
    j["name"] = name;
    j["passed"] = passed();
    j["trials"] = trials;
    j["violations"] = violations;
    j["worst_slack"] = std::isfinite(worst_slack) ? Json(worst_slack) : Json(nullptr);
    return j;
  }
};

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  Property& operator[](const std::string& property) {
    auto it = index_.find(property);
    if (it == index_.end()) {
      index_[property] = properties_.size();
      properties_.push_back(Property{property});
      return properties_.back();
    }
    return properties_[it->second];
  }

  void note(const std::string& key, Json value) { extra_[key] = std::move(value); }

  SuiteResult finish() const {
    Json props = Json::array();
    bool ok = true;
    for (const auto& p : properties_) {
      props.push_back(p.json());
      ok = ok && p.passed();
    }
    Json report = Json::object();
    report["suite"] = name_;
    report["passed"] = ok;
    report["properties"] = props;
    for (const auto& [k, v] : extra_.items()) report[k] = v;
    return {name_, ok, report};
  }

 private:
  std::string name_;
  std::vector<Property> properties_;
  std::map<std::string, std::size_t> index_;
  Json extra_ = Json::object();
};

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Exponent random_exponent(Rng& rng) {
  static const double choices[] = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};
  return Exponent(choices[std::uniform_int_distribution<int>(0, 4)(rng)]);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

double ulp_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  const double ulp = std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale;
  return ulp > 0.0 ? std::abs(a - b) / ulp : 0.0;
}

template <class T, class Metric>
void metric_axioms(Suite& suite, const std::string& prefix, const T& x, const T& y, const T& z,
                   Metric d) {
  const double dxy = d(x, y);
  const double dyx = d(y, x);
  const double dxz = d(x, z);
  const double dyz = d(y, z);
  suite[prefix + ".nonnegative"].record(std::min({dxy, dxz, dyz}));
  suite[prefix + ".identity"].record(d(x, x) == 0.0);
  suite[prefix + ".symmetry"].record(dxy == dyx);
  suite[prefix + ".triangle"].record((dxy + dyz) * (1.0 + kTriangleSlack) - dxz);
}

// ------------------------------------------------------------------ metrics

SuiteResult metrics_suite(std::uint64_t seed) {
  Suite suite("metrics");
  Rng rng(seed);
  constexpr std::size_t triples = 1000;
  const Interval unit{0.0, 1.0};

  for (std::size_t t = 0; t < triples; ++t) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    auto vec = [&] {
      std::vector<double> v(len);
      for (auto& e : v) e = uniform(rng, 0.0, 10.0);
      return PositiveVector(v);
    };
    const PositiveVector x = vec(), y = vec(), z = vec();
    metric_axioms(suite, "euclidean", x, y, z, euclidean_metric);
    suite["euclidean.inner_induces_norm_4ulp"].record(
        4.0 - ulp_gap(euclidean_inner(x, x), euclidean_norm(x) * euclidean_norm(x)));

    const Exponent p = random_exponent(rng);
    auto seq = [&] {
      std::map<std::size_t, double> m;
      const int k = std::uniform_int_distribution<int>(0, 6)(rng);
      for (int e = 0; e < k; ++e) {
        m[std::uniform_int_distribution<std::size_t>(0, 20)(rng)] = uniform(rng, 0.0, 5.0);
      }
      return PositiveSequence(m, p);
    };
    metric_axioms(suite, "lp_sequence", seq(), seq(), seq(), lp_sequence_metric);

    auto fn = [&] {
      return random_piecewise_linear(rng, unit, 129, 0.0, 3.0,
                                     std::uniform_int_distribution<std::size_t>(1, 10)(rng));
    };
    const SampledFunction f = fn(), g = fn(), h = fn();
    metric_axioms(suite, "sup", f, g, h, sup_metric);
    const Exponent q = random_exponent(rng);
    metric_axioms(suite, "lp", f, g, h,
                  [q](const SampledFunction& a, const SampledFunction& b) {
                    return lp_metric(a, b, q);
                  });

    // max - min against |a - b|, on the samples and on the assembled metrics.
    bool same = true;
    for (std::size_t k = 0; k < f.size(); ++k) {
      same = same && bit_equal(std::max(f[k], g[k]) - std::min(f[k], g[k]), std::abs(f[k] - g[k]));
    }
    suite["max_min_equals_abs_bitwise"].record(same);
    suite["sup_metric_equals_abs_form"].record(
        bit_equal(sup_metric(f, g), sup_abs(signed_difference(f, g))));
    suite["lp_metric_equals_abs_form"].record(
        bit_equal(lp_metric(f, g, q), lp_abs(signed_difference(f, g), unit, q)));

    const SampledFunction w = (t % 2 == 0) ? g : h;
    const bool sums_equal = std::ranges::equal(combine(f, g, 1.0, 1.0).samples(),
                                               combine(f, w, 1.0, 1.0).samples());
    const bool parts_equal = std::ranges::equal(g.samples(), w.samples());
    suite["cancellation"].record(!sums_equal || parts_equal);

    const SampledFunction c = combine(f, g, uniform(rng, 0.0, 3.0), uniform(rng, 0.0, 3.0));
    suite["closure_nonnegative"].record(c.min());
  }
  return suite.finish();
}

// -------------------------------------------------------------- contraction

SuiteResult contraction_suite(const RunConfig& config, std::uint64_t seed) {
  Suite suite("contraction");
  Rng rng(seed);
  const double tol = config.tolerance();
  const std::size_t max_iter = std::max(config.iterations(), kSuiteMaxIterations);
  constexpr std::size_t specs = 20;

  auto check_history = [&](const FixedPointResult& r, const std::string& prefix) {
    for (std::size_t k = 1; k + 1 < r.history.size(); ++k) {
      if (r.history[k] > 0.0) {
        suite[prefix + ".history_ratio"].record(r.contraction_factor + 1e-6 -
                                                r.history[k + 1] / r.history[k]);
      }
    }
  };

  for (std::size_t t = 0; t < specs; ++t) {
    const RBSpec spec = random_c_spec(rng);
    const SampledFunction& f = spec.c_form()->germ;
    const FixedPointResult a = fixed_point(spec, f, tol, max_iter);
    check_history(a, "c_form");
    suite["c_form.knot_interpolation_1e-8"].record(1e-8 - interpolation_check(spec, a.fstar));
    suite["c_form.fstar_nonnegative"].record(a.fstar.min());
    const FixedPointResult b =
        fixed_point(spec, SampledFunction::zero(spec.domain(), spec.grid_size()), tol, max_iter);
    suite["c_form.initializer_independence"].record(10.0 * tol -
                                                    spec_distance(spec, a.fstar, b.fstar));

    const SampledFunction g = random_grid_function(rng, spec);
    const SampledFunction h = random_grid_function(rng, spec);
    suite["c_form.lipschitz_estimate"].record(
        contraction_factor(spec) * sup_metric(g, h) * (1.0 + 1e-12) -
        sup_metric(apply_rb(spec, g), apply_rb(spec, h)));
  }

  for (std::size_t t = 0; t < specs; ++t) {
    const Exponent p(static_cast<double>(1 + t % 3));
    const RBSpec spec = random_lp_spec(rng, p);
    const SampledFunction zero = SampledFunction::zero(spec.domain(), spec.grid_size());
    const FixedPointResult a = fixed_point(spec, zero, tol, max_iter);
    check_history(a, "lp_form");
    suite["lp_form.fstar_nonnegative"].record(a.fstar.min());
    const FixedPointResult b =
        fixed_point(spec, random_grid_function(rng, spec), tol, max_iter);
    suite["lp_form.initializer_independence"].record(10.0 * tol -
                                                     spec_distance(spec, a.fstar, b.fstar));

    // Lipschitz estimate in the gauge sum w |.|^p.
    const SampledFunction g = random_grid_function(rng, spec);
    const SampledFunction h = random_grid_function(rng, spec);
    const double before = lp_abs_power(signed_difference(g, h), spec.domain(), p.value());
    const double after = lp_abs_power(signed_difference(apply_rb(spec, g), apply_rb(spec, h)),
                                      spec.domain(), p.value());
    suite["lp_form.lipschitz_estimate"].record(contraction_factor(spec) * before * (1.0 + 1e-12) -
                                               after);
  }

  // Constant scalings: sum_i a_i s_i^p against the reduced max_i s_i^p.
  for (std::size_t t = 0; t < 100; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
    std::vector<double> knots{0.0};
    for (std::size_t i = 0; i < n; ++i) knots.push_back(knots.back() + uniform(rng, 0.1, 1.0));
    const ContractionFamily family = ContractionFamily::affine(KnotVector(knots));
    const double s = uniform(rng, 0.0, 0.99);
    const std::vector<double> constants(n, s);
    for (double pv : {1.0, 2.0}) {
      const RBSpec spec(family,
                        ScalingFamily::constants(constants, family.domain(), 9),
                        LpForm{std::vector<SampledFunction>(
                                   n, SampledFunction::constant(family.domain(), 9, 1.0)),
                               Exponent(pv)});
      suite["factor_reduction_4ulp"].record(4.0 - ulp_gap(contraction_factor(spec), std::pow(s, pv)));
    }
  }
  return suite.finish();
}

// ----------------------------------------------------------------- sandwich

SuiteResult sandwich_suite(const RunConfig& config, std::uint64_t seed) {
  Suite suite("sandwich");
  const double tol = config.tolerance();
  const std::size_t max_iter = std::max(config.iterations(), kSuiteMaxIterations);

  std::vector<std::pair<std::string, FractalOperator>> operators;
  if (config.has_spec() && std::holds_alternative<CFormConfig>(*config.form)) {
    const RBSpec spec = build_spec(config);
    operators.emplace_back(to_string(spec.c_form()->op.kind()),
                           FractalOperator(spec.family(), spec.scaling(), spec.c_form()->op, tol,
                                           max_iter));
  } else {
    const Interval unit{0.0, 1.0};
    const std::size_t grid = 513;
    const ContractionFamily family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
    const std::vector<double> s{0.5, 0.5};
    const ScalingFamily scaling = ScalingFamily::constants(s, unit, grid);
    operators.emplace_back("identity",
                           FractalOperator(family, scaling, SemiLinearOperator::identity(), tol,
                                           max_iter));
    operators.emplace_back("endpoint_affine",
                           FractalOperator(family, scaling, SemiLinearOperator::endpoint_affine(),
                                           tol, max_iter));
  }

  Json reports = Json::object();
  for (const auto& [name, fop] : operators) {
    const SampledFunction& ref = fop.scaling()[0];
    const auto samples = default_sample_set(ref.domain(), ref.size(), seed);
    const SandwichReport r = norm_sandwich_check(fop, samples);
    suite[name + ".lower_bound"].record(r.estimate - (1.0 - kSandwichLowerSlack));
    suite[name + ".upper_bound"].record(r.upper_bound + kSandwichUpperSlack - r.estimate);
    for (const auto& c : r.per_function) suite[name + ".displacement_bound"].record(c.rhs - c.lhs);
    if (fop.op().kind() == SemiLinearOperator::Kind::identity) {
      const SampledFunction one = SampledFunction::constant(ref.domain(), ref.size(), 1.0);
      suite[name + ".constant_one_fixed"].record(10.0 * tol -
                                                 sup_metric(fractal_map(fop, one).fstar, one));
    }
    reports[name] = to_json(r);
  }
  suite.note("operators", reports);
  return suite.finish();
}

// ------------------------------------------------------------ semilinearity

SuiteResult semilinearity_suite(const RunConfig& config, std::uint64_t seed) {
  Suite suite("semilinearity");
  Rng rng(seed);
  const double tol = config.tolerance();
  const std::size_t max_iter = std::max(config.iterations(), kSuiteMaxIterations);

  for (std::size_t t = 0; t < 10; ++t) {
    const RBSpec base = random_lp_spec(rng, Exponent(static_cast<double>(1 + t % 2)));
    const LpForm& lp = *base.lp_form();
    std::vector<SampledFunction> q2;
    for (std::size_t i = 0; i < lp.offsets.size(); ++i) {
      q2.push_back(random_grid_function(rng, base));
    }
    std::vector<SampledFunction> sum;
    for (std::size_t i = 0; i < q2.size(); ++i) sum.push_back(combine(lp.offsets[i], q2[i], 1.0, 1.0));
    const SampledFunction zero = SampledFunction::zero(base.domain(), base.grid_size());
    auto solve = [&](std::vector<SampledFunction> q) {
      return fixed_point(RBSpec(base.family(), base.scaling(), LpForm{std::move(q), lp.p}), zero,
                         tol, max_iter)
          .fstar;
    };
    const SampledFunction f1 = solve(lp.offsets);
    const SampledFunction f2 = solve(q2);
    const SampledFunction f12 = solve(sum);
    suite["fstar_additive"].record(10.0 * tol - sup_abs(signed_difference(f12, combine(f1, f2, 1.0, 1.0))));
    for (double lambda : {0.0, 0.5, 2.0}) {
      std::vector<SampledFunction> scaled;
      for (const auto& q : lp.offsets) scaled.push_back(combine(q, q, lambda, 0.0));
      const SampledFunction fl = solve(scaled);
      suite["fstar_homogeneous"].record(
          10.0 * tol - sup_abs(signed_difference(fl, combine(f1, f1, lambda, 0.0))));
    }
  }

  // Semi-linearity of each L on random pairs.
  const Interval unit{0.0, 1.0};
  const std::size_t grid = 257;
  const SampledFunction v = random_piecewise_linear(rng, unit, grid, 0.0, 2.0, 5);
  const SemiLinearOperator ops[] = {SemiLinearOperator::identity(),
                                    SemiLinearOperator::endpoint_affine(),
                                    SemiLinearOperator::multiplier(v)};
  for (std::size_t t = 0; t < 100; ++t) {
    const SampledFunction f = random_piecewise_linear(rng, unit, grid, 0.0, 3.0, 7);
    const SampledFunction g = random_piecewise_linear(rng, unit, grid, 0.0, 3.0, 7);
    const double lambda = uniform(rng, 0.0, 4.0);
    for (const auto& op : ops) {
      const std::string name = std::string("L.") + to_string(op.kind());
      const auto add_l = apply_L(op, combine(f, g, 1.0, 1.0));
      const auto l_add = combine(apply_L(op, f), apply_L(op, g), 1.0, 1.0);
      double worst = 0.0;
      for (std::size_t k = 0; k < grid; ++k) worst = std::max(worst, ulp_gap(add_l[k], l_add[k]));
      suite[name + ".additive_4ulp"].record(4.0 - worst);
      const auto hom_l = apply_L(op, combine(f, f, lambda, 0.0));
      const auto l_hom = combine(apply_L(op, f), f, lambda, 0.0);
      worst = 0.0;
      for (std::size_t k = 0; k < grid; ++k) worst = std::max(worst, ulp_gap(hom_l[k], l_hom[k]));
      suite[name + ".homogeneous_4ulp"].record(4.0 - worst);
    }
  }

  // Homogeneity of the fractal operator.
  const ContractionFamily family = ContractionFamily::affine(KnotVector({0.0, 0.4, 1.0}));
  const std::vector<double> s{0.3, 0.45};
  const FractalOperator fop(family, ScalingFamily::constants(s, unit, grid),
                            SemiLinearOperator::endpoint_affine(), tol, max_iter);
  for (std::size_t t = 0; t < 10; ++t) {
    const SampledFunction f = random_piecewise_linear(rng, unit, grid, 1.0, 2.0, 6);
    const double lambda = uniform(rng, 0.0, 3.0);
    const SampledFunction lhs = fractal_map(fop, combine(f, f, lambda, 0.0)).fstar;
    const SampledFunction rhs = combine(fractal_map(fop, f).fstar, f, lambda, 0.0);
    suite["fractal_operator_homogeneous"].record(10.0 * tol * std::max(1.0, lambda) -
                                                 sup_abs(signed_difference(lhs, rhs)));
  }
  return suite.finish();
}

// ------------------------------------------------------------------- series

ParameterSet scaled_set(const LpForm& lp, const ScalingFamily& s, double factor) {
  ParameterSet out{{}, s};
  for (const auto& q : lp.offsets) out.offsets.push_back(combine(q, q, factor, 0.0));
  return out;
}

SuiteResult series_suite(const RunConfig& config, std::uint64_t seed) {
  Suite suite("series");
  Rng rng(seed);
  const double tol = config.tolerance();
  const std::size_t max_iter = std::max(config.iterations(), kSuiteMaxIterations);
  Json profiles = Json::object();

  for (const Exponent p : {Exponent(1.0), Exponent::infinity()}) {
    const std::string mode = p.is_infinite() ? "sup" : "p1";
    const RBSpec base = random_lp_spec(rng, p, {2, 3, 128, 0.8});
    const LpForm& lp = *base.lp_form();
    std::vector<ParameterSet> members;
    for (int m = 1; m <= 20; ++m) members.push_back(scaled_set(lp, base.scaling(), 1.0 - std::ldexp(1.0, -m)));
    const ParameterSequence ps(base.family(), p, members, ParameterSet{lp.offsets, base.scaling()});
    const SequenceResult r = fractal_sequence(ps, 20, tol, max_iter);
    for (std::size_t m = 0; m < r.distances.size(); ++m) {
      suite[mode + ".stability_bound"].record(r.bounds[m] - r.distances[m]);
    }
    suite[mode + ".tail_decays"].record(r.tail_decays);
    suite[mode + ".geometric_rate"].record(std::ldexp(1.0, -19) * r.distances[0] / 0.5 +
                                           10.0 * tol - r.distances[19]);
    profiles[mode] = to_json(r);

    std::vector<ParameterSet> terms;
    const std::vector<double> zeros(base.family().size(), 0.0);
    const ScalingFamily none = ScalingFamily::constants(zeros, base.domain(), base.grid_size());
    // The first term carries the scaling, later terms only add offsets.
    for (int k = 1; k <= 20; ++k) {
      terms.push_back(scaled_set(lp, k == 1 ? base.scaling() : none, std::ldexp(1.0, -k)));
    }
    const SeriesResult sr = fractal_series(base.family(), p, terms, 20, tol, max_iter);
    suite[mode + ".series_cauchy_ratio"].record(0.51 - sr.max_ratio());
    profiles[mode + "_series"] = to_json(sr);
  }
  suite.note("profiles", profiles);
  return suite.finish();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"metrics", "contraction", "sandwich",
                                              "semilinearity", "series"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteResult run_suite(const std::string& name, const RunConfig& config, std::uint64_t seed) {
  if (name == "metrics") return metrics_suite(seed);
  if (name == "contraction") return contraction_suite(config, seed);
  if (name == "sandwich") return sandwich_suite(config, seed);
  if (name == "semilinearity") return semilinearity_suite(config, seed);
  if (name == "series") return series_suite(config, seed);
  throw ConfigurationError("unknown suite '" + name + "'");
}

}  // namespace posifract
