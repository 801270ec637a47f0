#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "posifract/generators.hpp"
#include "posifract/rb_core.hpp"

using namespace posifract;

namespace {

constexpr std::size_t kGrid = 2049;

double quadratic(double x) { return x * x + 1.0; }
double two(double) { return 2.0; }

RBSpec c_spec(std::vector<double> knots, std::vector<double> s, double (*germ)(double),
              SemiLinearOperator op = SemiLinearOperator::endpoint_affine(),
              std::size_t grid = kGrid) {
  auto family = ContractionFamily::affine(KnotVector(std::move(knots)));
  const Interval d = family.domain();
  auto f = SampledFunction::from_function(d, grid, germ);
  auto scaling = ScalingFamily::constants(s, d, grid);
  return RBSpec(std::move(family), std::move(scaling), CForm{std::move(f), std::move(op)});
}

RBSpec lp_spec(std::vector<double> q, std::vector<double> s, double p, std::size_t grid = 1025) {
  auto family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
  const Interval d = family.domain();
  std::vector<SampledFunction> offsets;
  for (double v : q) offsets.push_back(SampledFunction::constant(d, grid, v, Continuity::measurable));
  auto scaling = ScalingFamily::constants(s, d, grid);
  const Exponent e = std::isinf(p) ? Exponent::infinity() : Exponent(p);
  return RBSpec(std::move(family), std::move(scaling), LpForm{std::move(offsets), e});
}

}  // namespace

TEST(WorkedExample, DyadicValues) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  const auto r = fixed_point(spec, spec.c_form()->germ, 1e-12, 500);
  EXPECT_NEAR(r.fstar(0.25), 0.9375, 1e-10);
  EXPECT_NEAR(r.fstar(0.5), 1.25, 1e-10);
  EXPECT_NEAR(r.fstar(0.0), 1.0, 1e-12);
  EXPECT_NEAR(r.fstar(1.0), 2.0, 1e-12);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(WorkedExample, AgreesWithUnrolledRecursion) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  const auto r = fixed_point(spec, spec.c_form()->germ, 1e-12, 500);
  const auto lf = [](double x) { return 1.0 + x; };
  for (std::size_t k = 0; k < kGrid; k += 64) {
    const double x = r.fstar.abscissa(k);
    const double expected = oracle::selfref_value({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic, lf, x, 40);
    EXPECT_NEAR(r.fstar[k], expected, 1e-9) << "x = " << x;
  }
}

TEST(WorkedExample, GermImageIsEndpointLine) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  const auto& lf = spec.germ_image();
  for (std::size_t k = 0; k < kGrid; k += 100) EXPECT_NEAR(lf[k], 1.0 + lf.abscissa(k), 1e-15);
}

TEST(ApplyRB, MatchesPointwiseFormula) {
  const RBSpec spec = c_spec({0.0, 0.25, 1.0}, {0.3, 0.6}, quadratic);
  Rng rng(1);
  const auto g = random_grid_function(rng, spec);
  const auto tg = apply_rb(spec, g);
  const auto& fam = spec.family();
  for (std::size_t k = 0; k < kGrid; k += 37) {
    const double x = tg.abscissa(k);
    const std::size_t i = fam.locate(x);
    const double u = fam.invert(i, x);
    const double s = i == 0 ? 0.3 : 0.6;
    const double expected = quadratic(x) + s * (g(u) - (1.0 + u));
    EXPECT_NEAR(tg[k], expected, 1e-12);
  }
}

TEST(ApplyRB, GridMismatchIsDimensionError) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  EXPECT_THROW(apply_rb(spec, SampledFunction::zero(spec.domain(), 17)), DimensionError);
}

TEST(Positivity, CounterexampleIsRejected) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, [](double x) { return x * x; });
  const ValidationReport report = validate_spec(spec);
  EXPECT_FALSE(report.passed());
  const ValidationCheck* q = report.find("q_nonnegative");
  ASSERT_NE(q, nullptr);
  EXPECT_FALSE(q->passed);
  EXPECT_LT(q->measured, 0.0);
  EXPECT_FALSE(q->detail.empty());
  EXPECT_NE(report.failure_summary().find("q_nonnegative"), std::string::npos);
  EXPECT_THROW(fixed_point(spec, spec.c_form()->germ), ValidationError);
}

TEST(Positivity, ApplyReportsNegativeSample) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, [](double x) { return x * x; });
  try {
    apply_rb(spec, SampledFunction::zero(spec.domain(), kGrid));
    FAIL() << "expected PositivityError";
  } catch (const PositivityError& e) {
    EXPECT_LT(e.value(), 0.0);
    EXPECT_GE(e.x(), 0.0);
    EXPECT_LE(e.x(), 1.0);
  }
}

TEST(Validation, WorkedExamplePasses) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  const auto report = validate_spec(spec);
  EXPECT_TRUE(report.passed()) << report.failure_summary();
  EXPECT_NE(report.find("join_up"), nullptr);
  EXPECT_NE(report.find("contractive"), nullptr);
}

TEST(Validation, NonContractiveScaling) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {1.0, 0.5}, quadratic, SemiLinearOperator::identity());
  EXPECT_FALSE(validate_spec(spec).find("contractive")->passed);
  EXPECT_THROW(fixed_point(spec, spec.c_form()->germ), NotContractiveError);
}

TEST(ContractionFactor, LpWorkedValues) {
  EXPECT_DOUBLE_EQ(contraction_factor(lp_spec({0.0, 0.5}, {0.6, 0.6}, 1.0)), 0.6);
  EXPECT_DOUBLE_EQ(contraction_factor(lp_spec({0.0, 0.5}, {0.6, 0.6}, 2.0)), 0.36);
  EXPECT_DOUBLE_EQ(contraction_factor(lp_spec({0.0, 0.5}, {0.6, 0.3}, INFINITY)), 0.6);
  EXPECT_DOUBLE_EQ(metric_contraction_rate(lp_spec({0.0, 0.5}, {0.6, 0.6}, 2.0)), 0.6);
  EXPECT_DOUBLE_EQ(contraction_factor(c_spec({0.0, 0.5, 1.0}, {0.2, 0.7}, quadratic)), 0.7);
}

TEST(ContractionFactor, LpAllowsScalingAboveOne) {
  // a_i S_i^p = 0.25 * 1.2 + 0.75 * 0.5 < 1 even though S_0 > 1.
  auto family = ContractionFamily::affine(KnotVector({0.0, 0.25, 1.0}));
  const Interval d = family.domain();
  std::vector<SampledFunction> q(2, SampledFunction::constant(d, 1025, 0.1, Continuity::measurable));
  const double s[] = {1.2, 0.5};
  RBSpec spec(std::move(family), ScalingFamily::constants(s, d, 1025), LpForm{q, Exponent(1.0)});
  EXPECT_NEAR(contraction_factor(spec), 0.675, 1e-15);
  EXPECT_NO_THROW(fixed_point(spec, SampledFunction::zero(d, 1025), 1e-10, 2000));
}

TEST(FixedPoint, ZeroScalingReturnsGermExactly) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.0, 0.0}, quadratic);
  const auto r = fixed_point(spec, spec.c_form()->germ);
  const auto& f = spec.c_form()->germ;
  ASSERT_EQ(r.fstar.size(), f.size());
  for (std::size_t k = 0; k < f.size(); ++k) EXPECT_EQ(r.fstar[k], f[k]);
}

TEST(FixedPoint, IdentityOperatorFixesGerm) {
  const RBSpec spec = c_spec({0.0, 0.3, 1.0}, {0.4, 0.8}, quadratic, SemiLinearOperator::identity());
  const auto r = fixed_point(spec, SampledFunction::zero(spec.domain(), kGrid), 1e-12, 1000);
  EXPECT_LE(sup_metric(r.fstar, spec.c_form()->germ), 1e-11);
}

TEST(FixedPoint, ArgumentErrors) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  const auto& g0 = spec.c_form()->germ;
  EXPECT_THROW(fixed_point(spec, g0, 0.0), ParameterError);
  EXPECT_THROW(fixed_point(spec, g0, 1e-10, 0), ParameterError);
}

TEST(FixedPoint, BudgetExhaustionCarriesHistory) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.9, 0.9}, two, SemiLinearOperator::identity());
  try {
    fixed_point(spec, SampledFunction::constant(spec.domain(), kGrid, 5.0), 1e-14, 3);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.history().size(), 3u);
  }
}

TEST(FixedPoint, StoppingRuleBoundsTrueError) {
  const RBSpec spec = c_spec({0.0, 0.5, 1.0}, {0.9, 0.9}, two, SemiLinearOperator::identity());
  const auto r = fixed_point(spec, SampledFunction::constant(spec.domain(), kGrid, 5.0), 1e-8, 1000);
  EXPECT_LE(sup_metric(r.fstar, spec.c_form()->germ), 1e-8);
}

TEST(KnotErrors, CFormOnly) {
  const RBSpec spec = lp_spec({0.0, 0.5}, {0.5, 0.5}, 2.0);
  const auto z = SampledFunction::zero(spec.domain(), 1025);
  EXPECT_THROW(knot_errors(spec, z), ConfigurationError);
  EXPECT_THROW(spec.germ_image(), ConfigurationError);
}

TEST(SpecDistance, UsesSpecMetric) {
  const RBSpec lp = lp_spec({0.0, 0.5}, {0.5, 0.5}, 1.0);
  const auto one = SampledFunction::constant(lp.domain(), 1025, 1.0);
  const auto zero = SampledFunction::zero(lp.domain(), 1025);
  EXPECT_DOUBLE_EQ(spec_distance(lp, one, zero), 1.0);
  EXPECT_EQ(lp.metric_exponent().value(), 1.0);
  const RBSpec c = c_spec({0.0, 0.5, 1.0}, {0.5, 0.5}, quadratic);
  EXPECT_TRUE(c.metric_exponent().is_infinite());
}

TEST(DiagonalLp, FixedPointIsIdentityLine) {
  // q = (0, 0.5), S = 0.5 on two halves has fixed point g(x) = x.
  const RBSpec spec = lp_spec({0.0, 0.5}, {0.5, 0.5}, INFINITY);
  const auto r = fixed_point(spec, SampledFunction::zero(spec.domain(), 1025), 1e-12, 500);
  for (std::size_t k = 0; k < 1025; k += 16) EXPECT_NEAR(r.fstar[k], r.fstar.abscissa(k), 1e-3);
}

class ContractionProperty : public ::testing::Test {
 protected:
  static constexpr int kSpecs = 15;
  Rng rng{20240607};
};

TEST_F(ContractionProperty, CFormHistoryRatios) {
  for (int t = 0; t < kSpecs; ++t) {
    const RBSpec spec = random_c_spec(rng);
    const double factor = contraction_factor(spec);
    const auto g0 = random_grid_function(rng, spec);
    const auto r = fixed_point(spec, g0, 1e-10, 2000);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      if (r.history[k - 1] > 1e-13) EXPECT_LE(r.history[k] / r.history[k - 1], factor + 1e-6);
    }
    EXPECT_LE(interpolation_check(spec, r.fstar), 1e-8);
    EXPECT_GE(r.fstar.min(), 0.0);
  }
}

TEST_F(ContractionProperty, LpHistoryRatios) {
  for (int t = 0; t < kSpecs; ++t) {
    const Exponent p(1.0 + static_cast<double>(t % 3));
    const RBSpec spec = random_lp_spec(rng, p);
    const double factor = contraction_factor(spec);
    EXPECT_LT(factor, 1.0);
    const auto r = fixed_point(spec, random_grid_function(rng, spec), 1e-10, 2000);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      if (r.history[k - 1] > 1e-13) EXPECT_LE(r.history[k] / r.history[k - 1], factor + 1e-6);
    }
  }
}

TEST_F(ContractionProperty, OperatorIsLipschitzWithFactor) {
  for (int t = 0; t < kSpecs; ++t) {
    const RBSpec spec = random_c_spec(rng);
    const auto g = random_grid_function(rng, spec);
    const auto h = random_grid_function(rng, spec);
    EXPECT_LE(sup_metric(apply_rb(spec, g), apply_rb(spec, h)),
              contraction_factor(spec) * sup_metric(g, h) + 1e-12);
  }
}
