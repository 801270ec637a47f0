#include <gtest/gtest.h>

#include <cmath>

#include "posifract/fractal_operator.hpp"
#include "posifract/generators.hpp"

using namespace posifract;

namespace {

constexpr std::size_t kGrid = 1025;
const Interval kUnit{0.0, 1.0};

FractalOperator make_fop(std::vector<double> s, SemiLinearOperator op,
                         std::vector<double> knots = {0.0, 0.5, 1.0}) {
  auto family = ContractionFamily::affine(KnotVector(std::move(knots)));
  auto scaling = ScalingFamily::constants(s, family.domain(), kGrid);
  return FractalOperator(std::move(family), std::move(scaling), std::move(op), 1e-12, 2000);
}

}  // namespace

TEST(SemiLinearOperator, EndpointAffineOfQuadratic) {
  const auto f = SampledFunction::from_function(kUnit, 33, [](double x) { return x * x + 1.0; });
  const auto lf = apply_L(SemiLinearOperator::endpoint_affine(), f);
  for (std::size_t k = 0; k < 33; ++k) EXPECT_NEAR(lf[k], lf.abscissa(k) + 1.0, 1e-15);
}

TEST(SemiLinearOperator, IdentityAndMultiplier) {
  const auto f = SampledFunction::from_function(kUnit, 17, [](double x) { return 1.0 + x; });
  EXPECT_EQ(sup_metric(apply_L(SemiLinearOperator::identity(), f), f), 0.0);
  const auto v = SampledFunction::constant(kUnit, 17, 0.5);
  const auto half = apply_L(SemiLinearOperator::multiplier(v), f);
  for (std::size_t k = 0; k < 17; ++k) EXPECT_DOUBLE_EQ(half[k], 0.5 * f[k]);
  const auto r = apply_identity_minus_L(SemiLinearOperator::identity(), f);
  for (double x : r) EXPECT_EQ(x, 0.0);
}

TEST(SemiLinearOperator, AdditiveAndHomogeneous) {
  Rng rng(9);
  for (const auto& op : {SemiLinearOperator::identity(), SemiLinearOperator::endpoint_affine()}) {
    for (int t = 0; t < 50; ++t) {
      const auto f = random_piecewise_linear(rng, kUnit, 65, 0.0, 3.0, 5);
      const auto g = random_piecewise_linear(rng, kUnit, 65, 0.0, 3.0, 5);
      EXPECT_LE(sup_metric(apply_L(op, combine(f, g, 2.0, 0.5)),
                           combine(apply_L(op, f), apply_L(op, g), 2.0, 0.5)),
                1e-14);
    }
  }
}

TEST(FractalMap, ZeroScalingIsIdentity) {
  const auto fop = make_fop({0.0, 0.0}, SemiLinearOperator::endpoint_affine());
  const auto f = SampledFunction::from_function(kUnit, kGrid, [](double x) { return 2.0 + x * x; });
  EXPECT_EQ(sup_metric(fractal_map(fop, f).fstar, f), 0.0);
}

TEST(FractalMap, IdentityOperatorFixesEveryGerm) {
  const auto fop = make_fop({0.3, 0.2}, SemiLinearOperator::identity());
  for (const auto& s : default_sample_set(kUnit, kGrid)) {
    EXPECT_LE(sup_metric(fractal_map(fop, s.f).fstar, s.f), 1e-11) << s.name;
  }
}

TEST(FractalMap, SemiLinearity) {
  const auto fop = make_fop({0.3, 0.2}, SemiLinearOperator::endpoint_affine(), {0.0, 0.4, 1.0});
  Rng rng(31);
  const double tol = fop.tolerance();
  for (int t = 0; t < 10; ++t) {
    const auto f = random_piecewise_linear(rng, kUnit, kGrid, 1.0, 2.0, 8);
    const auto g = random_piecewise_linear(rng, kUnit, kGrid, 1.0, 2.0, 8);
    const auto ff = fractal_map(fop, f).fstar;
    const auto fg = fractal_map(fop, g).fstar;
    EXPECT_LE(sup_metric(fractal_map(fop, combine(f, g, 1, 1)).fstar, combine(ff, fg, 1, 1)),
              10 * tol);
    for (double lambda : {0.0, 0.5, 2.0}) {
      const auto scaled = combine(f, f, lambda, 0.0);
      EXPECT_LE(sup_metric(fractal_map(fop, scaled).fstar, combine(ff, ff, lambda, 0.0)), 10 * tol);
    }
  }
}

TEST(FractalMap, InterpolatesAtKnots) {
  const auto fop = make_fop({0.4, 0.4}, SemiLinearOperator::endpoint_affine());
  const auto f = SampledFunction::from_function(kUnit, kGrid, [](double x) { return 1.0 + x * x; });
  const auto r = fractal_map(fop, f);
  for (double x : {0.0, 0.5, 1.0}) EXPECT_NEAR(r.fstar(x), f(x), 1e-10);
}

TEST(SampleSet, Composition) {
  const auto s = default_sample_set(kUnit, 65);
  ASSERT_EQ(s.size(), 27u);
  EXPECT_EQ(s[0].name, "constant_1");
  EXPECT_EQ(s[1].name, "constant_2.5");
  EXPECT_EQ(s[2].name, "t^0+1");
  for (const auto& n : s) EXPECT_GT(n.f.sup(), 0.0) << n.name;
  const auto again = default_sample_set(kUnit, 65);
  EXPECT_EQ(sup_metric(s.back().f, again.back().f), 0.0);
}

TEST(NormEstimate, IdentityHasNormOne) {
  const auto samples = default_sample_set(kUnit, kGrid);
  const auto e = operator_norm_estimate(SemiLinearOperator::identity(), samples, Exponent::infinity());
  EXPECT_DOUBLE_EQ(e.estimate, 1.0);
  EXPECT_EQ(e.used, samples.size());
  const auto im = identity_minus_L_norm_estimate(SemiLinearOperator::identity(), samples,
                                                 Exponent::infinity());
  EXPECT_EQ(im.estimate, 0.0);
}

TEST(NormEstimate, EndpointAffineIdentityMinusL) {
  const auto samples = default_sample_set(kUnit, kGrid);
  const auto im = identity_minus_L_norm_estimate(SemiLinearOperator::endpoint_affine(), samples,
                                                 Exponent::infinity());
  EXPECT_GT(im.estimate, 0.0);
  EXPECT_LE(im.estimate, 2.0);
}

TEST(NormEstimate, RejectsZeroSample) {
  std::vector<NamedFunction> samples{{"zero", SampledFunction::zero(kUnit, 9)}};
  EXPECT_THROW(operator_norm_estimate(SemiLinearOperator::identity(), samples, Exponent::infinity()),
               DomainError);
}

TEST(Sandwich, IdentityOperator) {
  const auto fop = make_fop({0.5, 0.5}, SemiLinearOperator::identity());
  const auto r = norm_sandwich_check(fop, default_sample_set(kUnit, kGrid));
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.estimate, 1.0, 1e-9);
  EXPECT_EQ(r.identity_minus_L, 0.0);
  EXPECT_DOUBLE_EQ(r.upper_bound, 1.0);
}

TEST(Sandwich, EndpointAffineOperator) {
  const auto fop = make_fop({0.3, 0.25}, SemiLinearOperator::endpoint_affine());
  const auto r = norm_sandwich_check(fop, default_sample_set(kUnit, kGrid));
  EXPECT_TRUE(r.lower_ok);
  EXPECT_TRUE(r.upper_ok);
  EXPECT_GE(r.estimate, 1.0 - kSandwichLowerSlack);
  EXPECT_LE(r.estimate, r.upper_bound + kSandwichUpperSlack);
  EXPECT_FALSE(r.per_function.empty());
  for (const auto& d : r.per_function) EXPECT_TRUE(d.ok) << d.name << " " << d.lhs << " > " << d.rhs;
}

TEST(Sandwich, RejectsNonContractive) {
  const auto fop = make_fop({1.0, 0.5}, SemiLinearOperator::identity());
  EXPECT_THROW(norm_sandwich_check(fop, default_sample_set(kUnit, kGrid)), NotContractiveError);
}

TEST(Sandwich, SkipsInadmissibleGerms) {
  // Large scaling makes q = f o l - S Lf negative for steep germs.
  const auto fop = make_fop({0.95, 0.95}, SemiLinearOperator::endpoint_affine());
  const auto r = norm_sandwich_check(fop, default_sample_set(kUnit, kGrid));
  EXPECT_FALSE(r.skipped.empty());
  EXPECT_TRUE(r.passed());
}
