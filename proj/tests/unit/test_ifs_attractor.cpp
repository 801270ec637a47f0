#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "posifract/generators.hpp"
#include "posifract/ifs_attractor.hpp"

using namespace posifract;

namespace {

GraphIFS diagonal_ifs(std::size_t grid = 1025) {
  auto family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
  const Interval d = family.domain();
  std::vector<SampledFunction> q{SampledFunction::constant(d, grid, 0.0),
                                 SampledFunction::constant(d, grid, 0.5)};
  const double s[] = {0.5, 0.5};
  return GraphIFS(std::move(family), std::move(q), ScalingFamily::constants(s, d, grid), 1.0);
}

bool contains(const PointSet& s, Point2 p) {
  for (const auto& q : s.points())
    if (q == p) return true;
  return false;
}

}  // namespace

TEST(PointSet, RejectsEmpty) { EXPECT_THROW(PointSet({}), DomainError); }

TEST(Hausdorff, WorkedValues) {
  EXPECT_DOUBLE_EQ(hausdorff(PointSet({{0, 0}}), PointSet({{3, 4}})), 5.0);
  EXPECT_DOUBLE_EQ(hausdorff(PointSet({{0, 0}}), PointSet({{0, 0}, {1, 0}})), 1.0);
  const PointSet s({{0.1, 0.2}, {0.7, 0.3}});
  EXPECT_EQ(hausdorff(s, s), 0.0);
}

TEST(Hausdorff, MatchesBruteForceAndIsSymmetric) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<Point2> a(1 + t % 40), b(1 + (t * 7) % 55);
    for (auto& p : a) p = {u(rng), u(rng)};
    for (auto& p : b) p = {u(rng), u(rng)};
    const PointSet sa(a), sb(b);
    const double expected = oracle::hausdorff_brute(a, b);
    EXPECT_NEAR(hausdorff(sa, sb), expected, 1e-15);
    EXPECT_EQ(hausdorff(sa, sb), hausdorff(sb, sa));
    EXPECT_NEAR(hausdorff(sa, sb, euclidean_distance), expected, 1e-15);
  }
}

TEST(Hausdorff, TriangleInequality) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_set = [&] {
    std::vector<Point2> v(1 + rng() % 30);
    for (auto& p : v) p = {u(rng), u(rng)};
    return PointSet(v);
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = random_set(), b = random_set(), c = random_set();
    EXPECT_LE(hausdorff(a, c), hausdorff(a, b) + hausdorff(b, c) + 1e-15);
  }
}

TEST(Hausdorff, CustomMetric) {
  const auto taxicab = [](const Point2& a, const Point2& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
  };
  EXPECT_DOUBLE_EQ(hausdorff(PointSet({{0, 0}}), PointSet({{3, 4}}), taxicab), 7.0);
}

TEST(DTheta, WorkedValue) {
  EXPECT_DOUBLE_EQ(d_theta({0, 0}, {1, 2}, 0.25), 1.5);
}

TEST(GraphIFS, DiagonalHutchinsonStep) {
  const GraphIFS ifs = diagonal_ifs();
  const PointSet step = hutchinson_step(ifs, PointSet({{0.0, 0.0}}));
  EXPECT_EQ(step.size(), 2u);
  EXPECT_TRUE(contains(step, {0.0, 0.0}));
  EXPECT_TRUE(contains(step, {0.5, 0.5}));
}

TEST(GraphIFS, MapsRespectKnots) {
  const GraphIFS ifs = diagonal_ifs();
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(ifs.apply(i, {0.0, 0.0}).x, 0.5 * static_cast<double>(i));
    EXPECT_EQ(ifs.apply(i, {1.0, 1.0}).x, 0.5 * static_cast<double>(i + 1));
  }
}

TEST(GraphIFS, MapsContractInDTheta) {
  Rng rng(5);
  RandomSpecOptions opts;
  opts.cells_per_interval = 64;
  for (int t = 0; t < 10; ++t) {
    const RBSpec spec = random_c_spec(rng, opts);
    const auto fp = fixed_point(spec, spec.c_form()->germ, 1e-10, 2000);
    const GraphIFS ifs = ifs_from_spec(spec, fp.fstar.sup());
    const double c = contraction_bound(ifs);
    EXPECT_LT(c, 1.0);
    std::uniform_real_distribution<double> ux(spec.domain().lo, spec.domain().hi);
    std::uniform_real_distribution<double> uy(0.0, fp.fstar.sup());
    for (int s = 0; s < 200; ++s) {
      const Point2 a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)};
      for (std::size_t i = 0; i < ifs.size(); ++i) {
        EXPECT_LE(d_theta(ifs.apply(i, a), ifs.apply(i, b), ifs.theta()),
                  c * d_theta(a, b, ifs.theta()) * (1.0 + 1e-9) + 1e-12);
      }
    }
  }
}

TEST(GraphIFS, ThetaFallbackWarns) {
  auto family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
  const Interval d = family.domain();
  std::vector<SampledFunction> q(2, SampledFunction::constant(d, 65, 1.0));
  const double s[] = {0.5, 0.5};
  const GraphIFS ifs =
      GraphIFS::with_estimated_theta(family, q, ScalingFamily::constants(s, d, 65), 3.0);
  EXPECT_EQ(ifs.theta(), 1.0);
  EXPECT_FALSE(ifs.warnings().empty());
}

TEST(GraphIFS, EstimatedThetaFormula) {
  auto family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
  const Interval d = family.domain();
  std::vector<SampledFunction> q(2, SampledFunction::from_function(d, 65, [](double x) { return 2 * x; }));
  const double s[] = {0.5, 0.5};
  const GraphIFS ifs =
      GraphIFS::with_estimated_theta(family, q, ScalingFamily::constants(s, d, 65), 1.0);
  EXPECT_NEAR(ifs.lipschitz_x(), 2.0, 1e-12);
  EXPECT_NEAR(ifs.theta(), 0.5 / 4.0, 1e-12);
  EXPECT_TRUE(ifs.warnings().empty());
}

TEST(Snap, MovesPointsByAtMostHalfDiagonal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point2> pts(500);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const double res = 1.0 / 64.0;
  const PointSet s(pts);
  const PointSet snapped = snap(s, res);
  EXPECT_LE(snapped.size(), s.size());
  EXPECT_LE(hausdorff(s, snapped), res / std::sqrt(2.0) + 1e-15);
  EXPECT_EQ(snap(snapped, res).points(), snapped.points());
}

TEST(Attractor, ArgumentErrors) {
  const GraphIFS ifs = diagonal_ifs();
  EXPECT_THROW(attractor(ifs, PointSet({{0, 0}}), 0, 1e-3), ParameterError);
  EXPECT_THROW(attractor(ifs, PointSet({{0, 0}}), 3, 0.0), ParameterError);
}

TEST(Attractor, DiagonalApproachesLine) {
  const GraphIFS ifs = diagonal_ifs();
  const PointSet a = attractor(ifs, PointSet({{0.0, 0.0}}), 12, std::ldexp(1.0, -12));
  const auto line = graph_of(SampledFunction::from_function({0.0, 1.0}, 1025, [](double x) { return x; }));
  EXPECT_LE(hausdorff(a, line), 1e-3);
}

TEST(Attractor, MatchesGraphOfFixedPoint) {
  const auto family = ContractionFamily::affine(KnotVector({0.0, 0.5, 1.0}));
  const Interval d = family.domain();
  const auto f = SampledFunction::from_function(d, 2049, [](double x) { return x * x + 1.0; });
  const double s[] = {0.5, 0.5};
  const RBSpec spec(family, ScalingFamily::constants(s, d, 2049),
                    CForm{f, SemiLinearOperator::endpoint_affine()});
  const auto fp = fixed_point(spec, f, 1e-12, 500);
  const GraphIFS ifs = ifs_from_spec(spec, fp.fstar.sup());
  const double res = std::ldexp(1.0, -12);
  const PointSet a = attractor(ifs, PointSet({{0.0, 0.0}}), 30, res);
  const double h = 1.0 / 2048.0;
  EXPECT_LE(hausdorff(a, graph_of(fp.fstar)), 5.0 * (h + res));
}

TEST(GraphOf, ZeroFunction) {
  const PointSet g = graph_of(SampledFunction::zero({0.0, 1.0}, 3));
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], (Point2{0.0, 0.0}));
  EXPECT_EQ(g[1], (Point2{0.5, 0.0}));
  EXPECT_EQ(g[2], (Point2{1.0, 0.0}));
}

TEST(ChaosGame, DeterministicAndNearAttractor) {
  const GraphIFS ifs = diagonal_ifs();
  const PointSet a = chaos_game(ifs, 2000, 42);
  const PointSet b = chaos_game(ifs, 2000, 42);
  EXPECT_EQ(a.points(), b.points());
  for (const auto& p : a.points()) EXPECT_NEAR(p.x, p.y, 1e-9);
}
