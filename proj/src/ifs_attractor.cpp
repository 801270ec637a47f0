#include "posifract/ifs_attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace posifract {

double euclidean_distance(const Point2& a, const Point2& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

PointSet::PointSet(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("a point set must be nonempty");
}

double PointSet::diameter() const noexcept {
  double xlo = points_.front().x, xhi = xlo;
  double ylo = points_.front().y, yhi = ylo;
  for (const auto& p : points_) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  return std::hypot(xhi - xlo, yhi - ylo);
}

// ------------------------------------------------------------------ GraphIFS

GraphIFS::GraphIFS(ContractionFamily family, std::vector<SampledFunction> offsets,
                   ScalingFamily scaling, double theta)
    : family_(std::move(family)),
      offsets_(std::move(offsets)),
      scaling_(std::move(scaling)),
      theta_(theta) {
  if (offsets_.size() != family_.size() || scaling_.size() != family_.size()) {
    throw DimensionError("a graph IFS needs one offset and one scaling function per map");
  }
  for (const auto& q : offsets_) require_same_grid(scaling_[0], q);
  if (!(scaling_[0].domain() == family_.domain())) {
    throw DimensionError("IFS coefficients are not defined on the knot interval");
  }
  if (!(theta_ > 0.0) || !std::isfinite(theta_)) {
    throw ParameterError("theta must be a positive finite number");
  }
}

Point2 GraphIFS::apply(std::size_t i, const Point2& p) const {
  return {family_.apply(i, p.x), offsets_[i](p.x) + scaling_[i](p.x) * p.y};
}

double estimate_lipschitz_x(const std::vector<SampledFunction>& offsets,
                            const ScalingFamily& scaling, double y_max) {
  double lip = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const SampledFunction& q = offsets[i];
    const SampledFunction& s = scaling[i];
    const double h = q.spacing();
    for (double y : {0.0, y_max}) {
      for (std::size_t k = 0; k + 1 < q.size(); ++k) {
        const double f0 = q[k] + s[k] * y;
        const double f1 = q[k + 1] + s[k + 1] * y;
        lip = std::max(lip, std::abs(f1 - f0) / h);
      }
    }
  }
  return lip;
}

GraphIFS GraphIFS::with_estimated_theta(ContractionFamily family,
                                        std::vector<SampledFunction> offsets,
                                        ScalingFamily scaling, double y_max) {
  const double a = family.max_slope();
  const double lip = estimate_lipschitz_x(offsets, scaling, y_max);
  double theta = (1.0 - a) / (2.0 * lip);
  std::vector<std::string> warnings;
  if (!(lip > 0.0) || !std::isfinite(theta) || !(theta > 0.0)) {
    std::ostringstream msg;
    msg << "Lipschitz estimate L_F = " << lip << " gives no usable theta; using theta = 1";
    warnings.push_back(msg.str());
    theta = 1.0;
  }
  GraphIFS ifs(std::move(family), std::move(offsets), std::move(scaling), theta);
  ifs.lipschitz_x_ = lip;
  ifs.warnings_ = std::move(warnings);
  return ifs;
}

double d_theta(const Point2& a, const Point2& b, double theta) {
  return std::abs(a.x - b.x) + theta * std::abs(a.y - b.y);
}

double contraction_bound(const GraphIFS& ifs) {
  return std::max(0.5 * (1.0 + ifs.family().max_slope()), ifs.scaling().s_infinity());
}

// --------------------------------------------------------------- iteration

PointSet hutchinson_step(const GraphIFS& ifs, const PointSet& s) {
  std::vector<Point2> out;
  out.reserve(ifs.size() * s.size());
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    for (const auto& p : s.points()) out.push_back(ifs.apply(i, p));
  }
  return PointSet(std::move(out));
}

PointSet snap(const PointSet& s, double resolution, Point2 origin) {
  if (!(resolution > 0.0)) throw ParameterError("snapping resolution must be positive");
  std::vector<Point2> out;
  out.reserve(s.size());
  for (const auto& p : s.points()) {
    out.push_back({origin.x + std::round((p.x - origin.x) / resolution) * resolution,
                   origin.y + std::round((p.y - origin.y) / resolution) * resolution});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return PointSet(std::move(out));
}

PointSet attractor(const GraphIFS& ifs, const PointSet& a0, std::size_t k, double resolution) {
  if (k == 0) throw ParameterError("attractor iteration count k must be at least 1");
  const Interval d = ifs.family().domain();
  const Point2 origin{d.lo, 0.0};
  PointSet current = a0;
  for (std::size_t step = 0; step < k; ++step) {
    PointSet next = snap(hutchinson_step(ifs, current), resolution, origin);
    std::vector<Point2> pts = next.points();
    for (auto& p : pts) p.x = std::clamp(p.x, d.lo, d.hi);
    current = PointSet(std::move(pts));
  }
  return current;
}

// --------------------------------------------------------------- Hausdorff

namespace {

// sup_{a in A} inf_{b in B} |a - b|, with B sorted by x so the search can
// stop once the horizontal gap alone exceeds the best distance.
double directed_euclidean(const std::vector<Point2>& a, const std::vector<Point2>& sorted_b) {
  double worst = 0.0;
  for (const auto& p : a) {
    const auto mid = std::lower_bound(sorted_b.begin(), sorted_b.end(), p,
                                      [](const Point2& u, const Point2& v) { return u.x < v.x; });
    double best = std::numeric_limits<double>::infinity();
    for (auto it = mid; it != sorted_b.end(); ++it) {
      if (it->x - p.x >= best) break;
      best = std::min(best, euclidean_distance(p, *it));
    }
    for (auto it = mid; it != sorted_b.begin();) {
      --it;
      if (p.x - it->x >= best) break;
      best = std::min(best, euclidean_distance(p, *it));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Point2> sorted_by_x(const PointSet& s) {
  std::vector<Point2> v = s.points();
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double hausdorff(const PointSet& s1, const PointSet& s2) {
  const auto b1 = sorted_by_x(s1);
  const auto b2 = sorted_by_x(s2);
  return std::max(directed_euclidean(s1.points(), b2), directed_euclidean(s2.points(), b1));
}

double hausdorff(const PointSet& s1, const PointSet& s2, const PlaneMetric& metric) {
  auto directed = [&](const PointSet& a, const PointSet& b) {
    double worst = 0.0;
    for (const auto& p : a.points()) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : b.points()) best = std::min(best, metric(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s1, s2), directed(s2, s1));
}

PointSet graph_of(const SampledFunction& f) {
  std::vector<Point2> pts(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) pts[k] = {f.abscissa(k), f[k]};
  return PointSet(std::move(pts));
}

GraphIFS ifs_from_spec(const RBSpec& spec, std::optional<double> y_max) {
  const ValidationReport report = validate_spec(spec);
  if (!report.passed()) throw ValidationError(report.failure_summary());

  double ymax = 0.0;
  if (y_max) {
    ymax = *y_max;
  } else {
    const SampledFunction g0 = spec.is_c_form()
                                   ? spec.c_form()->germ
                                   : SampledFunction::zero(spec.domain(), spec.grid_size());
    ymax = fixed_point(spec, g0, kDefaultTolerance, 100 * kDefaultMaxIterations).fstar.sup();
  }

  std::vector<SampledFunction> offsets;
  for (const auto& q : spec.offsets_on_grid()) {
    offsets.emplace_back(spec.domain(), q, Continuity::measurable);
  }
  return GraphIFS::with_estimated_theta(spec.family(), std::move(offsets), spec.scaling(), ymax);
}

PointSet chaos_game(const GraphIFS& ifs, std::size_t points, std::uint64_t seed,
                    std::size_t burn_in) {
  if (points == 0) throw ParameterError("chaos game needs at least one point");
  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (std::size_t i = 0; i < ifs.size(); ++i) weights.push_back(ifs.family().slope(i));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  Point2 p{ifs.family().domain().lo, 0.0};
  std::vector<Point2> out;
  out.reserve(points);
  for (std::size_t step = 0; step < burn_in + points; ++step) {
    p = ifs.apply(pick(rng), p);
    if (step >= burn_in) out.push_back(p);
  }
  return PointSet(std::move(out));
}

}  // namespace posifract
