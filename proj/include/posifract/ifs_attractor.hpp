#pragma once

// The graph IFS of an RB operator, deterministic attractor rendering and the
// Hausdorff-Pompeiu distance between finite point sets.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "posifract/partition.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/semi_spaces.hpp"

namespace posifract {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

double euclidean_distance(const Point2& a, const Point2& b) noexcept;

/// Nonempty finite point cloud in the plane.
class PointSet {
 public:
  explicit PointSet(std::vector<Point2> points);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point2>& points() const noexcept { return points_; }
  const Point2& operator[](std::size_t k) const { return points_[k]; }

  /// Largest Euclidean extent of the bounding box diagonal.
  double diameter() const noexcept;

 private:
  std::vector<Point2> points_;
};

/// w_i(x, y) = (l_i(x), q_i(x) + S_i(x) y) for i = 0..n-1.
class GraphIFS {
 public:
  GraphIFS(ContractionFamily family, std::vector<SampledFunction> offsets,
           ScalingFamily scaling, double theta);

  const ContractionFamily& family() const noexcept { return family_; }
  const std::vector<SampledFunction>& offsets() const noexcept { return offsets_; }
  const ScalingFamily& scaling() const noexcept { return scaling_; }
  std::size_t size() const noexcept { return family_.size(); }

  double theta() const noexcept { return theta_; }
  /// Lipschitz bound of the F_i in x used to pick theta.
  double lipschitz_x() const noexcept { return lipschitz_x_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  Point2 apply(std::size_t i, const Point2& p) const;

  /// Sets theta = (1 - a) / (2 L_F) from the grid Lipschitz estimate of the
  /// F_i over y in [0, y_max]. Falls back to theta = 1 (with a warning) when
  /// the estimate is zero or not finite.
  static GraphIFS with_estimated_theta(ContractionFamily family,
                                       std::vector<SampledFunction> offsets,
                                       ScalingFamily scaling, double y_max);

 private:
  ContractionFamily family_;
  std::vector<SampledFunction> offsets_;
  ScalingFamily scaling_;
  double theta_;
  double lipschitz_x_ = 0.0;
  std::vector<std::string> warnings_;
};

/// max over grid pairs and y in {0, y_max} of |F_i(x1, y) - F_i(x2, y)| / |x1 - x2|.
double estimate_lipschitz_x(const std::vector<SampledFunction>& offsets,
                            const ScalingFamily& scaling, double y_max);

/// d_theta((x1, y1), (x2, y2)) = |x1 - x2| + theta |y1 - y2|
double d_theta(const Point2& a, const Point2& b, double theta);

/// Contraction constant of every w_i in d_theta: max((1 + a) / 2, S_inf).
double contraction_bound(const GraphIFS& ifs);

PointSet hutchinson_step(const GraphIFS& ifs, const PointSet& s);

/// Rounds every point to the lattice origin + resolution * Z^2 and removes
/// duplicates. Moves each point by at most resolution / sqrt(2).
PointSet snap(const PointSet& s, double resolution, Point2 origin = {});

/// k Hutchinson steps, each followed by snapping to `resolution` (anchored at
/// (x0, 0)). The x coordinate is kept inside the domain.
PointSet attractor(const GraphIFS& ifs, const PointSet& a0, std::size_t k, double resolution);

using PlaneMetric = std::function<double(const Point2&, const Point2&)>;

/// Hausdorff-Pompeiu distance in the Euclidean plane metric.
double hausdorff(const PointSet& s1, const PointSet& s2);
/// Hausdorff-Pompeiu distance for an arbitrary metric, by brute force.
double hausdorff(const PointSet& s1, const PointSet& s2, const PlaneMetric& metric);

PointSet graph_of(const SampledFunction& f);

/// Graph IFS of a valid spec. q_i are the spec's offsets (derived for the C
/// form). When y_max is not given it is taken as ||fstar||_inf.
GraphIFS ifs_from_spec(const RBSpec& spec, std::optional<double> y_max = std::nullopt);

/// Random-iteration rendering. Not used by any check.
PointSet chaos_game(const GraphIFS& ifs, std::size_t points, std::uint64_t seed,
                    std::size_t burn_in = 64);

}  // namespace posifract
