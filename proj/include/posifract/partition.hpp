#pragma once

// Knot sequences x0 < x1 < ... < xn in R_0^+ and the contractive maps
// l_i : [x0, xn] -> [x_{i-1}, x_i] with l_i(x0) = x_{i-1}, l_i(xn) = x_i.
//
// Intervals are indexed from 0 in code: map i covers [knots[i], knots[i+1]].

#include <cstddef>
#include <span>
#include <vector>

#include "posifract/semi_spaces.hpp"

namespace posifract {

class KnotVector {
 public:
  /// Requires at least three strictly increasing nonnegative knots (two intervals).
  explicit KnotVector(std::vector<double> knots);

  std::span<const double> knots() const noexcept { return knots_; }
  double operator[](std::size_t j) const { return knots_[j]; }
  /// Number of subintervals n.
  std::size_t intervals() const noexcept { return knots_.size() - 1; }
  Interval domain() const noexcept { return {knots_.front(), knots_.back()}; }

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

 private:
  std::vector<double> knots_;
};

/// The family (l_i) for a knot vector. Only affine maps l_i(x) = a_i x + b_i
/// are built in; `derivative_sup` is what the contraction estimates consume,
/// so a non-affine family only needs to supply apply / invert / derivative_sup.
class ContractionFamily {
 public:
  static ContractionFamily affine(KnotVector knots);

  const KnotVector& knots() const noexcept { return knots_; }
  Interval domain() const noexcept { return knots_.domain(); }
  std::size_t size() const noexcept { return knots_.intervals(); }

  double slope(std::size_t i) const { return slope_.at(i); }
  double offset(std::size_t i) const { return offset_.at(i); }
  /// ||D l_i||_inf
  double derivative_sup(std::size_t i) const { return slope_.at(i); }
  double max_slope() const noexcept;

  /// l_i(x). Endpoints map exactly onto the knots.
  double apply(std::size_t i, double x) const;
  /// l_i^{-1}(y) for y in [x_{i-1}, x_i]; throws DomainError otherwise.
  double invert(std::size_t i, double y) const;

  /// Interval index under the half-open convention [x_{i-1}, x_i) for all
  /// but the last interval, which is closed. Throws DomainError outside I.
  std::size_t locate(double x) const;

  friend bool operator==(const ContractionFamily&, const ContractionFamily&) = default;

 private:
  explicit ContractionFamily(KnotVector knots);

  KnotVector knots_;
  std::vector<double> slope_;
  std::vector<double> offset_;
};

}  // namespace posifract
