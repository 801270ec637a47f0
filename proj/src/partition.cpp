#include "posifract/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posifract {

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 3) {
    throw ConfigurationError("a partition needs at least two subintervals (three knots)");
  }
  for (std::size_t j = 0; j < knots_.size(); ++j) {
    if (!std::isfinite(knots_[j]) || knots_[j] < 0.0) {
      std::ostringstream msg;
      msg << "knot " << j << " = " << knots_[j] << " is not a finite nonnegative real";
      throw ValidationError(msg.str());
    }
    if (j > 0 && !(knots_[j - 1] < knots_[j])) {
      std::ostringstream msg;
      msg << "knots must be strictly increasing: x" << j - 1 << " = " << knots_[j - 1] << ", x"
          << j << " = " << knots_[j];
      throw ValidationError(msg.str());
    }
  }
}

ContractionFamily::ContractionFamily(KnotVector knots) : knots_(std::move(knots)) {
  const double x0 = knots_.knots().front();
  const double width = knots_.domain().width();
  for (std::size_t i = 0; i < knots_.intervals(); ++i) {
    const double a = (knots_[i + 1] - knots_[i]) / width;
    slope_.push_back(a);
    offset_.push_back(knots_[i] - a * x0);
  }
}

ContractionFamily ContractionFamily::affine(KnotVector knots) {
  return ContractionFamily(std::move(knots));
}

double ContractionFamily::max_slope() const noexcept {
  return *std::max_element(slope_.begin(), slope_.end());
}

double ContractionFamily::apply(std::size_t i, double x) const {
  if (i >= size()) throw DomainError("map index out of range");
  const Interval d = domain();
  if (x == d.lo) return knots_[i];
  if (x == d.hi) return knots_[i + 1];
  const double t = (x - d.lo) / d.width();
  return knots_[i] + (knots_[i + 1] - knots_[i]) * t;
}

double ContractionFamily::invert(std::size_t i, double y) const {
  if (i >= size()) throw DomainError("map index out of range");
  const double lo = knots_[i];
  const double hi = knots_[i + 1];
  if (!(y >= lo && y <= hi)) {
    std::ostringstream msg;
    msg << "point " << y << " is outside the image [" << lo << ", " << hi << "] of map " << i;
    throw DomainError(msg.str());
  }
  const Interval d = domain();
  if (y == lo) return d.lo;
  if (y == hi) return d.hi;
  const double x = d.lo + d.width() * ((y - lo) / (hi - lo));
  return std::clamp(x, d.lo, d.hi);
}

std::size_t ContractionFamily::locate(double x) const {
  const Interval d = domain();
  if (!(x >= d.lo && x <= d.hi)) {
    std::ostringstream msg;
    msg << "point " << x << " is outside [" << d.lo << ", " << d.hi << "]";
    throw DomainError(msg.str());
  }
  const auto k = knots_.knots();
  const auto it = std::upper_bound(k.begin(), k.end(), x);
  const auto i = static_cast<std::size_t>(it - k.begin()) - 1;
  return std::min(i, size() - 1);
}

}  // namespace posifract
