#pragma once

// Elements, metrics, norms and inner products of the semi-vector spaces
// (R_0^+)^n, l_p^+, C^+[a,b] and L_p^+[a,b].
//
// All metrics are written in the max-min form; for reals this coincides
// bit-exactly with |a - b|, which the tests check. Summations run left to
// right in index order so every result is reproducible.

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "posifract/error.hpp"

namespace posifract {

/// Integrability exponent p in [1, inf].
class Exponent {
 public:
  /// Throws ParameterError unless p >= 1 (infinity allowed).
  explicit Exponent(double p);

  static Exponent infinity();

  bool is_infinite() const noexcept;
  double value() const noexcept { return p_; }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  double p_;
};

/// Element of the Euclidean semi-vector space (R_0^+)^n.
class PositiveVector {
 public:
  explicit PositiveVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  PositiveVector scaled(double lambda) const;

  friend PositiveVector operator+(const PositiveVector& u, const PositiveVector& v);
  friend bool operator==(const PositiveVector&, const PositiveVector&) = default;

 private:
  std::vector<double> values_;
};

double euclidean_norm(const PositiveVector& x);
double euclidean_metric(const PositiveVector& x, const PositiveVector& y);
double euclidean_inner(const PositiveVector& x, const PositiveVector& y);

/// Finitely supported element of l_p^+(N). Missing indices are zero.
class PositiveSequence {
 public:
  PositiveSequence(std::map<std::size_t, double> values, Exponent p);

  const std::map<std::size_t, double>& values() const noexcept { return values_; }
  Exponent exponent() const noexcept { return p_; }
  double at(std::size_t index) const;

 private:
  std::map<std::size_t, double> values_;
  Exponent p_;
};

double lp_sequence_metric(const PositiveSequence& a, const PositiveSequence& b);

/// Closed interval [lo, hi] inside R_0^+ with lo < hi.
struct Interval {
  double lo;
  double hi;

  double width() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

void validate_interval(const Interval& domain);

enum class Continuity { continuous, measurable };

/// A nonnegative function on [x0, xn] stored as samples on the uniform grid
/// x0 + k (xn - x0) / (N - 1). Off-grid reads interpolate linearly, so the
/// same representation serves both C^+ and L_p^+; `continuity()` only
/// records which space the value is meant to live in.
class SampledFunction {
 public:
  SampledFunction(Interval domain, std::vector<double> samples,
                  Continuity continuity = Continuity::continuous);

  static SampledFunction constant(Interval domain, std::size_t grid, double value,
                                  Continuity continuity = Continuity::continuous);
  static SampledFunction zero(Interval domain, std::size_t grid);

  template <class F>
  static SampledFunction from_function(Interval domain, std::size_t grid, F&& f,
                                       Continuity continuity = Continuity::continuous) {
    validate_interval(domain);
    if (grid < 2) throw DimensionError("a sampled function needs at least 2 samples");
    std::vector<double> samples(grid);
    for (std::size_t k = 0; k < grid; ++k) samples[k] = f(grid_abscissa(domain, grid, k));
    return SampledFunction(domain, std::move(samples), continuity);
  }

  /// Abscissa of sample k; the last abscissa is exactly domain.hi.
  static double grid_abscissa(const Interval& domain, std::size_t grid, std::size_t k);

  const Interval& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t k) const { return samples_[k]; }
  Continuity continuity() const noexcept { return continuity_; }

  double abscissa(std::size_t k) const { return grid_abscissa(domain_, size(), k); }
  double spacing() const noexcept;

  /// Piecewise-linear evaluation. Throws DomainError outside the domain
  /// (a relative slack of 1e-12 absorbs rounding in mapped abscissae).
  double operator()(double x) const;

  /// Largest sample, i.e. the sup norm of the interpolant.
  double sup() const noexcept;
  double min() const noexcept;

  bool same_grid(const SampledFunction& other) const noexcept;

  SampledFunction with_continuity(Continuity continuity) const;

 private:
  Interval domain_;
  std::vector<double> samples_;
  Continuity continuity_;
};

/// Throws DimensionError when f and g are not on the same grid.
void require_same_grid(const SampledFunction& f, const SampledFunction& g);

/// Composite trapezoidal weights for an N-point uniform grid on `domain`.
std::vector<double> trapezoid_weights(const Interval& domain, std::size_t grid);

// Norms of signed grid data. Used where an operator leaves the semi-space
// (for instance g - Lg) and only its size matters.
double sup_abs(std::span<const double> values);
/// sum_k w_k |v_k|^p with trapezoid weights; no 1/p root.
double lp_abs_power(std::span<const double> values, const Interval& domain, double p);
/// Rooted L_p norm of signed grid data, or the grid sup for p = inf.
double lp_abs(std::span<const double> values, const Interval& domain, Exponent p);

double sup_metric(const SampledFunction& f, const SampledFunction& g);
/// (integral of (max - min)^p)^(1/p) by the trapezoid rule; p = inf gives the grid sup.
double lp_metric(const SampledFunction& f, const SampledFunction& g, Exponent p);
/// Distance to the zero function: sup norm for p = inf, rooted L_p norm otherwise.
double norm_from_zero(const SampledFunction& f, Exponent p);

/// Pointwise alpha f + beta g with alpha, beta >= 0.
SampledFunction combine(const SampledFunction& f, const SampledFunction& g, double alpha,
                        double beta);

/// Pointwise f - g as plain signed data.
std::vector<double> signed_difference(const SampledFunction& f, const SampledFunction& g);

}  // namespace posifract
