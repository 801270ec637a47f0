#pragma once

// Sequences and series of L_p-form fractal functions whose parameters
// (q_i, S_i) converge. p = inf runs the same machinery in the sup metric.

#include <cstddef>
#include <vector>

#include "posifract/partition.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/semi_spaces.hpp"

namespace posifract {

struct ParameterSet {
  std::vector<SampledFunction> offsets;  // q_i
  ScalingFamily scaling;                 // S_i
};

class ParameterSequence {
 public:
  /// Throws DimensionError on shape mismatches and ValidationError when the
  /// parameter distances to the limit increase after `tail_start`.
  ParameterSequence(ContractionFamily family, Exponent p, std::vector<ParameterSet> members,
                    ParameterSet limit, std::size_t tail_start = 0);

  const ContractionFamily& family() const noexcept { return family_; }
  Exponent exponent() const noexcept { return p_; }
  const std::vector<ParameterSet>& members() const noexcept { return members_; }
  const ParameterSet& limit() const noexcept { return limit_; }
  std::size_t tail_start() const noexcept { return tail_start_; }

  RBSpec member_spec(std::size_t m) const;
  RBSpec limit_spec() const;

  /// max_i d_p(q_{m,i}, q_i) and max_i d_inf(S_{m,i}, S_i) for member m.
  double offset_distance(std::size_t m) const;
  double scaling_distance(std::size_t m) const;

 private:
  ContractionFamily family_;
  Exponent p_;
  std::vector<ParameterSet> members_;
  ParameterSet limit_;
  std::size_t tail_start_;
};

/// Upper bound on d(f_m, f) from perturbing the parameters:
///   (sum_i a_i (d(q_{m,i}, q_i) + d_inf(S_{m,i}, S_i) ||f||)^p)^(1/p) / (1 - c^(1/p))
/// with c = max(factor(S_m), factor(S)); for p = inf the weighted sum is a max
/// and c^(1/p) = c.
double stability_bound(const ParameterSequence& ps, std::size_t m, const SampledFunction& f,
                       double c_bar);

struct SequenceResult {
  std::vector<FixedPointResult> members;
  FixedPointResult limit;
  std::vector<double> distances;  // d(f_m, f)
  std::vector<double> bounds;     // stability bound + 10 tol
  std::vector<bool> within_bound;
  double c_bar = 0.0;
  /// Max of the last quarter of the distance profile <= min of the first quarter.
  bool tail_decays = false;

  bool all_within_bound() const noexcept;
};

/// Fixed points f_1..f_M and f, the distance profile and the stability bound.
/// Member failures are rethrown as ValidationError naming m (1-based).
SequenceResult fractal_sequence(const ParameterSequence& ps, std::size_t M,
                                double tol = kDefaultTolerance,
                                std::size_t max_iter = kDefaultMaxIterations);

struct SeriesResult {
  /// Fixed points of the partial sums k = 1..K; the last is the K-term sum.
  std::vector<FixedPointResult> partial;
  std::vector<double> factors;     // contraction factor of partial sum k
  std::vector<double> increments;  // d(F_k, F_{k-1}) for k = 2..K
  std::vector<double> ratios;      // increments[k] / increments[k-1]

  const FixedPointResult& sum() const { return partial.back(); }
  double max_ratio() const noexcept;
};

/// Partial sums q_i = sum_k q_{k,i}, S_i = sum_k S_{k,i} over the first K
/// terms. Throws NotContractiveError naming k when a partial sum is not
/// contractive.
SeriesResult fractal_series(const ContractionFamily& family, Exponent p,
                            const std::vector<ParameterSet>& terms, std::size_t K,
                            double tol = kDefaultTolerance,
                            std::size_t max_iter = kDefaultMaxIterations);

}  // namespace posifract
