#pragma once

// The fractal operator f -> f(S): for fixed maps, scalings and a semi-linear
// L, sends a germ f to the fixed point of its C-form RB operator. Also
// empirical operator-norm lower bounds and the norm sandwich
//     1 <= ||F^S|| <= 1 + S_inf / (1 - S_inf) * ||I - L||.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "posifract/partition.hpp"
#include "posifract/rb_core.hpp"
#include "posifract/semi_spaces.hpp"
#include "posifract/semilinear_operator.hpp"

namespace posifract {

class FractalOperator {
 public:
  FractalOperator(ContractionFamily family, ScalingFamily scaling, SemiLinearOperator op,
                  double tol = kDefaultTolerance,
                  std::size_t max_iter = kDefaultMaxIterations);

  const ContractionFamily& family() const noexcept { return family_; }
  const ScalingFamily& scaling() const noexcept { return scaling_; }
  const SemiLinearOperator& op() const noexcept { return op_; }
  double tolerance() const noexcept { return tol_; }
  std::size_t max_iterations() const noexcept { return max_iter_; }
  double s_infinity() const noexcept { return scaling_.s_infinity(); }

  /// The C-form spec with germ f.
  RBSpec spec_for(const SampledFunction& f) const;

 private:
  ContractionFamily family_;
  ScalingFamily scaling_;
  SemiLinearOperator op_;
  double tol_;
  std::size_t max_iter_;
};

/// f(S), the fixed point of the C-form operator with germ f.
FixedPointResult fractal_map(const FractalOperator& fop, const SampledFunction& f);

struct NamedFunction {
  std::string name;
  SampledFunction f;
};

/// Constants, x^k + 1 for k = 0..4 (in the unit variable t = (x - x0)/(xn - x0))
/// and `random_count` random piecewise-linear functions with values in [1, 2].
std::vector<NamedFunction> default_sample_set(Interval domain, std::size_t grid,
                                              std::uint64_t seed = 20240607,
                                              std::size_t random_count = 20);

struct NormEstimate {
  /// max over used samples of ||T f|| / ||f||; a lower bound of ||T||.
  double estimate = 0.0;
  /// Name of the sample attaining the maximum.
  std::string argmax;
  std::size_t used = 0;
  /// Samples the operator is not defined on, with the reason.
  std::vector<std::string> skipped;
};

/// Generic estimate for an operator returning signed grid data.
using GridOperator = std::function<std::vector<double>(const SampledFunction&)>;
NormEstimate operator_norm_estimate(const GridOperator& op,
                                    const std::vector<NamedFunction>& samples, Exponent norm);

NormEstimate operator_norm_estimate(const SemiLinearOperator& op,
                                    const std::vector<NamedFunction>& samples, Exponent norm);
/// Germs whose derived offsets are negative are skipped and reported.
NormEstimate operator_norm_estimate(const FractalOperator& fop,
                                    const std::vector<NamedFunction>& samples, Exponent norm);
/// ||I - L|| estimated with signed absolute values.
NormEstimate identity_minus_L_norm_estimate(const SemiLinearOperator& op,
                                            const std::vector<NamedFunction>& samples,
                                            Exponent norm);

struct DisplacementCheck {
  std::string name;
  double lhs = 0.0;  // ||f(S) - f||
  double rhs = 0.0;  // S_inf / (1 - S_inf) * ||I - L||_est * ||f|| + 10 tol
  bool ok = false;
};

struct SandwichReport {
  double s_infinity = 0.0;
  double identity_minus_L = 0.0;
  double upper_bound = 0.0;
  double estimate = 0.0;
  std::string argmax;
  bool lower_ok = false;
  bool upper_ok = false;
  std::vector<DisplacementCheck> per_function;
  std::vector<std::string> skipped;

  bool passed() const noexcept;
};

inline constexpr double kSandwichLowerSlack = 1e-9;
inline constexpr double kSandwichUpperSlack = 1e-6;

/// Throws NotContractiveError when S_inf >= 1.
SandwichReport norm_sandwich_check(const FractalOperator& fop,
                                   const std::vector<NamedFunction>& samples,
                                   Exponent norm = Exponent::infinity());

}  // namespace posifract
